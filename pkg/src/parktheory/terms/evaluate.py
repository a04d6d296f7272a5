"""Structural evaluation of terms in a backend model."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from ..backends import check_value_sort
from ..errors import EvalError, ParkError
from .ast import (Base, Bot, Comp, Dagger, Id, Inj, Join, Letter, Pair, Resid, Signature,
                  Star, Sum, Term, Tup, Zero)


@dataclass
class Interpretation:
    """A backend plus a value for every letter, checked against the signature."""

    backend: Any
    sig: Signature
    values: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.values = dict(self.values)
        for name, value in self.values.items():
            check_value_sort(self.backend, value, self.sig.sort(name), f"letter {name}")

    def __getitem__(self, name: str):
        try:
            return self.values[name]
        except KeyError:
            raise EvalError(f"letter {name!r} is not interpreted") from None


def _closed(t: Term) -> bool:
    """No letters below ``t``: its value depends on the backend only."""
    try:
        return t.__dict__["_closed"]
    except KeyError:
        closed = not isinstance(t, Letter) and all(_closed(c) for c in t.children())
        object.__setattr__(t, "_closed", closed)
        return closed


def _flatten(path) -> tuple:
    """Paths are built as nested ``(parent, label)`` pairs and flattened on error."""
    out = []
    while path:
        path, label = path
        out.append(label)
    return tuple(reversed(out))


def evaluate(t: Term, interp: Interpretation, memo: dict | None = None):
    """Evaluate ``t``; backend failures are re-raised with the term path attached.

    ``memo`` caches values of repeated subterms within one interpretation.
    """
    if memo is None:
        memo = {}
    return _eval(t, interp, memo, ())


_APPLY = {
    Inj: lambda b, t, kids: b.inj(t.i, t.n),
    Id: lambda b, t, kids: b.ident(t.n),
    Zero: lambda b, t, kids: b.zero(t.p),
    Bot: lambda b, t, kids: b.bot(t.n, t.p),
    Base: lambda b, t, kids: b.base(t.assignment, t.p),
    Comp: lambda b, t, kids: b.comp(*kids),
    Tup: lambda b, t, kids: b.tup(kids, t.p),
    Pair: lambda b, t, kids: b.pair(*kids),
    Sum: lambda b, t, kids: b.sum(*kids),
    Join: lambda b, t, kids: b.join(*kids),
    Dagger: lambda b, t, kids: b.dagger(kids[0]),
    Star: lambda b, t, kids: b.star(kids[0]),
    Resid: lambda b, t, kids: b.resid(*kids),
}


def _eval(t: Term, interp: Interpretation, memo: dict, path: tuple):
    hit = memo.get(t)
    if hit is not None:
        return hit
    kind = type(t)
    if kind is Letter:
        value = memo[t] = interp[t.name]
        return value
    apply = _APPLY.get(kind)
    if apply is None:
        raise TypeError(f"not a term: {t!r}")
    b = interp.backend
    shared = getattr(b, "constants", None) if _closed(t) else None
    if shared is not None:
        hit = shared.get(t)
        if hit is not None:
            return hit
    here = (path, kind.__name__)
    kids = [_eval(c, interp, memo, (here, str(k + 1))) for k, c in enumerate(t.children())]
    try:
        value = apply(b, t, kids)
    except EvalError:
        raise
    except (ParkError, ValueError) as e:
        raise EvalError(str(e), _flatten(here)) from e
    memo[t] = value
    if shared is not None:
        shared[t] = value
    return value
