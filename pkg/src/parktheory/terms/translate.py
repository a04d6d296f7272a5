"""Rewriting between the dagger and star presentations.

``to_star_form`` replaces every ``dagger(s)`` by ``star(s') . pair(bot, id)``
and ``to_dagger_form`` replaces every ``star(s)`` by the dagger of the tau
composite of ``s'``. Both rewrite innermost subterms first.
"""

from __future__ import annotations

from dataclasses import replace

from .ast import (Base, Bot, Comp, Dagger, Id, Inj, Join, Letter, Pair, Resid, Star, Sum,
                  Term, Tup, Zero)

_LEAVES = (Letter, Inj, Id, Zero, Bot, Base)


def rebuild(t: Term, fn) -> Term:
    """Apply ``fn`` to every node after its children have been rebuilt."""
    if isinstance(t, _LEAVES):
        return fn(t)
    if isinstance(t, Tup):
        return fn(Tup(tuple(rebuild(x, fn) for x in t.items), t.p))
    if isinstance(t, (Dagger, Star)):
        return fn(replace(t, body=rebuild(t.body, fn)))
    if isinstance(t, (Comp, Pair, Sum, Join, Resid)):
        return fn(type(t)(rebuild(t.left, fn), rebuild(t.right, fn)))
    raise TypeError(f"not a term: {t!r}")


def tau_term(s: Term, n: int, p: int) -> Term:
    """``s . (1_n (+) 0_n (+) 1_p) | (0_n (+) 1_n (+) 0_p) : n -> n + n + p``."""
    keep = Sum(Sum(Id(n), Zero(n)), Id(p))
    inject = Sum(Sum(Zero(n), Id(n)), Zero(p))
    return Join(Comp(s, keep), inject)


def _star_step(t: Term) -> Term:
    if isinstance(t, Dagger):
        return Comp(Star(t.body, t.n, t.p), Pair(Bot(t.n, t.p), Id(t.p)))
    return t


def _dagger_step(t: Term) -> Term:
    if isinstance(t, Star):
        return Dagger(tau_term(t.body, t.n, t.p), t.n, t.n + t.p)
    return t


def to_star_form(t: Term) -> Term:
    return rebuild(t, _star_step)


def to_dagger_form(t: Term) -> Term:
    return rebuild(t, _dagger_step)


def has_dagger(t: Term) -> bool:
    return isinstance(t, Dagger) or any(has_dagger(c) for c in t.children())


def has_star(t: Term) -> bool:
    return isinstance(t, Star) or any(has_star(c) for c in t.children())
