"""Sorted terms over letters, theory constants and the ordered operations.

Every node is an immutable dataclass. ``Dagger`` and ``Star`` record the split
``n + p`` of their subject's target; the parser and the helper constructors
fill it in from the subject's sort.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from ..errors import SortError


class Term:
    __slots__ = ()

    def children(self) -> tuple["Term", ...]:
        return ()


def _cached_hash(cls):
    """Terms are hashed over and over as memo keys; the generated hash walks the
    whole subtree, so keep the first result on the instance."""
    compute = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = compute(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


@_cached_hash
@dataclass(frozen=True)
class Letter(Term):
    name: str


@_cached_hash
@dataclass(frozen=True)
class Inj(Term):
    i: int
    n: int


@_cached_hash
@dataclass(frozen=True)
class Id(Term):
    n: int


@_cached_hash
@dataclass(frozen=True)
class Zero(Term):
    p: int


@_cached_hash
@dataclass(frozen=True)
class Bot(Term):
    n: int
    p: int


@_cached_hash
@dataclass(frozen=True)
class Base(Term):
    assignment: tuple[int, ...]
    p: int


@_cached_hash
@dataclass(frozen=True)
class Comp(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)


@_cached_hash
@dataclass(frozen=True)
class Tup(Term):
    items: tuple[Term, ...]
    p: int

    def children(self):
        return self.items


@_cached_hash
@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)


@_cached_hash
@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)


@_cached_hash
@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)


@_cached_hash
@dataclass(frozen=True)
class Dagger(Term):
    body: Term
    n: int
    p: int

    def children(self):
        return (self.body,)


@_cached_hash
@dataclass(frozen=True)
class Star(Term):
    body: Term
    n: int
    p: int

    def children(self):
        return (self.body,)


@_cached_hash
@dataclass(frozen=True)
class Resid(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)


Sort = tuple[int, int]


class Signature:
    """Letters with their sorts, optionally tied to a ranked alphabet."""

    def __init__(self, letters: Mapping[str, Sort] | None = None, alphabet=None):
        self.letters: dict[str, Sort] = {}
        self.alphabet = alphabet
        for name, (n, p) in (letters or {}).items():
            self.add(name, n, p)

    def add(self, name: str, n: int, p: int) -> None:
        from .syntax import KEYWORDS

        if name in self.letters:
            raise SortError(f"duplicate letter {name!r}")
        if name in KEYWORDS:
            raise SortError(f"{name!r} is a reserved word")
        if n < 0 or p < 0:
            raise SortError(f"negative arity for letter {name!r}")
        self.letters[name] = (int(n), int(p))

    def sort(self, name: str) -> Sort:
        try:
            return self.letters[name]
        except KeyError:
            raise SortError(f"unknown letter {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self.letters

    def __repr__(self):
        return f"Signature({self.letters!r})"


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise SortError(msg)


def sort_of(t: Term, sig: Signature) -> Sort:
    """The unique sort ``(n, p)`` of ``t``, or :class:`SortError`."""
    if isinstance(t, Letter):
        return sig.sort(t.name)
    if isinstance(t, Inj):
        _need(1 <= t.i <= t.n, f"injection index {t.i} outside [1, {t.n}]")
        return (1, t.n)
    if isinstance(t, Id):
        return (t.n, t.n)
    if isinstance(t, Zero):
        return (0, t.p)
    if isinstance(t, Bot):
        return (t.n, t.p)
    if isinstance(t, Base):
        for v in t.assignment:
            _need(1 <= v <= t.p, f"base map value {v} outside [1, {t.p}]")
        return (len(t.assignment), t.p)
    if isinstance(t, Comp):
        (n, p), (p2, q) = sort_of(t.left, sig), sort_of(t.right, sig)
        _need(p == p2, f"cannot compose {n}->{p} with {p2}->{q}: target {p} ≠ source {p2}")
        return (n, q)
    if isinstance(t, Tup):
        for item in t.items:
            s = sort_of(item, sig)
            _need(s == (1, t.p), f"tupling component {s[0]}->{s[1]} is not 1->{t.p}")
        return (len(t.items), t.p)
    if isinstance(t, Pair):
        (n, p), (m, p2) = sort_of(t.left, sig), sort_of(t.right, sig)
        _need(p == p2, f"pairing needs equal targets, got {p} and {p2}")
        return (n + m, p)
    if isinstance(t, Sum):
        (n, p), (m, q) = sort_of(t.left, sig), sort_of(t.right, sig)
        return (n + m, p + q)
    if isinstance(t, Join):
        a, b = sort_of(t.left, sig), sort_of(t.right, sig)
        _need(a == b, f"join of {a[0]}->{a[1]} and {b[0]}->{b[1]}")
        return a
    if isinstance(t, (Dagger, Star)):
        n, m = sort_of(t.body, sig)
        what = "dagger" if isinstance(t, Dagger) else "star"
        _need(m >= n, f"{what} needs n -> n + p, got {n}->{m}")
        _need((t.n, t.p) == (n, m - n), f"{what} split {t.n}+{t.p} does not match {n}->{m}")
        return (n, m - n) if isinstance(t, Dagger) else (n, m)
    if isinstance(t, Resid):
        (n, q), (p, q2) = sort_of(t.left, sig), sort_of(t.right, sig)
        _need(q == q2, f"residual needs equal targets, got {q} and {q2}")
        return (n, p)
    raise TypeError(f"not a term: {t!r}")


def dagger(body: Term, sig: Signature) -> Dagger:
    n, m = sort_of(body, sig)
    _need(m >= n, f"dagger needs n -> n + p, got {n}->{m}")
    return Dagger(body, n, m - n)


def star(body: Term, sig: Signature) -> Star:
    n, m = sort_of(body, sig)
    _need(m >= n, f"star needs n -> n + p, got {n}->{m}")
    return Star(body, n, m - n)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    for c in t.children():
        yield from subterms(c)


def letters_of(t: Term) -> set[str]:
    return {s.name for s in subterms(t) if isinstance(s, Letter)}


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def height(t: Term) -> int:
    return 1 + max((height(c) for c in t.children()), default=0)
