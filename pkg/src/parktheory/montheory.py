"""The theory ``Mon_L`` of monotone maps over a finite lattice, as tables.

A morphism ``n -> p`` is a monotone function ``L^p -> L^n`` (the arrow is
reversed), stored as an int array of shape ``(|L|^p, n)``: row ``k`` is the
image of the ``k``-th tuple of ``L^p`` in canonical order. Composition
``f . g`` applies ``g`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ParkError, SortError
from .lattice import Lattice


class Morphism:
    """A tabulated monotone map; immutable and compared by table."""

    __slots__ = ("lattice", "source", "target", "table", "_keys")

    def __init__(self, lattice: Lattice, source: int, target: int, table):
        table = np.array(table, dtype=np.int64).reshape(lattice.size ** target, source)
        if table.size and (table.min() < 0 or table.max() >= lattice.size):
            raise ValueError("table entries must be element codes of the lattice")
        self._init(lattice, source, target, table)
        bad = _monotonicity_violation(self)
        if bad is not None:
            x, y = bad
            raise ValueError(f"table is not monotone: {x} <= {y} but images are not ordered")

    def _init(self, lattice, source, target, table):
        table.setflags(write=False)
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_keys", None)

    @classmethod
    def _trusted(cls, lattice, source, target, table) -> "Morphism":
        self = object.__new__(cls)
        self._init(lattice, source, target, np.ascontiguousarray(table, dtype=np.int64))
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Morphism is immutable")

    @classmethod
    def from_function(cls, lattice: Lattice, n: int, p: int,
                      fn: Callable[..., Sequence[str]]) -> "Morphism":
        """Tabulate ``fn``, which maps ``p`` element names to ``n`` element names."""
        rows = []
        for point in lattice.points(p):
            out = fn(*(lattice.elements[c] for c in point))
            if isinstance(out, str):
                out = (out,)
            rows.append([lattice.code(e) for e in out])
        return cls(lattice, n, p, np.array(rows, dtype=np.int64).reshape(-1, n))

    @classmethod
    def constant(cls, lattice: Lattice, values: Sequence[str], p: int) -> "Morphism":
        codes = [lattice.code(v) for v in values]
        table = np.tile(np.array(codes, dtype=np.int64), (lattice.check_arity(p), 1))
        return cls._trusted(lattice, len(codes), p, table)

    @property
    def sort(self) -> tuple[int, int]:
        return (self.source, self.target)

    def __call__(self, *args: str) -> tuple[str, ...]:
        if len(args) != self.target:
            raise SortError(f"expected {self.target} arguments, got {len(args)}")
        lat = self.lattice
        idx = int(lat.encode(np.array([lat.code(a) for a in args], dtype=np.int64)))
        return tuple(lat.elements[c] for c in self.table[idx])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.sort == other.sort and self.lattice == other.lattice
                and np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.table.tobytes()))

    @property
    def keys(self) -> np.ndarray:
        """Each row's image tuple as a row index of ``L^n``, computed once."""
        if self._keys is None:
            object.__setattr__(self, "_keys", self.lattice.encode(self.table))
        return self._keys

    def __le__(self, other: "Morphism") -> bool:
        return leq_morphism(self, other)

    def __or__(self, other: "Morphism") -> "Morphism":
        return join_morphism(self, other)

    def __repr__(self) -> str:
        return f"<Morphism {self.source}->{self.target} over {self.lattice.name}>"

    def rows(self):
        """Yield ``(argument tuple, value tuple)`` pairs in canonical order."""
        lat = self.lattice
        for point, value in zip(lat.points(self.target), self.table):
            yield (tuple(lat.elements[c] for c in point),
                   tuple(lat.elements[c] for c in value))

    def format_table(self) -> str:
        def fmt(t):
            return t[0] if len(t) == 1 else "(" + ",".join(t) + ")"
        return ", ".join(f"{fmt(x)}↦{fmt(y)}" for x, y in self.rows())


def _monotonicity_violation(f: Morphism):
    lat = f.lattice
    p = f.target
    pts = lat.points(p)
    weights = lat.weights(p)
    for j in range(p):
        for a, b in lat.covers:
            lo = np.nonzero(pts[:, j] == a)[0]
            hi = lo + (b - a) * weights[j]
            ok = lat.leq_rows(f.table[lo], f.table[hi])
            if not ok.all():
                k = int(np.nonzero(~ok)[0][0])
                return tuple(pts[lo[k]]), tuple(pts[hi[k]])
    return None


def is_monotone(f: Morphism) -> bool:
    return _monotonicity_violation(f) is None


def _same_lattice(*fs: Morphism) -> Lattice:
    lat = fs[0].lattice
    for g in fs[1:]:
        if g.lattice != lat:
            raise SortError(f"lattice mismatch: {lat.name} vs {g.lattice.name}")
    return lat


@dataclass(frozen=True)
class BaseMap:
    """A function ``[n] -> [p]`` given by its (1-based) values."""

    source: int
    target: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != self.source:
            raise ValueError(f"assignment has {len(self.assignment)} values, expected {self.source}")
        for v in self.assignment:
            if not 1 <= v <= self.target:
                raise ValueError(f"base map value {v} outside [1, {self.target}]")


# -- theory constants -------------------------------------------------------


def base_morphism(rho: BaseMap, lattice: Lattice) -> Morphism:
    """``<(1 rho)_p, ..., (n rho)_p>``: reindex coordinates, ``x -> (x_rho(1), ...)``."""
    key = ("base", rho.target, rho.assignment)
    hit = lattice.memo.get(key)
    if hit is None:
        pts = lattice.points(rho.target)
        cols = [v - 1 for v in rho.assignment]
        hit = lattice.memo[key] = Morphism._trusted(lattice, rho.source, rho.target, pts[:, cols])
    return hit


def injection(i: int, n: int, lattice: Lattice) -> Morphism:
    """The distinguished injection ``i_n : 1 -> n``, i.e. the ``i``-th projection."""
    if not 1 <= i <= n:
        raise SortError(f"injection index {i} outside [1, {n}]")
    return base_morphism(BaseMap(1, n, (i,)), lattice)


def identity(n: int, lattice: Lattice) -> Morphism:
    return base_morphism(BaseMap(n, n, tuple(range(1, n + 1))), lattice)


def zero(p: int, lattice: Lattice) -> Morphism:
    """``0_p``, the unique morphism ``0 -> p``."""
    return base_morphism(BaseMap(0, p, ()), lattice)


def bottom(n: int, p: int, lattice: Lattice) -> Morphism:
    """``bot_{n,p}``, the least morphism ``n -> p`` (constantly bottom)."""
    return Morphism.constant(lattice, [lattice.elements[lattice.bottom]] * n, p)


def top(n: int, p: int, lattice: Lattice) -> Morphism:
    return Morphism.constant(lattice, [lattice.elements[lattice.top]] * n, p)


# -- theory operations ------------------------------------------------------


def compose(f: Morphism, g: Morphism) -> Morphism:
    """``f . g : n -> q`` for ``f : n -> p`` and ``g : p -> q``."""
    lat = _same_lattice(f, g)
    if f.target != g.source:
        raise SortError(f"cannot compose {f.source}->{f.target} with {g.source}->{g.target}: "
                        f"target {f.target} ≠ source {g.source}")
    return Morphism._trusted(lat, f.source, g.target, f.table[g.keys])


def tupling(fs: Sequence[Morphism], p: int | None = None,
            lattice: Lattice | None = None) -> Morphism:
    """``<f_1, ..., f_n>`` of scalar morphisms ``f_i : 1 -> p``."""
    fs = list(fs)
    if not fs:
        if p is None or lattice is None:
            raise SortError("empty tupling needs an explicit target and lattice")
        return zero(p, lattice)
    lat = _same_lattice(*fs)
    if lattice is not None and lattice != lat:
        raise SortError("lattice mismatch in tupling")
    tgt = fs[0].target if p is None else p
    for f in fs:
        if f.source != 1 or f.target != tgt:
            raise SortError(f"tupling component {f.source}->{f.target} is not 1->{tgt}")
    return Morphism._trusted(lat, len(fs), tgt, np.concatenate([f.table for f in fs], axis=1))


def pairing(f: Morphism, g: Morphism) -> Morphism:
    """``<f, g> : n + m -> p``, stacking the outputs of ``f`` and ``g``."""
    lat = _same_lattice(f, g)
    if f.target != g.target:
        raise SortError(f"pairing needs equal targets, got {f.target} and {g.target}")
    return Morphism._trusted(lat, f.source + g.source, f.target,
                             np.concatenate([f.table, g.table], axis=1))


def separated_sum(f: Morphism, g: Morphism) -> Morphism:
    """``f (+) g : n + m -> p + q``, acting independently on the two argument blocks."""
    lat = _same_lattice(f, g)
    p, q = f.target, g.target
    lat.check_arity(p + q)
    kappa = base_morphism(BaseMap(p, p + q, tuple(range(1, p + 1))), lat)
    lam = base_morphism(BaseMap(q, p + q, tuple(range(p + 1, p + q + 1))), lat)
    return pairing(compose(f, kappa), compose(g, lam))


def join_morphism(f: Morphism, g: Morphism) -> Morphism:
    """Pointwise binary supremum."""
    lat = _same_lattice(f, g)
    if f.sort != g.sort:
        raise SortError(f"join of {f.source}->{f.target} and {g.source}->{g.target}")
    return Morphism._trusted(lat, f.source, f.target, lat.join_table[f.table, g.table])


def meet_morphism(f: Morphism, g: Morphism) -> Morphism:
    lat = _same_lattice(f, g)
    if f.sort != g.sort:
        raise SortError(f"meet of {f.source}->{f.target} and {g.source}->{g.target}")
    return Morphism._trusted(lat, f.source, f.target, lat.meet_table[f.table, g.table])


def leq_morphism(f: Morphism, g: Morphism) -> bool:
    """Pointwise order: ``f(x) <= g(x)`` for every ``x``."""
    lat = _same_lattice(f, g)
    if f.sort != g.sort:
        raise SortError(f"cannot compare {f.source}->{f.target} with {g.source}->{g.target}")
    return bool(lat.leq[f.table, g.table].all())


def residual(h: Morphism, g: Morphism) -> Morphism:
    """``h <= g : n -> p``, the greatest ``f`` with ``f . g <= h``.

    Pointwise, ``(h <= g)(y)`` is the meet of ``h(x)`` over all ``x`` with
    ``y <= g(x)``; an empty meet gives the top tuple.
    """
    lat = _same_lattice(h, g)
    if h.target != g.target:
        raise SortError(f"residual needs equal targets, got {h.target} and {g.target}")
    return Morphism._trusted(lat, h.source, g.source, residual_tables(h.table[None], g)[0])


def residual_tables(h_tables: np.ndarray, g: Morphism) -> np.ndarray:
    """Residual tables for a stack of ``h`` tables of shape ``(k, |L|^q, n)``
    against one ``g : p -> q``; the result has shape ``(k, |L|^p, n)``."""
    lat = g.lattice
    ys = lat.points(g.source)
    # above[y, x]: y <= g(x), so h(x) takes part in the meet at y
    above = lat.leq[ys[:, None, :], g.table[None, :, :]].all(axis=2)
    if lat.down_masks is not None:
        masks, sorted_masks, order = lat.down_masks
        full = masks[lat.top]
        picked = np.where(above[None, :, :, None], masks[h_tables][:, None, :, :], full)
        met = np.bitwise_and.reduce(picked, axis=2)
        return order[np.searchsorted(sorted_masks, met)]
    out = np.full((h_tables.shape[0], len(ys), h_tables.shape[2]), lat.top, dtype=np.int64)
    for x in range(above.shape[1]):
        rows = above[:, x]
        out[:, rows] = lat.meet_table[out[:, rows], h_tables[:, x, None, :]]
    return out


def _split(f: Morphism, what: str) -> tuple[int, int]:
    n = f.source
    if f.target < n:
        raise SortError(f"{what} needs n -> n + p, got {f.source}->{f.target}")
    return n, f.target - n


def dagger(f: Morphism) -> Morphism:
    """Parameterised least fixed point ``f^dagger : n -> p`` of ``f : n -> n + p``.

    Kleene ascent from bottom, run for all parameters ``y`` at once. Over a
    finite lattice the chain stabilises within ``n * height(L)`` steps; not
    stabilising by then means ``f`` was not monotone.
    """
    n, p = _split(f, "dagger")
    lat = f.lattice
    ys = lat.points(p)
    x = np.full((len(ys), n), lat.bottom, dtype=np.int64)
    cap = n * lat.height + 1
    for _ in range(cap + 1):
        nxt = f.table[lat.encode(np.concatenate([x, ys], axis=1))]
        if np.array_equal(nxt, x):
            return Morphism._trusted(lat, n, p, x)
        x = nxt
    raise ParkError(f"Kleene ascent did not stabilise within {cap} steps; "
                    "the argument is not monotone")


def tau(f: Morphism) -> Morphism:
    """``f^tau = f . (1_n (+) 0_n (+) 1_p) | (0_n (+) 1_n (+) 0_p)``."""
    n, p = _split(f, "tau")
    lat = f.lattice
    key = ("tau", n, p)
    if key not in lat.memo:
        keep = separated_sum(separated_sum(identity(n, lat), zero(n, lat)), identity(p, lat))
        inject = separated_sum(separated_sum(zero(n, lat), identity(n, lat)), zero(p, lat))
        lat.memo[key] = (keep, inject)
    keep, inject = lat.memo[key]
    return join_morphism(compose(f, keep), inject)


def star(f: Morphism) -> Morphism:
    """``f^* = (f^tau)^dagger : n -> n + p``."""
    return dagger(tau(f))


def kleene_approximants(f: Morphism):
    """Yield ``f^k . <bot_{n,p}, 1_p>`` for ``k = 0, 1, ...`` with
    ``f^0 = 1_n (+) 0_p`` and ``f^(k+1) = f . <f^k, 0_n (+) 1_p>``.

    This is the unfolding whose supremum is ``f^dagger``; it is generated from
    theory operations only and so independent of :func:`dagger`.
    """
    n, p = _split(f, "kleene_approximants")
    lat = f.lattice
    fk = separated_sum(identity(n, lat), zero(p, lat))
    params = separated_sum(zero(n, lat), identity(p, lat))
    start = pairing(bottom(n, p, lat), identity(p, lat))
    while True:
        yield compose(fk, start)
        fk = compose(f, pairing(fk, params))
