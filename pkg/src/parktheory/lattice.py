"""Finite lattices, product orders and exhaustive monotone-map enumeration.

Elements are named by string identifiers but handled internally as integer
codes ``0 .. size-1`` in declaration order. Tuples over ``L^k`` are enumerated
lexicographically over that order, and a tuple's position in the enumeration
is its *index* (mixed radix, first coordinate most significant).
"""

from __future__ import annotations

import itertools
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, LatticeError, ParseError

DEFAULT_TABLE_BUDGET = 4096
DEFAULT_ENUMERATION_BUDGET = 10**6
MEMBER_CACHE = 1 << 16


class Lattice:
    """A finite lattice given by its elements and the closure of its covers.

    Instances are immutable; two lattices compare equal when they have the
    same name, element order and order relation.
    """

    def __init__(self, name: str, elements: Sequence[str], leq: np.ndarray,
                 table_budget: int = DEFAULT_TABLE_BUDGET):
        self.name = name
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        leq = np.array(leq, dtype=bool)
        leq.setflags(write=False)
        self.leq = leq
        self.table_budget = table_budget
        self.join_table, self.meet_table = _bound_tables(self.elements, leq)
        self.bottom = _least(leq)
        self.top = _least(leq.T)
        self.rank = _ranks(leq)
        self.height = int(self.rank[self.top])
        self._points: dict[int, np.ndarray] = {}
        self._weights: dict[int, np.ndarray] = {}
        # per-lattice cache of structural morphisms, filled by montheory
        self.memo: dict = {}

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Lattice({self.name!r}, {list(self.elements)})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Lattice):
            return NotImplemented
        return (self.name == other.name and self.elements == other.elements
                and np.array_equal(self.leq, other.leq))

    def __hash__(self) -> int:
        return hash((self.name, self.elements, self.leq.tobytes()))

    def with_budget(self, table_budget: int) -> "Lattice":
        return Lattice(self.name, self.elements, self.leq, table_budget)

    def code(self, element: str) -> int:
        try:
            return self.index[element]
        except KeyError:
            raise LatticeError(f"unknown element {element!r} of lattice {self.name}") from None

    # -- product lattices --------------------------------------------------

    def check_arity(self, k: int) -> int:
        """Return ``|L|^k``, raising :class:`BudgetExceeded` above the table budget."""
        count = self.size ** k
        if count > self.table_budget:
            raise BudgetExceeded(
                f"|{self.name}|^{k} = {count} exceeds the table budget {self.table_budget}")
        return count

    def points(self, k: int) -> np.ndarray:
        """All of ``L^k`` as an int array of shape ``(|L|^k, k)`` in index order."""
        pts = self._points.get(k)
        if pts is None:
            self.check_arity(k)
            if k == 0:
                pts = np.zeros((1, 0), dtype=np.int64)
            else:
                grids = np.meshgrid(*([np.arange(self.size)] * k), indexing="ij")
                pts = np.stack([g.reshape(-1) for g in grids], axis=1).astype(np.int64)
            pts.setflags(write=False)
            self._points[k] = pts
        return pts

    def weights(self, k: int) -> np.ndarray:
        w = self._weights.get(k)
        if w is None:
            w = self._weights[k] = self.size ** np.arange(k - 1, -1, -1, dtype=np.int64)
        return w

    def encode(self, rows: np.ndarray) -> np.ndarray:
        """Map an array of tuples (last axis = coordinates) to tuple indices."""
        k = rows.shape[-1]
        if k == 0:
            return np.zeros(rows.shape[:-1], dtype=np.int64)
        return rows @ self.weights(k)

    def leq_rows(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Componentwise order of tuple arrays, reduced over the last axis."""
        return self.leq[a, b].all(axis=-1)

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram of the order, as ``(lower, upper)`` code pairs."""
        lt = self.leq & ~np.eye(self.size, dtype=bool)
        out = []
        for a, b in zip(*np.nonzero(lt)):
            if not any(lt[a, c] and lt[c, b] for c in range(self.size)):
                out.append((int(a), int(b)))
        return out

    @cached_property
    def lower_covers(self) -> list[list[int]]:
        low: list[list[int]] = [[] for _ in range(self.size)]
        for a, b in self.covers:
            low[b].append(a)
        return low

    @cached_property
    def down_masks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
        """Each element's down-set as a bitmask, plus the masks sorted with the
        matching codes. A meet's down-set is the intersection of the down-sets,
        so AND-ing masks computes meets. ``None`` past 62 elements."""
        if self.size > 62:
            return None
        masks = (self.leq.T.astype(np.int64) << np.arange(self.size, dtype=np.int64)).sum(axis=1)
        order = np.argsort(masks)
        return masks, masks[order], order

    @cached_property
    def up_sets(self) -> list[np.ndarray]:
        return [np.nonzero(self.leq[a])[0] for a in range(self.size)]


def _closure(leq: np.ndarray) -> np.ndarray:
    leq = leq.copy()
    for k in range(len(leq)):
        leq |= leq[:, k:k + 1] & leq[k:k + 1, :]
    return leq


def _least(leq: np.ndarray) -> int:
    below_all = np.nonzero(leq.all(axis=1))[0]
    return int(below_all[0])


def _ranks(leq: np.ndarray) -> np.ndarray:
    """Length of the longest chain from bottom to each element."""
    size = len(leq)
    order = sorted(range(size), key=lambda e: int(leq[:, e].sum()))
    rank = np.zeros(size, dtype=np.int64)
    for e in order:
        below = [a for a in range(size) if leq[a, e] and a != e]
        if below:
            rank[e] = max(rank[a] for a in below) + 1
    return rank


def _bound_tables(elements, leq):
    size = len(elements)
    join = np.zeros((size, size), dtype=np.int64)
    meet = np.zeros((size, size), dtype=np.int64)
    for a in range(size):
        for b in range(a, size):
            for table, rel, word in ((join, leq, "join"), (meet, leq.T, "meet")):
                bounds = [u for u in range(size) if rel[a, u] and rel[b, u]]
                least = [u for u in bounds if all(rel[u, w] for w in bounds)]
                if len(least) != 1:
                    pair = "{" + f"{elements[a]},{elements[b]}" + "}"
                    raise LatticeError(f"no {word} for {pair}")
                table[a, b] = table[b, a] = least[0]
    join.setflags(write=False)
    meet.setflags(write=False)
    return join, meet


def build_lattice(elements: Sequence[str], covers: Iterable[tuple[str, str]],
                  name: str = "L", table_budget: int = DEFAULT_TABLE_BUDGET) -> Lattice:
    """Validate a Hasse-diagram description and return the lattice it generates.

    ``covers`` lists pairs ``(x, y)`` with ``x`` covered by ``y``; the order is
    their reflexive-transitive closure.
    """
    elements = [str(e) for e in elements]
    if not elements:
        raise LatticeError("a lattice needs at least one element")
    seen = set()
    for e in elements:
        if e in seen:
            raise LatticeError(f"duplicate element {e!r}")
        seen.add(e)
    index = {e: i for i, e in enumerate(elements)}
    leq = np.eye(len(elements), dtype=bool)
    for x, y in covers:
        for e in (x, y):
            if str(e) not in index:
                raise LatticeError(f"unknown element {e!r} in cover ({x}, {y})")
        leq[index[str(x)], index[str(y)]] = True
    leq = _closure(leq)
    both = leq & leq.T & ~np.eye(len(elements), dtype=bool)
    if both.any():
        a, b = (int(v) for v in np.argwhere(both)[0])
        raise LatticeError(
            f"order is not antisymmetric: {elements[a]} and {elements[b]} lie on a cycle")
    return Lattice(name, elements, leq, table_budget)


def chain(k: int, name: str | None = None) -> Lattice:
    """The ``k``-element chain ``0 < 1 < ... < k-1``."""
    elems = [str(i) for i in range(k)]
    return build_lattice(elems, zip(elems, elems[1:]), name or f"C{k}")


def diamond(name: str = "M") -> Lattice:
    """The four-element lattice ``a < b, c < d`` with ``b`` and ``c`` incomparable."""
    return build_lattice("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")], name)


def join(lattice: Lattice, subset: Iterable[str]) -> str:
    """Least upper bound of a set of elements; the empty join is bottom."""
    acc = lattice.bottom
    for e in subset:
        acc = int(lattice.join_table[acc, lattice.code(e)])
    return lattice.elements[acc]


def meet(lattice: Lattice, subset: Iterable[str]) -> str:
    """Greatest lower bound of a set of elements; the empty meet is top."""
    acc = lattice.top
    for e in subset:
        acc = int(lattice.meet_table[acc, lattice.code(e)])
    return lattice.elements[acc]


def enumerate_tuples(lattice: Lattice, k: int) -> list[tuple[str, ...]]:
    """Every tuple of ``L^k`` in canonical lexicographic order."""
    return list(itertools.product(lattice.elements, repeat=k))


# -- monotone maps ---------------------------------------------------------


def _product_order(lattice: Lattice, p: int):
    """Linear extension of ``L^p`` plus, per point, its lower covers (as indices)."""
    pts = lattice.points(p)
    weights = lattice.weights(p)
    rank_sum = lattice.rank[pts].sum(axis=1) if p else np.zeros(1, dtype=np.int64)
    order = [int(i) for i in np.argsort(rank_sum, kind="stable")]
    below = []
    for idx in range(len(pts)):
        row = pts[idx]
        lows = []
        for j in range(p):
            for a in lattice.lower_covers[int(row[j])]:
                lows.append(idx + (a - int(row[j])) * int(weights[j]))
        below.append(lows)
    return order, below


def monotone_scalars(lattice: Lattice, p: int,
                     budget: int = DEFAULT_ENUMERATION_BUDGET) -> list[np.ndarray]:
    """All monotone ``L^p -> L`` as value arrays indexed by tuple index.

    Raises :class:`BudgetExceeded` once more than ``budget`` maps are found.
    """
    lattice.check_arity(p)
    order, below = _product_order(lattice, p)
    npts = len(order)
    values = np.zeros(npts, dtype=np.int64)
    out: list[np.ndarray] = []
    join_t = lattice.join_table
    # depth-first search with an explicit stack of candidate lists
    choices: list = [None] * (npts + 1)
    pos = 0
    while pos >= 0:
        if pos == npts:
            if len(out) >= budget:
                raise BudgetExceeded(
                    f"more than {budget} monotone maps {lattice.name}^{p} -> {lattice.name}")
            out.append(values.copy())
            pos -= 1
            continue
        idx = order[pos]
        if choices[pos] is None:
            lb = lattice.bottom
            for j in below[idx]:
                lb = join_t[lb, values[j]]
            choices[pos] = list(lattice.up_sets[lb])[::-1]
        if choices[pos]:
            values[idx] = choices[pos].pop()
            pos += 1
            choices[pos] = None
        else:
            choices[pos] = None
            pos -= 1
    return out


def scalar_count_lower_bound(lattice: Lattice, p: int) -> int:
    """A cheap lower bound on the number of monotone ``L^p -> L``.

    Points of equal rank sum form an antichain, and every subset of an
    antichain generates a distinct down-set, hence a distinct monotone map
    into ``{bottom, top}``.
    """
    if lattice.size < 2:
        return 1
    pts = lattice.points(p)
    sums = lattice.rank[pts].sum(axis=1) if p else np.zeros(1, dtype=np.int64)
    widest = int(np.bincount(sums).max())
    return 2 ** min(widest, 64)


class HomSet:
    """The hom-set ``Mon_L(n, p)`` as an indexable, lazily materialised sequence.

    A morphism ``n -> p`` is an n-tuple of monotone scalars, so the hom-set is
    the n-fold product of the scalar list; index ``k`` is read in mixed radix
    with the first output coordinate most significant.
    """

    def __init__(self, lattice: Lattice, n: int, p: int,
                 budget: int = DEFAULT_ENUMERATION_BUDGET):
        self.lattice = lattice
        self.n = n
        self.p = p
        self.scalars = monotone_scalars(lattice, p, budget)
        self.count = len(self.scalars) ** n
        # members are rebuilt from digits on each access; small hom-sets keep them
        self._members: dict | None = {} if self.count <= MEMBER_CACHE else None

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, k: int):
        if not 0 <= k < self.count:
            raise IndexError(k)
        if self._members is not None:
            hit = self._members.get(k)
            if hit is None:
                hit = self._members[k] = self._build(k)
            return hit
        return self._build(k)

    def _build(self, k: int):
        from .montheory import Morphism

        base = len(self.scalars)
        digits = []
        for _ in range(self.n):
            k, d = divmod(k, base)
            digits.append(d)
        digits.reverse()
        npts = self.lattice.size ** self.p
        if self.n == 1:
            table = self.scalars[digits[0]][:, None]
        elif self.n:
            table = np.stack([self.scalars[d] for d in digits], axis=1)
        else:
            table = np.zeros((npts, 0), dtype=np.int64)
        return Morphism._trusted(self.lattice, self.n, self.p, table)

    def __iter__(self) -> Iterator:
        for k in range(self.count):
            yield self[k]

    def random(self, rng: np.random.Generator):
        """A uniformly random member (coordinates drawn independently)."""
        k = 0
        for _ in range(self.n):
            k = k * len(self.scalars) + int(rng.integers(len(self.scalars)))
        return self[k]


def enumerate_monotone(lattice: Lattice, n: int, p: int,
                       budget: int = DEFAULT_ENUMERATION_BUDGET) -> list:
    """Every monotone ``L^p -> L^n`` (a morphism ``n -> p``) exactly once.

    Raises :class:`BudgetExceeded` when the hom-set has more than ``budget``
    members, so callers can fall back to sampling.
    """
    homs = HomSet(lattice, n, p, budget)
    if homs.count > budget:
        raise BudgetExceeded(
            f"Mon_{lattice.name}({n},{p}) has {homs.count} morphisms, over budget {budget}")
    return list(homs)


def random_monotone(lattice: Lattice, n: int, p: int, rng: np.random.Generator):
    """A random morphism ``n -> p`` built by round-up repair.

    Each coordinate is filled along a linear extension of ``L^p``; every value
    is drawn uniformly from the up-set of the join of the values already forced
    below it, so the table is monotone by construction.
    """
    from .montheory import Morphism

    npts = lattice.check_arity(p)
    order, below = _product_order(lattice, p)
    table = np.zeros((npts, n), dtype=np.int64)
    for c in range(n):
        col = table[:, c]
        for idx in order:
            lb = lattice.bottom
            for j in below[idx]:
                lb = lattice.join_table[lb, col[j]]
            ups = lattice.up_sets[lb]
            col[idx] = ups[rng.integers(len(ups))]
    return Morphism._trusted(lattice, n, p, table)


# -- lattice files ---------------------------------------------------------


def parse_lattice(text: str, table_budget: int = DEFAULT_TABLE_BUDGET) -> Lattice:
    """Parse the line-oriented lattice format (``lattice``/``elements``/``cover``)."""
    name = None
    elements = None
    covers = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head, args = words[0], words[1:]
        if name is None:
            if head != "lattice" or len(args) != 1:
                raise ParseError("expected 'lattice <name>'", lineno)
            name = args[0]
        elif elements is None:
            if head != "elements" or not args:
                raise ParseError("expected 'elements <e1> <e2> ...'", lineno)
            elements = args
        elif head == "cover":
            if len(args) != 2:
                raise ParseError("expected 'cover <x> <y>'", lineno)
            for e in args:
                if e not in elements:
                    raise ParseError(f"unknown element {e!r}", lineno)
            covers.append((args[0], args[1]))
        else:
            raise ParseError(f"unexpected directive {head!r}", lineno)
    if name is None or elements is None:
        raise ParseError("missing 'lattice' or 'elements' line")
    return build_lattice(elements, covers, name, table_budget)


def load_lattice(path: str | Path, table_budget: int = DEFAULT_TABLE_BUDGET) -> Lattice:
    return parse_lattice(Path(path).read_text(encoding="utf-8"), table_budget)


def format_lattice(lattice: Lattice) -> str:
    lines = [f"lattice {lattice.name}", "elements " + " ".join(lattice.elements)]
    for a, b in lattice.covers:
        lines.append(f"cover {lattice.elements[a]} {lattice.elements[b]}")
    return "\n".join(lines) + "\n"
