import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parktheory.errors import LatticeError, ParseError
from parktheory.lattice import (
    HomSet,
    build_lattice,
    chain,
    diamond,
    enumerate_monotone,
    enumerate_tuples,
    format_lattice,
    join,
    meet,
    monotone_scalars,
    parse_lattice,
    random_monotone,
)
from parktheory.errors import BudgetExceeded
from parktheory.montheory import is_monotone


def brute_monotone_count(L, n, p):
    """Filter every table L^p -> L^n for monotonicity."""
    pts = list(itertools.product(range(L.size), repeat=p))
    le = lambda x, y: all(L.leq[a, b] for a, b in zip(x, y))
    pairs = [(i, j) for i, x in enumerate(pts) for j, y in enumerate(pts) if le(x, y)]
    count = 0
    for vals in itertools.product(itertools.product(range(L.size), repeat=n), repeat=len(pts)):
        if all(le(vals[i], vals[j]) for i, j in pairs):
            count += 1
    return count


def test_two_chain(B):
    assert B.elements == ("0", "1")
    assert B.elements[B.bottom] == "0" and B.elements[B.top] == "1"


def test_diamond_bounds_by_exhaustive_scan(M):
    for x, y in itertools.product(M.elements, repeat=2):
        ups = [u for u in M.elements if M.leq[M.code(x), M.code(u)] and M.leq[M.code(y), M.code(u)]]
        least = [u for u in ups if all(M.leq[M.code(u), M.code(w)] for w in ups)]
        assert join(M, {x, y}) == least[0]
        downs = [u for u in M.elements if M.leq[M.code(u), M.code(x)] and M.leq[M.code(u), M.code(y)]]
        greatest = [u for u in downs if all(M.leq[M.code(w), M.code(u)] for w in downs)]
        assert meet(M, {x, y}) == greatest[0]
    assert not M.leq[M.code("b"), M.code("c")] and not M.leq[M.code("c"), M.code("b")]


def test_non_lattice_rejected():
    with pytest.raises(LatticeError, match=r"no join for \{y,z\}"):
        build_lattice(["x", "y", "z"], [("x", "y"), ("x", "z")])


@pytest.mark.parametrize("elements, covers, msg", [
    (["a", "a"], [], "duplicate"),
    (["a", "b"], [("a", "q")], "unknown element"),
    (["a", "b"], [("a", "b"), ("b", "a")], "antisymmetric"),
])
def test_build_errors(elements, covers, msg):
    with pytest.raises(LatticeError, match=msg):
        build_lattice(elements, covers)


def test_join_meet_examples(B, M):
    assert join(B, []) == "0"
    assert join(B, ["0", "1"]) == "1"
    assert join(M, ["b", "c"]) == "d"
    assert meet(B, []) == "1"
    assert meet(M, ["b", "c"]) == "a"
    assert meet(B, ["0", "1"]) == "0"
    with pytest.raises(LatticeError):
        join(B, ["2"])


def test_enumerate_tuples(B):
    assert enumerate_tuples(B, 0) == [()]
    assert enumerate_tuples(B, 1) == [("0",), ("1",)]
    assert enumerate_tuples(B, 2) == [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_points_match_tuples(M, k):
    pts = M.points(k)
    assert len(pts) == M.size ** k
    assert [tuple(M.elements[c] for c in row) for row in pts] == enumerate_tuples(M, k)
    assert np.array_equal(M.encode(pts), np.arange(len(pts)))


def test_enumerate_monotone_examples(B):
    assert len(enumerate_monotone(B, 1, 1)) == 3
    assert len(enumerate_monotone(B, 1, 0)) == 2
    assert len(enumerate_monotone(B, 2, 1)) == 9


@pytest.mark.parametrize("name, n, p", [
    ("B", 1, 1), ("B", 1, 2), ("B", 2, 1), ("B", 2, 2), ("B", 0, 2),
    ("C3", 1, 1), ("C3", 2, 1), ("C3", 1, 2), ("M", 1, 1),
])
def test_monotone_count_matches_filter(request, name, n, p):
    L = request.getfixturevalue(name)
    homs = enumerate_monotone(L, n, p)
    assert len(homs) == brute_monotone_count(L, n, p)
    assert len(set(homs)) == len(homs)
    assert all(is_monotone(f) for f in homs)


def test_enumeration_budget(M):
    with pytest.raises(BudgetExceeded):
        enumerate_monotone(M, 2, 2, budget=10**6)
    with pytest.raises(BudgetExceeded):
        monotone_scalars(M, 3)


def test_homset_random_is_member(C3, rng):
    homs = HomSet(C3, 2, 1)
    members = set(homs)
    for _ in range(50):
        assert homs.random(rng) in members


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(0, 2), p=st.integers(0, 2),
       which=st.sampled_from(["B", "C3", "M"]))
def test_random_monotone_is_monotone(seed, n, p, which):
    L = {"B": chain(2, "B"), "C3": chain(3, "C3"), "M": diamond()}[which]
    f = random_monotone(L, n, p, np.random.default_rng(seed))
    assert f.sort == (n, p) and is_monotone(f)


def test_parse_lattice_roundtrip(M):
    text = "# diamond\nlattice M\nelements a b c d\n\ncover a b\ncover a c  # left\ncover b d\ncover c d\n"
    L = parse_lattice(text)
    assert L == M
    assert parse_lattice(format_lattice(L)) == L


@pytest.mark.parametrize("text, line", [
    ("elements a b\n", 1),
    ("lattice X\nelements a b\ncover a\n", 3),
    ("lattice X\nelements a b\ncover a z\n", 3),
    ("lattice X\nelements a b\nfrobnicate\n", 3),
])
def test_parse_errors_report_lines(text, line):
    with pytest.raises(ParseError) as info:
        parse_lattice(text)
    assert info.value.line == line
