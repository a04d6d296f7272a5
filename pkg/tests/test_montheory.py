import itertools

import numpy as np
import pytest

from parktheory.errors import SortError
from parktheory.lattice import diamond, enumerate_monotone, random_monotone
from parktheory.montheory import (
    BaseMap,
    Morphism,
    base_morphism,
    bottom,
    compose,
    dagger,
    identity,
    injection,
    join_morphism,
    kleene_approximants,
    leq_morphism,
    pairing,
    residual,
    residual_tables,
    separated_sum,
    star,
    tau,
    tupling,
    zero,
)


def const(L, *values, p=1):
    return Morphism.constant(L, list(values), p)


def tuples(L, k):
    return list(itertools.product(range(L.size), repeat=k))


def le(L, x, y):
    return all(L.leq[a, b] for a, b in zip(x, y))


def value(f, x):
    return tuple(f.table[int(f.lattice.encode(np.array(x, dtype=np.int64)))])


def brute_least_prefixed(L, f, n, y, extra=None):
    """Least x in L^n with f(x, y) (join extra) <= x, by scanning all of L^n."""
    pre = []
    for x in tuples(L, n):
        fx = value(f, x + y)
        if extra is not None:
            fx = tuple(int(L.join_table[a, b]) for a, b in zip(fx, extra))
        if le(L, fx, x):
            pre.append(x)
    least = [x for x in pre if all(le(L, x, z) for z in pre)]
    assert len(least) == 1
    return least[0]


# -- constants and structure ------------------------------------------------

def test_injection_examples(B):
    assert injection(1, 1, B) == identity(1, B)
    assert injection(1, 2, B)("0", "1") == ("0",)
    assert injection(2, 2, B)("0", "1") == ("1",)
    with pytest.raises(SortError):
        injection(3, 2, B)


def test_base_morphism_examples(B):
    assert base_morphism(BaseMap(2, 2, (1, 2)), B) == identity(2, B)
    z = base_morphism(BaseMap(0, 3, ()), B)
    assert z.sort == (0, 3) and z.table.shape == (8, 0)
    diag = base_morphism(BaseMap(2, 1, (1, 1)), B)
    assert [y for _, y in diag.rows()] == [("0", "0"), ("1", "1")]
    with pytest.raises(ValueError):
        BaseMap(1, 2, (3,))


def test_compose_examples(B, rng):
    f = random_monotone(B, 2, 2, rng)
    assert compose(identity(2, B), f) == f == compose(f, identity(2, B))
    assert compose(identity(1, B), const(B, "1")) == const(B, "1")
    t = tupling([const(B, "0"), const(B, "1")])
    assert compose(injection(1, 2, B), t) == const(B, "0")
    with pytest.raises(SortError, match="target 2 ≠ source 1"):
        compose(random_monotone(B, 1, 2, rng), random_monotone(B, 1, 1, rng))


def test_compose_lattice_mismatch(B, C3):
    with pytest.raises(SortError, match="lattice mismatch"):
        compose(identity(1, B), identity(1, C3))


def test_tupling_examples(B):
    assert tupling([injection(1, 2, B), injection(2, 2, B)]) == identity(2, B)
    assert tupling([], 1, B) == zero(1, B)
    t = tupling([const(B, "0"), const(B, "1")])
    assert all(y == ("0", "1") for _, y in t.rows())
    with pytest.raises(SortError):
        tupling([const(B, "0"), const(B, "0", p=2)])


def test_pairing_examples(B, rng):
    f = random_monotone(B, 2, 1, rng)
    assert pairing(f, zero(1, B)) == f
    assert pairing(identity(1, B), identity(1, B)) == base_morphism(BaseMap(2, 1, (1, 1)), B)
    for _ in range(20):
        f, g, h = (random_monotone(B, 1, 2, rng), random_monotone(B, 2, 2, rng),
                   random_monotone(B, 2, 1, rng))
        assert compose(pairing(f, g), h) == pairing(compose(f, h), compose(g, h))


def test_separated_sum_examples(lattices, rng):
    for L in lattices:
        for _ in range(10):
            f = random_monotone(L, 1, 2, rng)
            z00 = zero(0, L)
            assert separated_sum(f, z00) == f == separated_sum(z00, f)
            f, g = random_monotone(L, 1, 1, rng), random_monotone(L, 1, 1, rng)
            h, k = random_monotone(L, 1, 1, rng), random_monotone(L, 1, 2, rng)
            assert compose(separated_sum(f, g), separated_sum(h, k)) == \
                separated_sum(compose(f, h), compose(g, k))
            assert compose(separated_sum(f, g), pairing(h, random_monotone(L, 1, 1, rng))) is not None
    assert separated_sum(identity(1, lattices[0]), identity(1, lattices[0])) == identity(2, lattices[0])


def test_separated_sum_semantics(M, rng):
    f, g = random_monotone(M, 1, 1, rng), random_monotone(M, 2, 1, rng)
    s = separated_sum(f, g)
    for x, y in itertools.product(range(4), repeat=2):
        assert value(s, (x, y)) == value(f, (x,)) + value(g, (y,))


# -- order ------------------------------------------------------------------

def test_join_and_leq_examples(B, M, rng):
    f = random_monotone(M, 2, 2, rng)
    assert join_morphism(f, f) == f
    assert join_morphism(const(B, "0"), const(B, "1")) == const(B, "1")
    assert join_morphism(const(M, "b"), const(M, "c")) == const(M, "d")
    assert leq_morphism(f, f)
    assert leq_morphism(const(B, "0"), const(B, "1"))
    assert not leq_morphism(const(M, "b"), const(M, "c"))
    g = random_monotone(M, 2, 2, rng)
    assert leq_morphism(f, g) == (join_morphism(f, g) == g)
    with pytest.raises(SortError):
        join_morphism(f, random_monotone(M, 1, 2, rng))


def test_bottom_examples(B, lattices, rng):
    assert bottom(1, 1, B) == const(B, "0")
    assert bottom(0, 2, B) == zero(2, B)
    for L in lattices:
        for n, p, q in itertools.product(range(3), repeat=3):
            g = random_monotone(L, p, q, rng)
            assert compose(bottom(n, p, L), g) == bottom(n, q, L)
            assert bottom(n, p, L) == dagger(separated_sum(identity(n, L), zero(p, L)))


def test_monotonicity_rejected(B):
    with pytest.raises(ValueError, match="not monotone"):
        Morphism(B, 1, 1, [[1], [0]])


# -- residuation ------------------------------------------------------------

def brute_residual(L, h, g):
    """Join of every monotone f with f . g <= h."""
    out = bottom(h.source, g.source, L)
    for f in enumerate_monotone(L, h.source, g.source):
        if leq_morphism(compose(f, g), h):
            out = join_morphism(out, f)
    return out


def test_residual_examples(B, rng):
    ident, c0 = identity(1, B), const(B, "0")
    assert residual(ident, c0) == ident
    assert brute_residual(B, ident, c0) == ident
    h = random_monotone(B, 2, 2, rng)
    assert residual(h, identity(2, B)) == h
    assert residual(c0, ident) == c0


@pytest.mark.parametrize("name", ["B", "C3", "M"])
def test_residual_matches_oracle_small(request, name, rng):
    L = request.getfixturevalue(name)
    for p, q in [(0, 1), (1, 0), (1, 1), (2, 1), (1, 2)]:
        for _ in range(6):
            h, g = random_monotone(L, 1, q, rng), random_monotone(L, p, q, rng)
            r = residual(h, g)
            assert r == brute_residual(L, h, g)


def test_residual_meet_paths_agree(M, rng):
    # a copy of M without down-set masks takes the meet-table loop
    plain = diamond("M")
    plain.__dict__["down_masks"] = None
    for p, q in [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]:
        hs = np.stack([random_monotone(M, 2, q, rng).table for _ in range(8)])
        g = random_monotone(M, p, q, rng)
        g_plain = Morphism(plain, p, q, g.table)
        assert np.array_equal(residual_tables(hs, g), residual_tables(hs, g_plain))


def test_residual_galois(lattices, rng):
    for L in lattices:
        for n, p, q in itertools.product(range(3), repeat=3):
            f, g, h = (random_monotone(L, n, p, rng), random_monotone(L, p, q, rng),
                       random_monotone(L, n, q, rng))
            assert leq_morphism(compose(f, g), h) == leq_morphism(f, residual(h, g))


# -- fixed points -------------------------------------------------------------

def test_dagger_examples(B):
    assert dagger(identity(1, B)) == const(B, "0", p=0)
    xy = Morphism.from_function(B, 1, 2, lambda x, y: B.elements[B.join_table[B.code(x), B.code(y)]])
    assert dagger(xy) == identity(1, B)
    assert dagger(const(B, "1", p=1)) == const(B, "1", p=0)


@pytest.mark.parametrize("name", ["B", "C3", "M"])
def test_dagger_matches_least_prefixed_point(request, name, rng):
    L = request.getfixturevalue(name)
    for n, p in [(1, 0), (1, 1), (2, 0), (2, 1), (1, 2)]:
        for _ in range(5):
            f = random_monotone(L, n, n + p, rng)
            d = dagger(f)
            for y in tuples(L, p):
                assert value(d, y) == brute_least_prefixed(L, f, n, y)


def test_dagger_is_supremum_of_approximants(lattices, rng):
    for L in lattices:
        for n, p in [(1, 1), (2, 1), (2, 0)]:
            f = random_monotone(L, n, n + p, rng)
            acc = bottom(n, p, L)
            for k, a in zip(range(n * L.height + 2), kleene_approximants(f)):
                acc = join_morphism(acc, a)
            assert acc == dagger(f)


def test_dagger_sort_error(B):
    with pytest.raises(SortError):
        dagger(Morphism.constant(B, ["0", "0"], 1))


def test_tau_examples(B, rng):
    t = tau(bottom(1, 2, B))
    assert t.sort == (1, 3)
    for (x, z, y), out in t.rows():
        assert out == (z,)
    t = tau(identity(1, B))
    for (x, z), out in t.rows():
        assert out == (B.elements[B.join_table[B.code(x), B.code(z)]],)


@pytest.mark.parametrize("name", ["B", "M"])
def test_tau_semantics(request, name, rng):
    L = request.getfixturevalue(name)
    for n, p in [(1, 0), (1, 1), (2, 0)]:
        f = random_monotone(L, n, n + p, rng)
        t = tau(f)
        for pt in tuples(L, 2 * n + p):
            x, z, y = pt[:n], pt[n:2 * n], pt[2 * n:]
            expect = tuple(int(L.join_table[a, b]) for a, b in zip(value(f, x + y), z))
            assert value(t, pt) == expect


def test_tau_tau_appendix_expansion(B, M, rng):
    for L in (B, M):
        for n, p in [(1, 0), (1, 1)]:
            f = random_monotone(L, n, n + p, rng)
            I, Z = (lambda k: identity(k, L)), (lambda k: zero(k, L))
            expansion = join_morphism(
                join_morphism(compose(f, separated_sum(separated_sum(I(n), Z(2 * n)), I(p))),
                              separated_sum(separated_sum(Z(2 * n), I(n)), Z(p))),
                separated_sum(separated_sum(Z(n), I(n)), Z(n + p)))
            assert tau(tau(f)) == expansion


def test_star_examples(B):
    assert star(identity(1, B)) == identity(1, B)
    assert star(bottom(1, 1, B)) == identity(1, B)


@pytest.mark.parametrize("name", ["B", "C3", "M"])
def test_star_semantics_and_dagger_relation(request, name, rng):
    L = request.getfixturevalue(name)
    for n, p in [(1, 0), (1, 1), (2, 0)]:
        for _ in range(4):
            f = random_monotone(L, n, n + p, rng)
            s = star(f)
            assert s.sort == (n, n + p)
            for pt in tuples(L, n + p):
                z, y = pt[:n], pt[n:]
                assert value(s, pt) == brute_least_prefixed(L, f, n, y, extra=z)
            assert dagger(f) == compose(s, pairing(bottom(n, p, L), identity(p, L)))
