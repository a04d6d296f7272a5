"""Minimality checks by enumeration, for the rules that filtering cannot certify.

The implication rules are sampled elsewhere by throwing away instances that
miss the hypothesis. Here every candidate in a small hom-set is listed, so
"least" is checked against all of them and not just against the ones a
sampler happened to hit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import montheory as mt
from ..lattice import HomSet, Lattice


@dataclass
class StrongReport:
    rule: str
    lattice: str
    arities: list = field(default_factory=list)
    cases: int = 0            # morphisms (or tuples) whose conclusion was checked
    candidates: int = 0       # hypothesis-satisfying candidates compared against
    violations: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations and self.cases > 0

    def summary(self) -> str:
        verdict = "holds" if self.holds else ("counterexample" if self.violations else "empty")
        arities = "; ".join(self.arities)
        return (f"{self.rule:<16} Mon_{self.lattice:<4} {verdict:<14} {self.cases} cases, "
                f"{self.candidates} pre-fixed candidates ({arities})")


def _params(n: int, p: int, lat: Lattice):
    """``0_n (+) 1_p : p -> n + p``."""
    return mt.separated_sum(mt.zero(n, lat), mt.identity(p, lat))


def _head(n: int, p: int, lat: Lattice):
    """``1_n (+) 0_p : n -> n + p``."""
    return mt.separated_sum(mt.identity(n, lat), mt.zero(p, lat))


def dagger_minimality(lat: Lattice, max_params: int = 1, n: int = 1,
                      dagger=mt.dagger) -> StrongReport:
    """For every ``f : n -> n + p``, ``f^dagger`` is pre-fixed and below every
    ``g : n -> p`` with ``f . <g, 1_p> <= g``.

    ``dagger`` can be swapped for another operation to test the check itself.
    """
    rep = StrongReport("least-pre-fixed", lat.name)
    for p in range(max_params + 1):
        rep.arities.append(f"n={n}, p={p}")
        gs = list(HomSet(lat, n, p))
        one = mt.identity(p, lat)
        for f in HomSet(lat, n, n + p):
            d = dagger(f)
            rep.cases += 1
            if not mt.compose(f, mt.pairing(d, one)) <= d:
                rep.violations.append((f, d, "dagger is not pre-fixed"))
            for g in gs:
                if mt.compose(f, mt.pairing(g, one)) <= g:
                    rep.candidates += 1
                    if not d <= g:
                        rep.violations.append((f, g, "dagger not below a pre-fixed point"))
    return rep


def _leq_matrix(lat: Lattice, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """``out[i, j]`` is ``left[i] <= right[j]`` for stacked tables."""
    return lat.leq[left[:, None], right[None, :]].all(axis=(2, 3))


def star_rules(lat: Lattice, max_params: int = 1, n: int = 1, star=mt.star) -> StrongReport:
    """Both forms of the star least pre-fixed point rule on every triple.

    The short form: ``f . <g, P> <= g`` implies ``f* . <g, P> <= g``. The long
    form: ``f . <g, P> | h <= g`` implies ``f* . <h, P> <= g``; here
    ``P = 0_n (+) 1_p`` and all three letters are ``n -> n + p``. The long
    hypothesis splits into ``f . <g, P> <= g`` and ``h <= g``, which lets the
    triples be checked as boolean matrices over the hom-set.
    """
    rep = StrongReport("star-pre-fixed", lat.name)
    for p in range(max_params + 1):
        rep.arities.append(f"n={n}, p={p}")
        P = _params(n, p, lat)
        homs = list(HomSet(lat, n, n + p))
        tables = np.stack([g.table for g in homs])
        below = _leq_matrix(lat, tables, tables)          # below[h, g]: h <= g
        for f in homs:
            fs = star(f)
            rep.cases += 1
            step = np.stack([mt.compose(f, mt.pairing(g, P)).table for g in homs])
            after = np.stack([mt.compose(fs, mt.pairing(h, P)).table for h in homs])
            pre = lat.leq[step, tables].all(axis=(1, 2))   # pre[g]: f . <g, P> <= g
            ok = _leq_matrix(lat, after, tables)           # ok[h, g]: f* . <h, P> <= g
            rep.candidates += int(pre.sum())
            for g in np.nonzero(pre & ~ok.diagonal())[0]:
                rep.violations.append((f, homs[g], "short form fails"))
            for h, g in zip(*np.nonzero(below & pre[None, :] & ~ok)):
                rep.violations.append((f, homs[g], homs[h], "long form fails"))
    return rep


def star_minimality(lat: Lattice, max_params: int = 0, n: int = 1,
                    star=mt.star) -> StrongReport:
    """``f*`` satisfies ``HEAD | f | g . <g, P> <= g`` and is the least ``g`` that does."""
    rep = StrongReport("star-least", lat.name)
    for p in range(max_params + 1):
        rep.arities.append(f"n={n}, p={p}")
        P = _params(n, p, lat)
        head = _head(n, p, lat)
        homs = list(HomSet(lat, n, n + p))

        def closed(f, g):
            return head | f | mt.compose(g, mt.pairing(g, P)) <= g

        for f in homs:
            fs = star(f)
            rep.cases += 1
            if not closed(f, fs):
                rep.violations.append((f, fs, "star does not satisfy the closure"))
            for g in homs:
                if closed(f, g):
                    rep.candidates += 1
                    if not fs <= g:
                        rep.violations.append((f, g, "star not below a closed candidate"))
    return rep
