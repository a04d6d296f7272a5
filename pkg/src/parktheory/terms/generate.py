"""Seeded random well-sorted terms, for round-trip and law testing."""

from __future__ import annotations

from .ast import (Base, Bot, Comp, Dagger, Id, Inj, Join, Letter, Pair, Resid, Signature,
                  Star, Sum, Term, Tup, Zero)


def random_term(sig: Signature, n: int, p: int, depth: int, rng, *,
                iteration: str = "dagger", residuals: bool = True,
                max_arity: int = 3) -> Term:
    """A random term of sort ``n -> p`` and height at most ``depth + 1``.

    ``iteration`` picks which of ``dagger``/``star`` may occur (``"both"`` or
    ``"none"`` also work). Every intermediate arity stays within ``max_arity``.
    """
    return _gen(sig, n, p, depth, rng, iteration, residuals, max_arity)


def _leaf(sig, n, p, rng) -> Term:
    options = [Bot(n, p), Base(tuple(int(rng.integers(1, p + 1)) for _ in range(n)), p)
               if p or not n else Bot(n, p)]
    options += [Letter(name) for name, s in sorted(sig.letters.items()) if s == (n, p)] * 3
    if n == 1 and p >= 1:
        options.append(Inj(int(rng.integers(1, p + 1)), p))
    if n == p:
        options.append(Id(n))
    if n == 0:
        options.append(Zero(p))
    return options[int(rng.integers(len(options)))]


def _gen(sig, n, p, depth, rng, iteration, residuals, cap) -> Term:
    if depth <= 0 or rng.random() < 0.15:
        return _leaf(sig, n, p, rng)
    rec = lambda a, b: _gen(sig, a, b, depth - 1, rng, iteration, residuals, cap)
    kinds = ["comp", "comp", "join", "join"]
    if n >= 1:
        kinds += ["pair", "sum"]
    if 1 <= n <= 2:
        kinds.append("tup")
    if iteration in ("dagger", "both") and n >= 1 and n + p <= cap:
        kinds += ["dagger", "dagger"]
    if iteration in ("star", "both") and 1 <= n <= p:
        kinds += ["star", "star"]
    if residuals:
        kinds.append("resid")
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "comp":
        k = int(rng.integers(0, cap + 1))
        return Comp(rec(n, k), rec(k, p))
    if kind == "join":
        return Join(rec(n, p), rec(n, p))
    if kind == "pair":
        a = int(rng.integers(0, n + 1))
        return Pair(rec(a, p), rec(n - a, p))
    if kind == "sum":
        a = int(rng.integers(0, n + 1))
        c = int(rng.integers(0, p + 1))
        return Sum(rec(a, c), rec(n - a, p - c))
    if kind == "tup":
        return Tup(tuple(rec(1, p) for _ in range(n)), p)
    if kind == "dagger":
        return Dagger(rec(n, n + p), n, p)
    if kind == "star":
        return Star(rec(n, p), n, p - n)
    # residual h <= g with h : n -> q and g : p -> q
    q = int(rng.integers(0, cap + 1))
    return Resid(rec(n, q), rec(p, q))
