import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parktheory import montheory as mt
from parktheory.backends import LatticeModel, TreeModel
from parktheory.errors import EvalError, ParseError, SortError
from parktheory.terms import (Base, Bot, Comp, Dagger, Id, Inj, Interpretation, Join, Letter,
                              Pair, Resid, Signature, Star, Sum, Tup, Zero, evaluate,
                              format_term, parse_signature, parse_term, sort_of, tau_term,
                              to_dagger_form, to_star_form)
from parktheory.terms.ast import height
from parktheory.terms.generate import random_term
from parktheory.terms.translate import has_dagger, has_star
from parktheory.treelang import RankedAlphabet, enumerate_trees
from parktheory.treelang import morphisms as tm

S = RankedAlphabet.of(("c", 0), ("s", 1), ("g", 2))


def sig_of(**sorts):
    return Signature(sorts)


SIG3 = sig_of(f=(1, 2), g=(1, 1), h=(2, 2))


# -- parsing and sorts ------------------------------------------------------------


def test_parse_examples():
    sig = sig_of(f=(1, 2), g=(2, 3))
    t = parse_term("f . g", sig)
    assert t == Comp(Letter("f"), Letter("g"))
    assert sort_of(t, sig) == (1, 3)
    d = parse_term("dagger(f)", sig)
    assert d == Dagger(Letter("f"), 1, 1)
    assert sort_of(d, sig) == (1, 1)


def test_sort_of_examples():
    sig = sig_of(f=(1, 2), h=(1, 2), g=(1, 2))
    assert sort_of(Bot(2, 3), sig) == (2, 3)
    assert sort_of(Star(Letter("f"), 1, 1), sig) == (1, 2)
    assert sort_of(Resid(Letter("h"), Letter("g")), sig) == (1, 1)


def test_composition_sort_error_names_both_sorts():
    sig = sig_of(f=(1, 2), g=(3, 1))
    with pytest.raises(SortError) as e:
        parse_term("f . g", sig)
    msg = str(e.value)
    assert "target 2 ≠ source 3" in msg and "line 1, column 3" in msg


@pytest.mark.parametrize("text, line, column", [
    ("f . ", 1, 5),
    ("f .\n  (g", 2, 5),
    ("pair(f, g", 1, 10),
    ("f $ g", 1, 3),
    ("base(1,2 3)", 1, 10),
    ("f g", 1, 3),
])
def test_syntax_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as e:
        parse_term(text, sig_of(f=(1, 1), g=(1, 1)))
    assert (e.value.line, e.value.column) == (line, column)


def test_unknown_letter_and_dagger_split():
    with pytest.raises(ParseError, match="unknown letter"):
        parse_term("f | k", sig_of(f=(1, 1)))
    with pytest.raises(SortError, match="dagger needs"):
        parse_term("dagger(f)", sig_of(f=(2, 1)))
    with pytest.raises(SortError):
        parse_term("inj(3,2)", Signature())


def test_precedence_and_comments():
    sig = sig_of(f=(1, 1), g=(1, 1), h=(1, 1))
    assert parse_term("f . g . h", sig) == Comp(Comp(Letter("f"), Letter("g")), Letter("h"))
    assert parse_term("f | g . h", sig) == Join(Letter("f"), Comp(Letter("g"), Letter("h")))
    assert parse_term("(f | g) . h  # note", sig) == Comp(Join(Letter("f"), Letter("g")),
                                                         Letter("h"))
    assert format_term(Comp(Letter("f"), Comp(Letter("g"), Letter("h")))) == "f . (g . h)"
    assert format_term(Join(Letter("f"), Join(Letter("g"), Letter("h")))) == "f | (g | h)"


def test_constants_print_and_parse():
    sig = Signature()
    for text, term in [("base(1,2->3)", Base((1, 2), 3)), ("base(->2)", Base((), 2)),
                       ("tup(; 2)", Tup((), 2)), ("zero(2)", Zero(2)),
                       ("inj(2,3)", Inj(2, 3)), ("bot(1,0)", Bot(1, 0)), ("id(0)", Id(0))]:
        assert parse_term(text, sig) == term
        assert format_term(term) == text


def test_reserved_words_rejected():
    with pytest.raises(SortError):
        sig_of(star=(1, 1))
    with pytest.raises(SortError):
        Signature().add("f", -1, 0)


def test_parse_signature():
    sig = parse_signature("symbol c 0\nsymbol s 1  # unary\n\nletter f 1 2\n")
    assert sig.sort("s") == (1, 1) and sig.sort("c") == (1, 0) and sig.sort("f") == (1, 2)
    assert sig.alphabet.rank("s") == 1
    for bad in ["symbol c", "letter f 1 x", "symbol c 0\nsymbol c 1", "letter dagger 1 1"]:
        with pytest.raises(ParseError):
            parse_signature(bad)


term_seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=150, deadline=None)
@given(term_seeds, st.integers(0, 2), st.integers(0, 2), st.integers(0, 4))
def test_print_parse_round_trip(seed, n, p, depth):
    rng = np.random.default_rng(seed)
    t = random_term(SIG3, n, p, depth, rng, iteration="both")
    text = format_term(t)
    assert parse_term(text, SIG3) == t
    assert sort_of(t, SIG3) == (n, p)


@settings(max_examples=60, deadline=None)
@given(term_seeds)
def test_generator_respects_depth_and_fragment(seed):
    rng = np.random.default_rng(seed)
    t = random_term(SIG3, 1, 1, 3, rng, iteration="dagger")
    assert height(t) <= 4 and not has_star(t)
    u = random_term(SIG3, 1, 1, 3, rng, iteration="star")
    assert not has_dagger(u)


# -- evaluation -------------------------------------------------------------------


def test_eval_identity(B):
    model = LatticeModel(B)
    v = evaluate(Id(2), Interpretation(model, Signature()))
    assert v == mt.identity(2, B)


def test_eval_dagger_on_trees():
    sig = sig_of(f=(1, 1))
    U = RankedAlphabet.of(("c", 0), ("s", 1))
    model = TreeModel(U)
    f = tm.union(tm.language([("s", 1)], 1, U), tm.language([("c",)], 1, U))
    d = evaluate(parse_term("dagger(f)", sig), Interpretation(model, sig, {"f": f}))
    want = set()
    t = ("c",)
    for _ in range(6):
        want.add(t)
        t = ("s", t)
    got = {t for t in enumerate_trees(U, 0, 6) if d.accepts(0, t)}
    assert got == want


def test_eval_rejects_wrong_sorts(B):
    model = LatticeModel(B)
    sig = sig_of(f=(1, 1))
    with pytest.raises(SortError):
        Interpretation(model, sig, {"f": mt.bottom(1, 2, B)})
    with pytest.raises(EvalError, match="not interpreted"):
        evaluate(Letter("f"), Interpretation(model, sig))


def test_eval_error_has_path(B):
    model = LatticeModel(B, enumeration_budget=10)
    # an arity past the table budget fails inside the backend
    t = Comp(Bot(1, 13), Bot(13, 1))
    with pytest.raises(EvalError) as e:
        evaluate(t, Interpretation(model, Signature()))
    assert e.value.path[0] == "Comp"


@settings(max_examples=40, deadline=None)
@given(term_seeds)
def test_injection_law_on_random_interpretations(seed):
    from parktheory.lattice import chain

    L = chain(3, "C3")
    model = LatticeModel(L)
    rng = np.random.default_rng(seed)
    sig = sig_of(a=(1, 2), b=(1, 2))
    interp = Interpretation(model, sig, {x: model.sample(1, 2, rng) for x in "ab"})
    t = parse_term("inj(1,2) . tup(a, b; 2)", sig)
    assert evaluate(t, interp) == interp["a"]


@settings(max_examples=40, deadline=None)
@given(term_seeds)
def test_eval_is_compositional(seed):
    from parktheory.lattice import chain

    L = chain(2, "B")
    model = LatticeModel(L)
    rng = np.random.default_rng(seed)
    interp = Interpretation(model, SIG3, {x: model.sample(*SIG3.sort(x), rng)
                                          for x in SIG3.letters})
    t = random_term(SIG3, 1, 1, 3, rng, iteration="both")
    ops = {Comp: model.comp, Pair: model.pair, Sum: model.sum, Join: model.join,
           Resid: model.resid}
    for node in _nodes(t):
        kids = [evaluate(c, interp) for c in node.children()]
        whole = evaluate(node, interp)
        if type(node) in ops:
            assert whole == ops[type(node)](*kids)
        elif isinstance(node, Dagger):
            assert whole == model.dagger(kids[0])
        elif isinstance(node, Star):
            assert whole == model.star(kids[0])
        elif isinstance(node, Tup):
            assert whole == model.tup(kids, node.p)


def _nodes(t):
    yield t
    for c in t.children():
        yield from _nodes(c)


# -- translations -----------------------------------------------------------------


def test_to_star_form_example():
    t = Dagger(Letter("f"), 1, 1)
    assert to_star_form(t) == Comp(Star(Letter("f"), 1, 1), Pair(Bot(1, 1), Id(1)))
    assert format_term(to_star_form(t)) == "star(f) . pair(bot(1,1), id(1))"


def test_to_dagger_form_example():
    t = Star(Letter("f"), 1, 1)
    keep = Sum(Sum(Id(1), Zero(1)), Id(1))
    inject = Sum(Sum(Zero(1), Id(1)), Zero(1))
    assert to_dagger_form(t) == Dagger(Join(Comp(Letter("f"), keep), inject), 1, 2)
    assert tau_term(Letter("f"), 1, 1) == Join(Comp(Letter("f"), keep), inject)


def test_translations_leave_other_fragment_alone():
    sig = SIG3
    t = parse_term("star(f) . pair(g, g) | bot(1,1)", sig)
    assert to_dagger_form(to_dagger_form(t)) == to_dagger_form(t)
    assert to_star_form(t) == t
    u = parse_term("dagger(f) . g", sig)
    assert to_dagger_form(u) == u


def test_nested_daggers_rewrite_innermost_first(B):
    sig = sig_of(g=(1, 3))
    t = parse_term("dagger(dagger(g))", sig)
    s = to_star_form(t)
    assert not has_dagger(s)
    inner = Comp(Star(Letter("g"), 1, 2), Pair(Bot(1, 2), Id(2)))
    assert s == Comp(Star(inner, 1, 1), Pair(Bot(1, 1), Id(1)))
    model = LatticeModel(B)
    for g in model.homset(1, 3):
        interp = Interpretation(model, sig, {"g": g})
        assert evaluate(t, interp) == evaluate(s, interp)
        assert evaluate(t, interp) == evaluate(to_dagger_form(s), interp)


@settings(max_examples=60, deadline=None)
@given(term_seeds)
def test_translations_preserve_sorts(seed):
    rng = np.random.default_rng(seed)
    n, p = int(rng.integers(0, 3)), int(rng.integers(0, 3))
    t = random_term(SIG3, n, p, 4, rng, iteration="both")
    s, d = to_star_form(t), to_dagger_form(t)
    assert not has_dagger(s) and not has_star(d)
    assert sort_of(s, SIG3) == sort_of(t, SIG3) == sort_of(d, SIG3)


@settings(max_examples=30, deadline=None)
@given(term_seeds)
def test_round_trips_on_two_element_chain(seed):
    from parktheory.lattice import chain

    model = LatticeModel(chain(2, "B"))
    rng = np.random.default_rng(seed)
    interp = Interpretation(model, SIG3, {x: model.sample(*SIG3.sort(x), rng)
                                          for x in SIG3.letters})
    t = random_term(SIG3, 1, 1, 3, rng, iteration="dagger")
    assert evaluate(t, interp) == evaluate(to_dagger_form(to_star_form(t)), interp)
    u = random_term(SIG3, 1, 1, 3, rng, iteration="star")
    assert evaluate(u, interp) == evaluate(to_star_form(to_dagger_form(u)), interp)
