import subprocess
import sys
from pathlib import Path

import pytest

from parktheory.axioms import catalog
from parktheory.cli import main

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "demos" / "data"
EQUIV = ROOT / "tests" / "data" / "equiv"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


def test_catalog_lists_every_schema(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == len(catalog())
    assert lines[0].startswith("TH1")
    assert any(line.startswith("EQ12") and "dagger(resid(g, pair(g, id({p})))) <= g" in line
               for line in lines)


def test_check_axioms_holds_on_two_element_chain(capsys):
    code, out, _ = run(capsys, "check-axioms", "--lattice", DATA / "b2.lat", "--exhaustive",
                       "--max-arity", "1")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) >= 33 and all(" holds " in line for line in lines)


def test_check_axioms_rejects_non_lattice(capsys):
    code, out, err = run(capsys, "check-axioms", "--lattice", DATA / "broken.lat")
    assert code == 2 and out == "" and "no join" in err


def test_check_axioms_false_schema(capsys):
    code, out, _ = run(capsys, "check-axioms", "--lattice", DATA / "b2.lat", "--schema",
                       "FALSE_DEMO")
    assert code == 1
    assert "counterexample to FALSE_DEMO" in out and "f : 1 -> 0 = ()↦0" in out


def test_check_axioms_several_lattices_and_trees(capsys):
    code, out, _ = run(capsys, "check-axioms", "--lattice", DATA / "b2.lat", "--lattice",
                       DATA / "c3.lat", "--schema", "EQ19", "--schema", "EQ26", "--samples", "50")
    assert code == 0 and len(out.splitlines()) == 4
    code, out, _ = run(capsys, "check-axioms", "--backend", "tree", "--sig", DATA / "trees.sig",
                       "--schema", "EQ16", "--samples", "40")
    assert code == 0 and "Reg_{c/0,s/1,g/2} holds" in out


@pytest.mark.parametrize("argv", [
    ["check-axioms"],
    ["check-axioms", "--lattice", "no-such-file.lat"],
    ["check-axioms", "--lattice", DATA / "b2.lat", "--schema", "EQ99"],
    ["check-axioms", "--backend", "tree"],
    ["check-axioms", "--backend", "tree", "--sig", DATA / "join.sig"],
    ["check-axioms", "--lattice", DATA / "b2.lat", "--schema", "TH5", "--budget-table", "1"],
])
def test_check_axioms_operational_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_partial_budget_overflow_is_reported(capsys):
    code, out, _ = run(capsys, "check-axioms", "--backend", "tree", "--sig", DATA / "trees.sig",
                       "--schema", "EQ3", "--samples", "5", "--budget-states", "1")
    assert code == 0 and "over budget" in out


def test_usage_errors_exit_two(capsys):
    for argv in (["check-axioms", "--samples", "-3", "--lattice", DATA / "b2.lat"],
                 ["check-axioms", "--exhaustive", "--samples", "4"],
                 ["frobnicate"]):
        with pytest.raises(SystemExit) as e:
            main([str(a) for a in argv])
        assert e.value.code == 2
    capsys.readouterr()


def test_eval_examples(capsys):
    b2 = DATA / "b2.lat"
    assert run(capsys, "eval", "--lattice", b2, DATA / "id1.term")[:2] == (0, "0↦0, 1↦1\n")
    assert run(capsys, "eval", "--lattice", b2, DATA / "bot11.term")[:2] == (0, "0↦0, 1↦0\n")
    code, out, _ = run(capsys, "eval", "--lattice", b2, "--sig", DATA / "join.sig", "--bind",
                       DATA / "join.bind", DATA / "dagger_f.term")
    assert (code, out) == (0, "0↦0, 1↦1\n")


def test_eval_binding_errors(capsys, write):
    sig = DATA / "join.sig"
    b2 = DATA / "b2.lat"
    term = DATA / "dagger_f.term"
    code, _, err = run(capsys, "eval", "--lattice", b2, "--sig", sig, term)
    assert code == 2 and "not interpreted" in err
    partial = write("partial.bind", "f 0 0 -> 0\nf 1 1 -> 1\n")
    code, _, err = run(capsys, "eval", "--lattice", b2, "--sig", sig, "--bind", partial, term)
    assert code == 2 and "no row" in err
    falling = write("falling.bind", "f 0 0 -> 1\nf 0 1 -> 0\nf 1 0 -> 0\nf 1 1 -> 0\n")
    code, _, err = run(capsys, "eval", "--lattice", b2, "--sig", sig, "--bind", falling, term)
    assert code == 2 and "not monotone" in err
    wrong = write("wrong.bind", "f 0 -> 0\n")
    code, _, err = run(capsys, "eval", "--lattice", b2, "--sig", sig, "--bind", wrong, term)
    assert code == 2 and "line 1" in err


def test_eval_on_trees(capsys, write):
    t = write("t.term", "dagger(s . inj(1,2) | inj(2,2)) . c\n")
    code, out, _ = run(capsys, "eval", "--backend", "tree", "--sig", DATA / "trees.sig", t)
    assert code == 0 and out.startswith("tree morphism 1 -> 0")


def test_equiv_examples(capsys, write):
    sig = write("lit.sig", "symbol c 0\nsymbol s 1\nletter lit 1 0\n")
    bind = write("lit.bind", "lit = {s(c)}\n")
    t1 = write("t1.term", "s . tup(c ; 0)\n")
    t2 = write("t2.term", "lit\n")
    assert run(capsys, "equiv", "--sig", sig, "--bind", bind, t1, t2)[:2] == (0, "equivalent\n")
    star_s = write("star.term", "star(s)\n")
    just_s = write("s.term", "s\n")
    code, out, _ = run(capsys, "equiv", "--sig", sig, star_s, just_s)
    assert code == 1 and ": x1 is only in the left term" in out
    pair = write("pair.term", "base(1->2)\n")
    code, _, err = run(capsys, "equiv", "--sig", DATA / "trees.sig", just_s, pair)
    assert code == 2 and "different sorts" in err


def test_tree_bindings_accept_terms(capsys, write):
    sig = write("x.sig", "symbol c 0\nsymbol s 1\nletter f 1 1\nletter h 1 1\n")
    bind = write("x.bind", "f = {s(x1), c}\nh = f . f\n")
    t1 = write("a.term", "h\n")
    t2 = write("b.term", "s . s | s . c . zero(1) | c . zero(1)\n")
    assert run(capsys, "equiv", "--sig", sig, "--bind", bind, t1, t2)[0] == 0
    bad = write("bad.bind", "f = {s(x2)}\n")
    assert run(capsys, "equiv", "--sig", sig, "--bind", bad, t1, t2)[0] == 2


def test_translate(capsys, write):
    sig = DATA / "join.sig"
    code, out, _ = run(capsys, "translate", "--sig", sig, "to-star", DATA / "dagger_f.term")
    assert (code, out) == (0, "star(f) . pair(bot(1,1), id(1))\n")
    plain = write("plain.term", "f . (base(1,1->1)|pair(id(1),bot(1,1)))\n")
    code, out, _ = run(capsys, "translate", "--sig", sig, "to-dagger", plain)
    assert out == "f . (base(1,1->1) | pair(id(1), bot(1,1)))\n"
    broken = write("broken.term", "f . f\n")
    code, _, err = run(capsys, "translate", "--sig", sig, "to-star", broken)
    assert code == 2 and "target 2 ≠ source 1" in err


def test_translate_round_trip_then_equiv(capsys, write):
    sig = DATA / "trees.sig"
    original = write("o.term", "dagger(g | base(2->2)) . s\n")
    _, starred, _ = run(capsys, "translate", "--sig", sig, "to-star", original)
    mid = write("m.term", starred)
    _, back, _ = run(capsys, "translate", "--sig", sig, "to-dagger", mid)
    final = write("f.term", back)
    assert run(capsys, "equiv", "--sig", sig, original, final)[0] == 0


def test_curated_pairs(capsys):
    sig = EQUIV / "trees.sig"
    equal = sorted(EQUIV.glob("eq*_left.term"))
    unequal = sorted(EQUIV.glob("ne*_left.term"))
    assert len(equal) >= 10 and len(unequal) >= 5
    for left in equal:
        right = left.with_name(left.name.removesuffix("_left.term") + "_right.term")
        assert run(capsys, "equiv", "--sig", sig, left, right)[0] == 0, left.name
    for left in unequal:
        right = left.with_name(left.name.removesuffix("_left.term") + "_right.term")
        code, out, _ = run(capsys, "equiv", "--sig", sig, left, right)
        assert code == 1 and out.startswith("inequivalent"), left.name


def test_output_is_reproducible(capsys):
    argv = ["check-axioms", "--lattice", DATA / "diamond.lat", "--schema", "EQ18",
            "--samples", "60", "--seed", "7"]
    first = run(capsys, *argv)
    assert first == run(capsys, *argv)


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "parktheory", "eval", "--lattice",
                           str(DATA / "b2.lat"), str(DATA / "id1.term")],
                          capture_output=True, text=True, encoding="utf-8")
    assert done.returncode == 0 and done.stdout == "0↦0, 1↦1\n"
