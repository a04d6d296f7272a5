"""Instantiate schemas over a backend and search for counterexamples."""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import BudgetExceeded, EvalError
from ..terms.evaluate import Interpretation, evaluate
from ..terms.syntax import format_term
from .schemas import Instance, Schema


@dataclass
class AssignmentResult:
    arities: dict
    mode: str  # "exhaustive", "covering", "sampled" or "skipped"
    instances: int = 0
    filtered: int = 0
    note: str = ""


@dataclass
class Counterexample:
    schema_id: str
    instance: Instance
    values: dict
    lhs: object
    rhs: object
    witness: str

    def describe(self, backend) -> str:
        inst = self.instance
        lines = [f"counterexample to {self.schema_id} at {_ar(inst.arities)}"]
        for name in sorted(self.values):
            n, p = inst.sig.sort(name)
            lines.append(f"  {name} : {n} -> {p} = {_indent(backend.show(self.values[name]))}")
        lines.append(f"  left  {format_term(inst.lhs)} = {_indent(backend.show(self.lhs))}")
        lines.append(f"  right {format_term(inst.rhs)} = {_indent(backend.show(self.rhs))}")
        lines.append(f"  {self.witness}")
        return "\n".join(lines)


@dataclass
class CheckReport:
    schema_id: str
    backend: str
    relation: str
    assignments: list = field(default_factory=list)
    counterexample: Counterexample | None = None

    @property
    def instantiations(self) -> int:
        return sum(a.instances for a in self.assignments)

    @property
    def verdict(self) -> str:
        if self.counterexample is not None:
            return "counterexample"
        return "holds" if self.instantiations else "skipped"

    @property
    def exhaustive(self) -> bool:
        tried = [a for a in self.assignments if a.mode != "skipped"]
        return bool(tried) and all(a.mode == "exhaustive" for a in tried)

    def summary(self) -> str:
        tried = [a for a in self.assignments if a.mode != "skipped"]
        skipped = len(self.assignments) - len(tried)
        modes = sorted({a.mode for a in tried})
        extra = f", {skipped} assignments over budget" if skipped else ""
        filtered = sum(a.filtered for a in self.assignments)
        if filtered:
            extra += f", {filtered} filtered by hypotheses"
        return (f"{self.schema_id:<13} {self.backend:<12} {self.verdict:<14} "
                f"{self.instantiations} instances over {len(tried)} sorts "
                f"({'/'.join(modes) or 'none'}{extra})")


def _ar(arities: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in arities.items()) or "no arities"


def _indent(text: str) -> str:
    return text.replace("\n", "\n      ")


def _holds(backend, relation: str, a, b) -> bool:
    return backend.equal(a, b) if relation == "=" else backend.leq(a, b)


def _rng(seed: int, schema_id: str, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(schema_id.encode()), index])


def evaluate_instance(inst: Instance, backend, values: dict, repair: bool = False):
    """``(hypotheses hold, lhs value, rhs value, final letter values)``."""
    values = dict(values)
    if repair:
        for letter, term in inst.repairs:
            interp = Interpretation(backend, inst.sig, values)
            values[letter] = evaluate(term, interp)
    interp = Interpretation(backend, inst.sig, values)
    memo: dict = {}
    for l, rel, r in inst.hypotheses:
        if not _holds(backend, rel, evaluate(l, interp, memo), evaluate(r, interp, memo)):
            return False, None, None, values
    return True, evaluate(inst.lhs, interp, memo), evaluate(inst.rhs, interp, memo), values


def validate(cx: Counterexample, backend, relation: str) -> bool:
    """Re-evaluate a reported counterexample and confirm the violation."""
    ok, lhs, rhs, _ = evaluate_instance(cx.instance, backend, cx.values)
    return ok and not _holds(backend, relation, lhs, rhs)


def _plan(schema: Schema, backend, max_arity: int, exhaustive: bool, cap: int,
          cover_cap: int):
    """Instantiate every assignment and decide how its instances are drawn."""
    plan = []
    for ar in schema.assignments(max_arity):
        inst = schema.instantiate(ar)
        res = AssignmentResult(ar, "sampled")
        homsets = None
        try:
            if getattr(backend, "lattice", None) is not None:
                for n, p in inst.sig.letters.values():
                    backend.lattice.check_arity(p)
            if exhaustive:
                homsets = [backend.homset(*inst.sig.sort(x)) for x in sorted(inst.sig.letters)]
                if any(h is None for h in homsets):
                    homsets = None
                elif math.prod(h.count for h in homsets) <= cap:
                    res.mode = "exhaustive"
                elif max(h.count for h in homsets) <= cover_cap:
                    res.mode = "covering"
                else:
                    homsets = None
        except BudgetExceeded as e:
            res.mode, res.note = "skipped", str(e)
        plan.append((inst, res, homsets))
    return plan


def check_schema(schema: Schema, backend, *, exhaustive: bool = True, samples: int = 1000,
                 seed: int = 0, max_arity: int = 2, exhaustive_cap: int = 4096,
                 cover_cap: int = 0, stop_at_first: bool = True) -> CheckReport:
    """Check ``schema`` on every arity assignment with all arities in ``0..max_arity``.

    An assignment is enumerated in full when ``exhaustive`` is set and its
    joint instance space has at most ``exhaustive_cap`` members; otherwise it
    gets a share of ``samples`` seeded random instances, so each schema sees
    at least ``samples`` sampled instances overall. When the joint space is too
    big but no single hom-set has more than ``cover_cap`` members, the
    assignment is covered instead: instance ``k`` takes member ``k`` of a
    seeded shuffle of each letter's hom-set, so every morphism of every letter
    occurs at least once. Implication schemas only
    test instances satisfying their hypotheses; on every other sample a
    repair substitution steers the letters into the hypothesis region.
    """
    if max_arity < 0 or samples < 0:
        raise ValueError("arity bound and sample count must be non-negative")
    report = CheckReport(schema.id, backend.name, schema.relation)
    plan = _plan(schema, backend, max_arity, exhaustive, exhaustive_cap, cover_cap)
    sampled = sum(1 for _, res, _ in plan if res.mode == "sampled")
    share = math.ceil(samples / sampled) if sampled else 0

    def run(inst, res, source) -> bool:
        """Evaluate instances from ``source``; True when a counterexample ends the check."""
        try:
            for values, repair in source:
                ok, lhs, rhs, values = evaluate_instance(inst, backend, values, repair)
                if not ok:
                    res.filtered += 1
                    continue
                res.instances += 1
                if not _holds(backend, schema.relation, lhs, rhs):
                    witness = backend.witness(lhs, rhs, schema.relation)
                    report.counterexample = Counterexample(schema.id, inst, values, lhs, rhs,
                                                           witness)
                    if stop_at_first:
                        return True
        except (BudgetExceeded, EvalError) as e:
            cause = e.__cause__ if isinstance(e, EvalError) else e
            if not isinstance(cause, BudgetExceeded) and not isinstance(e, BudgetExceeded):
                raise
            res.mode, res.note = "skipped", str(e)
        return False

    def draws(inst, rng, start, count):
        names = sorted(inst.sig.letters)
        return (({x: backend.sample(*inst.sig.sort(x), rng) for x in names},
                 bool(inst.repairs) and k % 2 == 1) for k in range(start, start + count))

    streams = []
    for index, (inst, res, homsets) in enumerate(plan):
        report.assignments.append(res)
        if res.mode == "skipped":
            continue
        names = sorted(inst.sig.letters)
        if res.mode == "exhaustive":
            source = ((dict(zip(names, combo)), False) for combo in _product(homsets))
        elif res.mode == "covering":
            source = _covering(homsets, names, bool(inst.repairs), _rng(seed, schema.id, index))
        else:
            rng = _rng(seed, schema.id, index)
            streams.append((inst, res, rng))
            source = draws(inst, rng, 0, share)
        if run(inst, res, source):
            return report
    # assignments that went over budget mid-way leave a shortfall; the rest make it up
    while True:
        live = [(inst, res, rng) for inst, res, rng in streams if res.mode == "sampled"]
        drawn = sum(res.instances + res.filtered for _, res, _ in live)
        if not live or drawn >= samples:
            return report
        extra = math.ceil((samples - drawn) / len(live))
        for inst, res, rng in live:
            if run(inst, res, draws(inst, rng, res.instances + res.filtered, extra)):
                return report


def _product(homsets):
    import itertools

    for combo in itertools.product(*homsets):
        yield combo


def _covering(homsets, names, repairs: bool, rng):
    """Walk every hom-set in a shuffled order at once, wrapping the shorter ones.

    With repairs each instance is also tried repaired, so the unrepaired pass
    still sees every member.
    """
    orders = [rng.permutation(h.count) for h in homsets]
    for k in range(max(h.count for h in homsets)):
        values = {x: h[int(o[k % h.count])] for x, h, o in zip(names, homsets, orders)}
        yield values, False
        if repairs:
            yield values, True


def check_catalog(schemas, backend, **options) -> list[CheckReport]:
    return [check_schema(s, backend, **options) for s in schemas]


def sample_morphism(backend, n: int, p: int, seed: int):
    """A seeded random morphism ``n -> p`` of the backend."""
    return backend.sample(n, p, np.random.default_rng(seed))
