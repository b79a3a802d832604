"""Bounded, three-valued checking of the realisability relation.

The clauses are checked by structural recursion, truncating everything
that is not decidable at the given bounds:

  * atomic equations are evaluated exactly (Yes/No);
  * membership and order atoms probe the assigned value: 1 is Yes, 0 is
    No, anything else (or evaluation failure) is Unknown;
  * conjunctions check both projections; disjunctions read the tag
    (a tag outside {0, 1} is a hard No);
  * negation: Yes when the body is decidably false, No when it is
    decidably true or a pool candidate realises it, otherwise Unknown;
  * implication: vacuously Yes when the antecedent is decidably false;
    a decidably true antecedent is exercised through its canonical
    realiser; an undecided one through the pool candidates that realise
    it, and the application must realise the consequent for each;
  * "decidably" covers quantifier-free formulas with evaluable atoms,
    plus first-sort quantifiers searched up to pair(N, N): existentials
    decided true only by explicit witness, universals false only by
    explicit counterexample;
  * first-sort universals check n < N; existentials check the packed
    witness; higher-sort universals range over the sample pool,
    higher-sort existentials sanity-check the packed value as a
    membership function first.

Yes and No are sound for these bounded semantics; Unknown records which
clause was truncated.  Verdicts on corpus formulas are monotone in N and
fuel.
"""

import json
from dataclasses import dataclass, field
from typing import Optional

from . import pca
from .extractor import (DEFAULT_PREC, ExtractionTrace, MU_SEARCH,
                        NONCONSTRUCTIVE, extract)
from .kernel import Proof, Theory, check_proof
from .pca import (App, CASES, Converged, K, Lam, Num, OutOfFuel, P0, P1,
                  PairVal, S, Stuck, VarRef, app, compile_term)
from .syntax import (Add, And, Eq, Exists, ForAll, Formula, Implies, In1, In2,
                     Mul, Not, Or, Prec, Sort, Succ, SVar, Var, Zero,
                     free_vars, numeral, substitute)

_K0 = App(K, Num(0))
_K1 = App(K, Num(1))
_ID = app(S, K, K)
# the set {0}, as a membership function
_SINGLETON0 = compile_term(Lam("n", app(CASES, Num(1), Num(0), VarRef("n"), Num(0))))


class RealcheckError(Exception):
    pass


@dataclass(frozen=True)
class Verdict3:
    kind: str  # "yes" | "no" | "unknown"
    reason: Optional[str] = None

    @property
    def is_yes(self):
        return self.kind == "yes"

    @property
    def is_no(self):
        return self.kind == "no"


YES = Verdict3("yes")


def no(reason: str) -> Verdict3:
    return Verdict3("no", reason)


def unknown(reason: str) -> Verdict3:
    return Verdict3("unknown", reason)


@dataclass
class Env:
    """Assignments for free variables plus the order interpretation."""
    nats: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)
    classes: dict = field(default_factory=dict)
    prec_interp: pca.CombTerm = DEFAULT_PREC

    def bind(self, name: str, sort: Sort, value) -> "Env":
        e = Env(dict(self.nats), dict(self.sets), dict(self.classes), self.prec_interp)
        {Sort.FIRST: e.nats, Sort.SECOND: e.sets, Sort.THIRD: e.classes}[sort][name] = value
        return e


def default_samples() -> list:
    return [_K0, _K1, _SINGLETON0]


# candidate realisers tried for negations and implications, besides samples
DEFAULT_CANDIDATES = (Num(0), Num(1), PairVal(Num(0), Num(0)),
                      PairVal(Num(1), Num(0)), _K0, _K1, _ID)

_SANITY_PROBES = 8


@dataclass
class Bounds:
    N: int = 50
    fuel: int = 10**6
    samples: list = field(default_factory=default_samples)

    def __post_init__(self):
        if self.N < 1 or self.fuel < 1:
            raise ValueError("bounds must be at least 1")


class _Fuel:
    def __init__(self):
        self.used = 0


def _reduce(t, bounds: Bounds, acc: _Fuel):
    out = pca.reduce(t, bounds.fuel)
    acc.used += out.steps_used
    return out


# ---------------------------------------------------------------------------
# exact evaluation helpers


def eval_foterm(t, nats: dict) -> int:
    if isinstance(t, Var):
        if t.name not in nats:
            raise RealcheckError(f"unassigned first-sort variable {t.name}")
        return nats[t.name]
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Succ):
        return eval_foterm(t.arg, nats) + 1
    if isinstance(t, Add):
        return eval_foterm(t.left, nats) + eval_foterm(t.right, nats)
    if isinstance(t, Mul):
        return eval_foterm(t.left, nats) * eval_foterm(t.right, nats)
    raise RealcheckError(f"not a first-order term: {t!r}")


def _probe(fn, arg, env: Env, bounds: Bounds, acc: _Fuel) -> Optional[int]:
    out = _reduce(App(fn, arg), bounds, acc)
    if not isinstance(out, Converged):
        return None
    return pca.value_as_nat(out.value, bounds.fuel)


def _atom_probe(f: Formula, env: Env, bounds: Bounds, acc: _Fuel) -> Optional[int]:
    if isinstance(f, In1):
        target = env.sets.get(f.set_.name)
        if target is None:
            raise RealcheckError(f"unassigned second-sort variable {f.set_.name}")
        return _probe(target, Num(eval_foterm(f.elem, env.nats)), env, bounds, acc)
    if isinstance(f, In2):
        cls = env.classes.get(f.class_.name)
        elem = env.sets.get(f.elem.name)
        if cls is None or elem is None:
            raise RealcheckError("unassigned variable in membership atom")
        return _probe(cls, elem, env, bounds, acc)
    if isinstance(f, Prec):
        left = env.sets.get(f.left.name)
        right = env.sets.get(f.right.name)
        if left is None or right is None:
            raise RealcheckError("unassigned variable in order atom")
        return _probe(env.prec_interp, PairVal(left, right), env, bounds, acc)
    raise RealcheckError(f"not a probe atom: {f!r}")


def _search_cap(bounds: Bounds) -> int:
    # covers every pair code <i, m> with i, m up to the quantifier bound
    from .coding import pair
    return pair(bounds.N, bounds.N) + 1


def decide_truth(f: Formula, env: Env, bounds: Bounds, acc: _Fuel) -> Optional[bool]:
    """Sound partial truth evaluation: exact on formulas whose atoms all
    evaluate, with first-sort quantifiers searched up to the derived cap
    (an existential is True only by explicit witness, a universal False
    only by explicit counterexample); None when undecided."""
    if isinstance(f, Eq):
        return eval_foterm(f.left, env.nats) == eval_foterm(f.right, env.nats)
    if isinstance(f, (In1, In2, Prec)):
        got = _atom_probe(f, env, bounds, acc)
        return None if got not in (0, 1) else got == 1
    if isinstance(f, (ForAll, Exists)) and f.sort == Sort.FIRST:
        hunting = isinstance(f, Exists)
        for k in range(_search_cap(bounds)):
            inst = substitute(f.body, f.var, numeral(k), Sort.FIRST)
            sub = decide_truth(inst, env, bounds, acc)
            if hunting and sub is True:
                return True
            if not hunting and sub is False:
                return False
        return None
    if isinstance(f, And):
        a = decide_truth(f.left, env, bounds, acc)
        if a is False:
            return False
        b = decide_truth(f.right, env, bounds, acc)
        if b is False:
            return False
        return True if (a and b) else None
    if isinstance(f, Or):
        a = decide_truth(f.left, env, bounds, acc)
        if a is True:
            return True
        b = decide_truth(f.right, env, bounds, acc)
        if b is True:
            return True
        return False if (a is False and b is False) else None
    if isinstance(f, Not):
        a = decide_truth(f.body, env, bounds, acc)
        return None if a is None else not a
    if isinstance(f, Implies):
        a = decide_truth(f.left, env, bounds, acc)
        if a is False:
            return True
        b = decide_truth(f.right, env, bounds, acc)
        if b is True:
            return True
        return False if (a is True and b is False) else None
    return None


def canonical_realiser(f: Formula, env: Env, bounds: Bounds, acc: _Fuel):
    """A realiser of a decidably-true quantifier-free formula, or None."""
    if isinstance(f, (Eq, In1, In2, Prec)):
        return Num(0) if decide_truth(f, env, bounds, acc) else None
    if isinstance(f, And):
        left = canonical_realiser(f.left, env, bounds, acc)
        right = canonical_realiser(f.right, env, bounds, acc)
        if left is None or right is None:
            return None
        return PairVal(left, right)
    if isinstance(f, Or):
        left = canonical_realiser(f.left, env, bounds, acc)
        if left is not None:
            return PairVal(Num(0), left)
        right = canonical_realiser(f.right, env, bounds, acc)
        if right is not None:
            return PairVal(Num(1), right)
        return None
    if isinstance(f, Not):
        return Num(0) if decide_truth(f.body, env, bounds, acc) is False else None
    if isinstance(f, Implies):
        if decide_truth(f.left, env, bounds, acc) is False:
            return _K0
        right = canonical_realiser(f.right, env, bounds, acc)
        return None if right is None else App(K, right)
    if isinstance(f, Exists) and f.sort == Sort.FIRST:
        for k in range(_search_cap(bounds)):
            inst = substitute(f.body, f.var, numeral(k), Sort.FIRST)
            body = canonical_realiser(inst, env, bounds, acc)
            if body is not None:
                return PairVal(Num(k), body)
        return None
    return None


def _is_membership_value(v, probes: list, bounds: Bounds, acc: _Fuel) -> bool:
    for probe in probes:
        if _probe(v, probe, None, bounds, acc) not in (0, 1):
            return False
    return True


# ---------------------------------------------------------------------------
# the clauses


def realizes(d: pca.CombTerm, f: Formula, env: Env, bounds: Bounds) -> Verdict3:
    """Does d realise f, at these bounds?  Pure in all arguments."""
    acc = _Fuel()
    out = _reduce(d, bounds, acc)
    if not isinstance(out, Converged):
        return _failure(out, "realiser")
    return _realizes(out.value, f, env, bounds, acc)


def _failure(outcome, what: str) -> Verdict3:
    if isinstance(outcome, OutOfFuel):
        return unknown(f"out of fuel evaluating {what}")
    return unknown(f"stuck evaluating {what}: {outcome.description}")


def _realizes(d, f: Formula, env: Env, bounds: Bounds, acc: _Fuel) -> Verdict3:
    if isinstance(f, Eq):
        if eval_foterm(f.left, env.nats) == eval_foterm(f.right, env.nats):
            return YES
        return no(f"false equation")
    if isinstance(f, (In1, In2, Prec)):
        got = _atom_probe(f, env, bounds, acc)
        if got == 1:
            return YES
        if got == 0:
            return no("membership probe returned 0")
        return unknown("membership probe did not settle")

    if isinstance(f, And):
        pieces = []
        for proj, side in ((P0, f.left), (P1, f.right)):
            out = _reduce(App(proj, d), bounds, acc)
            if not isinstance(out, Converged):
                return _failure(out, "conjunction component")
            pieces.append(_realizes(out.value, side, env, bounds, acc))
        return _combine(pieces)

    if isinstance(f, Or):
        tag_out = _reduce(App(P0, d), bounds, acc)
        if not isinstance(tag_out, Converged):
            return _failure(tag_out, "disjunction tag")
        tag = pca.value_as_nat(tag_out.value, bounds.fuel)
        if tag not in (0, 1):
            return no(f"disjunction tag {tag} outside {{0, 1}}")
        body_out = _reduce(App(P1, d), bounds, acc)
        if not isinstance(body_out, Converged):
            return _failure(body_out, "selected disjunct")
        side = f.left if tag == 0 else f.right
        return _realizes(body_out.value, side, env, bounds, acc)

    if isinstance(f, Not):
        truth = decide_truth(f.body, env, bounds, acc)
        if truth is False:
            return YES
        if truth is True:
            return no("negated formula is decidably true")
        for e in _candidates(env, bounds):
            sub = _realizes(e, f.body, env, bounds, acc)
            if sub.is_yes:
                return no("a pool candidate realises the negated formula")
        return unknown("negation checked only against the candidate pool")

    if isinstance(f, Implies):
        truth = decide_truth(f.left, env, bounds, acc)
        if truth is False:
            return YES
        if truth is True:
            # a decidably true antecedent is exercised through its canonical
            # realiser alone
            canon = canonical_realiser(f.left, env, bounds, acc)
            antecedents = [] if canon is None else [canon]
        else:
            antecedents = [e for e in _candidates(env, bounds)
                           if _realizes(e, f.left, env, bounds, acc).is_yes]
        if not antecedents:
            return unknown("no candidate realises the antecedent")
        pieces = []
        for e in antecedents:
            out = _reduce(App(d, e), bounds, acc)
            if not isinstance(out, Converged):
                return _failure(out, "implication application")
            pieces.append(_realizes(out.value, f.right, env, bounds, acc))
        return _combine(pieces)

    if isinstance(f, ForAll):
        if f.sort == Sort.FIRST:
            pieces = []
            for k in range(bounds.N):
                out = _reduce(App(d, Num(k)), bounds, acc)
                if not isinstance(out, Converged):
                    return _failure(out, f"universal instance {k}")
                inst = substitute(f.body, f.var, numeral(k), Sort.FIRST)
                sub = _realizes(out.value, inst, env, bounds, acc)
                if sub.is_no:
                    return no(f"instance {k} fails: {sub.reason}")
                pieces.append(sub)
            return _combine(pieces)
        if not bounds.samples:
            return unknown("empty higher-sort sample pool")
        pieces = []
        for sample in bounds.samples:
            out = _reduce(App(d, sample), bounds, acc)
            if not isinstance(out, Converged):
                return _failure(out, "higher-sort universal instance")
            sub = _realizes(out.value, f.body, env.bind(f.var, f.sort, sample),
                            bounds, acc)
            if sub.is_no:
                return no(f"a sample fails the universal: {sub.reason}")
            pieces.append(sub)
        return _combine(pieces)

    if isinstance(f, Exists):
        head_out = _reduce(App(P0, d), bounds, acc)
        if not isinstance(head_out, Converged):
            return _failure(head_out, "existential witness")
        body_out = _reduce(App(P1, d), bounds, acc)
        if not isinstance(body_out, Converged):
            return _failure(body_out, "existential body")
        if f.sort == Sort.FIRST:
            w = pca.value_as_nat(head_out.value, bounds.fuel)
            if w is None:
                return unknown("existential witness is not a numeral")
            inst = substitute(f.body, f.var, numeral(w), Sort.FIRST)
            return _realizes(body_out.value, inst, env, bounds, acc)
        probes = ([Num(i) for i in range(min(bounds.N, _SANITY_PROBES))]
                  if f.sort == Sort.SECOND else bounds.samples[:2])
        if not _is_membership_value(head_out.value, probes, bounds, acc):
            return unknown("existential witness fails the membership sanity check")
        return _realizes(body_out.value, f.body,
                         env.bind(f.var, f.sort, head_out.value), bounds, acc)

    raise RealcheckError(f"not a core formula: {f!r}")


def _candidates(env: Env, bounds: Bounds) -> list:
    return list(bounds.samples) + list(DEFAULT_CANDIDATES)


def _combine(pieces: list) -> Verdict3:
    for p in pieces:
        if p.is_no:
            return p
    for p in pieces:
        if not p.is_yes:
            return p
    return YES


# ---------------------------------------------------------------------------
# witnesses and theorem reports


def witness(d: pca.CombTerm, f: Formula, fuel: int = 10**6):
    """Witness of an existentially quantified formula: the evaluated first
    projection (a numeral for a first-sort quantifier)."""
    if not isinstance(f, Exists):
        raise RealcheckError("witness extraction needs an existential formula")
    out = pca.reduce(App(P0, d), fuel)
    if not isinstance(out, Converged):
        raise RealcheckError("witness projection did not evaluate")
    if f.sort == Sort.FIRST:
        w = pca.value_as_nat(out.value, fuel)
        if w is None:
            raise RealcheckError("first-sort witness is not a numeral")
        return w
    return out.value


@dataclass
class Report:
    verdict: Verdict3
    witnesses: list
    fuel_used: int
    bounds: Bounds
    flags: frozenset = frozenset()

    def to_json(self) -> str:
        body = {
            "schema": 1,
            "verdict": self.verdict.kind,
            "witnesses": self.witnesses,
            "fuel_used": self.fuel_used,
            "bounds": {"n": self.bounds.N, "fuel": self.bounds.fuel},
        }
        if self.verdict.reason:
            body["reason"] = self.verdict.reason
        if self.flags:
            body["flags"] = sorted(self.flags)
        return json.dumps(body)


def validate_env(env: Env, bounds: Bounds) -> list:
    """Probe assigned second-sort values for the 0/1 range condition and
    assigned third-sort values for sample-pairwise extensionality; returns
    a list of violation strings."""
    acc = _Fuel()
    bad = []
    probes = [Num(i) for i in range(min(bounds.N, _SANITY_PROBES))]
    for name, v in env.sets.items():
        if not _is_membership_value(v, probes, bounds, acc):
            bad.append(f"set {name} is not 0/1-valued on the probe set")
    vectors = []
    for s in bounds.samples:
        vectors.append(tuple(_probe(s, q, env, bounds, acc) for q in probes))
    for name, cls in env.classes.items():
        outs = [_probe(cls, s, env, bounds, acc) for s in bounds.samples]
        for i in range(len(bounds.samples)):
            for j in range(i + 1, len(bounds.samples)):
                if vectors[i] == vectors[j] and outs[i] != outs[j]:
                    bad.append(f"class {name} distinguishes equivalent samples")
    return bad


def check_theorem(proof: Proof, env: Env, bounds: Bounds,
                  theory: Theory = Theory.CM) -> Report:
    """Extract the proof's realiser, apply it to the parameter tuple drawn
    from env, and check it realises the theorem."""
    verdict = check_proof(proof, theory)
    if not verdict.accepted:
        raise RealcheckError(f"proof rejected: {verdict.reason}")
    bad = [b for b in validate_env(env, bounds) if "is not 0/1-valued" in b]
    if bad:
        raise RealcheckError("; ".join(bad))
    trace = extract(proof, theory, prec=env.prec_interp)
    theorem = proof.lines[-1].formula
    if NONCONSTRUCTIVE in trace.flags:
        return Report(unknown("nonconstructive stand-in"), [], 0, bounds, trace.flags)

    for name, sort in free_vars(theorem):
        table = {Sort.FIRST: env.nats, Sort.SECOND: env.sets,
                 Sort.THIRD: env.classes}[sort]
        if name not in table:
            raise RealcheckError(f"theorem free variable {name} is unassigned")

    acc = _Fuel()
    compiled = trace.compiled()
    ptuple = _parameter_tuple(trace, env)
    out = _reduce(App(compiled, ptuple), bounds, acc)
    if not isinstance(out, Converged):
        if isinstance(out, OutOfFuel) and MU_SEARCH in trace.flags:
            v = unknown("mu search exhausted the fuel: no witness found below "
                        "the bound, so only the universal disjunct remains, "
                        "which a bounded check cannot certify")
        else:
            v = _failure(out, "extracted realiser")
        return Report(v, [], acc.used, bounds, trace.flags)

    v = _realizes(out.value, theorem, env, bounds, acc)
    wits = _walk_witnesses(out.value, theorem, env, bounds, acc)
    return Report(v, wits, acc.used, bounds, trace.flags)


def _parameter_tuple(trace: ExtractionTrace, env: Env):
    values = []
    for name, sort in trace.layout:
        if sort == Sort.FIRST:
            values.append(Num(env.nats.get(name, 0)))
        elif sort == Sort.SECOND:
            values.append(env.sets.get(name, _K0))
        else:
            values.append(env.classes.get(name, _K0))
    if not values:
        return Num(0)
    out = values[-1]
    for v in reversed(values[:-1]):
        out = PairVal(v, out)
    return out


def _walk_witnesses(d, f: Formula, env: Env, bounds: Bounds, acc: _Fuel) -> list:
    wits = []
    while isinstance(f, (Or, Exists)):
        head_out = _reduce(App(P0, d), bounds, acc)
        body_out = _reduce(App(P1, d), bounds, acc)
        if not isinstance(head_out, Converged) or not isinstance(body_out, Converged):
            break
        if isinstance(f, Or):
            tag = pca.value_as_nat(head_out.value, bounds.fuel)
            if tag not in (0, 1):
                break
            wits.append({"kind": "or", "tag": tag})
            f = f.left if tag == 0 else f.right
        else:
            if f.sort == Sort.FIRST:
                w = pca.value_as_nat(head_out.value, bounds.fuel)
                if w is None:
                    break
                wits.append({"kind": "exists", "var": f.var, "value": w})
                f = substitute(f.body, f.var, numeral(w), Sort.FIRST)
            else:
                wits.append({"kind": "exists", "var": f.var,
                             "value": pca.print_term(head_out.value)})
                env = env.bind(f.var, f.sort, head_out.value)
                f = f.body
        d = body_out.value
    return wits
