import os

import pytest

from cmr.extractor import (ExtractionError, MU_SEARCH, NONCONSTRUCTIVE,
                           canonical_total_realiser, extract, parameter_layout,
                           proof_layout, realiser_for_axiom)
from cmr.kernel import Theory, instantiate_axiom, parse_proof
from cmr.pca import (App, CASES, Converged, K, Lam, Num, P, P0, PairVal,
                     VarRef, app, compile_term, print_term, reduce,
                     value_as_nat)
from cmr.realcheck import Bounds, Env, realizes
from cmr.syntax import Sort, SVar, numeral, parse_formula

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "goldens", "realisers")

A = parse_formula("(= 0 0)")
B = parse_formula("(= (s 0) (s 0))")
C = parse_formula("(= (s (s 0)) (s (s 0)))")
PHI_X3 = parse_formula("(= x (s (s (s 0))))", {"x": Sort.FIRST})
PHI_X0 = parse_formula("(= x 0)", {"x": Sort.FIRST})

GOLDEN_CASES = {
    "imp-k": ("imp-k", (A, B)),
    "imp-s": ("imp-s", (A, B, C)),
    "and-intro": ("and-intro", (A, B)),
    "and-elim-l": ("and-elim-l", (A, B)),
    "and-elim-r": ("and-elim-r", (A, B)),
    "or-intro-l": ("or-intro-l", (A, B)),
    "or-intro-r": ("or-intro-r", (A, B)),
    "or-elim": ("or-elim", (A, B, C)),
    "neg-intro": ("neg-intro", (A, B)),
    "ex-falso": ("ex-falso", (A, B)),
    "ex-intro": ("ex-intro", (("x", Sort.FIRST), PHI_X3, numeral(3))),
    "all-elim": ("all-elim", (("x", Sort.FIRST), PHI_X3, numeral(1))),
    "eq-refl": ("eq-refl", (numeral(0),)),
    "eq-subst": ("eq-subst", (numeral(0), numeral(0), ("x", Sort.FIRST), PHI_X0)),
}

RULE_PROOFS = {
    "rule-mp": """(proof
  (line (-> (= 0 0) (-> (= (s 0) (s 0)) (= 0 0))) (axiom imp-k (fm (= 0 0)) (fm (= (s 0) (s 0)))))
  (line (= 0 0) (axiom eq-refl (term 0)))
  (line (-> (= (s 0) (s 0)) (= 0 0)) (mp 1 0)))""",
    "rule-all-gen": """(proof
  (line (= n n) (axiom eq-refl (term n)))
  (line (-> (= n n) (-> (= 0 0) (= n n))) (axiom imp-k (fm (= n n)) (fm (= 0 0))))
  (line (-> (= 0 0) (= n n)) (mp 0 1))
  (line (-> (= 0 0) (forall-n n (= n n))) (all-gen 2 n first)))""",
    "rule-ex-gen": """(proof
  (line (= 0 0) (axiom eq-refl (term 0)))
  (line (-> (= 0 0) (-> (= n n) (= 0 0))) (axiom imp-k (fm (= 0 0)) (fm (= n n))))
  (line (-> (= n n) (= 0 0)) (mp 0 1))
  (line (-> (exists-n n (= n n)) (= 0 0)) (ex-gen 2 n first)))""",
}


def _golden(name: str) -> str:
    with open(os.path.join(GOLDEN_DIR, name + ".txt")) as fp:
        return fp.read().strip()


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_axiom_realiser_goldens(name):
    scheme, params = GOLDEN_CASES[name]
    term = realiser_for_axiom(scheme, params)
    assert print_term(term) == _golden(name)


@pytest.mark.parametrize("name", sorted(RULE_PROOFS))
def test_rule_realiser_goldens(name):
    trace = extract(parse_proof(RULE_PROOFS[name]), Theory.CM)
    assert print_term(trace.realiser) == _golden(name)


def test_parameter_layout_ordering():
    f = parse_formula("(and (in1 m X) (in2 Y W))",
                      {"m": Sort.FIRST, "X": Sort.SECOND, "Y": Sort.SECOND,
                       "W": Sort.THIRD})
    assert parameter_layout(f) == [("m", Sort.FIRST), ("X", Sort.SECOND),
                                   ("Y", Sort.SECOND), ("W", Sort.THIRD)]
    assert parameter_layout(parse_formula("(= 0 0)")) == []


def test_first_occurrence_order_within_sort():
    f = parse_formula("(= (+ b a) (+ a b))", {"a": Sort.FIRST, "b": Sort.FIRST})
    assert [v for v, _ in parameter_layout(f)] == ["b", "a"]


def test_extract_requires_accepted_proof():
    broken = parse_proof("(proof (line (= 0 (s 0)) (axiom eq-refl (term 0))))")
    with pytest.raises(ExtractionError):
        extract(broken, Theory.CM)


def test_extract_deterministic_and_total_on_corpus():
    corpus = os.path.join(os.path.dirname(__file__), "..", "corpus")
    for name in sorted(os.listdir(corpus)):
        if not name.endswith(".sexp"):
            continue
        with open(os.path.join(corpus, name)) as fp:
            proof = parse_proof(fp.read())
        t1 = extract(proof, Theory.CM)
        t2 = extract(proof, Theory.CM)
        assert t1.realiser == t2.realiser
        assert len(t1.lines) == len(proof.lines)
        compile_term(t1.realiser)  # compiles without free variables


def test_compiled_k_realiser_behaves():
    term = compile_term(realiser_for_axiom("imp-k", (A, B)))
    out = reduce(app(term, Num(0), Num(7), Num(9)), 10**4)
    assert isinstance(out, Converged) and out.value == Num(7)


def test_closed_atomic_realiser_converges_fast():
    trace = extract(parse_proof("(proof (line (= 0 0) (axiom eq-refl (term 0))))"))
    out = reduce(App(trace.compiled(), Num(0)), 10**6)
    assert isinstance(out, Converged)
    assert out.steps_used < 100


def test_w_axioms_flagged():
    proof = parse_proof("(proof (line (forall-s X (not (prec X X))) (axiom w1-irrefl)))")
    trace = extract(proof, Theory.CM_GWO)
    assert NONCONSTRUCTIVE in trace.flags


def test_mu_flag_and_flag_propagation():
    base = """(proof
  (line (-> (forall-n n (or (= n n) (= n 0))) (or (forall-n n (= n n)) (exists-n n (= n 0))))
        (axiom omni n (fm (= n n)) (fm (= n 0)))))"""
    trace = extract(parse_proof(base), Theory.CM)
    assert MU_SEARCH in trace.flags


def test_canonical_total_realiser_shape():
    inst = instantiate_axiom("ext2", (("X", Sort.SECOND), ("Y", Sort.SECOND),
                                      ("W", Sort.THIRD)))
    term = canonical_total_realiser(inst)
    # an implication under the equality expansion: a lambda returning a pair
    assert isinstance(term, Lam)


def test_recursion_realiser_behavioral():
    # phi(n, X, Y) := eq2(Y, X); the antecedent is realised by handing back
    # the input set with an equality certificate, so every column of the
    # constructed sequence set equals the start set
    from cmr.coding import pair as pair_code
    phi = parse_formula("(eq2 Y X)", {"X": Sort.SECOND, "Y": Sort.SECOND})
    params = (("n", Sort.FIRST), ("X", Sort.SECOND), ("Y", Sort.SECOND), phi)
    # \\n. \\x. <x, \\m. <\\a. 0, \\a. 0>>
    ante = compile_term(Lam("n", Lam("x", app(
        P, VarRef("x"),
        Lam("m", app(P, Lam("a", Num(0)), Lam("a", Num(0))))))))
    realiser = compile_term(realiser_for_axiom("recursion", params))
    # start from the set {0}: membership function cases(1, 0, m, 0)
    start = compile_term(Lam("m", app(CASES, Num(1), Num(0), VarRef("m"), Num(0))))
    packed = reduce(app(realiser, Num(0), ante, start), 10**6)
    assert isinstance(packed, Converged)
    z = reduce(App(P0, packed.value), 10**6)
    assert isinstance(z, Converged)
    # every column of z is the start set: z(pair(col, m)) = start(m)
    for col in range(4):
        for m in range(4):
            got = reduce(App(z.value, Num(pair_code(col, m))), 10**6)
            assert isinstance(got, Converged)
            assert value_as_nat(got.value) == (1 if m == 0 else 0), (col, m)
    # and the packaged term is never refuted by the bounded checker
    inst = instantiate_axiom("recursion", params)
    v = realizes(app(realiser, Num(0), ante, start),
                 inst.right.body, Env(sets={"X": start}),
                 Bounds(N=2, fuel=10**6))
    assert not v.is_no, v
