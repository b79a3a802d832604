import json

import pytest

from cmr.kernel import (AxiomJust, KernelError, MPJust, NUMBER_AXIOMS, Proof,
                        ProofLine, Theory, Verdict, check_proof,
                        instantiate_axiom, parse_proof, theorem_of)
from cmr.syntax import (Eq, Implies, Or, Sort, ZERO, alpha_eq, expand,
                        numeral, parse_formula, print_formula)


def fm(text, declares=None):
    return parse_formula(text, declares)


def test_induction_instance_matches_statement():
    phi = fm("(= n n)", {"n": Sort.FIRST})
    inst = instantiate_axiom("induction", (("n", Sort.FIRST), phi))
    want = fm("(-> (and (= 0 0) (forall-n n (-> (= n n) (= (s n) (s n))))) "
              "(forall-n n (= n n)))")
    assert alpha_eq(inst, expand(want))


def test_atomic_decidability_zero_case():
    inst = instantiate_axiom("dec-eq", (ZERO, ZERO))
    assert inst == Or(Eq(ZERO, ZERO), parse_formula("(not (= 0 0))"))


def test_w3_shape():
    inst = instantiate_axiom("w3", ())
    text = print_formula(inst)
    assert text.startswith("(forall-s X (exists-s Z (forall-s Y (-> (prec Y X)")
    # the slice equation expands to pair-code membership
    assert "in1" in text and "+" in text


def test_numbers_are_closed_universals():
    from cmr.syntax import free_vars
    assert len(NUMBER_AXIOMS) == 6
    for ax in NUMBER_AXIOMS:
        assert free_vars(ax) == set()


def test_instantiate_arity_errors():
    with pytest.raises(KernelError) as e:
        instantiate_axiom("imp-k", (fm("(= 0 0)"),))
    assert e.value.code == "arity-mismatch"
    with pytest.raises(KernelError) as e:
        instantiate_axiom("number", (99,))
    assert e.value.code == "arity-mismatch"
    with pytest.raises(KernelError) as e:
        instantiate_axiom("nonsense", ())
    assert e.value.code == "unknown-scheme"


def test_instantiate_sort_errors():
    with pytest.raises(KernelError) as e:
        instantiate_axiom("eq-refl", (fm("(= 0 0)"),))
    assert e.value.code == "sort-error"


ACCEPT = """
(proof
  (line (-> (= 0 0) (-> (= (s 0) (s 0)) (= 0 0)))
        (axiom imp-k (fm (= 0 0)) (fm (= (s 0) (s 0)))))
  (line (= 0 0) (axiom eq-refl (term 0)))
  (line (-> (= (s 0) (s 0)) (= 0 0)) (mp 1 0)))
"""


def test_accept_and_theorem():
    proof = parse_proof(ACCEPT)
    verdict = check_proof(proof)
    assert verdict.accepted
    assert alpha_eq(theorem_of(proof), fm("(-> (= (s 0) (s 0)) (= 0 0))"))


def test_single_axiom_accepts():
    proof = parse_proof("(proof (line (or (= 0 0) (not (= 0 0))) "
                        "(axiom dec-eq (term 0) (term 0))))")
    assert check_proof(proof).accepted


def test_prefix_closure():
    proof = parse_proof(ACCEPT)
    for k in range(1, len(proof.lines) + 1):
        assert check_proof(Proof(proof.lines[:k])).accepted


def test_determinism():
    proof = parse_proof(ACCEPT)
    assert check_proof(proof) == check_proof(proof)


def test_cm_accept_implies_gwo_accept():
    proof = parse_proof(ACCEPT)
    assert check_proof(proof, Theory.CM).accepted
    assert check_proof(proof, Theory.CM_GWO).accepted


def test_instantiated_axioms_are_core():
    from cmr.syntax import is_core
    phi = fm("(= n n)", {"n": Sort.FIRST})
    for scheme, params in [
        ("induction", (("n", Sort.FIRST), phi)),
        ("comp1", (("n", Sort.FIRST), ("X", Sort.SECOND), phi)),
        ("omni", (("n", Sort.FIRST), phi, phi)),
        ("w3", ()),
        ("ext-prec", (("X", Sort.SECOND), ("Y", Sort.SECOND),
                      ("U", Sort.SECOND), ("V", Sort.SECOND))),
        ("recursion", (("n", Sort.FIRST), ("X", Sort.SECOND),
                       ("Y", Sort.SECOND), fm("(= n n)", {"n": Sort.FIRST}))),
    ]:
        assert is_core(instantiate_axiom(scheme, params)), scheme


def test_theorem_of_errors():
    with pytest.raises(ValueError):
        theorem_of(Proof(()))
    broken = Proof((ProofLine(fm("(= 0 (s 0))"), AxiomJust("eq-refl", (ZERO,))),))
    with pytest.raises(ValueError):
        theorem_of(broken)


def test_verdict_json():
    v = Verdict(False, 3, "bad-citation", "line 3 cites line 9")
    body = json.loads(v.to_json())
    assert body == {"status": "reject", "bad_line": 3, "reason": "bad-citation",
                    "detail": "line 3 cites line 9"}
    assert json.loads(Verdict(True).to_json()) == {"status": "accept"}


# ---------------------------------------------------------------------------
# the negative suite: twenty deliberately broken proofs, each with the
# reason code the kernel must report

_K_LINE = ("(line (-> (= 0 0) (-> (= (s 0) (s 0)) (= 0 0))) "
           "(axiom imp-k (fm (= 0 0)) (fm (= (s 0) (s 0)))))")
_REFL_LINE = "(line (= 0 0) (axiom eq-refl (term 0)))"

NEGATIVE_FILES = [
    # citations
    (f"(proof {_K_LINE} (line (= 0 0) (mp 1 0)))", "bad-citation"),
    (f"(proof {_REFL_LINE} (line (= 0 0) (mp 0 5)))", "bad-citation"),
    (f"(proof {_REFL_LINE} (line (-> (= 0 0) (forall-n n (= 0 0))) (all-gen 3 n first)))",
     "bad-citation"),
    # rule shape
    (f"(proof {_REFL_LINE} {_REFL_LINE} (line (= 0 0) (mp 0 1)))",
     "not-implication"),
    (f"(proof {_REFL_LINE} (line (-> (= 0 0) (forall-n n (= 0 0))) (all-gen 0 n first)))",
     "not-implication"),
    # modus ponens mismatches
    (f"(proof {_K_LINE} (line (= (s 0) (s 0)) (axiom eq-refl (term (s 0)))) "
     "(line (-> (= (s 0) (s 0)) (= 0 0)) (mp 1 0)))", "premise-mismatch"),
    (f"(proof {_K_LINE} {_REFL_LINE} (line (= 0 0) (mp 1 0)))",
     "conclusion-mismatch"),
    # generalisation side conditions
    ("(declare n first)"
     "(proof (line (-> (= n 0) (-> (= n n) (= n 0))) "
     "(axiom imp-k (fm (= n 0)) (fm (= n n)))) "
     "(line (-> (= n 0) (forall-n n (-> (= n n) (= n 0)))) (all-gen 0 n first)))",
     "side-condition"),
    ("(declare n first)"
     "(proof (line (-> (= n n) (-> (= n 0) (= n n))) "
     "(axiom imp-k (fm (= n n)) (fm (= n 0)))) "
     "(line (-> (exists-n n (= n n)) (-> (= n 0) (= n n))) (ex-gen 0 n first)))",
     "side-condition"),
    # generalisation conclusion mismatches
    ("(declare n first)"
     "(proof (line (-> (= 0 0) (-> (= n n) (= 0 0))) "
     "(axiom imp-k (fm (= 0 0)) (fm (= n n)))) "
     "(line (-> (= 0 0) (forall-n m (= m m))) (all-gen 0 n first)))",
     "conclusion-mismatch"),
    ("(declare n first)"
     "(proof (line (-> (and (= n n) (= 0 0)) (= 0 0)) "
     "(axiom and-elim-r (fm (= n n)) (fm (= 0 0)))) "
     "(line (-> (forall-n n (and (= n n) (= 0 0))) (= 0 0)) (ex-gen 0 n first)))",
     "conclusion-mismatch"),
    # axiom lines stating the wrong formula
    ("(proof (line (= 0 (s 0)) (axiom eq-refl (term 0))))", "formula-mismatch"),
    ("(proof (line (-> (and (= 0 0) (= (s 0) (s 0))) (= (s 0) (s 0))) "
     "(axiom and-elim-l (fm (= 0 0)) (fm (= (s 0) (s 0))))))", "formula-mismatch"),
    ("(proof (line (or (= 0 0) (not (= 0 (s 0)))) (axiom dec-eq (term 0) (term 0))))",
     "formula-mismatch"),
    # wrong sorts in membership atoms are caught by the scheme builders
    ("(proof (line (forall-s X (not (prec X X))) (axiom w1-irrefl)))",
     "theory-restriction"),
    ("(proof (line (= 0 0) (axiom frobnicate)))", "unknown-scheme"),
    # comprehension freshness
    ("(proof (line (-> (forall-n n (or (in1 n X) (not (in1 n X)))) "
     "(exists-s X (forall-n n (iff (in1 n X) (in1 n X))))) "
     "(axiom comp1 n X (fm (in1 n X)))))", "param-constraint"),
    # recursion variable distinctness
    ("(proof (line (= 0 0) (axiom recursion n X X (fm (= n n)))))",
     "param-constraint"),
]

NEGATIVE_BUILT = [
    # parameter kind errors constructed through the API
    (Proof((ProofLine(Eq(ZERO, ZERO), AxiomJust("eq-refl", (fm("(= 0 0)"),))),)),
     "sort-error"),
    (Proof((ProofLine(Eq(ZERO, ZERO), AxiomJust("imp-k", (fm("(= 0 0)"),))),)),
     "arity-mismatch"),
]


@pytest.mark.parametrize("text,code", NEGATIVE_FILES)
def test_negative_files(text, code):
    verdict = check_proof(parse_proof(text), Theory.CM)
    assert not verdict.accepted
    assert verdict.reason == code, (verdict.reason, verdict.detail)


@pytest.mark.parametrize("proof,code", NEGATIVE_BUILT)
def test_negative_built(proof, code):
    verdict = check_proof(proof, Theory.CM)
    assert not verdict.accepted
    assert verdict.reason == code


def test_negative_suite_has_twenty_cases():
    assert len(NEGATIVE_FILES) + len(NEGATIVE_BUILT) == 20
