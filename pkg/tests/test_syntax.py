import pytest

from cmr.syntax import (And, Eq, Exists, ForAll, Implies, In1, In2, Not, Or,
                        Prec, Slice, Sort, SortError, Succ, SVar, SyntaxError_,
                        TVar, Var, ZERO, alpha_eq, alpha_normalize, expand,
                        free_vars, is_arithmetic, is_core,
                        is_strictly_positive, numeral, parse, parse_formula,
                        positive_substitute, print_formula, substitute)


def fm(text, declares=None):
    return parse_formula(text, declares)


def test_parse_forall_example():
    f = fm("(forall-n n (= n n))")
    assert f == ForAll(Sort.FIRST, "n", Eq(Var("n"), Var("n")))


def test_parse_infers_set_sort_from_position():
    f = fm("(in1 0 X)")
    assert f == In1(ZERO, SVar("X"))


def test_parse_sort_error_for_lowercase_in_set_position():
    with pytest.raises(SortError):
        fm("(in2 n Y3)")


def test_parse_errors_carry_position():
    with pytest.raises(SyntaxError_) as e:
        fm("(and (= 0 0))")
    assert e.value.line == 1


def test_parse_unknown_head():
    with pytest.raises(SyntaxError_):
        fm("(xyzzy 0 0)")


def test_parse_renames_shadowed_binders():
    f = fm("(forall-n n (exists-n n (= n 0)))")
    assert isinstance(f, ForAll) and isinstance(f.body, Exists)
    assert f.var != f.body.var


def test_parse_numeral_literals():
    assert fm("(= 2 (s (s 0)))") == Eq(numeral(2), numeral(2))


def test_print_parse_round_trip():
    texts = [
        "(forall-n n (-> (= n 0) (exists-n m (= m (s n)))))",
        "(and (in1 0 X) (not (prec X Y)))",
        "(forall-s X (exists-t W (in2 X W)))",
        "(or (= 0 0) (= (+ 0 0) (* 0 0)))",
        "(iff (= 0 0) (= 0 0))",
        "(eq2 X Y)",
        "(in* Y X)",
        "(in1 0 (slice Z 2))",
        "(in1 0 (bracket X n))",
    ]
    for text in texts:
        f = parse_formula(text)
        assert parse_formula(print_formula(f)) == f


def test_parse_dispatches_proofs():
    out = parse("(proof (line (= 0 0) (axiom eq-refl (term 0))))")
    from cmr.kernel import Proof
    assert isinstance(out, Proof)


def test_expand_eq2_paper_form():
    got = expand(fm("(eq2 X Y)"))
    want = fm("(forall-n n (and (-> (in1 n X) (in1 n Y)) (-> (in1 n Y) (in1 n X))))")
    assert alpha_eq(got, want)


def test_expand_instar_shape():
    got = expand(fm("(in* Y X)"))
    assert isinstance(got, Exists) and got.sort == Sort.FIRST
    body = got.body
    assert isinstance(body, And)
    # left conjunct: the tagged column is inhabited via a pair-code witness
    assert isinstance(body.left, Exists)
    assert is_core(got)


def test_expand_identity_on_core():
    f = fm("(forall-n n (-> (in1 n X) (= n 0)))")
    assert expand(f) == f


def test_expand_idempotent():
    for text in ["(eq2 X Y)", "(in* Y X)", "(sub* X Y)", "(=* X Y)",
                 "(iff (= 0 0) (in1 0 X))", "(in1 0 (setof k (= k 0)))",
                 "(eq3 W V3)", "(in2 (slice Z 0) W)"]:
        once = expand(fm(text, {"V3": Sort.THIRD, "W": Sort.THIRD}))
        assert expand(once) == once
        assert is_core(once)


def test_expand_slice_membership():
    got = expand(fm("(in1 3 (slice Z 2))"))
    # exists k (2k = (2+3)(2+3+1) + 2*2 and k in Z); the code is pair(2,3) = 17
    assert isinstance(got, Exists)
    from cmr.realcheck import eval_foterm
    eq = got.body.left
    k = next(iter({17}))
    assert eval_foterm(substitute(eq, got.var, numeral(k), Sort.FIRST).left, {}) == 34
    assert eval_foterm(substitute(eq, got.var, numeral(k), Sort.FIRST).right, {}) == 34


def test_expand_setof_in_membership_position():
    got = expand(fm("(in1 2 (setof k (= k 2)))"))
    assert got == Eq(numeral(2), numeral(2))


def test_expand_bounded_quantifier():
    f = fm("(forall-prec Y X (= 0 0))")
    assert isinstance(f, ForAll) and isinstance(f.body, Implies)
    assert isinstance(f.body.left, Prec)


def test_substitute_examples():
    f = fm("(= n 0)", {"n": Sort.FIRST})
    assert substitute(f, "n", Succ(ZERO), Sort.FIRST) == Eq(Succ(ZERO), ZERO)
    g = fm("(forall-n n (= n 0))")
    assert substitute(g, "n", Succ(ZERO), Sort.FIRST) == g


def test_substitute_capture_avoiding():
    h = fm("(forall-n m (= m v))", {"v": Sort.FIRST})
    out = substitute(h, "v", Var("m"), Sort.FIRST)
    assert alpha_eq(out, fm("(forall-n q (= q m))", {"m": Sort.FIRST}))


def test_substitute_self_is_alpha_identity():
    f = fm("(forall-n m (= m v))", {"v": Sort.FIRST})
    assert alpha_eq(substitute(f, "v", Var("v"), Sort.FIRST), f)


def test_substitute_second_sort():
    f = fm("(in1 0 X)")
    assert substitute(f, "X", SVar("Y"), Sort.SECOND) == In1(ZERO, SVar("Y"))
    with pytest.raises(SortError):
        substitute(f, "X", ZERO, Sort.SECOND)


def test_free_vars_examples():
    assert free_vars(fm("(= n 0)", {"n": Sort.FIRST})) == {("n", Sort.FIRST)}
    assert free_vars(fm("(forall-n n (in1 n X))")) == {("X", Sort.SECOND)}
    assert free_vars(fm("(forall-n n (= n n))")) == set()
    assert free_vars(fm("(in2 X W)", {"W": Sort.THIRD})) == {
        ("X", Sort.SECOND), ("W", Sort.THIRD)}


def test_alpha_normalize_stability():
    a = fm("(forall-n n (exists-n m (= n m)))")
    b = fm("(forall-n k (exists-n j (= k j)))")
    assert alpha_normalize(a) == alpha_normalize(b)


def test_is_arithmetic():
    assert is_arithmetic(fm("(forall-n n (exists-n m (= n m)))"))
    assert not is_arithmetic(fm("(exists-s X (in1 0 X))"))
    assert is_arithmetic(fm("(prec X Y)"))


def test_strictly_positive_examples():
    assert is_strictly_positive(fm("(in1 n X)", {"n": Sort.FIRST}), "X")
    assert not is_strictly_positive(fm("(-> (in1 0 X) (= 0 0))"), "X")
    assert not is_strictly_positive(fm("(exists-s Y (prec Y X))"), "X")
    assert is_strictly_positive(fm("(forall-n y (-> (= y 0) (in1 y X)))"), "X")
    assert not is_strictly_positive(fm("(not (in1 0 X))"), "X")
    assert is_strictly_positive(parse_formula("bot"), "X")


def test_strictly_positive_monotone_under_conjunction():
    parts = ["(in1 n X)", "(= n 0)", "(or (in1 n X) (= n n))",
             "(exists-n y (in1 y X))"]
    for a in parts:
        for b in parts:
            fa = fm(a, {"n": Sort.FIRST})
            fb = fm(b, {"n": Sort.FIRST})
            assert is_strictly_positive(And(fa, fb), "X")
            assert is_strictly_positive(Or(fa, fb), "X")


def test_positive_substitute_examples():
    phi = fm("(in1 n X)", {"n": Sort.FIRST})
    theta = fm("(= x 0)", {"x": Sort.FIRST})
    assert positive_substitute(phi, "X", theta, "x") == Eq(Var("n"), ZERO)

    no_x = fm("(= n 0)", {"n": Sort.FIRST})
    assert positive_substitute(no_x, "X", theta, "x") == no_x


def test_positive_substitute_renames_capturing_binder():
    phi = fm("(forall-n y (in1 y X))")
    theta = fm("(= x y)", {"x": Sort.FIRST, "y": Sort.FIRST})
    out = positive_substitute(phi, "X", theta, "x")
    assert isinstance(out, ForAll)
    assert out.var != "y"
    assert alpha_eq(out, ForAll(Sort.FIRST, "q", Eq(Var("q"), Var("y"))))


def test_positive_substitute_requires_strict_positivity():
    with pytest.raises(ValueError):
        positive_substitute(fm("(not (in1 0 X))"), "X",
                            fm("(= x 0)", {"x": Sort.FIRST}), "x")
