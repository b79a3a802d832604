"""Compile accepted proofs into combinator-term realisers.

Every line realiser is a lambda-form term taking one argument p, the
right-nested tuple of values for the proof's free variables (first-sort
variables first, in order of first occurrence, then second-, then
third-sort).  Closed proofs still take p and are applied to a dummy 0.

Axiom lines come from a fixed table; modus ponens and the two
generalisation rules combine the cited lines' realisers, slotting the
generalised variable's value into the parameter tuple where the layout
puts it.  Realisers for the well-ordering axioms are total stand-ins
only: extraction records a flag and the realisability checker refuses
to certify anything depending on them.
"""

from dataclasses import dataclass
from typing import Optional

from . import pca
from .kernel import (AllGenJust, AxiomJust, ExGenJust, GWO_SCHEMES, MPJust,
                     Proof, Theory, check_proof, instantiate_axiom)
from .pca import (App, CASES, FIX, K, Lam, MU, Num, P, P0, P1, PRED, S, SUCC,
                  VarRef, app, compile_term)
from .syntax import (Add, And, Eq, Exists, ForAll, Formula, Implies, In1, In2,
                     Mul, Not, Or, Prec, Sort, Succ, SVar, TVar, Var, Zero,
                     free_vars)


class ExtractionError(Exception):
    pass


NONCONSTRUCTIVE = "nonconstructive-stand-in"
MU_SEARCH = "mu-search"

_ZERO = Num(0)
_ONE = Num(1)
_K0 = App(K, _ZERO)


# ---------------------------------------------------------------------------
# small combinator library (lambda forms; compiled away with everything else)

# add a b = if b = 0 then a else succ (add a (b-1))
ADD_L = Lam("a", App(FIX, Lam("s", Lam("b", app(
    CASES, VarRef("a"),
    App(SUCC, App(VarRef("s"), App(PRED, VarRef("b")))),
    VarRef("b"), _ZERO)))))

# mul a b = if b = 0 then 0 else a + mul a (b-1)
MUL_L = Lam("a", App(FIX, Lam("s", Lam("b", app(
    CASES, _ZERO,
    app(ADD_L, VarRef("a"), App(VarRef("s"), App(PRED, VarRef("b")))),
    VarRef("b"), _ZERO)))))

# tri b = if b = 0 then 0 else b + tri (b-1)
TRI_L = App(FIX, Lam("s", Lam("b", app(
    CASES, _ZERO,
    app(ADD_L, VarRef("b"), App(VarRef("s"), App(PRED, VarRef("b")))),
    VarRef("b"), _ZERO))))

# paircode a b = tri (a + b) + a
PAIRCODE_L = Lam("a", Lam("b", app(
    ADD_L, App(TRI_L, app(ADD_L, VarRef("a"), VarRef("b"))), VarRef("a"))))

DEFAULT_PREC = _K0  # the constant-0 order interpretation


def _one_minus(t):
    return app(CASES, _ONE, _ZERO, t, _ZERO)


def _tuple_term(items: list):
    if not items:
        return _ZERO
    out = items[-1]
    for x in reversed(items[:-1]):
        out = app(P, x, out)
    return out


def _proj(base, index: int, width: int):
    t = base
    if width == 1:
        return t
    for _ in range(index):
        t = App(P1, t)
    if index < width - 1:
        t = App(P0, t)
    return t


# ---------------------------------------------------------------------------
# parameter layout


def _ordered_frees(f: Formula) -> list:
    out: list = []
    seen: set = set()

    def note(name, sort, bound):
        if (name, sort) not in bound and (name, sort) not in seen:
            seen.add((name, sort))
            out.append((name, sort))

    def walk_term(t, bound):
        if isinstance(t, Var):
            note(t.name, Sort.FIRST, bound)
        elif isinstance(t, Succ):
            walk_term(t.arg, bound)
        elif isinstance(t, (Add, Mul)):
            walk_term(t.left, bound)
            walk_term(t.right, bound)

    def walk_sterm(st, bound):
        if isinstance(st, SVar):
            note(st.name, Sort.SECOND, bound)

    def walk(g, bound):
        if isinstance(g, Eq):
            walk_term(g.left, bound)
            walk_term(g.right, bound)
        elif isinstance(g, In1):
            walk_term(g.elem, bound)
            walk_sterm(g.set_, bound)
        elif isinstance(g, In2):
            walk_sterm(g.elem, bound)
            note(g.class_.name, Sort.THIRD, bound)
        elif isinstance(g, Prec):
            walk_sterm(g.left, bound)
            walk_sterm(g.right, bound)
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left, bound)
            walk(g.right, bound)
        elif isinstance(g, Not):
            walk(g.body, bound)
        elif isinstance(g, (ForAll, Exists)):
            walk(g.body, bound | {(g.var, g.sort)})
        else:
            raise ExtractionError(f"expected a core formula, got {g!r}")

    walk(f, frozenset())
    return out


def parameter_layout(f: Formula) -> list:
    """Free variables of f, first sort first (each group in first-occurrence
    order), then second, then third."""
    frees = _ordered_frees(f)
    return sorted(frees, key=lambda vs: {Sort.FIRST: 0, Sort.SECOND: 1,
                                         Sort.THIRD: 2}[vs[1]])


def proof_layout(proof: Proof) -> list:
    seen: set = set()
    frees: list = []
    for line in proof.lines:
        for vs in _ordered_frees(line.formula):
            if vs not in seen:
                seen.add(vs)
                frees.append(vs)
    return sorted(frees, key=lambda vs: {Sort.FIRST: 0, Sort.SECOND: 1,
                                         Sort.THIRD: 2}[vs[1]])


class _Params:
    """Maps free variables to projections of the parameter tuple."""

    def __init__(self, layout: list, pvar: str = "p"):
        self.layout = list(layout)
        self.pvar = pvar
        self.index = {vs: i for i, vs in enumerate(self.layout)}

    def lookup(self, name: str, sort: Sort):
        i = self.index.get((name, sort))
        if i is None:
            # variable absent from the layout: any value of the right shape
            return _ZERO if sort == Sort.FIRST else _K0
        return _proj(VarRef(self.pvar), i, len(self.layout))

    def term(self, t) -> pca.CombTerm:
        """Compile a first-order term to a combinator computation over p."""
        if isinstance(t, Var):
            return self.lookup(t.name, Sort.FIRST)
        if isinstance(t, Zero):
            return _ZERO
        if isinstance(t, Succ):
            return App(SUCC, self.term(t.arg))
        if isinstance(t, Add):
            return app(ADD_L, self.term(t.left), self.term(t.right))
        if isinstance(t, Mul):
            return app(MUL_L, self.term(t.left), self.term(t.right))
        raise ExtractionError(f"not a first-order term: {t!r}")

    def rebuild_with(self, name: str, sort: Sort, repl) -> pca.CombTerm:
        """The parameter tuple with one variable's slot replaced."""
        if (name, sort) not in self.index:
            return VarRef(self.pvar)
        k = len(self.layout)
        comps = [_proj(VarRef(self.pvar), i, k) for i in range(k)]
        comps[self.index[(name, sort)]] = repl
        return _tuple_term(comps)


# ---------------------------------------------------------------------------
# canonical total realisers ("any function with appropriate domain and range")


def canonical_total_realiser(f: Formula, _counter: Optional[list] = None) -> pca.CombTerm:
    c = _counter if _counter is not None else [0]

    def fresh():
        c[0] += 1
        return f"u{c[0]}"

    if isinstance(f, (ForAll,)):
        return Lam(fresh(), canonical_total_realiser(f.body, c))
    if isinstance(f, Implies):
        return Lam(fresh(), canonical_total_realiser(f.right, c))
    if isinstance(f, And):
        return app(P, canonical_total_realiser(f.left, c),
                   canonical_total_realiser(f.right, c))
    if isinstance(f, Or):
        return app(P, _ZERO, canonical_total_realiser(f.left, c))
    if isinstance(f, Exists):
        head = _ZERO if f.sort == Sort.FIRST else _K0
        return app(P, head, canonical_total_realiser(f.body, c))
    return _ZERO


# ---------------------------------------------------------------------------
# the realiser table


def realiser_for_axiom(scheme: str, params: tuple,
                       layout: Optional[list] = None,
                       prec: pca.CombTerm = DEFAULT_PREC) -> pca.CombTerm:
    """Lambda-form realiser of an axiom instance, parameterised by the
    free-variable tuple p laid out as given (default: the instance's own
    layout)."""
    instance = instantiate_axiom(scheme, params)
    if layout is None:
        layout = parameter_layout(instance)
    env = _Params(layout)
    lam = lambda v, b: Lam(v, b)  # noqa: E731
    e, f, g, n, d, a, m, x = (VarRef(v) for v in "efgndamx")

    if scheme == "imp-k":
        body = lam("e", lam("f", e))
    elif scheme == "imp-s":
        body = lam("f", lam("g", lam("e", App(App(g, e), App(f, e)))))
    elif scheme == "and-intro":
        body = lam("e", lam("f", app(P, e, f)))
    elif scheme == "and-elim-l":
        body = lam("e", App(P0, e))
    elif scheme == "and-elim-r":
        body = lam("e", App(P1, e))
    elif scheme == "or-intro-l":
        body = lam("e", app(P, _ZERO, e))
    elif scheme == "or-intro-r":
        body = lam("e", app(P, _ONE, e))
    elif scheme == "or-elim":
        body = lam("f", lam("g", lam("n", App(
            app(CASES, f, g, App(P0, n), _ZERO), App(P1, n)))))
    elif scheme == "neg-intro":
        body = lam("f", lam("g", _ZERO))
    elif scheme == "ex-falso":
        body = lam("e", lam("f", _ZERO))
    elif scheme == "ex-intro":
        body = lam("e", app(P, _witness_term(params, env), e))
    elif scheme == "all-elim":
        body = lam("f", App(f, _witness_term(params, env)))
    elif scheme == "eq-refl":
        body = _ZERO
    elif scheme == "eq-subst":
        body = lam("e", App(P1, e))
    elif scheme in ("number", "ext2", "ext-prec",
                    "w1-irrefl", "w1-trans", "w1-total", "w2", "w2p", "w3"):
        body = canonical_total_realiser(instance)
    elif scheme == "induction":
        body = lam("e", App(FIX, lam("s", lam("n", app(
            CASES,
            App(P0, e),
            App(App(App(P1, e), App(PRED, n)), App(VarRef("s"), App(PRED, n))),
            n, _ZERO)))))
    elif scheme == "recursion":
        body = _recursion_realiser()
    elif scheme in ("comp1", "comp2"):
        body = lam("f", app(
            P,
            lam("n", _one_minus(App(P0, App(f, n)))),
            lam("n", app(P, lam("a", App(P1, App(f, n))), lam("a", _ZERO)))))
    elif scheme == "dec-eq":
        t_c = env.term(params[0])
        s_c = env.term(params[1])
        body = app(P, app(CASES, _ZERO, _ONE, t_c, s_c), _ZERO)
    elif scheme == "dec-in1":
        t_c = env.term(params[0])
        x_c = env.lookup(params[1][0], Sort.SECOND)
        body = app(P, _one_minus(App(x_c, t_c)), _ZERO)
    elif scheme == "dec-in2":
        x_c = env.lookup(params[0][0], Sort.SECOND)
        xx_c = env.lookup(params[1][0], Sort.THIRD)
        body = app(P, _one_minus(App(xx_c, x_c)), _ZERO)
    elif scheme == "dec-prec":
        body = lam("x", lam("y", app(
            P, _one_minus(App(prec, app(P, x, VarRef("y")))), _ZERO)))
    elif scheme == "omni":
        probe = lam("n", App(P0, App(f, n)))
        hit = App(MU, probe)
        body = lam("f", app(P, _ONE, app(P, hit, App(P1, App(f, hit)))))
    else:  # pragma: no cover
        raise ExtractionError(f"no realiser for scheme {scheme}")
    return Lam("p", body)


def _witness_term(params: tuple, env: _Params) -> pca.CombTerm:
    _, sort = params[0]
    w = params[2]
    if sort == Sort.FIRST:
        return env.term(w)
    if isinstance(w, SVar):
        return env.lookup(w.name, Sort.SECOND)
    if isinstance(w, TVar):
        return env.lookup(w.name, Sort.THIRD)
    raise ExtractionError(f"bad witness {w!r}")


def _recursion_realiser() -> pca.CombTerm:
    """Builds the slice function z from the iterate g and certifies each
    slice equation with explicit pair-code witnesses."""
    f, x, n, k, m = (VarRef(v) for v in "fxnkm")
    g = App(FIX, Lam("s", Lam("n", app(
        CASES,
        x,
        App(P0, App(App(f, App(PRED, n)), App(VarRef("s"), App(PRED, n)))),
        n, _ZERO))))
    z = Lam("k", App(App(g, App(P0, k)), App(P1, k)))

    def slice_eq(idx, slice_first: bool):
        # realises the expanded equality of a slice of Z and a set variable;
        # the slice-membership direction needs the pair-code witness <idx, m>
        wit = app(P, app(PAIRCODE_L, idx, m), app(P, _ZERO, _ZERO))
        into_slice = Lam("a", wit)
        from_slice = Lam("a", _ZERO)
        first, second = ((from_slice, into_slice) if slice_first
                         else (into_slice, from_slice))
        return Lam("m", app(P, first, second))

    eq0 = slice_eq(_ZERO, slice_first=True)
    phi_wit = App(P1, App(App(f, n), App(g, n)))
    step = Lam("n", app(
        P, App(g, n),
        app(P, slice_eq(n, slice_first=False),
            app(P, App(g, App(SUCC, n)),
                app(P, slice_eq(App(SUCC, n), slice_first=False), phi_wit)))))
    return Lam("f", Lam("x", app(P, z, app(P, eq0, step))))


# ---------------------------------------------------------------------------
# extraction over whole proofs


@dataclass(frozen=True)
class TraceLine:
    realiser: pca.CombTerm  # lambda form
    flags: frozenset


@dataclass(frozen=True)
class ExtractionTrace:
    lines: tuple
    layout: tuple  # the free-parameter tuple convention in force

    @property
    def realiser(self) -> pca.CombTerm:
        return self.lines[-1].realiser

    @property
    def flags(self) -> frozenset:
        return self.lines[-1].flags

    def compiled(self) -> pca.CombTerm:
        return compile_term(self.realiser)


_SCHEME_FLAGS = {
    "omni": frozenset({MU_SEARCH}),
    "w1-irrefl": frozenset({NONCONSTRUCTIVE}),
    "w1-trans": frozenset({NONCONSTRUCTIVE}),
    "w1-total": frozenset({NONCONSTRUCTIVE}),
    "w2": frozenset({NONCONSTRUCTIVE}),
    "w2p": frozenset({NONCONSTRUCTIVE}),
    "w3": frozenset({NONCONSTRUCTIVE}),
}


def extract(proof: Proof, theory: Theory = Theory.CM,
            prec: pca.CombTerm = DEFAULT_PREC) -> ExtractionTrace:
    """Realiser for the final line of an accepted proof, with the per-line
    trace.  The realiser is in lambda form; compile with trace.compiled()."""
    verdict = check_proof(proof, theory)
    if not verdict.accepted:
        raise ExtractionError(
            f"cannot extract from a rejected proof (line {verdict.bad_line}: "
            f"{verdict.reason})")
    layout = proof_layout(proof)
    env = _Params(layout)
    lines: list = []
    for line in proof.lines:
        j = line.justification
        if isinstance(j, AxiomJust):
            term = realiser_for_axiom(j.scheme, j.params, layout, prec)
            flags = _SCHEME_FLAGS.get(j.scheme, frozenset())
        elif isinstance(j, MPJust):
            e_t = lines[j.premise].realiser
            f_t = lines[j.implication].realiser
            pv = VarRef("p")
            term = Lam("p", App(App(f_t, pv), App(e_t, pv)))
            flags = lines[j.premise].flags | lines[j.implication].flags
        elif isinstance(j, AllGenJust):
            f_t = lines[j.cited].realiser
            slot = env.rebuild_with(j.var, j.sort, VarRef("n"))
            term = Lam("p", Lam("d", Lam("n", App(App(f_t, slot), VarRef("d")))))
            flags = lines[j.cited].flags
        elif isinstance(j, ExGenJust):
            f_t = lines[j.cited].realiser
            slot = env.rebuild_with(j.var, j.sort, App(P0, VarRef("d")))
            term = Lam("p", Lam("d", App(App(f_t, slot), App(P1, VarRef("d")))))
            flags = lines[j.cited].flags
        else:  # pragma: no cover
            raise ExtractionError(f"unknown justification {j!r}")
        lines.append(TraceLine(term, flags))
    return ExtractionTrace(tuple(lines), tuple(layout))
