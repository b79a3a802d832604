"""Axiom-scheme instantiation and Hilbert-style proof checking.

A proof is a sequence of core formulas, each justified as an axiom-scheme
instance or by modus ponens / forall-generalisation / exists-generalisation
over earlier lines.  Checking is a pure function: it either accepts or
reports the first bad line with a stable reason code.

Reason codes:
    bad-citation        cited line does not precede the citing line
    not-implication     a rule cites a line that is not an implication
    premise-mismatch    MP premise differs from the implication antecedent
    conclusion-mismatch stated formula differs from what the rule yields
    formula-mismatch    stated formula differs from the axiom instance
    side-condition      generalised variable occurs where prohibited
    unknown-scheme      axiom id not in the table
    theory-restriction  scheme needs the well-ordering extension
    arity-mismatch      wrong number/kind of scheme parameters
    sort-error          parameter of the wrong sort
    param-constraint    freshness constraint on a parameter violated
"""

import enum
import json
from dataclasses import dataclass
from typing import Optional, Union

from .syntax import (Add, And, Atom, Eq, Eq2, Exists, ForAll, Formula, Iff,
                     Implies, In1, In2, Mul, Not, Or, Prec, SList, SNode,
                     Slice, Sort, Succ, SVar, SyntaxError_, TVar, Var, ZERO,
                     alpha_eq, all_names, expand, formula_from_node,
                     foterm_from_node, free_vars, fresh_name, parse_declares,
                     read_sexprs, print_formula, substitute, _Scope)


class KernelError(Exception):
    def __init__(self, code: str, detail: str):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}")


class Theory(enum.Enum):
    CM = "CM"
    CM_GWO = "CM_GWO"


# ---------------------------------------------------------------------------
# proofs


@dataclass(frozen=True)
class AxiomJust:
    scheme: str
    params: tuple


@dataclass(frozen=True)
class MPJust:
    premise: int
    implication: int


@dataclass(frozen=True)
class AllGenJust:
    cited: int
    var: str
    sort: Sort


@dataclass(frozen=True)
class ExGenJust:
    cited: int
    var: str
    sort: Sort


Justification = Union[AxiomJust, MPJust, AllGenJust, ExGenJust]


@dataclass(frozen=True)
class ProofLine:
    formula: Formula  # core (expanded)
    justification: Justification


@dataclass(frozen=True)
class Proof:
    lines: tuple
    declares: tuple = ()


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    bad_line: Optional[int] = None
    reason: Optional[str] = None
    detail: Optional[str] = None

    def to_json(self) -> str:
        if self.accepted:
            return json.dumps({"status": "accept"})
        return json.dumps({"status": "reject", "bad_line": self.bad_line,
                           "reason": self.reason, "detail": self.detail})


# ---------------------------------------------------------------------------
# the fixed arithmetic axioms (excluding induction)

_N, _M = Var("n"), Var("m")

NUMBER_AXIOMS: tuple = (
    ForAll(Sort.FIRST, "n", Not(Eq(Succ(_N), ZERO))),
    ForAll(Sort.FIRST, "n", ForAll(Sort.FIRST, "m",
           Implies(Eq(Succ(_N), Succ(_M)), Eq(_N, _M)))),
    ForAll(Sort.FIRST, "n", Eq(Add(_N, ZERO), _N)),
    ForAll(Sort.FIRST, "n", ForAll(Sort.FIRST, "m",
           Eq(Add(_N, Succ(_M)), Succ(Add(_N, _M))))),
    ForAll(Sort.FIRST, "n", Eq(Mul(_N, ZERO), ZERO)),
    ForAll(Sort.FIRST, "n", ForAll(Sort.FIRST, "m",
           Eq(Mul(_N, Succ(_M)), Add(Mul(_N, _M), _N)))),
)


# ---------------------------------------------------------------------------
# scheme table
#
# Signatures: fm = formula, term = first-order term, var1/var2/var3 = a
# variable of that sort, sortedvar = variable + explicit sort,
# witness = term or higher-sort variable (matching the sortedvar),
# nat = small integer index.

SCHEMES: dict = {
    "imp-k": ("fm", "fm"),
    "imp-s": ("fm", "fm", "fm"),
    "and-intro": ("fm", "fm"),
    "and-elim-l": ("fm", "fm"),
    "and-elim-r": ("fm", "fm"),
    "or-intro-l": ("fm", "fm"),
    "or-intro-r": ("fm", "fm"),
    "or-elim": ("fm", "fm", "fm"),
    "neg-intro": ("fm", "fm"),
    "ex-falso": ("fm", "fm"),
    "ex-intro": ("sortedvar", "fm", "witness"),
    "all-elim": ("sortedvar", "fm", "witness"),
    "eq-refl": ("term",),
    "eq-subst": ("term", "term", "var1", "fm"),
    "number": ("nat",),
    "induction": ("var1", "fm"),
    "recursion": ("var1", "var2", "var2", "fm"),
    "comp1": ("var1", "var2", "fm"),
    "comp2": ("var2", "var3", "fm"),
    "dec-eq": ("term", "term"),
    "dec-in1": ("term", "var2"),
    "dec-in2": ("var2", "var3"),
    "dec-prec": (),
    "omni": ("var1", "fm", "fm"),
    "ext2": ("var2", "var2", "var3"),
    "ext-prec": ("var2", "var2", "var2", "var2"),
    "w1-irrefl": (),
    "w1-trans": (),
    "w1-total": (),
    "w2": ("var2", "fm"),
    "w2p": ("var3",),
    "w3": (),
}

GWO_SCHEMES = {"w1-irrefl", "w1-trans", "w1-total", "w2", "w2p", "w3"}

# the intuitionistic supplement: not part of the minimal bullet list,
# included as its own scheme so its use is always visible in proofs
SUPPLEMENT_SCHEMES = {"ex-falso"}


def _check_sig(scheme: str, params: tuple):
    if scheme not in SCHEMES:
        raise KernelError("unknown-scheme", f"no axiom scheme named {scheme}")
    sig = SCHEMES[scheme]
    if len(params) != len(sig):
        raise KernelError("arity-mismatch",
                          f"{scheme} takes {len(sig)} parameters, got {len(params)}")


def instantiate_axiom(scheme: str, params: tuple) -> Formula:
    """Build the closed-form core instance of an axiom scheme."""
    _check_sig(scheme, params)
    p = params

    def fm(i) -> Formula:
        if not _is_formula(p[i]):
            raise KernelError("arity-mismatch", f"parameter {i} of {scheme} must be a formula")
        return p[i]

    def term(i):
        if not _is_foterm(p[i]):
            raise KernelError("sort-error", f"parameter {i} of {scheme} must be a first-order term")
        return p[i]

    def var(i, sort: Sort) -> str:
        v = p[i]
        if not (isinstance(v, tuple) and len(v) == 2 and v[1] == sort):
            raise KernelError("sort-error",
                              f"parameter {i} of {scheme} must be a {sort.value}-sort variable")
        return v[0]

    if scheme == "imp-k":
        a, b = fm(0), fm(1)
        out = Implies(a, Implies(b, a))
    elif scheme == "imp-s":
        a, b, c = fm(0), fm(1), fm(2)
        out = Implies(Implies(a, b), Implies(Implies(a, Implies(b, c)), Implies(a, c)))
    elif scheme == "and-intro":
        a, b = fm(0), fm(1)
        out = Implies(a, Implies(b, And(a, b)))
    elif scheme == "and-elim-l":
        a, b = fm(0), fm(1)
        out = Implies(And(a, b), a)
    elif scheme == "and-elim-r":
        a, b = fm(0), fm(1)
        out = Implies(And(a, b), b)
    elif scheme == "or-intro-l":
        a, b = fm(0), fm(1)
        out = Implies(a, Or(a, b))
    elif scheme == "or-intro-r":
        a, b = fm(0), fm(1)
        out = Implies(b, Or(a, b))
    elif scheme == "or-elim":
        a, b, c = fm(0), fm(1), fm(2)
        out = Implies(Implies(a, c), Implies(Implies(b, c), Implies(Or(a, b), c)))
    elif scheme == "neg-intro":
        a, b = fm(0), fm(1)
        out = Implies(Implies(a, b), Implies(Implies(a, Not(b)), Not(a)))
    elif scheme == "ex-falso":
        a, b = fm(0), fm(1)
        out = Implies(Not(a), Implies(a, b))
    elif scheme in ("ex-intro", "all-elim"):
        name, sort = _sortedvar(scheme, p[0])
        body = fm(1)
        witness = _witness(scheme, p[2], sort)
        inst = substitute(body, name, witness, sort)
        if scheme == "ex-intro":
            out = Implies(inst, Exists(sort, name, body))
        else:
            out = Implies(ForAll(sort, name, body), inst)
    elif scheme == "eq-refl":
        t = term(0)
        out = Eq(t, t)
    elif scheme == "eq-subst":
        t, s, x, body = term(0), term(1), var(2, Sort.FIRST), fm(3)
        out = Implies(And(Eq(t, s), substitute(body, x, t, Sort.FIRST)),
                      substitute(body, x, s, Sort.FIRST))
    elif scheme == "number":
        i = p[0]
        if not isinstance(i, int) or not 0 <= i < len(NUMBER_AXIOMS):
            raise KernelError("arity-mismatch",
                              f"number axiom index must be 0..{len(NUMBER_AXIOMS) - 1}")
        out = NUMBER_AXIOMS[i]
    elif scheme == "induction":
        x, body = var(0, Sort.FIRST), fm(1)
        out = Implies(And(substitute(body, x, ZERO, Sort.FIRST),
                          ForAll(Sort.FIRST, x,
                                 Implies(body, substitute(body, x, Succ(Var(x)), Sort.FIRST)))),
                      ForAll(Sort.FIRST, x, body))
    elif scheme == "recursion":
        out = _recursion_instance(var(0, Sort.FIRST), var(1, Sort.SECOND),
                                  var(2, Sort.SECOND), fm(3))
    elif scheme == "comp1":
        n, x, body = var(0, Sort.FIRST), var(1, Sort.SECOND), fm(2)
        if (x, Sort.SECOND) in free_vars(body):
            raise KernelError("param-constraint",
                              f"comprehension variable {x} occurs free in the matrix")
        out = Implies(ForAll(Sort.FIRST, n, Or(body, Not(body))),
                      Exists(Sort.SECOND, x,
                             ForAll(Sort.FIRST, n,
                                    Iff(In1(Var(n), SVar(x)), body))))
    elif scheme == "comp2":
        x, xx, body = var(0, Sort.SECOND), var(1, Sort.THIRD), fm(2)
        if (xx, Sort.THIRD) in free_vars(body):
            raise KernelError("param-constraint",
                              f"comprehension variable {xx} occurs free in the matrix")
        out = Implies(ForAll(Sort.SECOND, x, Or(body, Not(body))),
                      Exists(Sort.THIRD, xx,
                             ForAll(Sort.SECOND, x,
                                    Iff(In2(SVar(x), TVar(xx)), body))))
    elif scheme == "dec-eq":
        a = Eq(term(0), term(1))
        out = Or(a, Not(a))
    elif scheme == "dec-in1":
        a = In1(term(0), SVar(var(1, Sort.SECOND)))
        out = Or(a, Not(a))
    elif scheme == "dec-in2":
        a = In2(SVar(var(0, Sort.SECOND)), TVar(var(1, Sort.THIRD)))
        out = Or(a, Not(a))
    elif scheme == "dec-prec":
        a = Prec(SVar("X"), SVar("Y"))
        out = ForAll(Sort.SECOND, "X", ForAll(Sort.SECOND, "Y", Or(a, Not(a))))
    elif scheme == "omni":
        n, a, b = var(0, Sort.FIRST), fm(1), fm(2)
        out = Implies(ForAll(Sort.FIRST, n, Or(a, b)),
                      Or(ForAll(Sort.FIRST, n, a), Exists(Sort.FIRST, n, b)))
    elif scheme == "ext2":
        x, y, xx = var(0, Sort.SECOND), var(1, Sort.SECOND), var(2, Sort.THIRD)
        out = Implies(Eq2(SVar(x), SVar(y)),
                      Iff(In2(SVar(x), TVar(xx)), In2(SVar(y), TVar(xx))))
    elif scheme == "ext-prec":
        x, y = var(0, Sort.SECOND), var(1, Sort.SECOND)
        x2, y2 = var(2, Sort.SECOND), var(3, Sort.SECOND)
        out = Implies(And(Eq2(SVar(x), SVar(y)), Eq2(SVar(x2), SVar(y2))),
                      Iff(Prec(SVar(x), SVar(x2)), Prec(SVar(y), SVar(y2))))
    elif scheme == "w1-irrefl":
        out = ForAll(Sort.SECOND, "X", Not(Prec(SVar("X"), SVar("X"))))
    elif scheme == "w1-trans":
        out = ForAll(Sort.SECOND, "X", ForAll(Sort.SECOND, "Y", ForAll(Sort.SECOND, "Z",
                     Implies(And(Prec(SVar("X"), SVar("Y")), Prec(SVar("Y"), SVar("Z"))),
                             Prec(SVar("X"), SVar("Z"))))))
    elif scheme == "w1-total":
        out = ForAll(Sort.SECOND, "X", ForAll(Sort.SECOND, "Y",
                     Or(Prec(SVar("X"), SVar("Y")),
                        Or(Eq2(SVar("X"), SVar("Y")), Prec(SVar("Y"), SVar("X"))))))
    elif scheme == "w2":
        x, body = var(0, Sort.SECOND), fm(1)
        used = all_names(body) | {x}
        y = fresh_name("Y", used)
        below = ForAll(Sort.SECOND, y,
                       Implies(Prec(SVar(y), SVar(x)),
                               substitute(body, x, SVar(y), Sort.SECOND)))
        out = Implies(ForAll(Sort.SECOND, x, Implies(below, body)),
                      ForAll(Sort.SECOND, x, body))
    elif scheme == "w2p":
        xx = var(0, Sort.THIRD)
        below = ForAll(Sort.SECOND, "Y",
                       Implies(Prec(SVar("Y"), SVar("X")), In2(SVar("Y"), TVar(xx))))
        out = Implies(ForAll(Sort.SECOND, "X", Implies(below, In2(SVar("X"), TVar(xx)))),
                      ForAll(Sort.SECOND, "X", In2(SVar("X"), TVar(xx))))
    elif scheme == "w3":
        out = ForAll(Sort.SECOND, "X", Exists(Sort.SECOND, "Z", ForAll(Sort.SECOND, "Y",
                     Implies(Prec(SVar("Y"), SVar("X")),
                             Exists(Sort.FIRST, "n",
                                    Eq2(SVar("Y"), Slice(SVar("Z"), Var("n"))))))))
    else:  # pragma: no cover
        raise KernelError("unknown-scheme", scheme)
    return expand(out)


def _recursion_instance(n: str, x: str, y: str, body: Formula) -> Formula:
    if len({n, x, y}) != 3:
        raise KernelError("param-constraint", "recursion variables must be distinct")
    used = all_names(body) | {n, x, y}
    z = fresh_name("Z", used)
    x2 = fresh_name(x + "'", used)
    y2 = fresh_name(y + "'", used)
    inner = substitute(substitute(body, x, SVar(x2), Sort.SECOND), y, SVar(y2), Sort.SECOND)
    sliced = Exists(Sort.SECOND, x2,
                    And(Eq2(SVar(x2), Slice(SVar(z), Var(n))),
                        Exists(Sort.SECOND, y2,
                               And(Eq2(SVar(y2), Slice(SVar(z), Succ(Var(n)))), inner))))
    antecedent = ForAll(Sort.FIRST, n, ForAll(Sort.SECOND, x, Exists(Sort.SECOND, y, body)))
    consequent = ForAll(Sort.SECOND, x,
                        Exists(Sort.SECOND, z,
                               And(Eq2(Slice(SVar(z), ZERO), SVar(x)),
                                   ForAll(Sort.FIRST, n, sliced))))
    return Implies(antecedent, consequent)


def _is_formula(x) -> bool:
    from . import syntax
    return isinstance(x, (Eq, In1, In2, Prec, And, Or, Not, Implies, ForAll,
                          Exists, Iff, Eq2, syntax.Eq3, syntax.InStar,
                          syntax.SubStar, syntax.EqStar))


def _is_foterm(x) -> bool:
    return isinstance(x, (Var, type(ZERO), Succ, Add, Mul))


def _sortedvar(scheme, p):
    if not (isinstance(p, tuple) and len(p) == 2 and isinstance(p[1], Sort)):
        raise KernelError("arity-mismatch", f"{scheme} needs a sorted variable parameter")
    return p


def _witness(scheme, w, sort: Sort):
    if sort == Sort.FIRST:
        if not _is_foterm(w):
            raise KernelError("sort-error", f"{scheme}: first-sort witness must be a term")
        return w
    if sort == Sort.SECOND:
        if not isinstance(w, SVar):
            raise KernelError("sort-error", f"{scheme}: second-sort witness must be a variable")
        return w
    if not isinstance(w, TVar):
        raise KernelError("sort-error", f"{scheme}: third-sort witness must be a variable")
    return w


# ---------------------------------------------------------------------------
# proof checking


def check_proof(proof: Proof, theory: Theory = Theory.CM) -> Verdict:
    for i, line in enumerate(proof.lines):
        bad = _check_line(proof, i, line, theory)
        if bad is not None:
            return Verdict(False, i, bad[0], bad[1])
    return Verdict(True)


def _check_line(proof: Proof, i: int, line: ProofLine, theory: Theory):
    j = line.justification
    if isinstance(j, AxiomJust):
        if j.scheme in GWO_SCHEMES and theory != Theory.CM_GWO:
            return ("theory-restriction",
                    f"scheme {j.scheme} needs theory CM_GWO")
        try:
            instance = instantiate_axiom(j.scheme, j.params)
        except KernelError as e:
            return (e.code, e.detail)
        if not alpha_eq(instance, line.formula):
            return ("formula-mismatch",
                    f"line {i} states {print_formula(line.formula)} but the "
                    f"{j.scheme} instance is {print_formula(instance)}")
        return None

    if isinstance(j, MPJust):
        for cited in (j.premise, j.implication):
            if not 0 <= cited < i:
                return ("bad-citation", f"line {i} cites line {cited}")
        imp = proof.lines[j.implication].formula
        if not isinstance(imp, Implies):
            return ("not-implication", f"line {j.implication} is not an implication")
        if not alpha_eq(proof.lines[j.premise].formula, imp.left):
            return ("premise-mismatch",
                    f"line {j.premise} does not match the antecedent of line {j.implication}")
        if not alpha_eq(imp.right, line.formula):
            return ("conclusion-mismatch",
                    f"line {i} is not the consequent of line {j.implication}")
        return None

    if isinstance(j, (AllGenJust, ExGenJust)):
        if not 0 <= j.cited < i:
            return ("bad-citation", f"line {i} cites line {j.cited}")
        imp = proof.lines[j.cited].formula
        if not isinstance(imp, Implies):
            return ("not-implication", f"line {j.cited} is not an implication")
        if isinstance(j, AllGenJust):
            if (j.var, j.sort) in free_vars(imp.left):
                return ("side-condition",
                        f"{j.var} occurs free in the antecedent of line {j.cited}")
            expected = Implies(imp.left, ForAll(j.sort, j.var, imp.right))
        else:
            if (j.var, j.sort) in free_vars(imp.right):
                return ("side-condition",
                        f"{j.var} occurs free in the consequent of line {j.cited}")
            expected = Implies(Exists(j.sort, j.var, imp.left), imp.right)
        if not alpha_eq(expected, line.formula):
            return ("conclusion-mismatch",
                    f"line {i} does not match the generalisation of line {j.cited}")
        return None

    return ("unknown-scheme", f"unrecognised justification {j!r}")


def theorem_of(proof: Proof, theory: Theory = Theory.CM) -> Formula:
    if not proof.lines:
        raise ValueError("empty proof has no theorem")
    verdict = check_proof(proof, theory)
    if not verdict.accepted:
        raise ValueError(f"proof rejected at line {verdict.bad_line}: {verdict.reason}")
    return proof.lines[-1].formula


# ---------------------------------------------------------------------------
# proof file format
#
#   (declare v first|second|third) ...
#   (proof (line FM JUST) ...)
#
# JUST := (axiom ID PARAM*) | (mp I J) | (all-gen I VAR SORT) | (ex-gen I VAR SORT)
# PARAM := (fm F) | (term T) | VAR | VAR SORT (for ex-intro / all-elim) | INT

_SORT_TOKENS = {"first": Sort.FIRST, "second": Sort.SECOND, "third": Sort.THIRD}

# per-scheme sorts of bare-variable parameters, None marking non-var slots
_VAR_PARAM_SORTS = {
    "eq-subst": (None, None, Sort.FIRST, None),
    "induction": (Sort.FIRST, None),
    "recursion": (Sort.FIRST, Sort.SECOND, Sort.SECOND, None),
    "comp1": (Sort.FIRST, Sort.SECOND, None),
    "comp2": (Sort.SECOND, Sort.THIRD, None),
    "dec-in1": (None, Sort.SECOND),
    "dec-in2": (Sort.SECOND, Sort.THIRD),
    "omni": (Sort.FIRST, None, None),
    "ext2": (Sort.SECOND, Sort.SECOND, Sort.THIRD),
    "ext-prec": (Sort.SECOND,) * 4,
    "w2": (Sort.SECOND, None),
    "w2p": (Sort.THIRD,),
}


def parse_proof(text: str) -> Proof:
    nodes = read_sexprs(text)
    decls, rest = parse_declares(nodes)
    if len(rest) != 1 or not _is_list_headed(rest[0], "proof"):
        raise SyntaxError_("expected a single (proof ...) form")
    return parse_proof_node(rest[0], decls)


def _is_list_headed(node: SNode, head: str) -> bool:
    return (isinstance(node, SList) and node.items
            and isinstance(node.items[0], Atom) and node.items[0].text == head)


def parse_proof_node(root: SList, decls: dict) -> Proof:
    lines = []
    for item in root.items[1:]:
        if not _is_list_headed(item, "line") or len(item.items) != 3:
            raise SyntaxError_("each proof line is (line FM JUST)", item.line, item.col)
        scope = _Scope(decls)
        formula = expand(formula_from_node(item.items[1], scope))
        just = _just_from_node(item.items[2], decls)
        lines.append(ProofLine(formula, just))
    return Proof(tuple(lines), tuple(sorted((k, v.value) for k, v in decls.items())))


def _just_from_node(node: SNode, decls: dict) -> Justification:
    if not isinstance(node, SList) or not node.items or not isinstance(node.items[0], Atom):
        raise SyntaxError_("bad justification", node.line, node.col)
    head = node.items[0].text
    args = node.items[1:]
    if head == "axiom":
        if not args or not isinstance(args[0], Atom):
            raise SyntaxError_("axiom needs a scheme id", node.line, node.col)
        scheme = args[0].text
        return AxiomJust(scheme, _axiom_params(scheme, args[1:], decls, node))
    if head == "mp":
        if len(args) != 2:
            raise SyntaxError_("mp takes two line numbers", node.line, node.col)
        return MPJust(_line_no(args[0]), _line_no(args[1]))
    if head in ("all-gen", "ex-gen"):
        if len(args) != 3 or not isinstance(args[1], Atom) or not isinstance(args[2], Atom):
            raise SyntaxError_(f"{head} takes a line, a variable and a sort",
                               node.line, node.col)
        sort = _SORT_TOKENS.get(args[2].text)
        if sort is None:
            raise SyntaxError_(f"unknown sort {args[2].text}", args[2].line, args[2].col)
        ctor = AllGenJust if head == "all-gen" else ExGenJust
        return ctor(_line_no(args[0]), args[1].text, sort)
    raise SyntaxError_(f"unknown justification {head}", node.line, node.col)


def _line_no(node: SNode) -> int:
    if not isinstance(node, Atom) or not node.text.isdigit():
        raise SyntaxError_("expected a line number", node.line, node.col)
    return int(node.text)


def _axiom_params(scheme: str, nodes: list, decls: dict, where: SList) -> tuple:
    if scheme not in SCHEMES:
        # let check_proof report unknown-scheme with the stable code
        return tuple()
    sig = SCHEMES[scheme]
    params = []
    var_env = dict(decls)
    i = 0  # node cursor; sortedvar consumes two nodes
    for slot, kind in enumerate(sig):
        if i >= len(nodes):
            raise SyntaxError_(f"{scheme} expects more parameters", where.line, where.col)
        node = nodes[i]
        if kind == "fm":
            if not _is_list_headed(node, "fm") or len(node.items) != 2:
                raise SyntaxError_(f"{scheme}: expected (fm ...)", node.line, node.col)
            params.append(formula_from_node(node.items[1], _Scope(var_env)))
        elif kind == "term":
            if not _is_list_headed(node, "term") or len(node.items) != 2:
                raise SyntaxError_(f"{scheme}: expected (term ...)", node.line, node.col)
            params.append(foterm_from_node(node.items[1], _Scope(var_env)))
        elif kind == "nat":
            if not isinstance(node, Atom) or not node.text.isdigit():
                raise SyntaxError_(f"{scheme}: expected an index", node.line, node.col)
            params.append(int(node.text))
        elif kind in ("var1", "var2", "var3"):
            sort = {"var1": Sort.FIRST, "var2": Sort.SECOND, "var3": Sort.THIRD}[kind]
            if not isinstance(node, Atom):
                raise SyntaxError_(f"{scheme}: expected a variable", node.line, node.col)
            var_env[node.text] = sort
            params.append((node.text, sort))
        elif kind == "sortedvar":
            if (not isinstance(node, Atom) or i + 1 >= len(nodes)
                    or not isinstance(nodes[i + 1], Atom)):
                raise SyntaxError_(f"{scheme}: expected a variable and a sort",
                                   node.line, node.col)
            sort = _SORT_TOKENS.get(nodes[i + 1].text)
            if sort is None:
                raise SyntaxError_(f"unknown sort {nodes[i + 1].text}",
                                   nodes[i + 1].line, nodes[i + 1].col)
            var_env[node.text] = sort
            params.append((node.text, sort))
            i += 1
        elif kind == "witness":
            # sort of the binder parsed earlier in this signature
            binder_sort = params[0][1]
            if binder_sort == Sort.FIRST:
                if not _is_list_headed(node, "term") or len(node.items) != 2:
                    raise SyntaxError_(f"{scheme}: expected (term ...) witness",
                                       node.line, node.col)
                # the bound variable itself may appear in the witness
                env = dict(var_env)
                params.append(foterm_from_node(node.items[1], _Scope(env)))
            else:
                if not isinstance(node, Atom):
                    raise SyntaxError_(f"{scheme}: expected a variable witness",
                                       node.line, node.col)
                var_env.setdefault(node.text, binder_sort)
                params.append(SVar(node.text) if binder_sort == Sort.SECOND
                              else TVar(node.text))
        else:  # pragma: no cover
            raise SyntaxError_(f"bad signature kind {kind}")
        i += 1
    if i != len(nodes):
        raise SyntaxError_(f"{scheme}: too many parameters", where.line, where.col)
    return tuple(params)
