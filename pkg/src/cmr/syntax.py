"""Three-sorted abstract syntax with an s-expression concrete syntax.

First-sort variables range over numbers, second-sort over sets of
numbers, third-sort over classes of sets.  The core language has the PA
function symbols, first-order equality, the two membership relations and
the order relation on second-sort variables; everything else
(iff, higher-sort equality, starred membership, slices, brackets,
set-builder terms, bounded quantifiers) is surface sugar eliminated by
`expand`.

Concrete syntax (UTF-8 s-expressions):

    term   := v | 0 | <int> | (s term) | (+ term term) | (* term term)
    sterm  := V | (slice sterm term) | (bracket sterm term) | (setof v fm)
    fm     := (= term term) | (in1 term sterm) | (in2 sterm V3) | (prec sterm sterm)
            | (and fm fm) | (or fm fm) | (not fm) | (-> fm fm) | (iff fm fm) | bot
            | (forall-n v fm) | (exists-n v fm) | (forall-s V fm) | (exists-s V fm)
            | (forall-t V fm) | (exists-t V fm)
            | (eq2 sterm sterm) | (eq3 V3 V3) | (in* sterm sterm)
            | (sub* sterm sterm-or-V3) | (=* sterm sterm)
            | (forall-prec V sterm fm) | (exists-prec V sterm fm)
            | (forall-in* V sterm fm) | (exists-in* V sterm fm)

Sorts of bound variables come from their binder; free variables are
declared with "(declare v first|second|third)" header forms, or failing
that inferred: a lowercase initial letter means first sort, otherwise
the sort demanded by the position of first use.  Shadowed binders are
renamed apart while parsing.
"""

import enum
from dataclasses import dataclass
from typing import Optional, Union


class SyntaxError_(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"{message} (at {line}:{col})" if line else message)


class SortError(SyntaxError_):
    pass


class Sort(enum.Enum):
    FIRST = "first"
    SECOND = "second"
    THIRD = "third"


# ---------------------------------------------------------------------------
# first-order terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Succ:
    arg: "FoTerm"


@dataclass(frozen=True)
class Add:
    left: "FoTerm"
    right: "FoTerm"


@dataclass(frozen=True)
class Mul:
    left: "FoTerm"
    right: "FoTerm"


FoTerm = Union[Var, Zero, Succ, Add, Mul]
ZERO = Zero()


def numeral(n: int) -> FoTerm:
    t: FoTerm = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


# second-order terms (Slice/Bracket/SetBuilder are surface only)


@dataclass(frozen=True)
class SVar:
    name: str


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class Slice:
    base: "STerm"
    index: FoTerm


@dataclass(frozen=True)
class Bracket:
    base: "STerm"
    index: FoTerm


@dataclass(frozen=True)
class SetBuilder:
    var: str
    body: "Formula"


STerm = Union[SVar, Slice, Bracket, SetBuilder]


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Eq:
    left: FoTerm
    right: FoTerm


@dataclass(frozen=True)
class In1:
    elem: FoTerm
    set_: STerm


@dataclass(frozen=True)
class In2:
    elem: STerm
    class_: TVar


@dataclass(frozen=True)
class Prec:
    left: STerm
    right: STerm


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    sort: Sort
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    sort: Sort
    var: str
    body: "Formula"


# surface-only connectives


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Eq2:
    left: STerm
    right: STerm


@dataclass(frozen=True)
class Eq3:
    left: TVar
    right: TVar


@dataclass(frozen=True)
class InStar:
    elem: STerm
    coll: STerm


@dataclass(frozen=True)
class SubStar:
    left: STerm
    right: Union[STerm, TVar]


@dataclass(frozen=True)
class EqStar:
    left: STerm
    right: STerm


Formula = Union[Eq, In1, In2, Prec, And, Or, Not, Implies, ForAll, Exists,
                Iff, Eq2, Eq3, InStar, SubStar, EqStar]

BOT: Formula = Eq(ZERO, Succ(ZERO))  # canonical false atom standing in for bottom

_BINDERS = {
    "forall-n": (ForAll, Sort.FIRST), "exists-n": (Exists, Sort.FIRST),
    "forall-s": (ForAll, Sort.SECOND), "exists-s": (Exists, Sort.SECOND),
    "forall-t": (ForAll, Sort.THIRD), "exists-t": (Exists, Sort.THIRD),
}


# ---------------------------------------------------------------------------
# s-expression reader (shared with the proof format)


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    col: int


SNode = Union[Atom, SList]


def read_sexprs(text: str) -> list:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c.isspace():
            col += 1
            i += 1
        elif c == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append((c, line, col))
            col += 1
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "();":
                j += 1
            tokens.append((text[i:j], line, col))
            col += j - i
            i = j
    out, rest = _read_many(tokens)
    if rest:
        t = rest[0]
        raise SyntaxError_(f"unexpected {t[0]!r}", t[1], t[2])
    return out


def _read_many(tokens):
    out = []
    while tokens and tokens[0][0] != ")":
        node, tokens = _read_node(tokens)
        out.append(node)
    return out, tokens


def _read_node(tokens):
    tok, ln, cl = tokens[0]
    if tok == "(":
        items, rest = _read_many(tokens[1:])
        if not rest:
            raise SyntaxError_("unterminated (", ln, cl)
        return SList(tuple(items), ln, cl), rest[1:]
    if tok == ")":
        raise SyntaxError_("unexpected )", ln, cl)
    return Atom(tok, ln, cl), tokens[1:]


# ---------------------------------------------------------------------------
# parsing formulas


class _Scope:
    """Sort context: binder scopes, declared frees, inferred frees."""

    def __init__(self, declared: Optional[dict] = None):
        self.bound: list = []
        self.declared = dict(declared or {})
        self.inferred: dict = {}
        self.used: set = set(self.declared)
        self.renames: list = []

    def push(self, name: str, sort: Sort) -> str:
        actual = name
        while self.lookup(actual) is not None or actual in self.used:
            actual += "'"
        self.bound.append((name, actual, sort))
        self.used.add(actual)
        return actual

    def pop(self):
        self.bound.pop()

    def lookup(self, name: str):
        for orig, actual, sort in reversed(self.bound):
            if orig == name or actual == name:
                return actual, sort
        return None

    def var_at(self, name: str, want: Sort, node) -> str:
        hit = self.lookup(name)
        if hit is not None:
            actual, sort = hit
            if sort != want:
                raise SortError(
                    f"{sort.value}-sort variable {name} used at a "
                    f"{want.value}-sort position", node.line, node.col)
            return actual
        known = self.declared.get(name) or self.inferred.get(name)
        if known is not None:
            if known != want:
                raise SortError(
                    f"{known.value}-sort variable {name} used at a "
                    f"{want.value}-sort position", node.line, node.col)
            return name
        # fresh free variable: lowercase initials are first-sort by convention
        if name[0].islower() and want != Sort.FIRST:
            raise SortError(
                f"first-sort var {name} at a {want.value}-sort position",
                node.line, node.col)
        if not name[0].islower() and want == Sort.FIRST:
            raise SortError(
                f"higher-sort var {name} at a first-sort position",
                node.line, node.col)
        self.inferred[name] = want
        self.used.add(name)
        return name


def parse_declares(nodes: list) -> tuple[dict, list]:
    """Split leading (declare v sort) forms from a node list."""
    decls = {}
    rest = []
    for node in nodes:
        if (isinstance(node, SList) and node.items
                and isinstance(node.items[0], Atom) and node.items[0].text == "declare"):
            if len(node.items) != 3 or not all(isinstance(x, Atom) for x in node.items[1:]):
                raise SyntaxError_("declare takes a variable and a sort", node.line, node.col)
            name = node.items[1].text
            sortname = node.items[2].text
            try:
                decls[name] = Sort(sortname)
            except ValueError:
                raise SyntaxError_(f"unknown sort {sortname}", node.line, node.col) from None
        else:
            rest.append(node)
    return decls, rest


def parse(text: str):
    """Parse a formula or a proof file (detected by its (proof ...) root)."""
    nodes = read_sexprs(text)
    decls, rest = parse_declares(nodes)
    if not rest:
        raise SyntaxError_("no formula or proof found")
    root = rest[0]
    if (isinstance(root, SList) and root.items
            and isinstance(root.items[0], Atom) and root.items[0].text == "proof"):
        from .kernel import parse_proof_node
        return parse_proof_node(root, decls)
    if len(rest) != 1:
        raise SyntaxError_("expected a single formula", rest[1].line, rest[1].col)
    return formula_from_node(root, _Scope(decls))


def parse_formula(text: str, declares: Optional[dict] = None) -> Formula:
    nodes = read_sexprs(text)
    decls, rest = parse_declares(nodes)
    if declares:
        decls.update(declares)
    if len(rest) != 1:
        raise SyntaxError_("expected exactly one formula")
    return formula_from_node(rest[0], _Scope(decls))


def parse_foterm(text: str, declares: Optional[dict] = None) -> FoTerm:
    nodes = read_sexprs(text)
    decls, rest = parse_declares(nodes)
    if declares:
        decls.update(declares)
    if len(rest) != 1:
        raise SyntaxError_("expected exactly one term")
    return foterm_from_node(rest[0], _Scope(decls))


def foterm_from_node(node: SNode, scope: _Scope) -> FoTerm:
    if isinstance(node, Atom):
        if node.text == "0":
            return ZERO
        if node.text.isdigit():
            return numeral(int(node.text))
        return Var(scope.var_at(node.text, Sort.FIRST, node))
    if not node.items or not isinstance(node.items[0], Atom):
        raise SyntaxError_("bad term", node.line, node.col)
    head = node.items[0].text
    args = node.items[1:]
    if head == "s":
        if len(args) != 1:
            raise SyntaxError_("s takes one argument", node.line, node.col)
        return Succ(foterm_from_node(args[0], scope))
    if head in ("+", "*"):
        if len(args) != 2:
            raise SyntaxError_(f"{head} takes two arguments", node.line, node.col)
        ctor = Add if head == "+" else Mul
        return ctor(foterm_from_node(args[0], scope), foterm_from_node(args[1], scope))
    raise SyntaxError_(f"unknown term head {head}", node.line, node.col)


def sterm_from_node(node: SNode, scope: _Scope) -> STerm:
    if isinstance(node, Atom):
        return SVar(scope.var_at(node.text, Sort.SECOND, node))
    if not node.items or not isinstance(node.items[0], Atom):
        raise SyntaxError_("bad second-sort term", node.line, node.col)
    head = node.items[0].text
    args = node.items[1:]
    if head in ("slice", "bracket"):
        if len(args) != 2:
            raise SyntaxError_(f"{head} takes a set and an index", node.line, node.col)
        base = sterm_from_node(args[0], scope)
        idx = foterm_from_node(args[1], scope)
        return Slice(base, idx) if head == "slice" else Bracket(base, idx)
    if head == "setof":
        if len(args) != 2 or not isinstance(args[0], Atom):
            raise SyntaxError_("setof takes a variable and a formula", node.line, node.col)
        actual = scope.push(args[0].text, Sort.FIRST)
        body = formula_from_node(args[1], scope)
        scope.pop()
        return SetBuilder(actual, body)
    raise SyntaxError_(f"unknown second-sort head {head}", node.line, node.col)


def formula_from_node(node: SNode, scope: _Scope) -> Formula:
    if isinstance(node, Atom):
        if node.text == "bot":
            return BOT
        raise SyntaxError_(f"unknown formula atom {node.text}", node.line, node.col)
    if not node.items or not isinstance(node.items[0], Atom):
        raise SyntaxError_("bad formula", node.line, node.col)
    head = node.items[0].text
    args = node.items[1:]

    def need(n):
        if len(args) != n:
            raise SyntaxError_(f"{head} takes {n} arguments, got {len(args)}",
                               node.line, node.col)

    if head == "=":
        need(2)
        return Eq(foterm_from_node(args[0], scope), foterm_from_node(args[1], scope))
    if head == "in1":
        need(2)
        return In1(foterm_from_node(args[0], scope), sterm_from_node(args[1], scope))
    if head == "in2":
        need(2)
        elem = sterm_from_node(args[0], scope)
        if not isinstance(args[1], Atom):
            raise SyntaxError_("in2 needs a third-sort variable", node.line, node.col)
        return In2(elem, TVar(scope.var_at(args[1].text, Sort.THIRD, args[1])))
    if head == "prec":
        need(2)
        return Prec(sterm_from_node(args[0], scope), sterm_from_node(args[1], scope))
    if head in ("and", "or", "->", "iff"):
        need(2)
        ctor = {"and": And, "or": Or, "->": Implies, "iff": Iff}[head]
        return ctor(formula_from_node(args[0], scope), formula_from_node(args[1], scope))
    if head == "not":
        need(1)
        return Not(formula_from_node(args[0], scope))
    if head in _BINDERS:
        need(2)
        if not isinstance(args[0], Atom):
            raise SyntaxError_("binder needs a variable", node.line, node.col)
        ctor, sort = _BINDERS[head]
        actual = scope.push(args[0].text, sort)
        body = formula_from_node(args[1], scope)
        scope.pop()
        return ctor(sort, actual, body)
    if head == "eq2":
        need(2)
        return Eq2(sterm_from_node(args[0], scope), sterm_from_node(args[1], scope))
    if head == "eq3":
        need(2)
        for a in args:
            if not isinstance(a, Atom):
                raise SyntaxError_("eq3 compares third-sort variables", node.line, node.col)
        return Eq3(TVar(scope.var_at(args[0].text, Sort.THIRD, args[0])),
                   TVar(scope.var_at(args[1].text, Sort.THIRD, args[1])))
    if head == "in*":
        need(2)
        return InStar(sterm_from_node(args[0], scope), sterm_from_node(args[1], scope))
    if head == "sub*":
        need(2)
        left = sterm_from_node(args[0], scope)
        if isinstance(args[1], Atom):
            name = args[1].text
            known = (dict(scope.declared) | scope.inferred).get(name)
            hit = scope.lookup(name)
            if hit is not None:
                known = hit[1]
            if known == Sort.THIRD:
                return SubStar(left, TVar(scope.var_at(name, Sort.THIRD, args[1])))
        return SubStar(left, sterm_from_node(args[1], scope))
    if head == "=*":
        need(2)
        return EqStar(sterm_from_node(args[0], scope), sterm_from_node(args[1], scope))
    if head in ("forall-prec", "exists-prec", "forall-in*", "exists-in*"):
        need(3)
        if not isinstance(args[0], Atom):
            raise SyntaxError_("bounded binder needs a variable", node.line, node.col)
        bound = sterm_from_node(args[1], scope)
        actual = scope.push(args[0].text, Sort.SECOND)
        body = formula_from_node(args[2], scope)
        scope.pop()
        guard = (Prec(SVar(actual), bound) if head.endswith("prec")
                 else InStar(SVar(actual), bound))
        if head.startswith("forall"):
            return ForAll(Sort.SECOND, actual, Implies(guard, body))
        return Exists(Sort.SECOND, actual, And(guard, body))
    raise SyntaxError_(f"unknown formula head {head}", node.line, node.col)


# ---------------------------------------------------------------------------
# printing


def print_foterm(t: FoTerm) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Succ):
        return f"(s {print_foterm(t.arg)})"
    if isinstance(t, Add):
        return f"(+ {print_foterm(t.left)} {print_foterm(t.right)})"
    return f"(* {print_foterm(t.left)} {print_foterm(t.right)})"


def print_sterm(t: STerm) -> str:
    if isinstance(t, SVar):
        return t.name
    if isinstance(t, Slice):
        return f"(slice {print_sterm(t.base)} {print_foterm(t.index)})"
    if isinstance(t, Bracket):
        return f"(bracket {print_sterm(t.base)} {print_foterm(t.index)})"
    return f"(setof {t.var} {print_formula(t.body)})"


_BINDER_NAMES = {
    (ForAll, Sort.FIRST): "forall-n", (Exists, Sort.FIRST): "exists-n",
    (ForAll, Sort.SECOND): "forall-s", (Exists, Sort.SECOND): "exists-s",
    (ForAll, Sort.THIRD): "forall-t", (Exists, Sort.THIRD): "exists-t",
}


def print_formula(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"(= {print_foterm(f.left)} {print_foterm(f.right)})"
    if isinstance(f, In1):
        return f"(in1 {print_foterm(f.elem)} {print_sterm(f.set_)})"
    if isinstance(f, In2):
        return f"(in2 {print_sterm(f.elem)} {f.class_.name})"
    if isinstance(f, Prec):
        return f"(prec {print_sterm(f.left)} {print_sterm(f.right)})"
    if isinstance(f, And):
        return f"(and {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Or):
        return f"(or {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Not):
        return f"(not {print_formula(f.body)})"
    if isinstance(f, Implies):
        return f"(-> {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Iff):
        return f"(iff {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, (ForAll, Exists)):
        return f"({_BINDER_NAMES[(type(f), f.sort)]} {f.var} {print_formula(f.body)})"
    if isinstance(f, Eq2):
        return f"(eq2 {print_sterm(f.left)} {print_sterm(f.right)})"
    if isinstance(f, Eq3):
        return f"(eq3 {f.left.name} {f.right.name})"
    if isinstance(f, InStar):
        return f"(in* {print_sterm(f.elem)} {print_sterm(f.coll)})"
    if isinstance(f, SubStar):
        right = f.right.name if isinstance(f.right, TVar) else print_sterm(f.right)
        return f"(sub* {print_sterm(f.left)} {right})"
    if isinstance(f, EqStar):
        return f"(=* {print_sterm(f.left)} {print_sterm(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# variables, substitution, alpha handling


def term_vars(t: FoTerm) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Add, Mul)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Succ):
        return term_vars(t.arg)
    return set()


def sterm_vars(t: STerm) -> set:
    """Free (name, sort) pairs of a second-sort term."""
    if isinstance(t, SVar):
        return {(t.name, Sort.SECOND)}
    if isinstance(t, (Slice, Bracket)):
        return sterm_vars(t.base) | {(v, Sort.FIRST) for v in term_vars(t.index)}
    out = free_vars(t.body)
    return {(v, s) for v, s in out if not (v == t.var and s == Sort.FIRST)}


def free_vars(f: Formula) -> set:
    if isinstance(f, Eq):
        return {(v, Sort.FIRST) for v in term_vars(f.left) | term_vars(f.right)}
    if isinstance(f, In1):
        return {(v, Sort.FIRST) for v in term_vars(f.elem)} | sterm_vars(f.set_)
    if isinstance(f, In2):
        return sterm_vars(f.elem) | {(f.class_.name, Sort.THIRD)}
    if isinstance(f, Prec):
        return sterm_vars(f.left) | sterm_vars(f.right)
    if isinstance(f, (And, Or, Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (ForAll, Exists)):
        return {(v, s) for v, s in free_vars(f.body) if not (v == f.var and s == f.sort)}
    if isinstance(f, Eq2):
        return sterm_vars(f.left) | sterm_vars(f.right)
    if isinstance(f, Eq3):
        return {(f.left.name, Sort.THIRD), (f.right.name, Sort.THIRD)}
    if isinstance(f, (InStar, EqStar)):
        a, b = (f.elem, f.coll) if isinstance(f, InStar) else (f.left, f.right)
        return sterm_vars(a) | sterm_vars(b)
    if isinstance(f, SubStar):
        right = ({(f.right.name, Sort.THIRD)} if isinstance(f.right, TVar)
                 else sterm_vars(f.right))
        return sterm_vars(f.left) | right
    raise TypeError(f"not a formula: {f!r}")


def all_names(f: Formula) -> set:
    """Every variable name occurring in f, bound or free."""
    names: set = set()
    stack: list = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            names.add(g.name)
        elif isinstance(g, (Succ,)):
            stack.append(g.arg)
        elif isinstance(g, (Add, Mul)):
            stack.extend((g.left, g.right))
        elif isinstance(g, SVar):
            names.add(g.name)
        elif isinstance(g, TVar):
            names.add(g.name)
        elif isinstance(g, (Slice, Bracket)):
            stack.extend((g.base, g.index))
        elif isinstance(g, SetBuilder):
            names.add(g.var)
            stack.append(g.body)
        elif isinstance(g, Eq):
            stack.extend((g.left, g.right))
        elif isinstance(g, In1):
            stack.extend((g.elem, g.set_))
        elif isinstance(g, In2):
            stack.extend((g.elem, g.class_))
        elif isinstance(g, (Prec, Eq2, EqStar)):
            stack.extend((g.left, g.right))
        elif isinstance(g, Eq3):
            stack.extend((g.left, g.right))
        elif isinstance(g, InStar):
            stack.extend((g.elem, g.coll))
        elif isinstance(g, SubStar):
            stack.extend((g.left, g.right))
        elif isinstance(g, (And, Or, Implies, Iff)):
            stack.extend((g.left, g.right))
        elif isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, (ForAll, Exists)):
            names.add(g.var)
            stack.append(g.body)
    return names


def fresh_name(base: str, used: set) -> str:
    name = base
    while name in used:
        name += "'"
    used.add(name)
    return name


def subst_term(t: FoTerm, v: str, repl: FoTerm) -> FoTerm:
    if isinstance(t, Var):
        return repl if t.name == v else t
    if isinstance(t, Succ):
        return Succ(subst_term(t.arg, v, repl))
    if isinstance(t, Add):
        return Add(subst_term(t.left, v, repl), subst_term(t.right, v, repl))
    if isinstance(t, Mul):
        return Mul(subst_term(t.left, v, repl), subst_term(t.right, v, repl))
    return t


def _subst_sterm(t: STerm, v: str, sort: Sort, repl) -> STerm:
    if isinstance(t, SVar):
        if sort == Sort.SECOND and t.name == v:
            return repl
        return t
    if isinstance(t, (Slice, Bracket)):
        base = _subst_sterm(t.base, v, sort, repl)
        idx = subst_term(t.index, v, repl) if sort == Sort.FIRST else t.index
        return type(t)(base, idx)
    if isinstance(t, SetBuilder):
        if sort == Sort.FIRST and t.var == v:
            return t
        return SetBuilder(t.var, substitute(t.body, v, repl, sort))
    raise TypeError(f"not a second-sort term: {t!r}")


def substitute(f: Formula, v: str, repl, sort: Sort = Sort.FIRST) -> Formula:
    """Capture-avoiding substitution.  For the first sort `repl` is a
    FoTerm; for higher sorts it must be a variable (SVar/TVar)."""
    if sort == Sort.FIRST:
        if not isinstance(repl, (Var, Zero, Succ, Add, Mul)):
            raise SortError("first-sort substitution needs a first-order term")
        repl_frees = term_vars(repl)
    elif sort == Sort.SECOND:
        if not isinstance(repl, SVar):
            raise SortError("second-sort substitution needs a variable")
        repl_frees = {repl.name}
    else:
        if not isinstance(repl, TVar):
            raise SortError("third-sort substitution needs a variable")
        repl_frees = {repl.name}

    def go(g: Formula) -> Formula:
        if isinstance(g, Eq):
            if sort != Sort.FIRST:
                return g
            return Eq(subst_term(g.left, v, repl), subst_term(g.right, v, repl))
        if isinstance(g, In1):
            elem = subst_term(g.elem, v, repl) if sort == Sort.FIRST else g.elem
            return In1(elem, _subst_sterm(g.set_, v, sort, repl))
        if isinstance(g, In2):
            cls = g.class_
            if sort == Sort.THIRD and cls.name == v:
                cls = repl
            return In2(_subst_sterm(g.elem, v, sort, repl), cls)
        if isinstance(g, Prec):
            return Prec(_subst_sterm(g.left, v, sort, repl),
                        _subst_sterm(g.right, v, sort, repl))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, (ForAll, Exists)):
            if g.var == v and g.sort == sort:
                return g
            if g.var in repl_frees and (v, sort) in free_vars(g):
                used = all_names(g) | repl_frees | {v}
                nv = fresh_name(g.var, used)
                body = substitute(g.body, g.var,
                                  Var(nv) if g.sort == Sort.FIRST
                                  else (SVar(nv) if g.sort == Sort.SECOND else TVar(nv)),
                                  g.sort)
                return type(g)(g.sort, nv, go(body))
            return type(g)(g.sort, g.var, go(g.body))
        if isinstance(g, Eq2):
            return Eq2(_subst_sterm(g.left, v, sort, repl),
                       _subst_sterm(g.right, v, sort, repl))
        if isinstance(g, Eq3):
            left, right = g.left, g.right
            if sort == Sort.THIRD:
                left = repl if left.name == v else left
                right = repl if right.name == v else right
            return Eq3(left, right)
        if isinstance(g, InStar):
            return InStar(_subst_sterm(g.elem, v, sort, repl),
                          _subst_sterm(g.coll, v, sort, repl))
        if isinstance(g, SubStar):
            right = g.right
            if isinstance(right, TVar):
                if sort == Sort.THIRD and right.name == v:
                    right = repl
            else:
                right = _subst_sterm(right, v, sort, repl)
            return SubStar(_subst_sterm(g.left, v, sort, repl), right)
        if isinstance(g, EqStar):
            return EqStar(_subst_sterm(g.left, v, sort, repl),
                          _subst_sterm(g.right, v, sort, repl))
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


def alpha_normalize(f: Formula) -> Formula:
    """Canonical bound-variable names, for structural comparison."""
    counter = [0]

    def go(g: Formula, env: dict) -> Formula:
        if isinstance(g, Eq):
            return Eq(_ren_term(g.left, env), _ren_term(g.right, env))
        if isinstance(g, In1):
            return In1(_ren_term(g.elem, env), _ren_sterm(g.set_, env, go))
        if isinstance(g, In2):
            return In2(_ren_sterm(g.elem, env, go),
                       TVar(env.get((g.class_.name, Sort.THIRD), g.class_.name)))
        if isinstance(g, Prec):
            return Prec(_ren_sterm(g.left, env, go), _ren_sterm(g.right, env, go))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(go(g.left, env), go(g.right, env))
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, (ForAll, Exists)):
            counter[0] += 1
            nv = f"__b{counter[0]}"
            env2 = dict(env)
            env2[(g.var, g.sort)] = nv
            return type(g)(g.sort, nv, go(g.body, env2))
        if isinstance(g, Eq2):
            return Eq2(_ren_sterm(g.left, env, go), _ren_sterm(g.right, env, go))
        if isinstance(g, Eq3):
            return Eq3(TVar(env.get((g.left.name, Sort.THIRD), g.left.name)),
                       TVar(env.get((g.right.name, Sort.THIRD), g.right.name)))
        if isinstance(g, InStar):
            return InStar(_ren_sterm(g.elem, env, go), _ren_sterm(g.coll, env, go))
        if isinstance(g, SubStar):
            right = g.right
            if isinstance(right, TVar):
                right = TVar(env.get((right.name, Sort.THIRD), right.name))
            else:
                right = _ren_sterm(right, env, go)
            return SubStar(_ren_sterm(g.left, env, go), right)
        if isinstance(g, EqStar):
            return EqStar(_ren_sterm(g.left, env, go), _ren_sterm(g.right, env, go))
        raise TypeError(f"not a formula: {g!r}")

    def _ren_term(t: FoTerm, env: dict) -> FoTerm:
        if isinstance(t, Var):
            return Var(env.get((t.name, Sort.FIRST), t.name))
        if isinstance(t, Succ):
            return Succ(_ren_term(t.arg, env))
        if isinstance(t, (Add, Mul)):
            return type(t)(_ren_term(t.left, env), _ren_term(t.right, env))
        return t

    def _ren_sterm(t: STerm, env: dict, go) -> STerm:
        if isinstance(t, SVar):
            return SVar(env.get((t.name, Sort.SECOND), t.name))
        if isinstance(t, (Slice, Bracket)):
            return type(t)(_ren_sterm(t.base, env, go), _ren_term(t.index, env))
        if isinstance(t, SetBuilder):
            counter[0] += 1
            nv = f"__b{counter[0]}"
            env2 = dict(env)
            env2[(t.var, Sort.FIRST)] = nv
            return SetBuilder(nv, go(t.body, env2))
        raise TypeError(f"not a second-sort term: {t!r}")

    return go(f, {})


def alpha_eq(a: Formula, b: Formula) -> bool:
    return alpha_normalize(a) == alpha_normalize(b)


# ---------------------------------------------------------------------------
# expansion of surface sugar


def is_core(f: Formula) -> bool:
    if isinstance(f, (Iff, Eq2, Eq3, InStar, SubStar, EqStar)):
        return False
    if isinstance(f, Eq):
        return True
    if isinstance(f, In1):
        return isinstance(f.set_, SVar)
    if isinstance(f, In2):
        return isinstance(f.elem, SVar)
    if isinstance(f, Prec):
        return isinstance(f.left, SVar) and isinstance(f.right, SVar)
    if isinstance(f, (And, Or, Implies)):
        return is_core(f.left) and is_core(f.right)
    if isinstance(f, Not):
        return is_core(f.body)
    if isinstance(f, (ForAll, Exists)):
        return is_core(f.body)
    raise TypeError(f"not a formula: {f!r}")


def _pair_eq(k: str, a: FoTerm, b: FoTerm) -> Formula:
    """k + k = (a+b)(a+b+1) + 2a, pinning k as the pair code of (a, b)."""
    s = Add(a, b)
    return Eq(Add(Var(k), Var(k)), Add(Mul(s, Succ(s)), Add(a, a)))


def _pair_member(a: FoTerm, b: FoTerm, target: STerm, used: set) -> Formula:
    """Surface form of: the pair code of (a, b) is a member of target."""
    k = fresh_name("k", used)
    return Exists(Sort.FIRST, k, And(_pair_eq(k, a, b), In1(Var(k), target)))


def expand(f: Formula, used: Optional[set] = None) -> Formula:
    """Eliminate all surface sugar, producing a core formula.

    Second-sort terms in membership position expand to their defining
    arithmetic; in variable-only positions (in2/prec) they are replaced
    by a fresh existentially-quantified variable constrained to equal
    the term.  Idempotent on core formulas.
    """
    if used is None:
        used = set(all_names(f))

    def exp(g: Formula) -> Formula:
        if isinstance(g, Eq):
            return g
        if isinstance(g, In1):
            return exp_in1(g.elem, g.set_)
        if isinstance(g, In2):
            if isinstance(g.elem, SVar):
                return g
            return with_fresh_svar(g.elem, lambda v: In2(v, g.class_))
        if isinstance(g, Prec):
            if not isinstance(g.left, SVar):
                return with_fresh_svar(g.left, lambda v: Prec(v, g.right))
            if not isinstance(g.right, SVar):
                return with_fresh_svar(g.right, lambda v: Prec(g.left, v))
            return g
        if isinstance(g, (And, Or, Implies)):
            return type(g)(exp(g.left), exp(g.right))
        if isinstance(g, Not):
            return Not(exp(g.body))
        if isinstance(g, (ForAll, Exists)):
            return type(g)(g.sort, g.var, exp(g.body))
        if isinstance(g, Iff):
            return And(exp(Implies(g.left, g.right)), exp(Implies(g.right, g.left)))
        if isinstance(g, Eq2):
            m = fresh_name("n", used)
            mv = Var(m)
            return ForAll(Sort.FIRST, m,
                          And(exp(Implies(In1(mv, g.left), In1(mv, g.right))),
                              exp(Implies(In1(mv, g.right), In1(mv, g.left)))))
        if isinstance(g, Eq3):
            x = fresh_name("X", used)
            xv = SVar(x)
            return ForAll(Sort.SECOND, x,
                          And(Implies(In2(xv, g.left), In2(xv, g.right)),
                              Implies(In2(xv, g.right), In2(xv, g.left))))
        if isinstance(g, InStar):
            n = fresh_name("n", used)
            return Exists(Sort.FIRST, n,
                          And(exp_in1(ZERO, Slice(g.coll, Var(n))),
                              exp(Eq2(g.elem, Bracket(g.coll, Var(n))))))
        if isinstance(g, SubStar):
            z = fresh_name("Z", used)
            zv = SVar(z)
            if isinstance(g.right, TVar):
                inner = In2(zv, g.right)
            else:
                inner = InStar(zv, g.right)
            return ForAll(Sort.SECOND, z, Implies(exp(InStar(zv, g.left)), exp(inner)))
        if isinstance(g, EqStar):
            return And(exp(SubStar(g.left, g.right)), exp(SubStar(g.right, g.left)))
        raise TypeError(f"not a formula: {g!r}")

    def exp_in1(elem: FoTerm, st: STerm) -> Formula:
        if isinstance(st, SVar):
            return In1(elem, st)
        if isinstance(st, Slice):
            # m in (Z)_i  <=>  <i, m> in Z
            pm = _pair_member(st.index, elem, SVar("__hole"), used)
            return exp(_replace_hole(pm, st.base))
        if isinstance(st, Bracket):
            # m in [X]_i  <=>  <i, 0> in X and <i, m+1> in X
            pm0 = _pair_member(st.index, ZERO, SVar("__hole"), used)
            pm1 = _pair_member(st.index, Succ(elem), SVar("__hole"), used)
            return And(exp(_replace_hole(pm0, st.base)), exp(_replace_hole(pm1, st.base)))
        if isinstance(st, SetBuilder):
            return exp(substitute(st.body, st.var, elem, Sort.FIRST))
        raise TypeError(f"not a second-sort term: {st!r}")

    def with_fresh_svar(st: STerm, build) -> Formula:
        v = fresh_name("V", used)
        if isinstance(st, SetBuilder):
            m = st.var
            defn = ForAll(Sort.FIRST, m,
                          And(exp(Implies(In1(Var(m), SVar(v)), st.body)),
                              exp(Implies(st.body, In1(Var(m), SVar(v))))))
        else:
            defn = exp(Eq2(SVar(v), st))
        return Exists(Sort.SECOND, v, And(defn, exp(build(SVar(v)))))

    return exp(f)


def _replace_hole(f: Formula, st: STerm) -> Formula:
    """Swap the placeholder set variable __hole for an actual second-sort term."""

    def go(g):
        if isinstance(g, In1):
            if isinstance(g.set_, SVar) and g.set_.name == "__hole":
                return In1(g.elem, st)
            return g
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, (ForAll, Exists)):
            return type(g)(g.sort, g.var, go(g.body))
        return g

    return go(f)


# ---------------------------------------------------------------------------
# formula classes


def is_arithmetic(f: Formula) -> bool:
    """No second- or third-sort quantifiers occur."""
    if isinstance(f, (Eq, In1, In2, Prec, Eq2, Eq3, InStar, SubStar, EqStar)):
        return True
    if isinstance(f, (And, Or, Implies, Iff)):
        return is_arithmetic(f.left) and is_arithmetic(f.right)
    if isinstance(f, Not):
        return is_arithmetic(f.body)
    if isinstance(f, (ForAll, Exists)):
        return f.sort == Sort.FIRST and is_arithmetic(f.body)
    raise TypeError(f"not a formula: {f!r}")


def _mentions_set(f: Formula, x: str) -> bool:
    return (x, Sort.SECOND) in free_vars(f)


def is_strictly_positive(f: Formula, x: str) -> bool:
    """Strictly positive first-order formulas in the set variable x:
    PA atoms and memberships t in x, conjunction, disjunction,
    implication with x absent from the antecedent, and first-order
    quantification only."""
    if isinstance(f, Eq):
        return True
    if isinstance(f, In1):
        return isinstance(f.set_, SVar) and f.set_.name == x
    if isinstance(f, (In2, Prec, Eq2, Eq3, InStar, SubStar, EqStar, Iff)):
        return False
    if isinstance(f, (And, Or)):
        return is_strictly_positive(f.left, x) and is_strictly_positive(f.right, x)
    if isinstance(f, Implies):
        return (not _mentions_set(f.left, x)
                and is_strictly_positive(f.left, x)
                and is_strictly_positive(f.right, x))
    if isinstance(f, Not):
        return False
    if isinstance(f, (ForAll, Exists)):
        return f.sort == Sort.FIRST and is_strictly_positive(f.body, x)
    raise TypeError(f"not a formula: {f!r}")


def positive_substitute(f: Formula, x: str, theta: Formula, hole: str) -> Formula:
    """Replace every membership atom t in x by theta(t), renaming bound
    variables of f apart from theta's free variables."""
    if not is_strictly_positive(f, x):
        raise ValueError(f"formula is not strictly positive in {x}")
    theta_frees = {v for v, s in free_vars(theta) if s == Sort.FIRST and v != hole}

    def go(g: Formula) -> Formula:
        if isinstance(g, Eq):
            return g
        if isinstance(g, In1):
            return substitute(theta, hole, g.elem, Sort.FIRST)
        if isinstance(g, (And, Or, Implies)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, (ForAll, Exists)):
            if g.var in theta_frees:
                used = all_names(g) | theta_frees | {hole}
                nv = fresh_name(g.var, used)
                body = substitute(g.body, g.var, Var(nv), Sort.FIRST)
                return type(g)(g.sort, nv, go(body))
            return type(g)(g.sort, g.var, go(g.body))
        raise TypeError(f"unreachable for strictly positive formulas: {g!r}")

    return go(f)
