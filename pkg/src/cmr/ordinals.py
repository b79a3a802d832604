"""Ordinal notations in two-argument Veblen normal form, Kleene-Brouwer
orderings of finite trees, and explicit finite ordinal indices.

A notation is a sum of Veblen terms phi_a(b) with multiplicities, kept
strictly decreasing under the comparison order.  Normal form also
requires b < phi_a(b) for every term, i.e. the argument is not itself a
fixed point of a higher function; normalize absorbs violations
(phi_0(phi_1(0)) collapses to phi_1(0)) and re-sorts raw sums by
ordinal addition.  Comparison is the usual three-way fixed-point
recursion.  This suffices to write and compare notations up to
phi_{epsilon_0}(0); no collapsing functions are provided.
"""

import enum
from dataclasses import dataclass
from functools import cmp_to_key

from .syntax import Atom, SList, SyntaxError_, read_sexprs


class Cmp(enum.Enum):
    LESS = "<"
    EQUAL = "="
    GREATER = ">"


@dataclass(frozen=True)
class Veblen:
    a: "Ord"
    b: "Ord"


@dataclass(frozen=True)
class Ord:
    terms: tuple = ()  # ((Veblen, count), ...) strictly decreasing heads

    @property
    def is_zero(self):
        return not self.terms


ZERO = Ord()
ONE = Ord(((Veblen(ZERO, ZERO), 1),))


def finite(k: int) -> Ord:
    if k < 0:
        raise ValueError("finite ordinals are naturals")
    return Ord(((Veblen(ZERO, ZERO), k),)) if k else ZERO


def phi(a: Ord, b: Ord) -> Ord:
    return Ord(((Veblen(a, b), 1),))


OMEGA = phi(ZERO, ONE)
EPSILON0 = phi(ONE, ZERO)


# ---------------------------------------------------------------------------
# comparison


def _cmp_veblen(s: Veblen, t: Veblen) -> Cmp:
    k = _cmp(s.a, t.a)
    if k == Cmp.EQUAL:
        return _cmp(s.b, t.b)
    if k == Cmp.LESS:
        # phi_a(b) vs phi_c(d) with a < c: b decides against phi_c(d) itself
        return _cmp(s.b, Ord(((t, 1),)))
    return _cmp(Ord(((s, 1),)), t.b)


def _cmp(x: Ord, y: Ord) -> Cmp:
    for (u, j), (v, k) in zip(x.terms, y.terms):
        r = _cmp_veblen(u, v)
        if r != Cmp.EQUAL:
            return r
        if j != k:
            return Cmp.LESS if j < k else Cmp.GREATER
    if len(x.terms) == len(y.terms):
        return Cmp.EQUAL
    return Cmp.LESS if len(x.terms) < len(y.terms) else Cmp.GREATER


def is_normal(x: Ord) -> bool:
    for i, (v, c) in enumerate(x.terms):
        if c < 1:
            return False
        if not is_normal(v.a) or not is_normal(v.b):
            return False
        # the argument must lie below the term's own value
        if _cmp(v.b, Ord(((v, 1),))) != Cmp.LESS:
            return False
        if i + 1 < len(x.terms) and _cmp_veblen(v, x.terms[i + 1][0]) != Cmp.GREATER:
            return False
    return True


def ord_cmp(x: Ord, y: Ord) -> Cmp:
    """Linear order on normal forms; raises on non-normal input."""
    if not is_normal(x) or not is_normal(y):
        raise ValueError("ord_cmp requires normal forms")
    return _cmp(x, y)


# ---------------------------------------------------------------------------
# normalisation


def _norm_veblen(v: Veblen) -> Veblen:
    a = normalize(v.a)
    b = normalize(v.b)
    if len(b.terms) == 1 and b.terms[0][1] == 1:
        head = b.terms[0][0]
        if _cmp(head.a, a) == Cmp.GREATER:
            # b is a fixed point of phi_a already: phi_a(b) = b
            return head
    return Veblen(a, b)


def _add_term(x: Ord, v: Veblen, c: int) -> Ord:
    """Ordinal addition x + phi-term * c in normal form."""
    out = []
    for u, k in x.terms:
        r = _cmp_veblen(u, v)
        if r == Cmp.GREATER:
            out.append((u, k))
        elif r == Cmp.EQUAL:
            out.append((u, k + c))
            return Ord(tuple(out))
        else:
            break  # smaller terms are absorbed by the addition
    out.append((v, c))
    return Ord(tuple(out))


def normalize(x: Ord) -> Ord:
    """Normal form of a raw sum: arguments normalised, fixed points
    absorbed, terms combined by ordinal addition left to right."""
    out = ZERO
    for v, c in x.terms:
        if c < 0:
            raise ValueError("negative multiplicity")
        if c == 0:
            continue
        out = _add_term(out, _norm_veblen(v), c)
    return out


# ---------------------------------------------------------------------------
# notation syntax:  0 | (n k) | (phi a b) | (sum t1 t2 ...)


def parse_ord(text: str) -> Ord:
    nodes = read_sexprs(text)
    if len(nodes) != 1:
        raise SyntaxError_("expected exactly one ordinal notation")
    return _ord_from_node(nodes[0])


def _ord_from_node(node) -> Ord:
    if isinstance(node, Atom):
        if node.text == "0":
            return ZERO
        raise SyntaxError_(f"unknown ordinal atom {node.text}", node.line, node.col)
    if not node.items or not isinstance(node.items[0], Atom):
        raise SyntaxError_("bad ordinal notation", node.line, node.col)
    head = node.items[0].text
    args = node.items[1:]
    if head == "n":
        if len(args) != 1 or not isinstance(args[0], Atom) or not args[0].text.isdigit():
            raise SyntaxError_("(n k) takes a numeral", node.line, node.col)
        return finite(int(args[0].text))
    if head == "phi":
        if len(args) != 2:
            raise SyntaxError_("(phi a b) takes two notations", node.line, node.col)
        return Ord(((Veblen(_ord_from_node(args[0]), _ord_from_node(args[1])), 1),))
    if head == "sum":
        terms = []
        for a in args:
            terms.extend(_ord_from_node(a).terms)
        return Ord(tuple(terms))
    raise SyntaxError_(f"unknown ordinal head {head}", node.line, node.col)


def print_ord(x: Ord) -> str:
    if x.is_zero:
        return "0"
    parts = []
    for v, c in x.terms:
        if v == Veblen(ZERO, ZERO):
            parts.append(f"(n {c})")
        else:
            parts.extend([f"(phi {print_ord(v.a)} {print_ord(v.b)})"] * c)
    if len(parts) == 1:
        return parts[0]
    return "(sum " + " ".join(parts) + ")"


# ---------------------------------------------------------------------------
# Kleene-Brouwer ordering


def kb_less(sigma: tuple, tau: tuple) -> bool:
    """sigma strictly precedes tau: proper extension, or smaller entry at
    the first difference."""
    for a, b in zip(sigma, tau):
        if a != b:
            return a < b
    return len(sigma) > len(tau)


@dataclass(frozen=True)
class FinTree:
    nodes: frozenset

    def __post_init__(self):
        for node in self.nodes:
            for i in range(len(node)):
                if node[:i] not in self.nodes:
                    raise ValueError(f"tree is not prefix-closed at {node}")


def make_tree(nodes) -> FinTree:
    return FinTree(frozenset(tuple(n) for n in nodes))


def kb_sort(tree: FinTree) -> list:
    def compare(a, b):
        if a == b:
            return 0
        return -1 if kb_less(a, b) else 1

    return sorted(tree.nodes, key=cmp_to_key(compare))


# ---------------------------------------------------------------------------
# explicit finite ordinal indices


@dataclass(frozen=True)
class FinOrderIndex:
    field: frozenset
    rel: frozenset  # strict pairs (a, b) meaning a before b
    point: int


def validate_index(ix: FinOrderIndex) -> bool:
    if ix.point not in ix.field:
        return False
    for a, b in ix.rel:
        if a not in ix.field or b not in ix.field:
            return False
    for a in ix.field:
        if (a, a) in ix.rel:
            return False
        for b in ix.field:
            if a != b and ((a, b) in ix.rel) == ((b, a) in ix.rel):
                return False  # exactly one direction must hold
            for c in ix.field:
                if (a, b) in ix.rel and (b, c) in ix.rel and (a, c) not in ix.rel:
                    return False
    return True


def index_less(ix: FinOrderIndex, jx: FinOrderIndex) -> bool:
    """Strictly below, only within one and the same underlying order."""
    if ix.field != jx.field or ix.rel != jx.rel:
        return False
    return (ix.point, jx.point) in ix.rel


def omega_extension(ix: FinOrderIndex, odd_count: int = 3) -> FinOrderIndex:
    """Finite rendering of the order-type successor construction that
    re-codes the base order on evens 2b+2, appends ascending odds, and
    tops out at 0; the point sits at the top."""
    evens = {2 * b + 2 for b in ix.field}
    odds = [2 * i + 1 for i in range(odd_count)]
    field = evens | set(odds) | {0}
    rel = set()
    for a, b in ix.rel:
        rel.add((2 * a + 2, 2 * b + 2))
    for e in evens:
        for o in odds:
            rel.add((e, o))
        rel.add((e, 0))
    for i, o in enumerate(odds):
        for o2 in odds[i + 1:]:
            rel.add((o, o2))
        rel.add((o, 0))
    return FinOrderIndex(frozenset(field), frozenset(rel), 0)
