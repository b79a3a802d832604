"""Combinator terms with a fueled weak evaluator.

The term language has the combinators K and S, arbitrary-precision
numerals, successor/predecessor, definition by cases, pairing with both
projections, a guarded fixpoint and unbounded search.  Reduction is
leftmost-outermost and weak: under-applied heads are values, nothing
reduces under a lambda (lambdas may not even reach the evaluator - terms
must be compiled via bracket abstraction first).

Reduction rules, one fuel unit each:

    K a b        -> a
    S a b c      -> (a c) (b c)
    SUCC n       -> n+1
    PRED n       -> max(n-1, 0)
    CASES a b m n-> a if m = n else b        (m, n numerals)
    P a b        -> <a, b>                   (lazy pair value)
    P0 <a, b>    -> a        P0 k -> unpair(k)[0] on numerals
    P1 <a, b>    -> b        P1 k -> unpair(k)[1]
    FIX f x      -> f (FIX f) x
    MU f         -> least n with f n = 1     (probes charge the shared fuel)

Pair values of numerals interconvert with numeric pair codes: wherever a
numeral is demanded, <m, n> counts as the code pair(m, n).
"""

from dataclasses import dataclass
from typing import Optional, Union

from .coding import pair, unpair


class PcaError(Exception):
    pass


class CompileError(PcaError):
    pass


class ParseError(PcaError):
    pass


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Const:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Num:
    value: int

    def __repr__(self):
        return f"Num({self.value})"


@dataclass(frozen=True)
class App:
    fn: "CombTerm"
    arg: "CombTerm"


@dataclass(frozen=True)
class PairVal:
    left: "CombTerm"
    right: "CombTerm"


@dataclass(frozen=True)
class Lam:
    var: str
    body: "CombTerm"


@dataclass(frozen=True)
class VarRef:
    name: str


CombTerm = Union[Const, Num, App, PairVal, Lam, VarRef]

K = Const("K")
S = Const("S")
SUCC = Const("SUCC")
PRED = Const("PRED")
CASES = Const("CASES")
P = Const("P")
P0 = Const("P0")
P1 = Const("P1")
FIX = Const("FIX")
MU = Const("MU")

_ARITY = {"K": 2, "S": 3, "SUCC": 1, "PRED": 1, "CASES": 4,
          "P": 2, "P0": 1, "P1": 1, "FIX": 2, "MU": 1}
_CONSTS = {c.name: c for c in (K, S, SUCC, PRED, CASES, P, P0, P1, FIX, MU)}


def app(fn: CombTerm, *args: CombTerm) -> CombTerm:
    for a in args:
        fn = App(fn, a)
    return fn


def num(n: int) -> Num:
    return Num(n)


# ---------------------------------------------------------------------------
# outcomes


@dataclass(frozen=True)
class Converged:
    value: CombTerm
    steps_used: int


@dataclass(frozen=True)
class OutOfFuel:
    steps_used: int


@dataclass(frozen=True)
class Stuck:
    description: str
    steps_used: int


Outcome = Union[Converged, OutOfFuel, Stuck]


class Meter:
    """Shared fuel budget; one unit per rule application."""

    def __init__(self, fuel: int):
        self.fuel = fuel
        self.used = 0

    def spend(self, n: int = 1):
        if self.used + n > self.fuel:
            self.used = self.fuel
            raise _NoFuel()
        self.used += n


class _NoFuel(Exception):
    pass


class _StuckErr(Exception):
    def __init__(self, description: str):
        self.description = description


# ---------------------------------------------------------------------------
# evaluation


def _unwind(t: CombTerm, args: list) -> CombTerm:
    """Peel the application spine of t, appending arguments to args in
    application order; returns the head."""
    spine = []
    while isinstance(t, App):
        spine.append(t.arg)
        t = t.fn
    spine.reverse()
    args.extend(spine)
    return t


def _fold(head: CombTerm, args: list) -> CombTerm:
    for a in args:
        head = App(head, a)
    return head


def _whnf(term: CombTerm, meter: Meter) -> CombTerm:
    """Reduce to weak head normal form. Raises _NoFuel / _StuckErr."""
    # frames: (head const, args list, slot awaiting evaluation, rest args)
    frames: list = []
    cur = term

    def resume(value):
        head, args, slot = frames.pop()
        args[slot] = value
        return head, args

    head = None
    args: list = []
    need_dispatch = False
    while True:
        if not need_dispatch:
            args = []
            head = _unwind(cur, args)
        need_dispatch = False

        if isinstance(head, (Lam, VarRef)):
            raise _StuckErr("uncompiled lambda or free variable in evaluation")
        if isinstance(head, (Num, PairVal)):
            if args:
                kind = "numeral" if isinstance(head, Num) else "pair value"
                raise _StuckErr(f"{kind} in function position")
            if frames:
                head, args = resume(head)
                need_dispatch = True
                continue
            return head
        if not isinstance(head, Const):
            raise PcaError(f"not a term: {head!r}")

        ar = _ARITY[head.name]
        if len(args) < ar:
            value = _fold(head, args)
            if frames:
                head, args = resume(value)
                need_dispatch = True
                continue
            return value

        # strict slots must be evaluated before the rule can fire
        strict = _strict_slots(head.name)
        pending = None
        for slot in strict:
            if not isinstance(args[slot], (Num, PairVal, Const)) and not _is_underapplied(args[slot]):
                pending = slot
                break
        if pending is not None:
            frames.append((head, args, pending))
            cur = args[pending]
            continue

        cur = _fire(head, args, meter)


def _is_underapplied(t: CombTerm) -> bool:
    n = 0
    while isinstance(t, App):
        n += 1
        t = t.fn
    return isinstance(t, Const) and n < _ARITY[t.name]


def _strict_slots(name: str) -> tuple:
    if name in ("SUCC", "PRED", "P0", "P1"):
        return (0,)
    if name == "CASES":
        return (2, 3)
    return ()


def _nat_of(value: CombTerm, meter: Meter, what: str) -> int:
    """Numeral demanded: Num directly, pair values via their code."""
    if isinstance(value, Num):
        return value.value
    if isinstance(value, PairVal):
        m = _nat_of(_whnf(value.left, meter), meter, what)
        n = _nat_of(_whnf(value.right, meter), meter, what)
        meter.spend()
        return pair(m, n)
    raise _StuckErr(f"{what}: non-numeral argument")


def _fire(head: Const, args: list, meter: Meter) -> CombTerm:
    name = head.name
    ar = _ARITY[name]
    rest = args[ar:]
    meter.spend()
    if name == "K":
        res = args[0]
    elif name == "S":
        res = App(App(args[0], args[2]), App(args[1], args[2]))
    elif name == "SUCC":
        res = Num(_nat_of(args[0], meter, "succ") + 1)
    elif name == "PRED":
        res = Num(max(_nat_of(args[0], meter, "pred") - 1, 0))
    elif name == "CASES":
        m = _nat_of(args[2], meter, "cases")
        n = _nat_of(args[3], meter, "cases")
        res = args[0] if m == n else args[1]
    elif name == "P":
        res = PairVal(args[0], args[1])
    elif name in ("P0", "P1"):
        v = args[0]
        idx = 0 if name == "P0" else 1
        if isinstance(v, Num):
            res = Num(unpair(v.value)[idx])
        elif isinstance(v, PairVal):
            res = v.left if idx == 0 else v.right
        else:
            raise _StuckErr("projection: argument is neither numeral nor pair")
    elif name == "FIX":
        res = App(App(args[0], App(FIX, args[0])), args[1])
    elif name == "MU":
        res = _mu(args[0], meter)
    else:  # pragma: no cover
        raise PcaError(f"no rule for {name}")
    return _fold(res, rest)


def _mu(f: CombTerm, meter: Meter) -> CombTerm:
    n = 0
    while True:
        probe = _whnf(App(f, Num(n)), meter)
        k = _nat_of(probe, meter, "mu")
        if k == 1:
            return Num(n)
        n += 1
        meter.spend()


def reduce(term: CombTerm, fuel: int, meter: Optional[Meter] = None) -> Outcome:
    """Leftmost-outermost weak reduction of a compiled term.

    An external meter may be supplied to account several reductions
    against one budget; `fuel` then caps this call only.
    """
    own = meter is None
    if own:
        meter = Meter(fuel)
    start = meter.used
    cap = min(meter.fuel, start + fuel)
    saved_fuel = meter.fuel
    meter.fuel = cap
    try:
        value = _whnf(term, meter)
        return Converged(value, meter.used - start)
    except _NoFuel:
        return OutOfFuel(meter.used - start)
    except _StuckErr as e:
        return Stuck(e.description, meter.used - start)
    finally:
        meter.fuel = saved_fuel


def mu_search(f: CombTerm, fuel: int) -> Outcome:
    """Least n with f applied to n reducing to 1, within fuel."""
    return reduce(App(MU, f), fuel)


def value_as_nat(value: CombTerm, fuel: int = 10**6, meter: Optional[Meter] = None) -> Optional[int]:
    """Read a weak normal form as a natural number, collapsing pair values
    to their numeric codes; None if it is not numeric."""
    own = meter is None
    if own:
        meter = Meter(fuel)
    try:
        return _nat_of(value, meter, "read")
    except (_NoFuel, _StuckErr):
        return None


# ---------------------------------------------------------------------------
# bracket abstraction


def free_in(v: str, t: CombTerm) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, VarRef):
            if u.name == v:
                return True
        elif isinstance(u, App):
            stack.append(u.fn)
            stack.append(u.arg)
        elif isinstance(u, PairVal):
            stack.append(u.left)
            stack.append(u.right)
        elif isinstance(u, Lam):
            if u.var != v:
                stack.append(u.body)
    return False


def bracket_abstract(v: str, t: CombTerm) -> CombTerm:
    """Eliminate v from a Lam-free term:

        [v]v       = S K K
        [v]M       = K M            when v is not free in M
        [v](M N)   = S ([v]M) ([v]N)
    """
    if isinstance(t, VarRef) and t.name == v:
        return App(App(S, K), K)
    if not free_in(v, t):
        return App(K, t)
    if isinstance(t, App):
        return App(App(S, bracket_abstract(v, t.fn)), bracket_abstract(v, t.arg))
    raise CompileError(f"cannot abstract {v} over {t!r}")


def compile_term(t: CombTerm) -> CombTerm:
    """Eliminate all lambdas, innermost first; the input must be closed."""
    out = _compile(t)
    _check_closed(out)
    return out


def _compile(t: CombTerm) -> CombTerm:
    if isinstance(t, App):
        return App(_compile(t.fn), _compile(t.arg))
    if isinstance(t, Lam):
        return bracket_abstract(t.var, _compile(t.body))
    if isinstance(t, PairVal):
        return PairVal(_compile(t.left), _compile(t.right))
    return t


def _check_closed(t: CombTerm):
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, VarRef):
            raise CompileError(f"free variable {u.name}")
        if isinstance(u, App):
            stack.append(u.fn)
            stack.append(u.arg)
        elif isinstance(u, PairVal):
            stack.append(u.left)
            stack.append(u.right)


# ---------------------------------------------------------------------------
# textual syntax


def print_term(t: CombTerm) -> str:
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Num):
        return f"(num {t.value})"
    if isinstance(t, VarRef):
        return t.name
    if isinstance(t, Lam):
        return f"(lam {t.var} {print_term(t.body)})"
    if isinstance(t, PairVal):
        return f"(P {print_term(t.left)} {print_term(t.right)})"
    parts = []
    head = t
    while isinstance(head, App):
        parts.append(head.arg)
        head = head.fn
    parts.append(head)
    parts.reverse()
    return "(" + " ".join(print_term(p) for p in parts) + ")"


def _tokenize(text: str) -> list:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif c in "()":
            out.append(c)
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "();":
                j += 1
            out.append(text[i:j])
            i = j
    return out


def parse_term(text: str) -> CombTerm:
    tokens = _tokenize(text)
    term, rest = _parse_one(tokens)
    if rest:
        raise ParseError(f"trailing tokens: {rest[:3]}")
    return term


def _parse_one(tokens: list):
    if not tokens:
        raise ParseError("unexpected end of input")
    tok = tokens[0]
    if tok == ")":
        raise ParseError("unexpected )")
    if tok != "(":
        return _parse_atom(tok), tokens[1:]
    tokens = tokens[1:]
    if not tokens:
        raise ParseError("unterminated (")
    if tokens[0] == "lam":
        if len(tokens) < 2:
            raise ParseError("lam needs a variable")
        var = tokens[1]
        body, rest = _parse_one(tokens[2:])
        if not rest or rest[0] != ")":
            raise ParseError("unterminated lam")
        return Lam(var, body), rest[1:]
    if tokens[0] == "num":
        if len(tokens) < 3 or tokens[2] != ")":
            raise ParseError("num needs a literal")
        try:
            return Num(int(tokens[1])), tokens[3:]
        except ValueError:
            raise ParseError(f"bad numeral {tokens[1]}") from None
    if tokens[0] == "app":
        tokens = tokens[1:]
    parts = []
    while tokens and tokens[0] != ")":
        p, tokens = _parse_one(tokens)
        parts.append(p)
    if not tokens:
        raise ParseError("unterminated (")
    if not parts:
        raise ParseError("empty application")
    term = parts[0]
    for p in parts[1:]:
        term = App(term, p)
    return term, tokens[1:]


def _parse_atom(tok: str) -> CombTerm:
    if tok in _CONSTS:
        return _CONSTS[tok]
    if tok.lstrip("-").isdigit():
        n = int(tok)
        if n < 0:
            raise ParseError("negative numeral")
        return Num(n)
    if tok[0].isalpha() or tok[0] == "_":
        return VarRef(tok)
    raise ParseError(f"unknown token {tok}")
