"""Direct recursive evaluator of the bounded realisability clauses, written
against the clause list itself rather than the production checker.  Both
implementations pin the same truncation policy (documented in the checker's
module docstring); agreement between them is an acceptance requirement.

Three-valued results use the strings "yes" / "no" / "unknown"."""

from cmr import pca, syntax
from cmr.pca import App, Converged, Num, P0, P1, PairVal
from cmr.realcheck import DEFAULT_CANDIDATES, _SANITY_PROBES
from cmr.syntax import (And, Eq, Exists, ForAll, Implies, In1, In2, Not, Or,
                        Prec, Sort)


def direct_realizes(d, formula, env, bounds) -> str:
    o = pca.reduce(d, bounds.fuel)
    if not isinstance(o, Converged):
        return "unknown"
    return _go(o.value, formula, env, bounds)


def _run(t, bounds):
    o = pca.reduce(t, bounds.fuel)
    return o.value if isinstance(o, Converged) else None


def _nat(t, bounds):
    v = _run(t, bounds)
    return None if v is None else pca.value_as_nat(v, bounds.fuel)


def _term_val(t, env):
    if isinstance(t, syntax.Var):
        return env.nats[t.name]
    if isinstance(t, syntax.Zero):
        return 0
    if isinstance(t, syntax.Succ):
        return _term_val(t.arg, env) + 1
    if isinstance(t, syntax.Add):
        return _term_val(t.left, env) + _term_val(t.right, env)
    return _term_val(t.left, env) * _term_val(t.right, env)


def _atom(f, env, bounds):
    """1 / 0 / None for the three probe atoms."""
    if isinstance(f, In1):
        return _nat(App(env.sets[f.set_.name], Num(_term_val(f.elem, env))), bounds)
    if isinstance(f, In2):
        return _nat(App(env.classes[f.class_.name], env.sets[f.elem.name]), bounds)
    return _nat(App(env.prec_interp,
                    PairVal(env.sets[f.left.name], env.sets[f.right.name])), bounds)


def _cap(bounds):
    from cmr.coding import pair
    return pair(bounds.N, bounds.N) + 1


def _truth(f, env, bounds):
    if isinstance(f, Eq):
        return _term_val(f.left, env) == _term_val(f.right, env)
    if isinstance(f, (In1, In2, Prec)):
        got = _atom(f, env, bounds)
        return None if got not in (0, 1) else got == 1
    if isinstance(f, (ForAll, Exists)) and f.sort == Sort.FIRST:
        for k in range(_cap(bounds)):
            sub = _truth(syntax.substitute(f.body, f.var, syntax.numeral(k),
                                           Sort.FIRST), env, bounds)
            if isinstance(f, Exists) and sub is True:
                return True
            if isinstance(f, ForAll) and sub is False:
                return False
        return None
    if isinstance(f, And):
        a, b = _truth(f.left, env, bounds), _truth(f.right, env, bounds)
        if a is False or b is False:
            return False
        return True if a is True and b is True else None
    if isinstance(f, Or):
        a, b = _truth(f.left, env, bounds), _truth(f.right, env, bounds)
        if a is True or b is True:
            return True
        return False if a is False and b is False else None
    if isinstance(f, Not):
        a = _truth(f.body, env, bounds)
        return None if a is None else not a
    if isinstance(f, Implies):
        a, b = _truth(f.left, env, bounds), _truth(f.right, env, bounds)
        if a is False or b is True:
            return True
        return False if a is True and b is False else None
    return None


def _canon(f, env, bounds):
    if isinstance(f, (Eq, In1, In2, Prec)):
        return Num(0) if _truth(f, env, bounds) else None
    if isinstance(f, And):
        a, b = _canon(f.left, env, bounds), _canon(f.right, env, bounds)
        return None if a is None or b is None else PairVal(a, b)
    if isinstance(f, Or):
        a = _canon(f.left, env, bounds)
        if a is not None:
            return PairVal(Num(0), a)
        b = _canon(f.right, env, bounds)
        return None if b is None else PairVal(Num(1), b)
    if isinstance(f, Not):
        return Num(0) if _truth(f.body, env, bounds) is False else None
    if isinstance(f, Implies):
        if _truth(f.left, env, bounds) is False:
            return App(pca.K, Num(0))
        b = _canon(f.right, env, bounds)
        return None if b is None else App(pca.K, b)
    if isinstance(f, Exists) and f.sort == Sort.FIRST:
        for k in range(_cap(bounds)):
            b = _canon(syntax.substitute(f.body, f.var, syntax.numeral(k),
                                         Sort.FIRST), env, bounds)
            if b is not None:
                return PairVal(Num(k), b)
        return None
    return None


def _go(d, f, env, bounds) -> str:
    if isinstance(f, Eq):
        return "yes" if _term_val(f.left, env) == _term_val(f.right, env) else "no"
    if isinstance(f, (In1, In2, Prec)):
        got = _atom(f, env, bounds)
        return {1: "yes", 0: "no"}.get(got, "unknown")

    if isinstance(f, And):
        subs = []
        for proj, side in ((P0, f.left), (P1, f.right)):
            v = _run(App(proj, d), bounds)
            if v is None:
                return "unknown"
            subs.append(_go(v, side, env, bounds))
        return _merge(subs)

    if isinstance(f, Or):
        tag = _nat(App(P0, d), bounds)
        if tag is None:
            return "unknown"
        if tag not in (0, 1):
            return "no"
        body = _run(App(P1, d), bounds)
        if body is None:
            return "unknown"
        return _go(body, f.left if tag == 0 else f.right, env, bounds)

    if isinstance(f, Not):
        t = _truth(f.body, env, bounds)
        if t is False:
            return "yes"
        if t is True:
            return "no"
        for e in list(bounds.samples) + list(DEFAULT_CANDIDATES):
            if _go(e, f.body, env, bounds) == "yes":
                return "no"
        return "unknown"

    if isinstance(f, Implies):
        t = _truth(f.left, env, bounds)
        if t is False:
            return "yes"
        if t is True:
            c = _canon(f.left, env, bounds)
            pool = [] if c is None else [c]
        else:
            pool = [e for e in list(bounds.samples) + list(DEFAULT_CANDIDATES)
                    if _go(e, f.left, env, bounds) == "yes"]
        if not pool:
            return "unknown"
        subs = []
        for e in pool:
            v = _run(App(d, e), bounds)
            if v is None:
                return "unknown"
            subs.append(_go(v, f.right, env, bounds))
        return _merge(subs)

    if isinstance(f, ForAll):
        if f.sort == Sort.FIRST:
            subs = []
            for k in range(bounds.N):
                v = _run(App(d, Num(k)), bounds)
                if v is None:
                    return "unknown"
                sub = _go(v, syntax.substitute(f.body, f.var, syntax.numeral(k),
                                               Sort.FIRST), env, bounds)
                if sub == "no":
                    return "no"
                subs.append(sub)
            return _merge(subs)
        if not bounds.samples:
            return "unknown"
        subs = []
        for s in bounds.samples:
            v = _run(App(d, s), bounds)
            if v is None:
                return "unknown"
            sub = _go(v, f.body, env.bind(f.var, f.sort, s), bounds)
            if sub == "no":
                return "no"
            subs.append(sub)
        return _merge(subs)

    if isinstance(f, Exists):
        head = _run(App(P0, d), bounds)
        body = _run(App(P1, d), bounds)
        if head is None or body is None:
            return "unknown"
        if f.sort == Sort.FIRST:
            w = pca.value_as_nat(head, bounds.fuel)
            if w is None:
                return "unknown"
            return _go(body, syntax.substitute(f.body, f.var, syntax.numeral(w),
                                               Sort.FIRST), env, bounds)
        probes = ([Num(i) for i in range(min(bounds.N, _SANITY_PROBES))]
                  if f.sort == Sort.SECOND else bounds.samples[:2])
        for q in probes:
            if _nat(App(head, q), bounds) not in (0, 1):
                return "unknown"
        return _go(body, f.body, env.bind(f.var, f.sort, head), bounds)

    raise TypeError(f"not a core formula: {f!r}")


def _merge(subs):
    if "no" in subs:
        return "no"
    if any(s != "yes" for s in subs):
        return "unknown"
    return "yes"
