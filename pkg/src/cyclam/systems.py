"""First-order equation systems denoting infinite λ-terms.

``R(x) = \\y. (R(y)) x ; start \\x. R(x)`` denotes the term
λx.λy.(λz.(… z) y) x in which every binder captures the variable of the
previous one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OpenTermError, SystemDefinitionError
from .syntax import Parser
from .terms import Abs, App, Call, Mu, Term, Var, free_vars, pretty

__all__ = ["Equation", "RegularSystem", "parse_regular_system", "system_from_term"]


@dataclass(frozen=True, slots=True)
class Equation:
    name: str
    params: tuple
    body: Term


@dataclass(frozen=True)
class RegularSystem:
    equations: tuple
    start: Term

    def __post_init__(self):
        _validate(self)

    def equation(self, name: str) -> Equation:
        for eq in self.equations:
            if eq.name == name:
                return eq
        raise KeyError(name)

    def __str__(self):
        lines = [f"{eq.name}({', '.join(eq.params)}) = {pretty(eq.body)} ;"
                 for eq in self.equations]
        lines.append(f"start {pretty(self.start)}")
        return "\n".join(lines)


def _walk_body(t: Term, scope: frozenset, arity: dict, where: str):
    if isinstance(t, Var):
        if t.name not in scope:
            raise OpenTermError(t.name)
    elif isinstance(t, App):
        _walk_body(t.left, scope, arity, where)
        _walk_body(t.right, scope, arity, where)
    elif isinstance(t, Abs):
        if t.binder in arity:
            raise SystemDefinitionError(f"binder {t.binder} clashes with an equation name")
        _walk_body(t.body, scope | {t.binder}, arity, where)
    elif isinstance(t, Call):
        if t.name not in arity:
            raise SystemDefinitionError(f"undefined equation {t.name} in {where}")
        if len(t.args) != arity[t.name]:
            raise SystemDefinitionError(
                f"arity mismatch: {t.name} expects {arity[t.name]} arguments, "
                f"got {len(t.args)} in {where}")
        for a in t.args:
            if a is not None and a not in scope:
                raise OpenTermError(a)
    else:
        raise SystemDefinitionError(f"illegal node in {where}: {pretty(t)}")


def _validate(system: RegularSystem):
    arity = {}
    for eq in system.equations:
        if eq.name in arity:
            raise SystemDefinitionError(f"duplicate equation {eq.name}")
        if len(set(eq.params)) != len(eq.params):
            raise SystemDefinitionError(f"repeated parameter in {eq.name}")
        arity[eq.name] = len(eq.params)
    for eq in system.equations:
        _walk_body(eq.body, frozenset(eq.params), arity, eq.name)
    _walk_body(system.start, frozenset(), arity, "start")
    # an equation whose body is a bare call emits no constructor
    succ = {eq.name: eq.body.name for eq in system.equations if isinstance(eq.body, Call)}
    for name in arity:
        seen = []
        cur = name
        while cur in succ and cur not in seen:
            seen.append(cur)
            cur = succ[cur]
        if cur in seen:
            raise SystemDefinitionError(f"unguarded cycle through {cur}")


def parse_regular_system(text: str) -> RegularSystem:
    """Parse and validate an equation system."""
    p = Parser(text)
    # equation names are needed up front to tell calls from applications
    names = set()
    for k in range(len(p.toks) - 1):
        tok, nxt = p.toks[k], p.toks[k + 1]
        if tok[0] == "ident" and nxt[0] == "(" and (k == 0 or p.toks[k - 1][0] == ";"):
            names.add(tok[1])
    p.calls = frozenset(names)
    equations = []
    while p.peek[0] != "start":
        if p.peek[0] == "eof":
            p.fail("missing start expression")
        name = p.expect("ident")[1]
        p.expect("(")
        params = []
        if p.peek[0] != ")":
            params.append(p.expect("ident")[1])
            while p.peek[0] == ",":
                p.next()
                params.append(p.expect("ident")[1])
        p.expect(")")
        p.expect("=")
        body = p.term()
        p.expect(";")
        equations.append(Equation(name, tuple(params), body))
    p.expect("start")
    start = p.term()
    if p.peek[0] == ";":
        p.next()
    p.at_end()
    return RegularSystem(tuple(equations), start)


def system_from_term(term: Term) -> RegularSystem:
    """Translate a closed λμ-term into an equation system.

    Each μ-binder becomes an equation whose parameters are the λ-variables
    free in its μ-subterm; occurrences of the μ-variable become calls.  An
    unguarded term raises SystemDefinitionError.
    """
    term = _distinct_binders(term)
    taken = set(_names(term))
    equations = []

    def fresh_eq(hint):
        k = 1
        while f"{hint.upper()}{k}" in taken:
            k += 1
        taken.add(f"{hint.upper()}{k}")
        return f"{hint.upper()}{k}"

    def go(t, lam_scope, mu_env):
        if isinstance(t, Var):
            if t.name in mu_env:
                return mu_env[t.name]
            return t
        if isinstance(t, App):
            return App(go(t.left, lam_scope, mu_env), go(t.right, lam_scope, mu_env))
        if isinstance(t, Abs):
            return Abs(t.binder, go(t.body, lam_scope + (t.binder,), mu_env))
        if isinstance(t, Mu):
            fv = set(free_vars(t))
            for g in list(fv):
                if g in mu_env:
                    fv.update(mu_env[g].args)
            params = tuple(n for n in lam_scope if n in fv)
            call = Call(fresh_eq(t.binder), params)
            body = go(t.body, lam_scope, {**mu_env, t.binder: call})
            equations.append(Equation(call.name, params, body))
            return call
        raise SystemDefinitionError(f"illegal node in λμ-term: {pretty(t)}")

    start = go(term, (), {})
    return RegularSystem(tuple(reversed(equations)), start)


def _names(t: Term):
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, App):
        yield from _names(t.left)
        yield from _names(t.right)
    elif isinstance(t, (Abs, Mu)):
        yield t.binder
        yield from _names(t.body)


def _distinct_binders(t: Term) -> Term:
    """α-rename so that no two binders share a name."""
    taken = set()

    def go(t, env):
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, App):
            return App(go(t.left, env), go(t.right, env))
        name = t.binder
        k = 0
        while name in taken:
            k += 1
            name = f"{t.binder}{k}"
        taken.add(name)
        return type(t)(name, go(t.body, {**env, t.binder: name}))

    return go(t, {})
