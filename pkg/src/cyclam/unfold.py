"""μ-unfolding, guardedness, and lazy handles on infinite terms.

Substitution works on a nameless form: bound variables are distances to
their binder, binders keep their source name only as a printing hint.
"""

from __future__ import annotations

import threading

from .errors import OpenTermError, SystemDefinitionError, UnguardedError
from .graph import APP, VAR, TermGraph
from .states import PrefixedState, _state
from .systems import RegularSystem, system_from_term
from .terms import Abs, App, Cut, Mu, Term, Var, free_vars, fresh_name

__all__ = [
    "unfold_step", "is_mu_guarded", "unfold_to_depth", "InfiniteTermHandle",
    "handle_of", "truncate", "to_nameless", "from_nameless",
]


def to_nameless(t: Term, ctx: tuple = ()) -> tuple:
    if isinstance(t, Var):
        for i in range(len(ctx) - 1, -1, -1):
            if ctx[i] == t.name:
                return ("v", len(ctx) - 1 - i)
        return ("f", t.name)
    if isinstance(t, App):
        return ("a", to_nameless(t.left, ctx), to_nameless(t.right, ctx))
    if isinstance(t, Abs):
        return ("l", t.binder, to_nameless(t.body, ctx + (t.binder,)))
    if isinstance(t, Mu):
        return ("m", t.binder, to_nameless(t.body, ctx + (t.binder,)))
    if isinstance(t, Cut):
        return ("_",)
    raise TypeError(f"not a λμ-term: {t!r}")


def _loose(d: tuple, depth: int = 0) -> set:
    """Distances (relative to the outside of ``d``) of its dangling indices."""
    tag = d[0]
    if tag == "v":
        return {d[1] - depth} if d[1] >= depth else set()
    if tag == "a":
        return _loose(d[1], depth) | _loose(d[2], depth)
    if tag in "lm":
        return _loose(d[2], depth + 1)
    return set()


def from_nameless(d: tuple, ctx: tuple = ()) -> Term:
    """Named term; a binder keeps its hint unless that would capture."""
    tag = d[0]
    if tag == "v":
        return Var(ctx[len(ctx) - 1 - d[1]])
    if tag == "f":
        return Var(d[1])
    if tag == "a":
        return App(from_nameless(d[1], ctx), from_nameless(d[2], ctx))
    if tag == "_":
        return Cut()
    visible = {ctx[len(ctx) - i] for i in _loose(d[2]) if i >= 1}
    visible |= _free_names(d[2])
    name = fresh_name(d[1], visible)
    node = Abs if tag == "l" else Mu
    return node(name, from_nameless(d[2], ctx + (name,)))


def _free_names(d: tuple) -> set:
    tag = d[0]
    if tag == "f":
        return {d[1]}
    if tag == "a":
        return _free_names(d[1]) | _free_names(d[2])
    if tag in "lm":
        return _free_names(d[2])
    return set()


def _shift(d: tuple, by: int, cutoff: int = 0) -> tuple:
    tag = d[0]
    if tag == "v":
        return ("v", d[1] + by) if d[1] >= cutoff else d
    if tag == "a":
        return ("a", _shift(d[1], by, cutoff), _shift(d[2], by, cutoff))
    if tag in "lm":
        return (tag, d[1], _shift(d[2], by, cutoff + 1))
    return d


def _subst(d: tuple, j: int, val: tuple, closed: bool) -> tuple:
    """Replace index ``j`` by ``val`` (given at depth 0) and close the gap."""
    tag = d[0]
    if tag == "v":
        if d[1] == j:
            return val if closed else _shift(val, j)
        return ("v", d[1] - 1) if d[1] > j else d
    if tag == "a":
        return ("a", _subst(d[1], j, val, closed), _subst(d[2], j, val, closed))
    if tag in "lm":
        return (tag, d[1], _subst(d[2], j + 1, val, closed))
    return d


def _unfold_root(d: tuple) -> tuple:
    return _subst(d[2], 0, d, not _loose(d))


def unfold_step(term: Term) -> Term:
    """Unfold every outermost μ-redex once, in parallel."""
    def go(d):
        tag = d[0]
        if tag == "m":
            return _unfold_root(d)
        if tag == "a":
            return ("a", go(d[1]), go(d[2]))
        if tag == "l":
            return ("l", d[1], go(d[2]))
        return d
    return from_nameless(go(to_nameless(term)))


def is_mu_guarded(term: Term) -> bool:
    """No μ-binder reaches its own variable through μ-binders only."""
    if free_vars(term):
        raise OpenTermError(sorted(free_vars(term))[0])
    try:
        system_from_term(term)
    except SystemDefinitionError:
        return False
    return True


def unfold_to_depth(term: Term, depth: int) -> Term:
    """Truncation of the infinite μ-unfolding of ``term`` at node depth ``depth``."""
    if not is_mu_guarded(term):
        raise UnguardedError()

    def go(d, k, ctx):
        if k == 0:
            return Cut()
        while d[0] == "m":
            d = _unfold_root(d)
        tag = d[0]
        if tag == "v":
            return Var(ctx[len(ctx) - 1 - d[1]])
        if tag == "a":
            return App(go(d[1], k - 1, ctx), go(d[2], k - 1, ctx))
        name = fresh_name(d[1], set(ctx))
        return Abs(name, go(d[2], k - 1, ctx + (name,)))

    return go(to_nameless(term), depth, ())


class InfiniteTermHandle:
    """Lazily expandable infinite λ-term.

    Descriptors are ``(node, env, level)``: ``env`` values are binder levels
    (0 for the outermost λ), ``level`` counts the enclosing binders.
    Expansion is memoized.
    """

    def __init__(self, source, system: RegularSystem):
        self.source = source
        self.system = system
        self.graph = TermGraph(system)
        self._memo: dict = {}
        self._lock = threading.Lock()

    @property
    def root(self) -> tuple:
        return (self.graph.start, (), 0)

    def expand(self, desc: tuple) -> tuple:
        """``("var", level)`` | ``("app", d0, d1)`` | ``("abs", name, d)``."""
        hit = self._memo.get(desc)
        if hit is not None:
            return hit
        node, env, level = desc
        g = self.graph
        node, env = g.resolve(node, env)
        kind = g.kind[node]
        if kind == VAR:
            out = ("var", g.var_value(node, env))
        elif kind == APP:
            (l, le), (r, re) = g.children(node, env)
            out = ("app", (l, le, level), (r, re, level))
        else:
            (b, be), = g.children(node, env, level)
            out = ("abs", g.binder[node], (b, be, level + 1))
        with self._lock:
            self._memo[desc] = out
        return out

    def start_state(self, annotated: bool = False) -> PrefixedState:
        s = _state(self.graph, 0, self.graph.start, ())
        return s.annotate((), "") if annotated else s

    def __repr__(self):
        return f"InfiniteTermHandle({self.system!s})"


def handle_of(source) -> InfiniteTermHandle:
    """Handle for a guarded closed λμ-term or an equation system."""
    if isinstance(source, InfiniteTermHandle):
        return source
    if isinstance(source, RegularSystem):
        return InfiniteTermHandle(source, source)
    fv = free_vars(source)
    if fv:
        raise OpenTermError(sorted(fv)[0])
    try:
        system = system_from_term(source)
    except SystemDefinitionError:
        raise UnguardedError() from None
    return InfiniteTermHandle(source, system)


def truncate(handle: InfiniteTermHandle, depth: int) -> Term:
    """Finite tree of the top ``depth`` node levels, ``Cut`` below."""
    def go(desc, k, names):
        if k == 0:
            return Cut()
        out = handle.expand(desc)
        if out[0] == "var":
            return Var(names[out[1]])
        if out[0] == "app":
            return App(go(out[1], k - 1, names), go(out[2], k - 1, names))
        name = fresh_name(out[1], set(names))
        return Abs(name, go(out[2], k - 1, names + (name,)))
    return go(handle.root, depth, ())
