"""Compiled node graphs for equation systems.

Every equation body and every extra root (the start expression, formula
bodies read from derivation files) is flattened into numbered nodes.  A
*descriptor* ``(node, env)`` denotes an infinite subterm: ``env`` assigns a
value to each variable slot in scope at ``node``.  The values are chosen by
the caller (prefix indices, binder positions, levels); slots whose variable
does not occur free below ``node`` are always ``None``.

Equality of denoted terms is decided by partition refinement over
*compressed* descriptors, whose env values are exactly ``0..k-1``.  Each
class gets an intrinsic encoding (its quotient automaton numbered in BFS
order), interned to a small integer shared by all graphs.
"""

from __future__ import annotations

import threading
from collections import deque

from .errors import OpenTermError, SystemDefinitionError
from .systems import RegularSystem
from .terms import Abs, App, Call, Term, Var, fresh_name, pretty

__all__ = ["VAR", "APP", "ABS", "CALL", "TermGraph", "compress_env", "intern_encoding"]

VAR, APP, ABS, CALL = range(4)

_intern_lock = threading.Lock()
_interned: dict = {}


def intern_encoding(enc: tuple) -> int:
    with _intern_lock:
        code = _interned.get(enc)
        if code is None:
            code = _interned[enc] = len(_interned)
        return code


def compress_env(env: tuple) -> tuple:
    """Return ``(used, dense_env)``: sorted live values and env renumbered."""
    used = sorted({v for v in env if v is not None})
    rank = {u: i for i, u in enumerate(used)}
    return tuple(used), tuple(None if v is None else rank[v] for v in env)


def _slot(scope: tuple, name: str) -> int:
    for i in range(len(scope) - 1, -1, -1):
        if scope[i] == name:
            return i
    raise OpenTermError(name)


class TermGraph:
    """Node graph of a RegularSystem plus any number of extra roots."""

    def __init__(self, system: RegularSystem):
        self.system = system
        self.kind: list = []
        self.a: list = []        # VAR: slot; APP: left; ABS: body; CALL: target root
        self.b: list = []        # APP: right; CALL: argument slots
        self.scope: list = []    # names of the slots in scope, outermost first
        self.binder: list = []   # ABS: source binder name
        self.fv: list = []       # frozenset of live slots
        self.eq_root: dict = {}
        self.eq_of_root: dict = {}
        self._lock = threading.RLock()
        self._classes: dict = {}     # compressed vertex -> refinement class
        self._enc: dict = {}         # compressed vertex -> interned encoding
        self._vsig: dict = {}        # compressed vertex -> (shape, successor vertices)
        pending = []
        for eq in system.equations:
            self.eq_root[eq.name] = self._new(CALL, None, None, eq.params)  # placeholder
            pending.append(eq)
        for eq in pending:
            root = self._compile(eq.body, tuple(eq.params))
            self._alias(self.eq_root[eq.name], root)
            self.eq_of_root[self.eq_root[eq.name]] = eq.name
        self._patch_calls(0)
        self._fixpoint()
        self.start = self.add_root(system.start, ())

    # construction

    def _new(self, kind, a, b, scope, binder=None) -> int:
        self.kind.append(kind)
        self.a.append(a)
        self.b.append(b)
        self.scope.append(tuple(scope))
        self.binder.append(binder)
        self.fv.append(frozenset())
        return len(self.kind) - 1

    def _alias(self, dst: int, src: int):
        for col in (self.kind, self.a, self.b, self.scope, self.binder):
            col[dst] = col[src]

    def _compile(self, t: Term, scope: tuple) -> int:
        if isinstance(t, Var):
            return self._new(VAR, _slot(scope, t.name), None, scope)
        if isinstance(t, App):
            return self._new(APP, self._compile(t.left, scope), self._compile(t.right, scope), scope)
        if isinstance(t, Abs):
            body = self._compile(t.body, scope + (t.binder,))
            return self._new(ABS, body, None, scope, t.binder)
        if isinstance(t, Call):
            slots = tuple(None if x is None else _slot(scope, x) for x in t.args)
            return self._new(CALL, t.name, slots, scope)
        raise SystemDefinitionError(f"illegal node in body: {pretty(t)}")

    def _patch_calls(self, first: int):
        for i in range(first, len(self.kind)):
            if self.kind[i] == CALL and isinstance(self.a[i], str):
                self.a[i] = self.eq_root[self.a[i]]

    def _fixpoint(self):
        changed = True
        while changed:
            changed = False
            for i in range(len(self.kind)):
                k = self.kind[i]
                if k == VAR:
                    new = frozenset((self.a[i],))
                elif k == APP:
                    new = self.fv[self.a[i]] | self.fv[self.b[i]]
                elif k == ABS:
                    new = self.fv[self.a[i]] - {len(self.scope[i])}
                else:
                    args = self.b[i]
                    new = frozenset(args[j] for j in self.fv[self.a[i]])
                    if None in new:
                        raise SystemDefinitionError(
                            f"dead argument passed to live parameter of "
                            f"{self.eq_of_root.get(self.a[i], '?')}")
                if new != self.fv[i]:
                    self.fv[i] = new
                    changed = True

    def add_root(self, body: Term, scope: tuple) -> int:
        """Compile an extra body whose free variables are the names in ``scope``."""
        with self._lock:
            first = len(self.kind)
            root = self._compile(body, tuple(scope))
            self._patch_calls(first)
            self._fixpoint()
            return root

    # descriptors

    def restrict(self, node: int, env: tuple) -> tuple:
        fv = self.fv[node]
        return tuple(v if i in fv else None for i, v in enumerate(env))

    def resolve(self, node: int, env: tuple) -> tuple:
        """Follow calls until a constructor node; returns a normalized descriptor."""
        guard = len(self.eq_root) + 1
        while self.kind[node] == CALL:
            guard -= 1
            if guard < 0:
                raise SystemDefinitionError("unproductive source")
            env = tuple(None if s is None else env[s] for s in self.b[node])
            node = self.a[node]
        return node, self.restrict(node, env)

    def children(self, node: int, env: tuple, fresh=None) -> list:
        """Unresolved child descriptors of a constructor node.

        For ABS the binder slot receives ``fresh``.
        """
        k = self.kind[node]
        if k == APP:
            l, r = self.a[node], self.b[node]
            return [(l, self.restrict(l, env)), (r, self.restrict(r, env))]
        if k == ABS:
            body = self.a[node]
            return [(body, self.restrict(body, env + (fresh,)))]
        return []

    def var_value(self, node: int, env: tuple):
        return env[self.a[node]]

    # α-classes

    def _vertex_sig(self, v: tuple) -> tuple:
        """Shape and successors of a compressed vertex ``(node, env)``."""
        sig = self._vsig.get(v)
        if sig is not None:
            return sig
        node, env = v
        k = sum(1 for x in set(env) if x is not None)
        kind = self.kind[node]
        if kind == VAR:
            sig = (("v",), ())
        else:
            shape, succ = [kind, k], []
            for child, cenv in self.children(node, env, k):
                cn, cenv = self.resolve(child, cenv)
                used, dense = compress_env(cenv)
                shape.append(used)
                succ.append((cn, dense))
            sig = (tuple(shape), tuple(succ))
        self._vsig[v] = sig
        return sig

    def _refine(self, seeds):
        """Extend the vertex set by the closure of ``seeds`` and re-partition."""
        todo = deque(v for v in seeds if v not in self._vsig)
        while todo:
            v = todo.popleft()
            if v in self._vsig:
                continue
            for w in self._vertex_sig(v)[1]:
                if w not in self._vsig:
                    todo.append(w)
        verts = list(self._vsig)
        cls = {v: 0 for v in verts}
        count = -1
        while True:
            keys = {}
            new = {}
            for v in verts:
                shape, succ = self._vsig[v]
                key = (shape, tuple(cls[w] for w in succ))
                new[v] = keys.setdefault(key, len(keys))
            cls = new
            if len(keys) == count:
                break
            count = len(keys)
        self._classes = cls
        self._rep = {}
        for v, c in cls.items():
            self._rep.setdefault(c, v)

    def encoding(self, node: int, env: tuple) -> int:
        """Interned α-class code of the compressed descriptor ``(node, env)``.

        ``node`` must be resolved and ``env`` dense.
        """
        v = (node, env)
        code = self._enc.get(v)
        if code is not None:
            return code
        with self._lock:
            if v not in self._classes:
                self._refine([v])
            cls = self._classes
            rep = self._rep
            number = {cls[v]: 0}
            order = [cls[v]]
            parts = []
            i = 0
            while i < len(order):
                shape, succ = self._vsig[rep[order[i]]]
                refs = []
                for w in succ:
                    c = cls[w]
                    if c not in number:
                        number[c] = len(order)
                        order.append(c)
                    refs.append(number[c])
                parts.append((shape, tuple(refs)))
                i += 1
            code = intern_encoding(tuple(parts))
            self._enc[v] = code
            return code

    # printing

    def show(self, node: int, env: tuple, names: list) -> Term:
        """Finite term for a display descriptor; env values index ``names``."""
        scope_names = [None if v is None else names[v] for v in env]
        return self._show(node, scope_names, set(names))

    def _show(self, node: int, slots: list, taken: set) -> Term:
        k = self.kind[node]
        if k == VAR:
            return Var(slots[self.a[node]])
        if k == APP:
            return App(self._show(self.a[node], slots, taken), self._show(self.b[node], slots, taken))
        if k == ABS:
            name = fresh_name(self.binder[node], taken)
            return Abs(name, self._show(self.a[node], slots + [name], taken | {name}))
        name = self.eq_of_root[self.a[node]]
        return Call(name, tuple(None if s is None else slots[s] for s in self.b[node]))
