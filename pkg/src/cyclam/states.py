"""Prefixed terms ``(x1 … xn) T`` and the single-step decomposition rules."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .graph import ABS, APP, VAR, TermGraph, compress_env
from .terms import Term, alpha_eq_terms, pretty

__all__ = [
    "RuleLabel", "Strategy", "PrefixedState", "prefix_names", "decompose_step",
    "compress", "alpha_eq", "is_prefix", "make_state",
]


class RuleLabel(enum.Enum):
    APP_LEFT = "@0"
    APP_RIGHT = "@1"
    LAM = "λ"
    S = "S"
    DEL = "del"

    def __str__(self):
        return self.value


class Strategy(enum.Enum):
    REG = "reg"
    REG_PLUS = "reg+"

    def __str__(self):
        return self.value


_BASE = "xyzuvw"


def prefix_names(n: int) -> list:
    return [_BASE[i % 6] + (str(i // 6) if i >= 6 else "") for i in range(n)]


def is_prefix(p: str, q: str) -> bool:
    """Prefix order on positions: p ≤ q."""
    return q.startswith(p)


@dataclass(frozen=True, eq=False)
class PrefixedState:
    """A prefixed term over a compiled graph.

    ``node``/``env`` is the resolved body descriptor whose env values are
    prefix indices; ``shown`` is the descriptor used for printing (it may
    still be a call).  ``positions``/``q`` are the optional position
    annotations.
    """

    graph: TermGraph
    n: int
    node: int
    env: tuple
    shown: tuple
    positions: tuple | None = None
    q: str | None = None
    _key: tuple = field(default=None, repr=False)

    @property
    def key(self) -> tuple:
        """α-canonical form: (prefix length, live prefix indices, body class)."""
        if self._key is None:
            used, dense = compress_env(self.env)
            object.__setattr__(self, "_key", (self.n, used, self.graph.encoding(self.node, dense)))
        return self._key

    @property
    def annotated(self) -> bool:
        return self.positions is not None

    def __eq__(self, other):
        if not isinstance(other, PrefixedState):
            return NotImplemented
        return self.key == other.key and self.positions == other.positions and self.q == other.q

    def __hash__(self):
        return hash((self.key, self.positions, self.q))

    @property
    def used(self) -> frozenset:
        return frozenset(v for v in self.env if v is not None)

    def vacuous(self) -> list:
        used = self.used
        return [i for i in range(self.n) if i not in used]

    def prefix(self, names=None) -> list:
        return list(names) if names is not None else prefix_names(self.n)

    def body_term(self, names=None) -> Term:
        names = self.prefix(names)
        return self.graph.show(self.shown[0], self.shown[1], names)

    def format(self, names=None) -> str:
        names = self.prefix(names)
        return f"({' '.join(names)}) {pretty(self.body_term(names))}"

    def __str__(self):
        text = self.format()
        if self.annotated:
            ps = ", ".join(p or "ε" for p in self.positions)
            text += f" @ [{ps}] {self.q or 'ε'}"
        return text

    def __repr__(self):
        return f"PrefixedState({self})"

    @property
    def kind(self) -> int:
        return self.graph.kind[self.node]

    def drop(self, i: int) -> "PrefixedState":
        """Remove prefix entry ``i``; the caller guarantees it is vacuous."""
        def shift(env):
            return tuple(None if v is None else v - (v > i) for v in env)
        positions = None
        if self.positions is not None:
            positions = self.positions[:i] + self.positions[i + 1:]
        return PrefixedState(self.graph, self.n - 1, self.node, shift(self.env),
                             (self.shown[0], shift(self.shown[1])), positions, self.q)

    def strip(self) -> "PrefixedState":
        if self.positions is None:
            return self
        return PrefixedState(self.graph, self.n, self.node, self.env, self.shown)

    def annotate(self, positions: tuple, q: str) -> "PrefixedState":
        return PrefixedState(self.graph, self.n, self.node, self.env, self.shown,
                             tuple(positions), q)


def _state(graph: TermGraph, n: int, node: int, env: tuple, positions=None, q=None):
    rnode, renv = graph.resolve(node, env)
    return PrefixedState(graph, n, rnode, renv, (node, graph.restrict(node, env)), positions, q)


def make_state(graph: TermGraph, names, body: Term) -> PrefixedState:
    """State ``(names) body``; ``body`` may call the graph's equations."""
    names = tuple(names)
    root = graph.add_root(body, names)
    return _state(graph, len(names), root, tuple(range(len(names))))


def decompose_step(state: PrefixedState, strategy: Strategy) -> list:
    """All steps the eager strategy permits, in the order @0 < @1 < λ < S < del."""
    vac = state.vacuous()
    if strategy is Strategy.REG:
        if vac:
            return [(RuleLabel.DEL, state.drop(i)) for i in vac]
    elif vac and vac[-1] == state.n - 1:
        return [(RuleLabel.S, state.drop(state.n - 1))]
    g = state.graph
    kind = g.kind[state.node]
    ann = state.positions is not None
    if kind == APP:
        out = []
        for side, (child, cenv) in enumerate(g.children(state.node, state.env)):
            label = RuleLabel.APP_LEFT if side == 0 else RuleLabel.APP_RIGHT
            if ann:
                succ = _state(g, state.n, child, cenv, state.positions, state.q + str(side))
            else:
                succ = _state(g, state.n, child, cenv)
            out.append((label, succ))
        return out
    if kind == ABS:
        (child, cenv), = g.children(state.node, state.env, state.n)
        if ann:
            succ = _state(g, state.n + 1, child, cenv, state.positions + (state.q,), state.q + "00")
        else:
            succ = _state(g, state.n + 1, child, cenv)
        return [(RuleLabel.LAM, succ)]
    assert kind == VAR
    return []


def compress(state: PrefixedState) -> PrefixedState:
    """Remove every vacuous prefix entry (the unique del-normal form)."""
    for i in reversed(state.vacuous()):
        state = state.drop(i)
    return state.strip()


def alpha_eq(a, b) -> bool:
    """α-equivalence of two prefixed states or of two finite terms.

    State annotations are compared only when both sides carry them.
    """
    if isinstance(a, PrefixedState) and isinstance(b, PrefixedState):
        if a.key != b.key:
            return False
        if a.annotated and b.annotated:
            return a.positions == b.positions and a.q == b.q
        return True
    if isinstance(a, PrefixedState) or isinstance(b, PrefixedState):
        raise TypeError("alpha_eq needs two states or two terms")
    return alpha_eq_terms(a, b)
