"""Exploration of generated subterms under the two eager strategies.

Besides the breadth-first closure this module holds the pumping rule that
turns a growing-prefix loop into a definitive "infinitely many states"
verdict, the projection of reg+ sequences onto reg sequences and its
converse lifting, and the position-annotated exploration tree.
"""

from __future__ import annotations

import enum
import os
from collections import deque
from dataclasses import dataclass, field

from .states import PrefixedState, RuleLabel, Strategy, compress, decompose_step

__all__ = [
    "Budget", "Verdict", "Answer", "PumpWitness", "TransitionGraph", "RegularityResult",
    "explore", "is_regular", "is_strongly_regular", "project_sequence", "lift_sequence",
    "is_del_reduct", "AnnotatedNode", "AnnotatedTree", "explore_annotated", "start_state",
]


@dataclass(frozen=True)
class Budget:
    max_states: int = 10_000
    max_prefix: int = 64
    max_depth: int = 256

    def __post_init__(self):
        if min(self.max_states, self.max_prefix, self.max_depth) <= 0:
            raise ValueError("budget limits must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "Budget":
        """Default budget, with CYCLAM_BUDGET overriding ``max_states``."""
        raw = os.environ.get("CYCLAM_BUDGET")
        if raw and "max_states" not in overrides:
            overrides["max_states"] = int(raw)
        return cls(**overrides)


class Verdict(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    BUDGET_EXHAUSTED = "budget-exhausted"


class Answer(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def start_state(source) -> PrefixedState:
    if isinstance(source, PrefixedState):
        return source
    from .unfold import handle_of
    return handle_of(source).start_state()


@dataclass(frozen=True)
class PumpWitness:
    """Path ``start →* u →+ v`` whose ``u → v`` segment can be replayed forever.

    ``u`` and ``v`` compress to the same term, ``v`` has the longer prefix,
    no state on the segment is shorter than ``u`` (so no entry of ``u`` is
    removed), and the last prefix entry of both ``u`` and ``v`` is live.
    """

    start: PrefixedState
    stem: tuple
    cycle: tuple
    u: PrefixedState
    v: PrefixedState

    def replay(self, times: int = 2, annotated: bool = False) -> list:
        """States after the stem and after each replayed cycle.

        Every step is re-derived with decompose_step, so an invalid witness
        raises ValueError.
        """
        s = self.start.annotate((), "") if annotated else self.start
        s = _follow(s, self.stem)
        marks = [s]
        for _ in range(times + 1):
            s = _follow(s, self.cycle)
            marks.append(s)
        return marks

    def validate(self, times: int = 2) -> bool:
        """Replay the cycle ``times`` extra times; prefixes must strictly grow."""
        try:
            marks = self.replay(times)
        except ValueError:
            return False
        lengths = [m.n for m in marks]
        if any(b <= a for a, b in zip(lengths, lengths[1:])):
            return False
        return all(compress(m).key == compress(marks[0]).key for m in marks)

    def __str__(self):
        return (f"{self.u} ->+ {self.v} via "
                f"{' '.join(map(str, self.cycle))}")


def _follow(s: PrefixedState, labels) -> PrefixedState:
    for label in labels:
        for lab, t in decompose_step(s, Strategy.REG_PLUS):
            if lab is label:
                s = t
                break
        else:
            raise ValueError(f"step {label} not applicable to {s}")
    return s


@dataclass
class TransitionGraph:
    start: PrefixedState
    strategy: Strategy
    states: list = field(default_factory=list)
    edges: list = field(default_factory=list)       # (source index, label, target index)
    verdict: Verdict = Verdict.BUDGET_EXHAUSTED
    witness: PumpWitness | None = None
    parent: list = field(default_factory=list)      # BFS tree: (index, label) or None

    def __len__(self):
        return len(self.states)

    def index(self, state: PrefixedState) -> int:
        return self._index[state.key]

    def successors(self, i: int) -> list:
        return [(lab, j) for (a, lab, j) in self.edges if a == i]

    def path_to(self, i: int) -> list:
        """BFS-tree labels from the start to state ``i``."""
        labels = []
        while self.parent[i] is not None:
            i, lab = self.parent[i]
            labels.append(lab)
        return labels[::-1]

    @property
    def max_prefix(self) -> int:
        return max(s.n for s in self.states)


def _pump_witness(graph: TransitionGraph, j: int) -> PumpWitness | None:
    """Look back along the BFS-tree path to ``j`` for a pumpable segment."""
    v = graph.states[j]
    if v.n == 0 or v.n - 1 not in v.used:
        return None
    ckey = v.key[2]
    chain = [j]
    i = j
    while graph.parent[i] is not None:
        i = graph.parent[i][0]
        chain.append(i)
    low = v.n
    for pos in range(1, len(chain)):
        u = graph.states[chain[pos]]
        if 1 <= u.n <= low and u.n < v.n and u.n - 1 in u.used and u.key[2] == ckey:
            path = graph.path_to(j)
            depth_u = len(chain) - 1 - pos
            return PumpWitness(graph.start, tuple(path[:depth_u]), tuple(path[depth_u:]), u, v)
        low = min(low, u.n)
    return None


def explore(source, strategy: Strategy, budget: Budget | None = None, pump: bool = True) -> TransitionGraph:
    """Breadth-first closure of the generated subterms of ``source``.

    ``source`` is a handle, a λμ-term, a system, or a start state.
    """
    budget = budget or Budget()
    s0 = start_state(source)
    g = TransitionGraph(s0, strategy)
    g._index = {s0.key: 0}
    g.states.append(s0)
    g.parent.append(None)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for label, succ in decompose_step(g.states[i], strategy):
            k = succ.key
            j = g._index.get(k)
            if j is None:
                if len(g.states) >= budget.max_states:
                    g.verdict = Verdict.BUDGET_EXHAUSTED
                    return g
                j = len(g.states)
                g._index[k] = j
                g.states.append(succ)
                g.parent.append((i, label))
                g.edges.append((i, label, j))
                if pump and strategy is Strategy.REG_PLUS:
                    w = _pump_witness(g, j)
                    if w is not None:
                        g.verdict = Verdict.INFINITE
                        g.witness = w
                        return g
                if succ.n > budget.max_prefix:
                    g.verdict = Verdict.BUDGET_EXHAUSTED
                    return g
                queue.append(j)
            else:
                g.edges.append((i, label, j))
    g.verdict = Verdict.FINITE
    return g


@dataclass(frozen=True)
class RegularityResult:
    answer: Answer
    count: int | None = None
    witness: PumpWitness | None = None
    graph: TransitionGraph | None = field(default=None, repr=False, compare=False)

    def __bool__(self):
        return self.answer is Answer.YES


def _result(g: TransitionGraph) -> RegularityResult:
    if g.verdict is Verdict.FINITE:
        return RegularityResult(Answer.YES, len(g), graph=g)
    if g.verdict is Verdict.INFINITE:
        return RegularityResult(Answer.NO, witness=g.witness, graph=g)
    return RegularityResult(Answer.UNKNOWN, graph=g)


def is_regular(source, budget: Budget | None = None, pump: bool = True) -> RegularityResult:
    """Finitely many reg-generated subterms?"""
    return _result(explore(source, Strategy.REG, budget, pump))


def is_strongly_regular(source, budget: Budget | None = None, pump: bool = True) -> RegularityResult:
    """Finitely many reg+-generated subterms?"""
    return _result(explore(source, Strategy.REG_PLUS, budget, pump))


def is_del_reduct(a: PrefixedState, b: PrefixedState) -> bool:
    """Can ``b`` be reached from ``a`` by removing vacuous prefix entries?"""
    if compress(a).key != compress(b).key:
        return False

    def gaps(s):
        out, run = [], 0
        used = s.used
        for i in range(s.n):
            if i in used:
                out.append(run)
                run = 0
            else:
                run += 1
        out.append(run)
        return out

    return all(y <= x for x, y in zip(gaps(a), gaps(b)))


def _step(s: PrefixedState, strategy: Strategy, label: RuleLabel, target=None) -> PrefixedState | None:
    for lab, t in decompose_step(s, strategy):
        if lab is label and (target is None or t.key == target.key):
            return t
    return None


def project_sequence(start: PrefixedState, steps: list) -> list:
    """Map a reg+ sequence onto a reg sequence.

    ``steps`` is a list of ``(label, state)`` pairs forming a reg+ sequence
    from the del-normal ``start``.  S steps vanish; an @/λ step becomes the
    same step followed by del steps up to the next del-normal form.
    """
    if start.vacuous():
        raise ValueError("not a valid reg+ sequence: start state has vacuous bindings")
    out = []
    cur, t = start, start
    for label, nxt in steps:
        if _step(cur, Strategy.REG_PLUS, label, nxt) is None:
            raise ValueError(f"not a valid reg+ sequence: {label} from {cur}")
        cur = nxt
        if label is RuleLabel.S:
            continue
        t = _step(t, Strategy.REG, label)
        if t is None:
            raise ValueError(f"not a valid reg+ sequence: {label} has no reg image")
        out.append((label, t))
        while t.vacuous():
            t = t.drop(t.vacuous()[0])
            out.append((RuleLabel.DEL, t))
        if t.key != compress(cur).key:
            raise AssertionError("projection lost the compression correspondence")
    return out


def lift_sequence(start: PrefixedState, steps: list, max_steps: int = 10_000) -> list:
    """Lift a reg sequence from ``start`` to a reg+ sequence.

    Del steps lift to nothing; an @/λ step lifts to the S steps the reg+
    strategy forces, then the same step.  The search is bounded by
    ``max_steps`` reg+ steps.  Raises ValueError if no lift is found.
    """
    out = []
    cur = start
    prev = start
    for label, t in steps:
        if _step(prev, Strategy.REG, label, t) is None:
            raise ValueError(f"not a valid reg sequence: {label} from {prev}")
        prev = t
        if label is not RuleLabel.DEL:
            while True:
                moves = decompose_step(cur, Strategy.REG_PLUS)
                if moves and moves[0][0] is RuleLabel.S:
                    cur = moves[0][1]
                    out.append(moves[0])
                else:
                    break
                if len(out) > max_steps:
                    raise ValueError("no lift within bound")
            nxt = _step(cur, Strategy.REG_PLUS, label)
            if nxt is None:
                raise ValueError(f"no lift for {label} at {cur}")
            cur = nxt
            out.append((label, cur))
        if not is_del_reduct(cur, t):
            raise ValueError(f"no lift: {t} is not a del-reduct of {cur}")
    return out


@dataclass
class AnnotatedNode:
    state: PrefixedState
    children: list = field(default_factory=list)   # (label, AnnotatedNode)


@dataclass
class AnnotatedTree:
    root: AnnotatedNode
    size: int
    truncated: bool

    def nodes(self):
        todo = [self.root]
        while todo:
            node = todo.pop()
            yield node
            todo.extend(c for _, c in reversed(node.children))


def explore_annotated(source, budget: Budget | None = None) -> AnnotatedTree:
    """Position-annotated reg+ exploration, a tree cut at ``budget.max_depth``
    steps or ``budget.max_states`` nodes."""
    budget = budget or Budget()
    s0 = start_state(source)
    if not s0.annotated:
        s0 = s0.annotate((), "")
    root = AnnotatedNode(s0)
    size, truncated = 1, False
    queue = deque([(root, 0)])
    while queue:
        node, depth = queue.popleft()
        moves = decompose_step(node.state, Strategy.REG_PLUS)
        if moves and depth >= budget.max_depth:
            truncated = True
            continue
        for label, succ in moves:
            if size >= budget.max_states:
                return AnnotatedTree(root, size, True)
            child = AnnotatedNode(succ)
            node.children.append((label, child))
            size += 1
            queue.append((child, depth + 1))
    return AnnotatedTree(root, size, truncated)
