"""Binding and capturing relations between positions, and chains of them.

A binder at ``p`` *binds* the variable occurrence at ``q`` it is the binder
of; the occurrence at ``q`` *is captured by* a binder at ``p < q`` when the
binder of ``q`` lies strictly above ``p``.  A chain alternates the two
relations, ``p1 ↽ q2 ⇢ p2 ↽ q3 ⇢ p3 …``, and always starts at a binder.
Positions are strings over ``{0, 1}``: the children of an application at
``q`` sit at ``q0``/``q1``, the body of an abstraction at ``q00``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .decompose import Answer, Budget, PumpWitness, Verdict, explore, is_regular
from .graph import ABS, APP, VAR
from .states import Strategy
from .unfold import InfiniteTermHandle, handle_of

__all__ = [
    "binding_capturing_relations", "max_chain_length", "has_infinite_chain",
    "ChainBound", "ChainVerdict", "ChainWitness", "recover_chain", "validate_chain",
    "descend", "Bound",
]


def binding_capturing_relations(handle, depth: int) -> tuple:
    """All ``(p, q)`` binds-pairs and ``(q, p)`` capture-pairs whose nodes lie
    above node depth ``depth``."""
    handle = handle_of(handle)
    g = handle.graph
    binds, captures = set(), set()
    todo = [(g.start, (), "", 0, ())]
    while todo:
        node, env, q, d, above = todo.pop()
        if d >= depth:
            continue
        node, env = g.resolve(node, env)
        kind = g.kind[node]
        if kind == VAR:
            p = g.var_value(node, env)
            binds.add((p, q))
            captures.update((q, b) for b in above if len(b) > len(p))
        elif kind == APP:
            for side, (c, cenv) in enumerate(g.children(node, env)):
                todo.append((c, cenv, q + str(side), d + 1, above))
        else:
            (c, cenv), = g.children(node, env, q)
            todo.append((c, cenv, q + "00", d + 1, above + (q,)))
    return binds, captures


def descend(handle: InfiniteTermHandle, pos: str) -> tuple:
    """Resolved ``(node, env)`` at ``pos``; env values are binder positions."""
    g = handle.graph
    node, env = g.resolve(g.start, ())
    q = ""
    while q != pos:
        rest = pos[len(q):]
        kind = g.kind[node]
        if kind == APP and rest[0] in "01":
            side = int(rest[0])
            node, env = g.children(node, env)[side]
            q += rest[0]
        elif kind == ABS and rest.startswith("00"):
            (node, env), = g.children(node, env, q)
            q += "00"
        else:
            raise ValueError(f"no node at position {pos or 'ε'}")
        node, env = g.resolve(node, env)
    return node, env


def _binder_of(handle: InfiniteTermHandle, q: str):
    node, env = descend(handle, q)
    if handle.graph.kind[node] != VAR:
        return None
    return handle.graph.var_value(node, env)


def validate_chain(handle, chain: list) -> bool:
    """Check every link of ``[p1, q2, p2, …]`` against the term."""
    handle = handle_of(handle)
    if len(chain) % 2 == 0:
        return False
    try:
        for p in chain[0::2]:
            if handle.graph.kind[descend(handle, p)[0]] != ABS:
                return False
        for i in range(1, len(chain), 2):
            p, q, p_next = chain[i - 1], chain[i], chain[i + 1]
            if _binder_of(handle, q) != p:
                return False
            if not (q.startswith(p_next) and len(q) > len(p_next) and len(p) < len(p_next)):
                return False
    except ValueError:
        return False
    return True


def recover_chain(handle, positions: tuple, max_steps: int = 100_000) -> list:
    """Chain through the abstractions ``positions`` (nested, outermost first).

    For consecutive ``p_i < p_{i+1}`` the search below ``p_{i+1}`` finds an
    occurrence bound by ``p_i``; it exists whenever the positions come from
    a reachable annotated state.
    """
    handle = handle_of(handle)
    g = handle.graph
    chain = [positions[0]] if positions else []
    for p, p_next in zip(positions, positions[1:]):
        node, env = descend(handle, p_next)
        (body, benv), = g.children(node, env, p_next)
        todo = deque([(body, benv, p_next + "00")])
        seen = set()
        found = None
        steps = 0
        while todo and found is None:
            steps += 1
            if steps > max_steps:
                break
            n, e, q = todo.popleft()
            n, e = g.resolve(n, e)
            mark = (n, tuple(v == p for v in e))
            if mark in seen:
                continue
            seen.add(mark)
            kind = g.kind[n]
            if kind == VAR:
                if g.var_value(n, e) == p:
                    found = q
            elif kind == APP:
                for side, (c, ce) in enumerate(g.children(n, e)):
                    todo.append((c, ce, q + str(side)))
            else:
                (c, ce), = g.children(n, e, q)
                todo.append((c, ce, q + "00"))
        if found is None:
            raise ValueError(f"no occurrence bound by {p or 'ε'} below {p_next}")
        chain += [found, p_next]
    return chain


class Bound(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ChainWitness:
    """A pumping loop re-annotated with positions, and a chain read off it."""

    pump: PumpWitness
    states: tuple      # annotated states after the stem and after each cycle
    chain: tuple

    @property
    def length(self) -> int:
        return len(self.chain) // 2


@dataclass(frozen=True)
class ChainBound:
    bound: Bound
    length: int | None = None
    witness: ChainWitness | None = None


@dataclass(frozen=True)
class ChainVerdict:
    answer: Answer
    witness: ChainWitness | None = None


def _chain_witness(handle, pump: PumpWitness, times: int = 2) -> ChainWitness:
    states = pump.replay(times, annotated=True)
    chain = recover_chain(handle, states[-1].positions)
    return ChainWitness(pump, tuple(states), tuple(chain))


def max_chain_length(source, budget: Budget | None = None) -> ChainBound:
    """Longest binding–capturing chain, read off the reg+ prefix lengths."""
    handle = handle_of(source)
    g = explore(handle, Strategy.REG_PLUS, budget)
    if g.verdict is Verdict.FINITE:
        return ChainBound(Bound.FINITE, max(g.max_prefix - 1, 0))
    if g.verdict is Verdict.INFINITE:
        return ChainBound(Bound.INFINITE, witness=_chain_witness(handle, g.witness))
    return ChainBound(Bound.UNKNOWN)


def has_infinite_chain(source, budget: Budget | None = None) -> ChainVerdict:
    """Does the term contain an infinite binding–capturing chain?

    Only answered for terms known to be regular.
    """
    handle = handle_of(source)
    if is_regular(handle, budget).answer is not Answer.YES:
        return ChainVerdict(Answer.UNKNOWN)
    g = explore(handle, Strategy.REG_PLUS, budget)
    if g.verdict is Verdict.FINITE:
        return ChainVerdict(Answer.NO)
    if g.verdict is Verdict.INFINITE:
        return ChainVerdict(Answer.YES, _chain_witness(handle, g.witness))
    return ChainVerdict(Answer.UNKNOWN)
