"""Graphviz rendering of transition graphs."""

from __future__ import annotations

from .decompose import TransitionGraph, Verdict

__all__ = ["emit_dot"]


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _lines(graph: TransitionGraph):
    yield "digraph reductions {"
    yield "  node [shape=box, fontname=monospace];"
    yield f"  label={_quote(f'{graph.strategy} {graph.verdict.value}, {len(graph)} states')};"
    marked = set()
    if graph.witness is not None:
        marked = {graph.index(graph.witness.u), graph.index(graph.witness.v)}
    for i, s in enumerate(graph.states):
        extra = ", peripheries=2" if i in marked else ""
        if i == 0:
            extra += ", style=bold"
        yield f"  n{i} [label={_quote(s.format())}{extra}];"
    for a, label, b in graph.edges:
        yield f"  n{a} -> n{b} [label={_quote(str(label))}];"
    if graph.verdict is Verdict.INFINITE and graph.witness is not None:
        u, v = graph.index(graph.witness.u), graph.index(graph.witness.v)
        yield f'  n{v} -> n{u} [label="pump", style=dashed];'
    yield "}"


def emit_dot(graph: TransitionGraph) -> str:
    return "\n".join(_lines(graph)) + "\n"
