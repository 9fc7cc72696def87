"""Finite cyclic derivations certifying (strong) regularity, and μ-term extraction.

A derivation is a tree of rule instances over prefixed formulas.  The FIX
rule closes a cycle: its premise derives the same formula from a marked
assumption.  Four systems are supported:

* ``reg``   Axiom0 is ``(y) y``; vacuous bindings go with Del, anywhere;
* ``reg+``  Axiom0 is ``(x… y) y``; only the last binding may go, with S;
* ``reg0+`` reg+ where no formula between an assumption and its FIX has a
  shorter prefix than the assumption;
* ``expr``  reg0+ whose formulas carry λμ-terms; FIX binds a μ.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .decompose import Budget, explore, Verdict
from .errors import BudgetError, CyclamError, UnguardedError
from .graph import ABS, APP, VAR, TermGraph
from .states import PrefixedState, RuleLabel, Strategy, _state, decompose_step, make_state, prefix_names
from .syntax import parse_formula, parse_term
from .systems import parse_regular_system
from .terms import App, Abs, Const, Mu, Term, Var, canonical, free_vars, fresh_name, pretty, rename_free
from .unfold import handle_of, is_mu_guarded

__all__ = [
    "ProofSystem", "Rule", "DerivationNode", "Derivation", "CheckResult", "NotRegularError",
    "build_derivation", "check_derivation", "annotate_to_expr", "erase", "extract_mu_term",
    "verify_expresses", "truncations_agree", "format_derivation", "parse_derivation",
]


class NotRegularError(CyclamError):
    """The input is definitively not (strongly) regular."""


class ProofSystem(enum.Enum):
    REG = "reg"
    REG_PLUS = "reg+"
    REG_ZERO_PLUS = "reg0+"
    EXPR = "expr"

    @property
    def strategy(self) -> Strategy:
        return Strategy.REG if self is ProofSystem.REG else Strategy.REG_PLUS


class Rule(enum.Enum):
    AXIOM = "Axiom0"
    LAM = "Lam"
    APP = "App"
    S = "S"
    DEL = "Del"
    FIX = "FIX"
    ASSUME = "Assume"


_STEP_RULE = {RuleLabel.APP_LEFT: Rule.APP, RuleLabel.APP_RIGHT: Rule.APP,
              RuleLabel.LAM: Rule.LAM, RuleLabel.S: Rule.S, RuleLabel.DEL: Rule.DEL}


@dataclass(frozen=True)
class DerivationNode:
    """One rule instance.  ``names`` are the prefix names the formula (and its
    annotation) is written with; ``None`` means the default names."""

    rule: Rule
    formula: PrefixedState
    children: tuple = ()
    marker: str | None = None
    annotation: Term | None = None
    names: tuple | None = None

    @property
    def prefix_names(self) -> list:
        return list(self.names) if self.names is not None else prefix_names(self.formula.n)

    def walk(self, path=()):
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.walk(path + (i,))


@dataclass(frozen=True)
class Derivation:
    system: ProofSystem
    root: DerivationNode
    graph: TermGraph = field(repr=False, compare=False)

    @property
    def conclusion(self) -> PrefixedState:
        return self.root.formula

    def nodes(self):
        return self.root.walk()

    def __len__(self):
        return sum(1 for _ in self.nodes())


@dataclass(frozen=True)
class CheckResult:
    valid: bool
    reason: str | None = None
    path: tuple | None = None

    def __bool__(self):
        return self.valid

    def __str__(self):
        if self.valid:
            return "valid"
        return f"invalid: {self.reason} at /{'/'.join(map(str, self.path or ()))}"


# construction

def _require(handle, system: ProofSystem, budget: Budget | None):
    g = explore(handle, system.strategy, budget)
    what = "regular" if system is ProofSystem.REG else "strongly regular"
    if g.verdict is Verdict.INFINITE:
        raise NotRegularError(f"not {what}")
    if g.verdict is not Verdict.FINITE:
        raise BudgetError(f"not {what} within budget")


class _Frame:
    __slots__ = ("state", "marker")

    def __init__(self, state):
        self.state = state
        self.marker = None


def build_derivation(source, system: ProofSystem, budget: Budget | None = None) -> Derivation:
    """Fold the decomposition of ``source`` into a closed derivation.

    Depth-first, a formula that repeats an ancestor on its thread becomes an
    assumption discharged by a FIX at that ancestor.  For reg0+ an ancestor
    only counts if no formula in between has a shorter prefix.
    """
    if system is ProofSystem.EXPR:
        return annotate_to_expr(build_derivation(source, ProofSystem.REG_ZERO_PLUS, budget))
    budget = budget or Budget()
    handle = handle_of(source)
    _require(handle, system, budget)
    strategy = system.strategy
    strict = system is ProofSystem.REG_ZERO_PLUS
    counter = [0]
    size = [0]
    limit = budget.max_states * 50
    thread: list = []

    def build(state):
        size[0] += 1
        if size[0] > limit:
            raise BudgetError("derivation budget exhausted")
        low = state.n
        for frame in reversed(thread):
            if frame.state.key == state.key and (not strict or frame.state.n <= low):
                if frame.marker is None:
                    counter[0] += 1
                    frame.marker = f"l{counter[0]}"
                return DerivationNode(Rule.ASSUME, state, marker=frame.marker)
            low = min(low, frame.state.n)
        moves = decompose_step(state, strategy)
        if not moves:
            return DerivationNode(Rule.AXIOM, state)
        frame = _Frame(state)
        thread.append(frame)
        try:
            label = moves[0][0]
            if label in (RuleLabel.S, RuleLabel.DEL):
                moves = moves[:1]
            children = tuple(build(succ) for _, succ in moves)
        finally:
            thread.pop()
        node = DerivationNode(_STEP_RULE[label], state, children)
        if frame.marker is not None:
            node = DerivationNode(Rule.FIX, state, (node,), marker=frame.marker)
        return node

    return Derivation(system, build(handle.start_state()), handle.graph)


# checking

class _Invalid(Exception):
    def __init__(self, reason, path):
        self.reason = reason
        self.path = path


def _uneager_successors(state: PrefixedState, rule: Rule) -> list:
    """Successors of an @ or λ step, ignoring the eagerness of S/del."""
    g = state.graph
    if rule is Rule.APP and g.kind[state.node] == APP:
        return [_state(g, state.n, c, e) for c, e in g.children(state.node, state.env)]
    if rule is Rule.LAM and g.kind[state.node] == ABS:
        (c, e), = g.children(state.node, state.env, state.n)
        return [_state(g, state.n + 1, c, e)]
    return []


def _ann_key(node: DerivationNode, term: Term | None = None) -> tuple:
    names = node.prefix_names
    term = node.annotation if term is None else term
    return canonical(term, {n: i for i, n in enumerate(names)})


def check_derivation(d: Derivation, expected_root: PrefixedState | None = None) -> CheckResult:
    """Validate every side condition of ``d`` in its proof system."""
    system = d.system
    allowed = {Rule.AXIOM, Rule.LAM, Rule.APP, Rule.FIX, Rule.ASSUME}
    allowed.add(Rule.DEL if system is ProofSystem.REG else Rule.S)
    markers: set = set()
    strict = system in (ProofSystem.REG_ZERO_PLUS, ProofSystem.EXPR)
    expr = system is ProofSystem.EXPR

    def check(node: DerivationNode, path: tuple, thread: list):
        f = node.formula
        if node.rule not in allowed:
            raise _Invalid("system", path)
        kids = node.children
        arity = {Rule.AXIOM: 0, Rule.ASSUME: 0, Rule.LAM: 1, Rule.S: 1, Rule.DEL: 1,
                 Rule.FIX: 1, Rule.APP: 2}[node.rule]
        if len(kids) != arity:
            raise _Invalid("local rule", path)
        if expr and node.annotation is None:
            raise _Invalid("annotation", path)
        if node.rule is Rule.AXIOM:
            if f.kind != VAR or f.n == 0 or f.env[f.graph.a[f.node]] != f.n - 1:
                raise _Invalid("local rule", path)
            if system is ProofSystem.REG and f.n != 1:
                raise _Invalid("local rule", path)
            if expr and _ann_key(node) != ("f", f.n - 1):
                raise _Invalid("annotation", path)
        elif node.rule in (Rule.LAM, Rule.APP):
            vac = f.vacuous()
            if system is ProofSystem.REG and vac or system is not ProofSystem.REG and vac and vac[-1] == f.n - 1:
                raise _Invalid("eagerness", path)
            succ = _uneager_successors(f, node.rule)
            if len(succ) != len(kids) or any(s.key != k.formula.key for s, k in zip(succ, kids)):
                raise _Invalid("local rule", path)
            if expr and _ann_key(node) != _ann_key(node, _expected(node, kids)):
                raise _Invalid("annotation", path)
        elif node.rule is Rule.S:
            if f.n == 0 or (f.n - 1) in f.used:
                raise _Invalid("vacuity", path)
            if f.drop(f.n - 1).key != kids[0].formula.key:
                raise _Invalid("local rule", path)
            if expr:
                if node.prefix_names[-1] in free_vars(node.annotation):
                    raise _Invalid("vacuity", path)
                if _ann_key(node) != _ann_key(node, _expected(node, kids)):
                    raise _Invalid("annotation", path)
        elif node.rule is Rule.DEL:
            vac = f.vacuous()
            if not vac:
                raise _Invalid("vacuity", path)
            if not any(f.drop(i).key == kids[0].formula.key for i in vac):
                raise _Invalid("local rule", path)
        elif node.rule is Rule.FIX:
            if node.marker is None or node.marker in markers:
                raise _Invalid("marker", path)
            markers.add(node.marker)
            if kids[0].formula.key != f.key:
                raise _Invalid("local rule", path)
            if kids[0].rule is Rule.ASSUME:
                raise _Invalid("fix guard", path)
            if expr and _ann_key(node) != _ann_key(node, _expected(node, kids)):
                raise _Invalid("annotation", path)
        elif node.rule is Rule.ASSUME:
            for depth in range(len(thread) - 1, -1, -1):
                anc, apath = thread[depth]
                if anc.rule is Rule.FIX and anc.marker == node.marker:
                    break
            else:
                raise _Invalid("open assumption", path)
            if anc.formula.key != f.key:
                raise _Invalid("local rule", path)
            if strict and any(t.formula.n < f.n for t, _ in thread[depth:]):
                raise _Invalid("prefix condition", apath)
            if expr and _ann_key(node) != ("c", node.marker):
                raise _Invalid("annotation", path)
        thread.append((node, path))
        for i, k in enumerate(kids):
            check(k, path + (i,), thread)
        thread.pop()

    try:
        check(d.root, (), [])
        if expr and (free_vars(d.root.annotation) or _has_const(d.root.annotation)):
            raise _Invalid("annotation", ())
        if expected_root is not None and expected_root.key != d.root.formula.key:
            raise _Invalid("root mismatch", ())
    except _Invalid as bad:
        return CheckResult(False, bad.reason, bad.path)
    return CheckResult(True)


def _expected(node: DerivationNode, kids: tuple) -> Term:
    """Annotation the expr schema assigns to ``node`` given its premises."""
    names = node.prefix_names
    rule = node.rule
    if rule is Rule.AXIOM:
        return Var(names[-1])
    if rule is Rule.ASSUME:
        return Const(node.marker)
    if rule is Rule.LAM:
        m = _rename_map(kids[0], node, extra=True)
        return Abs(m[kids[0].prefix_names[-1]], rename_free(kids[0].annotation, m))
    if rule is Rule.APP:
        return App(*(rename_free(k.annotation, _rename_map(k, node)) for k in kids))
    inner = rename_free(kids[0].annotation, _rename_map(kids[0], node))
    if rule is Rule.S:
        return inner
    fname = fresh_name("f" + node.marker.lstrip("l"), _all_names(inner) | set(names))
    return Mu(fname, _replace_const(inner, node.marker, fname))


def _rename_map(child: DerivationNode, parent: DerivationNode, extra: bool = False) -> dict:
    """Map the child's prefix names to the parent's (by prefix index)."""
    cn, pn = child.prefix_names, parent.prefix_names
    m = {cn[i]: pn[i] for i in range(min(len(cn), len(pn)))}
    if extra and len(cn) > len(pn):
        last = cn[len(pn)]
        m[last] = last if last not in pn else fresh_name(last, set(pn) | set(cn))
    return m


def _all_names(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return _all_names(t.left) | _all_names(t.right)
    if isinstance(t, (Abs, Mu)):
        return {t.binder} | _all_names(t.body)
    return set()


def _has_const(t: Term) -> bool:
    if isinstance(t, Const):
        return True
    if isinstance(t, App):
        return _has_const(t.left) or _has_const(t.right)
    if isinstance(t, (Abs, Mu)):
        return _has_const(t.body)
    return False


def _replace_const(t: Term, marker: str, name: str) -> Term:
    if isinstance(t, Const):
        return Var(name) if t.marker == marker else t
    if isinstance(t, App):
        return App(_replace_const(t.left, marker, name), _replace_const(t.right, marker, name))
    if isinstance(t, (Abs, Mu)):
        return type(t)(t.binder, _replace_const(t.body, marker, name))
    return t


# annotation and extraction

def annotate_to_expr(d: Derivation) -> Derivation:
    """Attach λμ-terms to every formula of a valid reg0+ derivation."""
    if d.system is not ProofSystem.REG_ZERO_PLUS or not check_derivation(d):
        raise CyclamError("invalid input derivation")

    def go(node: DerivationNode) -> DerivationNode:
        kids = tuple(go(k) for k in node.children)
        ann = _expected(node, kids)
        return replace(node, children=kids, annotation=ann)

    return Derivation(ProofSystem.EXPR, go(d.root), d.graph)


def erase(d: Derivation) -> Derivation:
    """Drop the annotations of an expr derivation."""
    def go(node):
        return replace(node, children=tuple(go(k) for k in node.children), annotation=None)
    return Derivation(ProofSystem.REG_ZERO_PLUS, go(d.root), d.graph)


def extract_mu_term(source, budget: Budget | None = None) -> Term:
    """A closed λμ-term whose unfolding is the strongly regular ``source``."""
    d = build_derivation(source, ProofSystem.EXPR, budget)
    return d.root.annotation


def truncations_agree(h1, h2, depth: int) -> bool:
    """Do the two infinite terms agree on their top ``depth`` node levels?

    Pairs of descriptors are compared with their binder levels renumbered
    jointly, so the search space stays finite.
    """
    h1, h2 = handle_of(h1), handle_of(h2)
    g1, g2 = h1.graph, h2.graph
    seen = set()
    todo = [(g1.start, (), g2.start, (), depth)]
    while todo:
        n1, e1, n2, e2, k = todo.pop()
        if k == 0:
            continue
        n1, e1 = g1.resolve(n1, e1)
        n2, e2 = g2.resolve(n2, e2)
        used = sorted({v for v in e1 + e2 if v is not None})
        rank = {u: i for i, u in enumerate(used)}
        e1 = tuple(None if v is None else rank[v] for v in e1)
        e2 = tuple(None if v is None else rank[v] for v in e2)
        key = (n1, e1, n2, e2, k)
        if key in seen:
            continue
        seen.add(key)
        kind = g1.kind[n1]
        if kind != g2.kind[n2]:
            return False
        if kind == VAR:
            if g1.var_value(n1, e1) != g2.var_value(n2, e2):
                return False
        elif kind == APP:
            for (c1, ce1), (c2, ce2) in zip(g1.children(n1, e1), g2.children(n2, e2)):
                todo.append((c1, ce1, c2, ce2, k - 1))
        else:
            fresh = len(used)
            (c1, ce1), = g1.children(n1, e1, fresh)
            (c2, ce2), = g2.children(n2, e2, fresh)
            todo.append((c1, ce1, c2, ce2, k - 1))
    return True


def verify_expresses(m: Term, handle, depth: int) -> bool:
    """Does the unfolding of ``m`` agree with ``handle`` down to ``depth``?"""
    if not is_mu_guarded(m):
        raise UnguardedError()
    return truncations_agree(handle_of(m), handle, depth)


# text format

def format_derivation(d: Derivation, header: bool = True) -> str:
    """One node per line, children indented two spaces:
    ``RULE | formula [| annotation] [| marker]``.  With ``header`` the
    equation system is written first on ``%`` lines."""
    lines = []
    if header and d.graph.system.equations:
        lines += [f"% {line}" for line in str(d.graph.system).splitlines()]

    def go(node, depth):
        fields = [node.rule.value, node.formula.format(node.names)]
        if node.annotation is not None:
            fields.append(pretty(node.annotation))
        if node.marker is not None:
            fields.append(node.marker)
        lines.append("  " * depth + " | ".join(fields))
        for k in node.children:
            go(k, depth + 1)

    go(d.root, 0)
    return "\n".join(lines) + "\n"


def parse_derivation(text: str, system: ProofSystem, graph: TermGraph | None = None) -> Derivation:
    """Read the format written by format_derivation."""
    from .errors import ParseError
    header = [line[1:].strip() for line in text.splitlines() if line.startswith("%")]
    if graph is None:
        src = "\n".join(header) if header else "start \\x. x"
        graph = TermGraph(parse_regular_system(src))
    calls = frozenset(graph.eq_root)
    rules = {r.value: r for r in Rule}
    stack: list = []   # (indent, rule, formula, annotation, marker, names, children)
    roots = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.startswith("%") or raw.lstrip().startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip(" "))
        fields = [x.strip() for x in raw.strip().split("|")]
        if fields[0] not in rules:
            raise ParseError(f"unknown rule {fields[0]!r}", lineno, indent + 1)
        rule = rules[fields[0]]
        if len(fields) < 2:
            raise ParseError("missing formula", lineno, indent + 1)
        marker = None
        rest = fields[2:]
        if rule in (Rule.FIX, Rule.ASSUME):
            if not rest:
                raise ParseError("missing marker", lineno, indent + 1)
            marker = rest.pop()
        if len(rest) > 1:
            raise ParseError("too many fields", lineno, indent + 1)
        try:
            names, body = parse_formula(fields[1], calls)
            ann = parse_term(rest[0], calls=frozenset(), consts=True) if rest else None
        except ParseError as e:
            raise ParseError(e.message, lineno, indent + 1) from None
        state = make_state(graph, names, body)
        entry = [indent, rule, state, ann, marker, names, []]
        while stack and stack[-1][0] >= indent:
            _close(stack, roots)
        stack.append(entry)
    while stack:
        _close(stack, roots)
    if len(roots) != 1:
        raise ParseError(f"expected exactly one root node, found {len(roots)}")
    return Derivation(system, roots[0], graph)


def _close(stack: list, roots: list):
    indent, rule, state, ann, marker, names, kids = stack.pop()
    node = DerivationNode(rule, state, tuple(kids), marker, ann, tuple(names))
    if stack:
        stack[-1][6].append(node)
    else:
        roots.append(node)
