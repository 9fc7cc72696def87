"""Command-line front end.

Every verb prints ``key: value`` lines.  Exit status: 0 definitive success,
1 definitive negative answer, 2 unknown (budget exhausted), 3 bad input.
"""

from __future__ import annotations

import argparse
import os
import sys

from .chains import Bound, binding_capturing_relations, has_infinite_chain, max_chain_length
from .decompose import Answer, Budget, Verdict, explore
from .dot import emit_dot
from .errors import BudgetError, CyclamError
from .proofs import (NotRegularError, ProofSystem, build_derivation, check_derivation,
                     extract_mu_term, format_derivation, parse_derivation, verify_expresses)
from .states import Strategy, make_state
from .syntax import parse_formula, parse_lambda_mu, parse_term, tokenize
from .systems import RegularSystem, parse_regular_system
from .terms import pretty, size
from .unfold import handle_of, is_mu_guarded, truncate, unfold_to_depth

__all__ = ["run", "main", "read_source"]

OK, NEGATIVE, UNKNOWN, BAD_INPUT = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def read_source(arg: str):
    """A λμ-term or equation system, inline or from a file."""
    text = arg
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    if any(tok[0] == "start" for tok in tokenize(text)):
        return parse_regular_system(text)
    return parse_lambda_mu(text)


def _budget(args) -> Budget:
    over = {}
    if getattr(args, "max_states", None) is not None:
        over["max_states"] = args.max_states
    if getattr(args, "max_prefix", None) is not None:
        over["max_prefix"] = args.max_prefix
    return Budget.from_env(**over)


def _parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="cyclam", description="Analyze regular infinite λ-terms.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_ArgParser)

    def verb(name, help, source=True, budget=True):
        sp = sub.add_parser(name, help=help)
        if source:
            sp.add_argument("input", help="inline term/system or a file holding one")
        if budget:
            sp.add_argument("--max-states", type=int)
            sp.add_argument("--max-prefix", type=int)
            sp.add_argument("--no-pump", action="store_true")
        return sp

    verb("parse", "parse and pretty-print", budget=False)
    sp = verb("unfold", "print the truncated infinite unfolding", budget=False)
    sp.add_argument("--depth", type=int, default=8)
    verb("analyze", "regularity, strong regularity, chain bound")
    sp = verb("subterms", "explore generated subterms")
    sp.add_argument("--strategy", choices=["reg", "reg+"], default="reg+")
    sp.add_argument("--dot")
    sp = verb("chains", "binding/capturing relations and chain verdict")
    sp.add_argument("--max-depth", type=int, default=8)
    sp = verb("derive", "build a cyclic derivation")
    sp.add_argument("--system", choices=["reg", "reg+", "reg0+"], default="reg0+")
    sp.add_argument("--out")
    sp = verb("check-derivation", "validate a derivation file", source=False, budget=False)
    sp.add_argument("file")
    sp.add_argument("--system", choices=["reg", "reg+", "reg0+", "expr"], required=True)
    sp.add_argument("--root")
    verb("express", "extract a λμ-term")
    sp = verb("roundtrip", "extract a λμ-term and verify it by unfolding")
    sp.add_argument("--depth", type=int, default=20)
    return p


def _report(out: list, key: str, value):
    out.append(f"{key}: {value}")


def _cmd_parse(args, out):
    src = read_source(args.input)
    if isinstance(src, RegularSystem):
        _report(out, "kind", "system")
        for line in str(src).splitlines():
            _report(out, "line", line)
        return OK
    _report(out, "kind", "lambda-mu")
    _report(out, "term", pretty(src))
    _report(out, "size", size(src))
    _report(out, "guarded", "yes" if is_mu_guarded(src) else "no")
    return OK


def _cmd_unfold(args, out):
    src = read_source(args.input)
    if isinstance(src, RegularSystem):
        tree = truncate(handle_of(src), args.depth)
    else:
        tree = unfold_to_depth(src, args.depth)
    _report(out, "depth", args.depth)
    _report(out, "tree", pretty(tree))
    return OK


def _yes_no(answer: Answer) -> str:
    return answer.value


def _cmd_analyze(args, out):
    h = handle_of(read_source(args.input))
    budget = _budget(args)
    reg = explore(h, Strategy.REG, budget, not args.no_pump)
    plus = explore(h, Strategy.REG_PLUS, budget, not args.no_pump)
    status = OK
    if plus.verdict is Verdict.FINITE:
        _report(out, "regular", f"yes ({len(plus)} states reg+)")
    elif reg.verdict is Verdict.FINITE:
        _report(out, "regular", f"yes ({len(reg)} states reg)")
    elif reg.verdict is Verdict.INFINITE:
        _report(out, "regular", "no")
    else:
        _report(out, "regular", "unknown")
        status = UNKNOWN
    if plus.verdict is Verdict.BUDGET_EXHAUSTED:
        _report(out, "strongly_regular", "unknown")
        status = UNKNOWN
    else:
        _report(out, "strongly_regular", "yes" if plus.verdict is Verdict.FINITE else "no")
    _report(out, "reg_states", len(reg) if reg.verdict is Verdict.FINITE else reg.verdict.value)
    _report(out, "reg_plus_states", len(plus) if plus.verdict is Verdict.FINITE else plus.verdict.value)
    if plus.verdict is Verdict.FINITE:
        _report(out, "max_chain", max(plus.max_prefix - 1, 0))
    elif plus.verdict is Verdict.INFINITE:
        _report(out, "max_chain", "infinite")
        _report(out, "witness", plus.witness)
    else:
        _report(out, "max_chain", "unknown")
    return status


def _cmd_subterms(args, out):
    h = handle_of(read_source(args.input))
    g = explore(h, Strategy(args.strategy), _budget(args), not args.no_pump)
    _report(out, "strategy", g.strategy)
    _report(out, "verdict", g.verdict.value)
    _report(out, "states", len(g))
    for s in g.states:
        _report(out, "state", s.format())
    if g.witness is not None:
        _report(out, "witness", g.witness)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(emit_dot(g))
        _report(out, "dot", args.dot)
    return {Verdict.FINITE: OK, Verdict.INFINITE: NEGATIVE}.get(g.verdict, UNKNOWN)


def _cmd_chains(args, out):
    h = handle_of(read_source(args.input))
    binds, captures = binding_capturing_relations(h, args.max_depth)
    for p, q in sorted(binds):
        _report(out, "binds", f"{p or 'ε'} -> {q}")
    for q, p in sorted(captures):
        _report(out, "captured", f"{q} -> {p or 'ε'}")
    budget = _budget(args)
    bound = max_chain_length(h, budget)
    if bound.bound is Bound.FINITE:
        _report(out, "max_chain", bound.length)
    else:
        _report(out, "max_chain", bound.bound.value)
    verdict = has_infinite_chain(h, budget)
    _report(out, "infinite_chain", _yes_no(verdict.answer))
    if verdict.witness is not None:
        w = verdict.witness
        for s in w.states:
            _report(out, "witness_state", s)
        _report(out, "witness_chain", " ".join(p or "ε" for p in w.chain))
    return UNKNOWN if verdict.answer is Answer.UNKNOWN else OK


def _cmd_derive(args, out):
    h = handle_of(read_source(args.input))
    d = build_derivation(h, ProofSystem(args.system), _budget(args))
    _report(out, "system", args.system)
    _report(out, "nodes", len(d))
    _report(out, "valid", "yes" if check_derivation(d) else "no")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(format_derivation(d))
        _report(out, "out", args.out)
    return OK


def _cmd_check(args, out):
    with open(args.file, encoding="utf-8") as fh:
        d = parse_derivation(fh.read(), ProofSystem(args.system))
    root = None
    if args.root:
        try:
            names, body = parse_formula(args.root, frozenset(d.graph.eq_root))
        except CyclamError:
            names, body = (), parse_term(args.root, frozenset(d.graph.eq_root))
        root = make_state(d.graph, names, body)
    verdict = check_derivation(d, root)
    _report(out, "system", args.system)
    _report(out, "valid", "yes" if verdict else "no")
    if not verdict:
        _report(out, "reason", verdict.reason)
        _report(out, "path", "/" + "/".join(map(str, verdict.path)))
        return NEGATIVE
    return OK


def _cmd_express(args, out):
    h = handle_of(read_source(args.input))
    budget = _budget(args)
    g = explore(h, Strategy.REG_PLUS, budget, not args.no_pump)
    if g.verdict is Verdict.INFINITE:
        _report(out, "strongly_regular", "no")
        _report(out, "witness", g.witness)
        return NEGATIVE
    if g.verdict is not Verdict.FINITE:
        _report(out, "strongly_regular", "unknown")
        return UNKNOWN
    _report(out, "strongly_regular", "yes")
    _report(out, "term", pretty(extract_mu_term(h, budget)))
    return OK


def _cmd_roundtrip(args, out):
    status = _cmd_express(args, out)
    if status != OK:
        return status
    h = handle_of(read_source(args.input))
    m = extract_mu_term(h, _budget(args))
    ok = verify_expresses(m, h, args.depth)
    _report(out, "verified", f"{'yes' if ok else 'no'} (depth {args.depth})")
    return OK if ok else NEGATIVE


_COMMANDS = {
    "parse": _cmd_parse, "unfold": _cmd_unfold, "analyze": _cmd_analyze,
    "subterms": _cmd_subterms, "chains": _cmd_chains, "derive": _cmd_derive,
    "check-derivation": _cmd_check, "express": _cmd_express, "roundtrip": _cmd_roundtrip,
}


def run(argv: list, stdout=None) -> int:
    """Run one command; the report goes to ``stdout``, the status is returned."""
    stdout = stdout or sys.stdout
    out: list = []
    try:
        args = _parser().parse_args(argv)
        status = _COMMANDS[args.verb](args, out)
    except _Usage as e:
        out.append(f"error: usage: {e}")
        status = BAD_INPUT
    except NotRegularError as e:
        out.append(f"error: {e}")
        status = NEGATIVE
    except BudgetError as e:
        out.append(f"error: {e}")
        status = UNKNOWN
    except (CyclamError, OSError, ValueError) as e:
        out.append(f"error: {e}")
        status = BAD_INPUT
    for line in out:
        print(line, file=stdout)
    return status


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
