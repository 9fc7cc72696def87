"""Parsers for λμ-terms, equation systems and prefixed formulas.

Grammar::

    term    := var | "\\" var+ "." term | "mu" var+ "." term
             | "(" term ")" | term term            (application is left-assoc)
    system  := (name "(" params ")" "=" term ";")* "start" term
    formula := "(" var* ")" term

Inside system bodies and formulas ``F(a, b)`` is a call when ``F`` names an
equation.  ``λ`` and ``μ`` are accepted for ``\\`` and ``mu``; ``_`` is a
truncation cut and ``<l>`` an assumption constant where those are allowed.
"""

from __future__ import annotations

import re

from .errors import OpenTermError, ParseError
from .terms import Abs, App, Call, Const, Cut, Mu, Term, Var, free_vars

__all__ = ["parse_lambda_mu", "parse_term", "parse_formula", "Parser", "tokenize"]

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<lam>\\|λ)
  | (?P<mu>μ)
  | (?P<const><[A-Za-z][A-Za-z0-9_']*>)
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
  | (?P<cut>_)
  | (?P<punct>[().,;=])
""", re.VERBOSE)

_KEYWORDS = {"mu", "start"}


def tokenize(text: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        col = pos - line_start + 1
        if kind == "ws":
            nl = value.count("\n")
            if nl:
                line += nl
                line_start = pos + value.rindex("\n") + 1
        else:
            if kind == "ident" and value == "mu":
                kind = "mu"
            elif kind == "ident" and value == "start":
                kind = "start"
            elif kind == "punct":
                kind = value
            toks.append((kind, value, line, col))
        pos = m.end()
    toks.append(("eof", "", line, pos - line_start + 1))
    return toks


class Parser:
    """Recursive-descent parser over a token list.

    ``calls`` is the set of equation names (identifiers followed by ``(``
    become calls), ``cuts`` and ``consts`` enable the extra leaf forms.
    """

    def __init__(self, text: str, calls=frozenset(), cuts=False, consts=False):
        self.toks = tokenize(text)
        self.i = 0
        self.calls = calls
        self.cuts = cuts
        self.consts = consts

    @property
    def peek(self):
        return self.toks[self.i]

    def fail(self, message: str, tok=None):
        tok = tok or self.peek
        raise ParseError(message, tok[2], tok[3])

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.peek
        if tok[0] != kind:
            self.fail(f"expected {kind!r}, found {tok[1] or 'end of input'!r}")
        return self.next()

    def at_end(self):
        if self.peek[0] != "eof":
            self.fail(f"unexpected {self.peek[1]!r}")

    def binders(self) -> list:
        names = [self.expect("ident")[1]]
        while self.peek[0] == "ident":
            names.append(self.next()[1])
        self.expect(".")
        return names

    def term(self) -> Term:
        kind = self.peek[0]
        if kind in ("lam", "mu"):
            self.next()
            names = self.binders()
            body = self.term()
            node = Abs if kind == "lam" else Mu
            for name in reversed(names):
                body = node(name, body)
            return body
        t = self.atom()
        while True:
            kind = self.peek[0]
            if kind in ("lam", "mu"):
                return App(t, self.term())
            if kind in ("ident", "(", "cut", "const"):
                t = App(t, self.atom())
            else:
                return t

    def atom(self) -> Term:
        tok = self.peek
        kind = tok[0]
        if kind == "ident":
            self.next()
            if tok[1] in self.calls:
                return self.call_rest(tok[1])
            if self.peek[0] == "(" and self.toks[self.i + 1][0] == ")":
                self.fail(f"undefined equation {tok[1]}", tok)
            return Var(tok[1])
        if kind == "(":
            self.next()
            t = self.term()
            self.expect(")")
            return t
        if kind == "cut" and self.cuts:
            self.next()
            return Cut()
        if kind == "const" and self.consts:
            self.next()
            return Const(tok[1][1:-1])
        self.fail(f"unexpected {tok[1] or 'end of input'!r}")

    def call_rest(self, name: str) -> Call:
        self.expect("(")
        args = []
        if self.peek[0] != ")":
            while True:
                tok = self.peek
                if tok[0] == "cut":
                    self.next()
                    args.append(None)
                else:
                    args.append(self.expect("ident")[1])
                if self.peek[0] != ",":
                    break
                self.next()
        self.expect(")")
        return Call(name, tuple(args))


def parse_term(text: str, calls=frozenset(), cuts=False, consts=False) -> Term:
    """Parse one term without any closedness check."""
    p = Parser(text, calls, cuts, consts)
    t = p.term()
    p.at_end()
    return t


def _check_no_calls(t: Term):
    if isinstance(t, App):
        _check_no_calls(t.left)
        _check_no_calls(t.right)
    elif isinstance(t, (Abs, Mu)):
        _check_no_calls(t.body)


def parse_lambda_mu(text: str) -> Term:
    """Parse a closed λμ-term."""
    t = parse_term(text)
    fv = free_vars(t)
    if fv:
        raise OpenTermError(sorted(fv)[0])
    return t


def parse_formula(text: str, calls=frozenset(), consts=False) -> tuple:
    """Parse ``(x1 ... xn) body`` into ``(prefix names, body)``."""
    p = Parser(text, calls, consts=consts)
    p.expect("(")
    names = []
    while p.peek[0] == "ident":
        names.append(p.next()[1])
    p.expect(")")
    if len(set(names)) != len(names):
        p.fail("prefix names must be distinct")
    body = p.term()
    p.at_end()
    return tuple(names), body
