"""Finite term syntax shared by every other module.

One family of frozen node classes covers closed λμ-terms, truncated trees
(``Cut`` leaves), equation bodies (``Call``) and derivation annotations
(``Const``).  Which node kinds are legal depends on where a term is used;
the parsers and validators enforce that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "Var", "App", "Abs", "Mu", "Cut", "Call", "Const", "Term",
    "free_vars", "size", "canonical", "alpha_eq_terms", "pretty", "fresh_name",
    "rename_free",
]


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class App:
    left: "Term"
    right: "Term"


@dataclass(frozen=True, slots=True)
class Abs:
    binder: str
    body: "Term"


@dataclass(frozen=True, slots=True)
class Mu:
    binder: str
    body: "Term"


@dataclass(frozen=True, slots=True)
class Cut:
    """Leaf standing for everything below the truncation depth."""


@dataclass(frozen=True, slots=True)
class Call:
    """Equation call; arguments are variable names, ``None`` for a dead slot."""

    name: str
    args: tuple


@dataclass(frozen=True, slots=True)
class Const:
    """Assumption constant c_l of an annotated derivation."""

    marker: str


Term = Union[Var, App, Abs, Mu, Cut, Call, Const]


def free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return free_vars(t.left) | free_vars(t.right)
    if isinstance(t, (Abs, Mu)):
        return free_vars(t.body) - {t.binder}
    if isinstance(t, Call):
        return frozenset(a for a in t.args if a is not None)
    return frozenset()


def size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + size(t.left) + size(t.right)
    if isinstance(t, (Abs, Mu)):
        return 1 + size(t.body)
    return 1


def canonical(t: Term, free: dict | None = None, _bound: tuple = ()) -> tuple:
    """Nameless form: bound names by binder distance, free names via ``free``.

    ``free`` maps free variable names to keys (e.g. prefix indices); names
    missing from it are kept as themselves.
    """
    if isinstance(t, Var):
        for i in range(len(_bound) - 1, -1, -1):
            if _bound[i] == t.name:
                return ("b", len(_bound) - 1 - i)
        return ("f", free.get(t.name, t.name) if free else t.name)
    if isinstance(t, App):
        return ("@", canonical(t.left, free, _bound), canonical(t.right, free, _bound))
    if isinstance(t, Abs):
        return ("λ", canonical(t.body, free, _bound + (t.binder,)))
    if isinstance(t, Mu):
        return ("μ", canonical(t.body, free, _bound + (t.binder,)))
    if isinstance(t, Cut):
        return ("_",)
    if isinstance(t, Const):
        return ("c", t.marker)
    if isinstance(t, Call):
        return ("call", t.name, tuple(canonical(Var(a), free, _bound)
                                      if a is not None else None for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def alpha_eq_terms(a: Term, b: Term) -> bool:
    return canonical(a) == canonical(b)


def fresh_name(base: str, avoid) -> str:
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789")
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def rename_free(t: Term, mapping: dict) -> Term:
    """Rename free variables; binders that would capture are freshened."""
    if isinstance(t, Var):
        return Var(mapping.get(t.name, t.name))
    if isinstance(t, App):
        return App(rename_free(t.left, mapping), rename_free(t.right, mapping))
    if isinstance(t, (Abs, Mu)):
        inner = {k: v for k, v in mapping.items() if k != t.binder}
        targets = {inner[k] for k in free_vars(t.body) if k in inner}
        binder = t.binder
        if binder in targets:
            binder = fresh_name(binder, targets | free_vars(t.body))
            inner[t.binder] = binder
        return type(t)(binder, rename_free(t.body, inner))
    if isinstance(t, Call):
        return Call(t.name, tuple(None if a is None else mapping.get(a, a) for a in t.args))
    return t


def pretty(t: Term) -> str:
    """Print in the concrete grammar; parsing the result gives ``t`` back."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Cut):
        return "_"
    if isinstance(t, Const):
        return f"<{t.marker}>"
    if isinstance(t, Call):
        return f"{t.name}({', '.join('_' if a is None else a for a in t.args)})"
    if isinstance(t, Abs):
        return f"\\{t.binder}. {pretty(t.body)}"
    if isinstance(t, Mu):
        return f"mu {t.binder}. {pretty(t.body)}"
    left = pretty(t.left)
    if isinstance(t.left, (Abs, Mu)):
        left = f"({left})"
    right = pretty(t.right)
    if isinstance(t.right, (App, Abs, Mu)):
        right = f"({right})"
    return f"{left} {right}"
