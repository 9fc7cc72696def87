import random

import pytest
from hypothesis import given, strategies as st

from generators import random_lambda_mu, random_system
from oracles import mu_truncate, system_truncate, trees_alpha_equal

from cyclam import (Abs, App, Call, Equation, RegularSystem, Var, handle_of,
                    parse_regular_system, system_from_term, truncate)
from cyclam.errors import OpenTermError, ParseError, SystemDefinitionError

seeds = st.integers(0, 2**32 - 1)


def test_parse_t_system(T):
    assert T.start == Call("T", ())
    eq = T.equation("T")
    assert eq.params == ()
    assert eq.body == Abs("x", Abs("y", App(App(Call("T", ()), Var("y")), Var("x"))))


def test_parse_u_system(U):
    eq = U.equation("R")
    assert eq.params == ("x",)
    assert U.start == Abs("x", Call("R", ("x",)))


def test_system_text_round_trip(T, U):
    for s in (T, U):
        assert parse_regular_system(str(s)) == s


@pytest.mark.parametrize("text, message", [
    ("F() = \\x. x ; F() = \\y. y ; start F()", "duplicate equation F"),
    ("F(a) = \\x. a ; start F()", "arity mismatch"),
    ("F() = F() ; start F()", "unguarded cycle through F"),
    ("F() = G() ; G() = F() ; start \\x. F()", "unguarded cycle"),
    ("F(a, a) = \\x. a ; start \\y. F(y, y)", "repeated parameter"),
])
def test_invalid_systems(text, message):
    with pytest.raises(SystemDefinitionError, match=message):
        parse_regular_system(text)


def test_undefined_equation_is_reported():
    with pytest.raises(ParseError, match="undefined equation G"):
        parse_regular_system("F() = \\x. G() ; start F()")


def test_open_equation_body_is_rejected():
    with pytest.raises(OpenTermError, match="open term: y"):
        RegularSystem((Equation("F", (), Abs("x", Var("y"))),), Call("F", ()))


def test_guarded_cycle_through_constructor_is_fine():
    s = parse_regular_system("F(a) = G(a) ; G(b) = \\x. F(b) ; start \\y. F(y)")
    assert truncate(handle_of(s), 3) is not None


def test_system_from_term_names_equations_after_binders():
    s = system_from_term(random_lambda_mu(random.Random(3)))
    assert all(e.name[0].isupper() for e in s.equations)


@given(seeds)
def test_compiled_lambda_mu_unfolds_like_named_substitution(seed):
    # two routes to the same tree: compiled system vs. plain μ-unfolding
    m = random_lambda_mu(random.Random(seed))
    assert trees_alpha_equal(truncate(handle_of(m), 8), mu_truncate(m, 8))


@given(seeds)
def test_system_handle_unfolds_like_call_expansion(seed):
    s = random_system(random.Random(seed))
    assert trees_alpha_equal(truncate(handle_of(s), 8), system_truncate(s, s.start, 8))
