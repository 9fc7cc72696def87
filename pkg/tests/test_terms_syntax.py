import random

import pytest
from hypothesis import given, strategies as st

from generators import random_lambda_mu
from oracles import subst

from cyclam import (Abs, App, Call, Cut, Mu, Var, alpha_eq_terms, canonical, free_vars,
                    parse_lambda_mu, parse_term, pretty, size)
from cyclam.errors import OpenTermError, ParseError
from cyclam.syntax import parse_formula
from cyclam.terms import fresh_name, rename_free

seeds = st.integers(0, 2**32 - 1)


def test_parse_basic_forms():
    assert parse_lambda_mu("\\x. x") == Abs("x", Var("x"))
    assert parse_lambda_mu("λx.x") == Abs("x", Var("x"))
    assert parse_lambda_mu("\\x y. x y") == Abs("x", Abs("y", App(Var("x"), Var("y"))))
    assert parse_lambda_mu("mu f. \\x. f x") == Mu("f", Abs("x", App(Var("f"), Var("x"))))
    assert parse_lambda_mu("μf. \\x. f") == Mu("f", Abs("x", Var("f")))


def test_application_is_left_associative_and_lambda_extends_right():
    t = parse_lambda_mu("\\x. x x \\y. y x")
    assert t == Abs("x", App(App(Var("x"), Var("x")), Abs("y", App(Var("y"), Var("x")))))


def test_comments_and_whitespace_are_ignored():
    assert parse_lambda_mu("# identity\n\\x.\n  x  # body\n") == Abs("x", Var("x"))


def test_cut_and_calls_only_where_enabled():
    assert parse_term("_ x", cuts=True) == App(Cut(), Var("x"))
    assert parse_term("F(x, _)", calls={"F"}, cuts=True) == Call("F", ("x", None))
    with pytest.raises(ParseError):
        parse_term("_")


def test_open_term_is_rejected():
    with pytest.raises(OpenTermError, match="open term: y"):
        parse_lambda_mu("\\x.y")


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse_lambda_mu("\\x.\n  (x")
    assert (info.value.line, info.value.col) == (2, 5)
    assert str(info.value).startswith("syntax error at 2:5:")


def test_parse_error_on_bad_character():
    with pytest.raises(ParseError, match="unexpected character"):
        parse_lambda_mu("\\x. x $")


def test_formula_parsing():
    names, body = parse_formula("(x y) y x")
    assert names == ("x", "y") and body == App(Var("y"), Var("x"))
    with pytest.raises(ParseError, match="distinct"):
        parse_formula("(x x) x")


def test_size_and_free_vars():
    t = parse_term("\\x. x y (mu f. f z)")
    assert size(t) == 9
    assert free_vars(t) == {"y", "z"}


def test_alpha_equivalence():
    assert alpha_eq_terms(parse_lambda_mu("\\x. \\y. x"), parse_lambda_mu("\\a. \\b. a"))
    assert not alpha_eq_terms(parse_lambda_mu("\\x. \\y. x"), parse_lambda_mu("\\x. \\y. y"))
    # shadowing: the inner binder wins
    assert alpha_eq_terms(parse_lambda_mu("\\x. \\x. x"), parse_lambda_mu("\\a. \\b. b"))
    assert alpha_eq_terms(parse_lambda_mu("mu f. \\x. f"), parse_lambda_mu("mu g. \\y. g"))
    assert not alpha_eq_terms(parse_lambda_mu("mu f. \\x. f"), parse_lambda_mu("\\f. \\x. f"))


def test_canonical_distinguishes_free_names():
    assert canonical(Var("x")) != canonical(Var("y"))
    assert canonical(Abs("x", Var("y"))) == canonical(Abs("z", Var("y")))


def test_fresh_name_avoids():
    assert fresh_name("x", {"x"}) not in {"x"}
    assert fresh_name("x", set()) == "x"
    n = fresh_name("x", {"x", "x1", "x2"})
    assert n not in {"x", "x1", "x2"} and n.startswith("x")


def test_pretty_forms():
    assert pretty(parse_lambda_mu("\\x. (\\y. y) x")) == "\\x. (\\y. y) x"
    assert pretty(parse_lambda_mu("\\x. x (x x)")) == "\\x. x (x x)"
    assert pretty(Call("F", ("a", None))) == "F(a, _)"


@given(seeds)
def test_pretty_parse_round_trip(seed):
    t = random_lambda_mu(random.Random(seed))
    assert parse_lambda_mu(pretty(t)) == t


@given(seeds, st.sampled_from(["x", "y", "z"]), st.sampled_from(["x", "y", "w"]))
def test_rename_free_matches_reference_substitution(seed, old, new):
    t = random_lambda_mu(random.Random(seed))
    body = t.body if isinstance(t, (Abs, Mu)) else t   # opens one binder
    ours = rename_free(body, {old: new})
    ref = subst(body, {old: Var(new)})
    assert alpha_eq_terms(ours, ref)
    assert free_vars(ours) == {new if v == old else v for v in free_vars(body)}
