import pytest
from hypothesis import given, strategies as st

from kfl.formula import (
    And, Atom, BOT, Impl, Meta, Or, Scheme, TOP,
    FormulaSyntaxError, contains_meta, from_dict, instantiate, metavariables_of,
    parse, render, substitute, to_dict,
)


def test_parse_right_associative_implication():
    assert parse("p -> q -> r") == Impl(Atom("p"), Impl(Atom("q"), Atom("r")))


def test_parse_negation_sugar():
    assert parse("~p") == Impl(Atom("p"), BOT)


def test_parse_precedence_and_over_impl():
    assert parse("p & q -> r") == Impl(And(Atom("p"), Atom("q")), Atom("r"))


def test_parse_precedence_chain():
    # ~ binds tighter than &, & tighter than |, | tighter than ->
    assert parse("~p & q | r -> s") == Impl(
        Or(And(Impl(Atom("p"), BOT), Atom("q")), Atom("r")), Atom("s"))


def test_parse_left_associative_and_or():
    assert parse("p & q & r") == And(And(Atom("p"), Atom("q")), Atom("r"))
    assert parse("p | q | r") == Or(Or(Atom("p"), Atom("q")), Atom("r"))


def test_top_desugars():
    assert parse("top") == Impl(BOT, BOT)
    assert parse("top") == TOP


def test_parse_parens():
    assert parse("(p -> q) -> r") == Impl(Impl(Atom("p"), Atom("q")), Atom("r"))


def test_parse_atom_names():
    assert parse("foo_bar2") == Atom("foo_bar2")


@pytest.mark.parametrize("bad, position", [
    ("", 0),
    ("p &", 3),
    ("p @ q", 2),
    ("(p -> q", 7),
    ("p q", 2),
])
def test_parse_errors_carry_position(bad, position):
    with pytest.raises(FormulaSyntaxError) as err:
        parse(bad)
    assert err.value.position == position


def test_meta_rejected_outside_scheme_mode():
    with pytest.raises(FormulaSyntaxError) as err:
        parse("PHI -> p")
    assert "scheme mode" in str(err.value)
    assert parse("PHI -> p", scheme_mode=True) == Impl(Meta("PHI"), Atom("p"))


def test_render_examples():
    assert render(Impl(And(Atom("p"), Atom("q")), Atom("r"))) == "p & q -> r"
    assert render(Impl(BOT, BOT)) == "top"
    assert render(Impl(Atom("p"), Impl(Atom("q"), Atom("r")))) == "p -> q -> r"
    assert render(Impl(Atom("p"), BOT)) == "~p"
    assert render(And(Or(Atom("p"), Atom("q")), Atom("r"))) == "(p | q) & r"
    assert render(And(Atom("p"), And(Atom("q"), Atom("r")))) == "p & (q & r)"


FORMULAS = st.recursive(
    st.one_of(st.just(BOT), st.sampled_from(["p", "q", "r"]).map(Atom)),
    lambda inner: st.one_of(
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Impl, inner, inner),
    ),
    max_leaves=48,
)


@given(FORMULAS)
def test_render_parse_round_trip(f):
    assert parse(render(f)) == f


@given(FORMULAS, FORMULAS)
def test_substitute_is_homomorphic(f, g):
    scheme = Scheme.axiom("t", "(PHI & PSI) -> (PHI | (PSI -> bot))")
    assignment = {"PHI": f, "PSI": g}
    assert instantiate(scheme, assignment) == Impl(
        And(f, g), Or(f, Impl(g, BOT)))


@given(FORMULAS)
def test_json_round_trip(f):
    assert from_dict(to_dict(f)) == f


def test_json_encoding_shapes():
    assert to_dict(Atom("p")) == {"atom": "p"}
    assert to_dict(BOT) == {"bot": True}
    assert to_dict(And(Atom("p"), Atom("q"))) == {"and": [{"atom": "p"}, {"atom": "q"}]}
    assert to_dict(Or(Atom("p"), Atom("q"))) == {"or": [{"atom": "p"}, {"atom": "q"}]}
    assert to_dict(Impl(Atom("p"), BOT)) == {"impl": [{"atom": "p"}, {"bot": True}]}
    assert to_dict(Meta("PHI")) == {"meta": "PHI"}


def test_json_rejects_garbage():
    with pytest.raises(ValueError):
        from_dict({"nope": 1})
    with pytest.raises(ValueError):
        from_dict({"and": [{"atom": "p"}]})
    with pytest.raises(ValueError):
        from_dict({"bot": False})


def test_atom_name_validation():
    with pytest.raises(ValueError):
        Atom("P")
    with pytest.raises(ValueError):
        Atom("")
    with pytest.raises(ValueError):
        Meta("phi")


def test_scheme_metavariable_order_and_instantiate():
    s = Scheme.axiom("t", "(PHI -> PSI) -> ((PSI -> THETA) -> (PHI -> THETA))")
    assert s.metavariables == ("PHI", "PSI", "THETA")
    inst = instantiate(s, {"PHI": Atom("p"), "PSI": Atom("q"), "THETA": Atom("r")})
    assert inst == parse("(p -> q) -> (q -> r) -> (p -> r)")


def test_instantiate_missing_metavariable():
    s = Scheme.axiom("t", "PHI & PSI")
    with pytest.raises(ValueError, match="PSI"):
        instantiate(s, {"PHI": Atom("p")})


def test_instantiate_rejects_meta_in_assignment():
    s = Scheme.axiom("t", "PHI")
    with pytest.raises(ValueError, match="metavariable"):
        instantiate(s, {"PHI": Meta("PSI")})


def test_rule_instantiation():
    s = Scheme.rule("r", ("PHI", "PHI -> PSI"), "PSI")
    premises, conclusion = instantiate(s, {"PHI": Atom("p"), "PSI": Atom("q")})
    assert premises == (Atom("p"), parse("p -> q"))
    assert conclusion == Atom("q")


def test_substitute_fixes_non_meta_nodes():
    f = parse("p -> bot")
    assert substitute(f, {}) == f
    assert not contains_meta(f)
    assert metavariables_of(parse("PSI -> PHI & PSI", scheme_mode=True)) == ("PSI", "PHI")
