import pytest

from kfl.axioms import SCHEMES, get_scheme, scheme_names
from kfl.formula import parse, render
from kfl.kripke import Frame
from kfl.semantics import frame_validates_scheme


def test_registry_is_exactly_eleven():
    assert scheme_names() == ("A1", "A2", "A3", "A4", "A5a", "A5b", "A6", "A7",
                              "MP", "GODEL", "LIN")


EXPECTED_BODIES = {
    "A1": "(PHI -> PSI) -> ((PSI -> THETA) -> (PHI -> THETA))",
    "A2": "(PHI & PSI) -> PHI",
    "A3": "(PHI & PSI) -> (PSI & PHI)",
    "A4": "(PHI & (PHI -> PSI)) -> (PSI & (PSI -> PHI))",
    "A5a": "(PHI -> (PSI -> THETA)) -> ((PHI & PSI) -> THETA)",
    "A5b": "((PHI & PSI) -> THETA) -> (PHI -> (PSI -> THETA))",
    "A6": "((PHI -> PSI) -> THETA) -> (((PSI -> PHI) -> THETA) -> THETA)",
    "A7": "bot -> PHI",
    "GODEL": "PHI -> (PHI & PHI)",
    "LIN": "(PHI -> PSI) | (PSI -> PHI)",
}


@pytest.mark.parametrize("name, body", sorted(EXPECTED_BODIES.items()))
def test_axiom_bodies_bit_exact(name, body):
    assert get_scheme(name).body == parse(body, scheme_mode=True)


def test_mp_rule_shape():
    mp = get_scheme("MP")
    assert mp.kind == "rule"
    assert mp.premises == (parse("PHI", scheme_mode=True),
                           parse("PHI -> PSI", scheme_mode=True))
    assert mp.conclusion == parse("PSI", scheme_mode=True)


def test_metavariables_subset_of_phi_psi_theta():
    for scheme in SCHEMES.values():
        assert set(scheme.metavariables) <= {"PHI", "PSI", "THETA"}


def test_lookup_case_insensitive():
    assert get_scheme("a5B") is SCHEMES["A5b"]
    assert get_scheme("godel") is SCHEMES["GODEL"]


def test_unknown_scheme_lists_names():
    with pytest.raises(ValueError) as err:
        get_scheme("A9")
    assert "A1" in str(err.value)
    assert "LIN" in str(err.value)


def test_get_scheme_examples():
    assert render(get_scheme("A1").body) == "(PHI -> PSI) -> (PSI -> THETA) -> PHI -> THETA"
    assert get_scheme("A5b").body == parse(
        "((PHI & PSI) -> THETA) -> (PHI -> (PSI -> THETA))", scheme_mode=True)
    assert get_scheme("GODEL").body == parse("PHI -> (PHI & PHI)", scheme_mode=True)


def test_canonical_instances():
    from kfl.formula import Atom, TOP, instantiate
    p, q = Atom("p"), Atom("q")
    assert instantiate(get_scheme("A2"), {"PHI": p, "PSI": q}) == parse("(p & q) -> p")
    assert instantiate(get_scheme("A4"), {"PHI": p, "PSI": q}) == parse(
        "(p & (p -> q)) -> (q & (q -> p))")
    assert render(instantiate(get_scheme("A7"), {"PHI": TOP})) == "bot -> top"


def test_universal_schemes_on_small_frames():
    # A2, A3, A7 and GODEL hold on every frame with up to 2 nodes (the full
    # 3-node check lives in the acceptance suite)
    for n in (1, 2):
        for mask in range(1 << (n * n)):
            frame = Frame.from_mask(n, mask)
            for name in ("A2", "A3", "A7", "GODEL"):
                assert frame_validates_scheme(frame, get_scheme(name)).holds
