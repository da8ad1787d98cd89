"""Fixed registry of the basic fuzzy logic schemes plus two extensions.

A1 through A7 are the axiom templates of Hajek's basic logic BL, MP is its
single rule, GODEL is the conjunction-idempotence axiom that extends BL to
Godel logic, and LIN is the linearity (Dummett) axiom.
"""

from __future__ import annotations

from .formula import Scheme

__all__ = ["SCHEMES", "get_scheme", "scheme_names"]

SCHEMES: dict[str, Scheme] = {
    "A1": Scheme.axiom("A1", "(PHI -> PSI) -> ((PSI -> THETA) -> (PHI -> THETA))"),
    "A2": Scheme.axiom("A2", "(PHI & PSI) -> PHI"),
    "A3": Scheme.axiom("A3", "(PHI & PSI) -> (PSI & PHI)"),
    "A4": Scheme.axiom("A4", "(PHI & (PHI -> PSI)) -> (PSI & (PSI -> PHI))"),
    "A5a": Scheme.axiom("A5a", "(PHI -> (PSI -> THETA)) -> ((PHI & PSI) -> THETA)"),
    "A5b": Scheme.axiom("A5b", "((PHI & PSI) -> THETA) -> (PHI -> (PSI -> THETA))"),
    "A6": Scheme.axiom("A6", "((PHI -> PSI) -> THETA) -> (((PSI -> PHI) -> THETA) -> THETA)"),
    "A7": Scheme.axiom("A7", "bot -> PHI"),
    "MP": Scheme.rule("MP", ("PHI", "PHI -> PSI"), "PSI"),
    "GODEL": Scheme.axiom("GODEL", "PHI -> (PHI & PHI)"),
    "LIN": Scheme.axiom("LIN", "(PHI -> PSI) | (PSI -> PHI)"),
}

_BY_FOLDED = {name.casefold(): name for name in SCHEMES}


def scheme_names() -> tuple[str, ...]:
    return tuple(SCHEMES)


def get_scheme(name: str) -> Scheme:
    """Look up a scheme by name, case-insensitively."""
    try:
        return SCHEMES[_BY_FOLDED[name.casefold()]]
    except KeyError:
        valid = ", ".join(SCHEMES)
        raise ValueError(f"unknown scheme {name!r} (valid names: {valid})") from None
