"""Kripke-semantics workbench for fuzzy and superintuitionistic logics."""

__version__ = "0.1.0"

from .formula import (  # noqa: F401
    And, Atom, BOT, Bot, Formula, Impl, Meta, Or, Scheme, TOP,
    FormulaSyntaxError, instantiate, parse, render,
)
from .kripke import Frame, bits, mask_of  # noqa: F401
from .semantics import (  # noqa: F401
    DefinableAlgebra, Model, SchemeVerdict, definable_sets, extension, forces,
    frame_validates_scheme, is_atom_persistent, is_formula_persistent,
    model_validates_scheme,
)
from .axioms import get_scheme, scheme_names  # noqa: F401
from .witness import (  # noqa: F401
    Countermodel, ViolationWitness, build_countermodel, find_violation,
)
from .lab import SweepConfig, VerificationReport, enumerate_frames, verify_theorem  # noqa: F401
