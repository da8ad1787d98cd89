"""Kripke models, forcing, persistency, definable sets and scheme validity.

Forcing clauses: no node forces bot; an atom is forced where the valuation
says so; conjunction and disjunction are nodewise; ``f -> g`` is forced at k
iff every direct successor of k forcing f also forces g.

Extensions (truth sets, as bitmasks) compose:

    ext(bot)   = 0
    ext(f & g) = ext(f) & ext(g)
    ext(f | g) = ext(f) | ext(g)
    ext(f -> g) = {k : R[k] & ext(f) subset of ext(g)}

Because of this, quantification over all formulas reduces to iteration over
the definable-set algebra: the least family containing the empty set and the
atom extensions and closed under intersection, union and the arrow operation
A => B = {k : R[k] & A subset of B}.  Every member is the truth set of a
formula and every formula truth set is a member.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping, Sequence

from .formula import (
    And, Atom, BOT, Bot, Formula, Impl, Meta, Or, Scheme, contains_meta, substitute,
)
from .kripke import Frame, bits

__all__ = [
    "Model", "DefinableAlgebra", "SchemeVerdict",
    "forces", "extension", "make_arrow", "arrow_mask",
    "is_atom_persistent", "definable_sets", "is_formula_persistent",
    "successor_closed_sets", "compile_body", "eval_body",
    "model_validates_scheme", "frame_validates_scheme",
]


@dataclass(frozen=True)
class Model:
    """A frame plus an atom valuation mapping atom names to node masks.

    Atoms absent from the valuation are forced nowhere.
    """

    frame: Frame
    valuation: Mapping[str, int]

    def __post_init__(self):
        full = self.frame.full_mask
        for name, mask in self.valuation.items():
            if mask & ~full:
                raise ValueError(f"valuation of {name!r} has nodes out of range")

    def atom_mask(self, name: str) -> int:
        return self.valuation.get(name, 0)


def forces(model: Model, k: int, f: Formula) -> bool:
    """Direct recursive forcing check (the nodewise reference evaluator)."""
    model.frame._check(k)
    if contains_meta(f):
        raise ValueError("cannot evaluate a formula containing metavariables")
    return _forces(model, k, f)


def _forces(model: Model, k: int, f: Formula) -> bool:
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return bool(model.atom_mask(f.name) >> k & 1)
    if isinstance(f, And):
        return _forces(model, k, f.left) and _forces(model, k, f.right)
    if isinstance(f, Or):
        return _forces(model, k, f.left) or _forces(model, k, f.right)
    for k2 in bits(model.frame.rows[k]):
        if _forces(model, k2, f.left) and not _forces(model, k2, f.right):
            return False
    return True


def arrow_mask(frame: Frame, a: int, b: int) -> int:
    """A => B = {k : R[k] & A subset of B}."""
    out = 0
    for k in range(frame.n):
        if not frame.rows[k] & a & ~b:
            out |= 1 << k
    return out


def make_arrow(frame: Frame) -> Callable[[int, int], int]:
    """Memoizing arrow operation for one frame; hot path of every sweep."""
    rows = frame.rows
    n = frame.n
    memo: dict[tuple[int, int], int] = {}

    def arrow(a: int, b: int) -> int:
        key = (a, b)
        cached = memo.get(key)
        if cached is not None:
            return cached
        out = 0
        bad = a & ~b
        for k in range(n):
            if not rows[k] & bad:
                out |= 1 << k
        memo[key] = out
        return out

    return arrow


# A compiled body is a postorder instruction tuple for a small stack machine;
# this keeps scheme evaluation cheap inside assignment loops.

def compile_body(f: Formula, metavariables: Sequence[str],
                 atom_env: Mapping[str, int] | None = None):
    """Compile a formula to mask instructions.

    Metavariables become assignment slots.  Atoms resolve to constant masks
    through ``atom_env``; pass None to forbid atoms altogether.
    """
    meta_index = {name: i for i, name in enumerate(metavariables)}
    program: list[tuple[str, int]] = []

    def emit(g: Formula):
        if isinstance(g, Bot):
            program.append(("const", 0))
        elif isinstance(g, Atom):
            if atom_env is None:
                raise ValueError(f"atom {g.name!r} not allowed in this template")
            program.append(("const", atom_env.get(g.name, 0)))
        elif isinstance(g, Meta):
            try:
                program.append(("meta", meta_index[g.name]))
            except KeyError:
                raise ValueError(f"unbound metavariable {g.name!r}") from None
        else:
            emit(g.left)
            emit(g.right)
            program.append(({And: "and", Or: "or", Impl: "impl"}[type(g)], 0))

    emit(f)
    return tuple(program)


def eval_body(program, assignment: Sequence[int], arrow) -> int:
    """Run a compiled body on an assignment of masks to metavariable slots."""
    stack: list[int] = []
    push = stack.append
    for op, arg in program:
        if op == "meta":
            push(assignment[arg])
        elif op == "const":
            push(arg)
        elif op == "and":
            b = stack.pop()
            stack[-1] &= b
        elif op == "or":
            b = stack.pop()
            stack[-1] |= b
        else:
            b = stack.pop()
            stack[-1] = arrow(stack[-1], b)
    return stack[0]


def extension(model: Model, f: Formula) -> int:
    """Truth set of f as a node mask, computed compositionally."""
    if contains_meta(f):
        raise ValueError("cannot evaluate a formula containing metavariables")
    program = compile_body(f, (), model.valuation)
    return eval_body(program, (), make_arrow(model.frame))


def is_atom_persistent(model: Model, region: int | None = None) -> bool:
    """Atom truth propagates along edges whose source lies in ``region``
    (targets are unrestricted); ``None`` means all nodes."""
    if region is None:
        region = model.frame.full_mask
    rows = model.frame.rows
    for mask in model.valuation.values():
        for k in bits(region & mask):
            if rows[k] & ~mask:
                return False
    return True


@dataclass(frozen=True)
class DefinableAlgebra:
    """The definable node sets of a model, with a witness formula per set."""

    n: int
    masks: tuple[int, ...]
    witnesses: Mapping[int, Formula]

    def __contains__(self, mask: int) -> bool:
        return mask in self.witnesses


def definable_sets(model: Model, atoms: Sequence[str] | None = None) -> DefinableAlgebra:
    """Least family containing the empty set and the given atoms' extensions,
    closed under intersection, union and arrow.

    Closure runs level by level so each set's witness formula is as shallow
    as possible; at most 2**n sets exist, so iteration terminates.
    """
    if atoms is None:
        atoms = sorted(model.valuation)
    witnesses: dict[int, Formula] = {0: BOT}
    for name in atoms:
        witnesses.setdefault(model.atom_mask(name), Atom(name))
    arrow = make_arrow(model.frame)
    while True:
        members = sorted(witnesses)
        added: dict[int, Formula] = {}
        for a in members:
            for b in members:
                fa, fb = witnesses[a], witnesses[b]
                for mask, left, right, cls in (
                        (a & b, fa, fb, And),
                        (a | b, fa, fb, Or),
                        (arrow(a, b), fa, fb, Impl)):
                    if mask not in witnesses and mask not in added:
                        added[mask] = cls(left, right)
        if not added:
            break
        witnesses.update(added)
    return DefinableAlgebra(model.frame.n, tuple(sorted(witnesses)), witnesses)


def _sets_persistent_on(rows: Sequence[int], masks, region: int) -> bool:
    for mask in masks:
        for k in bits(region & mask):
            if rows[k] & ~mask:
                return False
    return True


def is_formula_persistent(model: Model, region: int | None = None,
                          algebra: DefinableAlgebra | None = None) -> bool:
    """Every definable set propagates along edges leaving ``region``.

    Sound and complete for formula persistency because the definable sets
    are exactly the formula truth sets of the model.
    """
    if region is None:
        region = model.frame.full_mask
    if algebra is None:
        algebra = definable_sets(model)
    return _sets_persistent_on(model.frame.rows, algebra.masks, region)


def successor_closed_sets(frame: Frame) -> tuple[int, ...]:
    """All node masks closed under the relation, ascending."""
    rows = frame.rows
    out = []
    for mask in range(1 << frame.n):
        for k in bits(mask):
            if rows[k] & ~mask:
                break
        else:
            out.append(mask)
    return tuple(out)


@dataclass(frozen=True)
class SchemeVerdict:
    """Outcome of a scheme validity check.

    When ``holds`` is false, all three failing fields are present: the least
    failing node, the lexicographically first failing assignment of node
    masks to metavariables, and a concrete failing instance formula (for
    rules, the instantiated conclusion).
    """

    holds: bool
    failing_node: int | None = None
    failing_assignment: dict[str, int] | None = None
    failing_instance: Formula | None = None

    def __post_init__(self):
        complete = (self.failing_node is not None
                    and self.failing_assignment is not None
                    and self.failing_instance is not None)
        if self.holds == complete:
            raise ValueError("failing fields must be present exactly when the scheme fails")


def _check_assignments(scheme: Scheme, values: Sequence[int], full: int, arrow,
                       atom_env: Mapping[str, int] | None,
                       witness: Callable[[str, int], Formula]) -> SchemeVerdict:
    metas = scheme.metavariables
    if scheme.kind == "axiom":
        program = compile_body(scheme.body, metas, atom_env)
        for assignment in product(values, repeat=len(metas)):
            ext = eval_body(program, assignment, arrow)
            if ext != full:
                missing = ext ^ full
                node = (missing & -missing).bit_length() - 1
                mapping = {m: witness(m, v) for m, v in zip(metas, assignment)}
                return SchemeVerdict(False, node, dict(zip(metas, assignment)),
                                     substitute(scheme.body, mapping))
        return SchemeVerdict(True)
    premise_programs = [compile_body(p, metas, atom_env) for p in scheme.premises]
    conclusion_program = compile_body(scheme.conclusion, metas, atom_env)
    for assignment in product(values, repeat=len(metas)):
        premises = full
        for program in premise_programs:
            premises &= eval_body(program, assignment, arrow)
            if not premises:
                break
        if not premises:
            continue
        violation = premises & ~eval_body(conclusion_program, assignment, arrow)
        if violation:
            node = (violation & -violation).bit_length() - 1
            mapping = {m: witness(m, v) for m, v in zip(metas, assignment)}
            return SchemeVerdict(False, node, dict(zip(metas, assignment)),
                                 substitute(scheme.conclusion, mapping))
    return SchemeVerdict(True)


def model_validates_scheme(model: Model, scheme: Scheme,
                           atoms: Sequence[str] | None = None) -> SchemeVerdict:
    """Check a scheme against all definable-set assignments of a model.

    For axiom schemes the instantiated body must hold at every node; for
    rules, any node forcing all premises must force the conclusion.  Atom
    occurrences inside the template read the model's own valuation.  The
    failing instance is built from the algebra's witness formulas.
    """
    algebra = definable_sets(model, atoms)
    return _check_assignments(
        scheme, algebra.masks, model.frame.full_mask, make_arrow(model.frame),
        model.valuation, lambda _name, mask: algebra.witnesses[mask])


def frame_validates_scheme(frame: Frame, scheme: Scheme,
                           persistent_only: bool = False) -> SchemeVerdict:
    """Check a scheme against every valuation of a frame.

    Metavariables range over all node masks, which is equivalent to ranging
    over all formulas under all valuations since any mask is some atom's
    extension.  With ``persistent_only`` they range over successor-closed
    masks only, the truth sets available to persistent valuations.
    Templates must be atom-free here; the failing instance names a fresh
    lowercase atom per metavariable whose intended extension is the mask in
    the failing assignment.
    """
    if persistent_only:
        values: Sequence[int] = successor_closed_sets(frame)
    else:
        values = range(1 << frame.n)
    return _check_assignments(
        scheme, values, frame.full_mask, make_arrow(frame),
        None, lambda name, _mask: Atom(name.lower()))
