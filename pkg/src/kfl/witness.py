"""Structural defect search and exact countermodel construction.

``find_violation`` locates the lexicographically least configuration that
breaks a frame or model condition (a node without a loop, a broken
transitivity triple inside a reachability set, a persistency break, a pair
of incomparable reachable nodes).  ``build_countermodel`` then produces the
valuation and failing scheme instance that the corresponding
characterization argument prescribes for that defect, and re-evaluates the
instance before returning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .axioms import get_scheme
from .formula import Atom, Formula, TOP, instantiate, render
from .kripke import Frame, bits
from .semantics import Model, definable_sets, forces

__all__ = [
    "ViolationWitness", "Countermodel", "find_violation", "build_countermodel",
    "THEOREM_SEARCH", "theorem_names",
]

# Canonical defect kinds.  "non-transitive-in-Rplus" is accepted as an alias
# of the triple form: both name the same broken-triple configuration.
KIND_NON_REFLEXIVE_NODE = "non-reflexive-node"
KIND_NON_REFLEXIVE_IN_RPLUS = "non-reflexive-in-Rplus"
KIND_NON_TRANSITIVE_TRIPLE = "non-transitive-triple-in-Rplus"
KIND_NON_REFLEXIVE_IN_R2 = "non-reflexive-in-R2"
KIND_PERSISTENCY_BREAK = "persistency-break"
KIND_NON_CONNECTED_PAIR = "non-connected-pair"

_KIND_ALIASES = {
    KIND_NON_REFLEXIVE_NODE.casefold(): KIND_NON_REFLEXIVE_NODE,
    KIND_NON_REFLEXIVE_IN_RPLUS.casefold(): KIND_NON_REFLEXIVE_IN_RPLUS,
    KIND_NON_TRANSITIVE_TRIPLE.casefold(): KIND_NON_TRANSITIVE_TRIPLE,
    "non-transitive-in-rplus": KIND_NON_TRANSITIVE_TRIPLE,
    KIND_NON_REFLEXIVE_IN_R2.casefold(): KIND_NON_REFLEXIVE_IN_R2,
    KIND_PERSISTENCY_BREAK.casefold(): KIND_PERSISTENCY_BREAK,
    KIND_NON_CONNECTED_PAIR.casefold(): KIND_NON_CONNECTED_PAIR,
}


@dataclass(frozen=True)
class ViolationWitness:
    """A concrete structural defect.

    ``chain`` lists the intermediate nodes of a relation path from ``k0`` to
    the first offending node (empty when the step is direct or when the
    anchor itself offends).  ``breaking_set`` is the definable set that
    fails to persist, for persistency breaks only.
    """

    kind: str
    k0: int
    nodes: tuple[int, ...]
    chain: tuple[int, ...] = ()
    breaking_set: int | None = None
    region: str | None = None


@dataclass(frozen=True)
class Countermodel:
    """A model plus the node and scheme instance witnessing failure there.

    For rule schemes the premises hold at the failing node while the
    conclusion (stored as ``failing_instance``) does not.
    """

    model: Model
    failing_node: int
    failing_instance: Formula
    scheme: str
    premises: tuple[Formula, ...] = ()

    def check(self) -> None:
        """Re-evaluate the defining failure; raises if it does not hold."""
        for premise in self.premises:
            if not forces(self.model, self.failing_node, premise):
                raise RuntimeError(
                    f"countermodel premise {render(premise)!r} does not hold "
                    f"at node {self.failing_node}")
        if forces(self.model, self.failing_node, self.failing_instance):
            raise RuntimeError(
                f"countermodel instance {render(self.failing_instance)!r} "
                f"unexpectedly holds at node {self.failing_node}")


def _frame_of(target) -> Frame:
    return target.frame if isinstance(target, Model) else target


def _bfs_path(frame: Frame, src: int, target: int) -> list[int] | None:
    """Shortest path of >= 1 edges from src to target as [v1, ..., target];
    ties are broken by discovering nodes in ascending index order."""
    parent: dict[int, int | None] = {}
    frontier = list(bits(frame.rows[src]))
    for v in frontier:
        parent[v] = None
    while frontier and target not in parent:
        nxt = []
        for v in frontier:
            for w in bits(frame.rows[v]):
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = sorted(nxt)
    if target not in parent:
        return None
    path = [target]
    v = target
    while parent[v] is not None:
        v = parent[v]
        path.append(v)
    path.reverse()
    return path


def _chain_to(frame: Frame, k0: int, target: int, min_edges: int) -> tuple[int, ...]:
    """Intermediate nodes l1..ln with k0 R l1 R ... R ln R target and a total
    edge count of at least ``min_edges`` (1 or 2)."""
    if min_edges <= 1:
        path = _bfs_path(frame, k0, target)
        if path is None:
            raise ValueError(f"node {target} is not reachable from {k0}")
        return tuple(path[:-1])
    best: tuple[int, tuple[int, ...]] | None = None
    for a in bits(frame.rows[k0]):
        path = _bfs_path(frame, a, target)
        if path is None:
            continue
        chain = (a,) + tuple(path[:-1])
        if best is None or len(chain) < len(best[1]):
            best = (a, chain)
    if best is None:
        raise ValueError(f"node {target} is not reachable from {k0} in 2 or more steps")
    return best[1]


def find_violation(target, condition: str, *, region: str = "plus") -> ViolationWitness | None:
    """Search for the lexicographically least witness of a failed condition.

    ``target`` is a frame, or a model for persistency breaks.  For
    persistency breaks ``region`` selects the one-or-more-steps or the
    two-or-more-steps reachability sets, and breaking sets are drawn from
    the model's definable algebra in ascending mask order.
    """
    kind = _KIND_ALIASES.get(condition.casefold())
    if kind is None:
        valid = ", ".join(sorted(set(_KIND_ALIASES.values())))
        raise ValueError(f"unknown violation kind {condition!r} (valid: {valid})")
    frame = _frame_of(target)

    if kind == KIND_NON_REFLEXIVE_NODE:
        for k in range(frame.n):
            if not frame.has_edge(k, k):
                return ViolationWitness(kind, k0=k, nodes=(k,))
        return None

    if kind == KIND_NON_REFLEXIVE_IN_RPLUS:
        for k0 in range(frame.n):
            for k1 in bits(frame.reach_plus(k0)):
                if not frame.has_edge(k1, k1):
                    return ViolationWitness(kind, k0, (k1,), _chain_to(frame, k0, k1, 1))
        return None

    if kind == KIND_NON_TRANSITIVE_TRIPLE:
        for k0 in range(frame.n):
            reach = frame.reach_plus(k0)
            for k1 in bits(reach):
                for k2 in bits(frame.rows[k1] & reach):
                    missing = frame.rows[k2] & ~frame.rows[k1]
                    if missing:
                        k3 = (missing & -missing).bit_length() - 1
                        return ViolationWitness(kind, k0, (k1, k2, k3),
                                                _chain_to(frame, k0, k1, 1))
        return None

    if kind == KIND_NON_REFLEXIVE_IN_R2:
        for k0 in range(frame.n):
            for k in bits(frame.n_step_image(k0, 2)):
                if not frame.has_edge(k, k):
                    for mid in bits(frame.rows[k0]):
                        if frame.has_edge(mid, k):
                            return ViolationWitness(kind, k0, (k,), (mid,))
        return None

    if kind == KIND_NON_CONNECTED_PAIR:
        for k in range(frame.n):
            reach = frame.reach_plus(k)
            for k1 in bits(reach):
                for k2 in bits(reach):
                    if not (frame.has_edge(k1, k2) or frame.has_edge(k2, k1)):
                        return ViolationWitness(kind, k, (k1, k2))
        return None

    # persistency break
    if not isinstance(target, Model):
        raise ValueError("a persistency break search needs a model")
    if region not in ("plus", "plusplus"):
        raise ValueError("region must be 'plus' or 'plusplus'")
    algebra = definable_sets(target)
    min_edges = 1 if region == "plus" else 2
    for k0 in range(frame.n):
        reachable = frame.reach_plus(k0) if region == "plus" else frame.reach_plusplus(k0)
        for k1 in bits(reachable):
            for k2 in bits(frame.rows[k1]):
                for mask in algebra.masks:
                    if mask >> k1 & 1 and not mask >> k2 & 1:
                        return ViolationWitness(
                            KIND_PERSISTENCY_BREAK, k0, (k1, k2),
                            _chain_to(frame, k0, k1, min_edges),
                            breaking_set=mask, region=region)
    return None


# theorem identifier -> (defect kind, persistency region or None)
THEOREM_SEARCH: dict[str, tuple[str, str | None]] = {
    "mp": (KIND_NON_REFLEXIVE_NODE, None),
    "a1": (KIND_NON_TRANSITIVE_TRIPLE, None),
    "a4-reflexivity": (KIND_NON_REFLEXIVE_IN_RPLUS, None),
    "a4-persistency": (KIND_PERSISTENCY_BREAK, "plus"),
    "a5a": (KIND_NON_REFLEXIVE_IN_R2, None),
    "a5b-transitivity": (KIND_NON_TRANSITIVE_TRIPLE, None),
    "a5b-persistency": (KIND_PERSISTENCY_BREAK, "plusplus"),
    "a6": (KIND_NON_CONNECTED_PAIR, None),
}


def theorem_names() -> tuple[str, ...]:
    return tuple(THEOREM_SEARCH)


def _fresh_atom(valuation, stem: str = "brk") -> str:
    if stem not in valuation:
        return stem
    i = 1
    while f"{stem}{i}" in valuation:
        i += 1
    return f"{stem}{i}"


def _require_kind(theorem: str, w: ViolationWitness, expected: str):
    if w.kind != expected:
        raise ValueError(
            f"theorem {theorem!r} needs a {expected} witness, got {w.kind}")


def _last(chain: tuple[int, ...], k0: int) -> int:
    """ln, the chain node adjacent to the offender; k0 when the chain is empty."""
    return chain[-1] if chain else k0


def build_countermodel(theorem: str, w: ViolationWitness, base) -> Countermodel:
    """Build the countermodel a characterization argument prescribes.

    ``base`` is the defective frame, or the defective model for the
    persistency variants (whose produced valuation is the original one
    extended by a fresh atom realizing the breaking set).  The returned
    countermodel has been re-checked by evaluation.
    """
    t = theorem.casefold()
    frame = _frame_of(base)
    full = frame.full_mask

    if t == "mp":
        _require_kind(theorem, w, KIND_NON_REFLEXIVE_NODE)
        k = w.nodes[0]
        # everyone forces p, exactly the successors of k force q: k forces
        # p and p -> q but not q, so modus ponens fails at k
        model = Model(frame, {"p": full, "q": frame.rows[k]})
        premises, conclusion = instantiate(
            get_scheme("MP"), {"PHI": Atom("p"), "PSI": Atom("q")})
        cm = Countermodel(model, k, conclusion, "MP", premises)
    elif t == "a1":
        _require_kind(theorem, w, KIND_NON_TRANSITIVE_TRIPLE)
        k1, k2, k3 = w.nodes
        model = Model(frame, {"p": full, "q": frame.rows[k1],
                              "r": frame.rows[k1] & frame.rows[k2]})
        instance = instantiate(get_scheme("A1"),
                               {"PHI": Atom("p"), "PSI": Atom("q"), "THETA": Atom("r")})
        cm = Countermodel(model, _last(w.chain, w.k0), instance, "A1")
    elif t == "a4-reflexivity":
        _require_kind(theorem, w, KIND_NON_REFLEXIVE_IN_RPLUS)
        k1 = w.nodes[0]
        # only k1 forces p; with no loop on k1 the antecedent p & (p -> q)
        # holds there vacuously while q does not
        model = Model(frame, {"p": 1 << k1})
        instance = instantiate(get_scheme("A4"), {"PHI": Atom("p"), "PSI": Atom("q")})
        cm = Countermodel(model, _last(w.chain, w.k0), instance, "A4")
    elif t == "a4-persistency":
        _require_kind(theorem, w, KIND_PERSISTENCY_BREAK)
        if not isinstance(base, Model):
            raise ValueError("the A4 persistency construction needs the defective model")
        if w.region != "plus":
            raise ValueError("the A4 persistency construction needs a one-step-region witness")
        name = _fresh_atom(base.valuation)
        valuation = dict(base.valuation)
        valuation[name] = w.breaking_set
        model = Model(frame, valuation)
        instance = instantiate(get_scheme("A4"), {"PHI": Atom(name), "PSI": TOP})
        cm = Countermodel(model, _last(w.chain, w.k0), instance, "A4")
    elif t == "a5a":
        _require_kind(theorem, w, KIND_NON_REFLEXIVE_IN_R2)
        k = w.nodes[0]
        model = Model(frame, {"p": 1 << k, "q": 1 << k})
        instance = instantiate(get_scheme("A5a"),
                               {"PHI": Atom("p"), "PSI": Atom("q"), "THETA": Atom("r")})
        cm = Countermodel(model, w.k0, instance, "A5a")
    elif t == "a5b-transitivity":
        _require_kind(theorem, w, KIND_NON_TRANSITIVE_TRIPLE)
        k1, k2, k3 = w.nodes
        model = Model(frame, {"p": 1 << k2, "q": 1 << k3, "r": frame.rows[k1]})
        instance = instantiate(get_scheme("A5b"),
                               {"PHI": Atom("p"), "PSI": Atom("q"), "THETA": Atom("r")})
        cm = Countermodel(model, _last(w.chain, w.k0), instance, "A5b")
    elif t == "a5b-persistency":
        _require_kind(theorem, w, KIND_PERSISTENCY_BREAK)
        if not isinstance(base, Model):
            raise ValueError("the A5b persistency construction needs the defective model")
        if w.region != "plusplus":
            raise ValueError("the A5b persistency construction needs a two-step-region witness")
        if not w.chain:
            raise ValueError("a two-step-region witness must carry a nonempty chain")
        name = _fresh_atom(base.valuation)
        valuation = dict(base.valuation)
        valuation[name] = w.breaking_set
        model = Model(frame, valuation)
        instance = instantiate(get_scheme("A5b"),
                               {"PHI": Atom(name), "PSI": TOP, "THETA": Atom(name)})
        # fails one step earlier than the offender's predecessor
        node = w.chain[-2] if len(w.chain) >= 2 else w.k0
        cm = Countermodel(model, node, instance, "A5b")
    elif t == "a6":
        _require_kind(theorem, w, KIND_NON_CONNECTED_PAIR)
        if not (frame.is_reflexive_on(full) and frame.is_transitive_on(full)):
            raise ValueError("the A6 construction needs a reflexive and transitive frame")
        k, k1, k2 = w.k0, w.nodes[0], w.nodes[1]
        # transitivity turns reachability into direct edges
        if not (frame.has_edge(k, k1) and frame.has_edge(k, k2)):
            raise ValueError("offending nodes must be direct successors of the anchor")
        non_predecessors = 0
        for node in range(frame.n):
            if not frame.has_edge(node, k):
                non_predecessors |= 1 << node
        model = Model(frame, {"p": frame.rows[k1], "q": frame.rows[k2],
                              "r": frame.rows[k] & non_predecessors})
        instance = instantiate(get_scheme("A6"),
                               {"PHI": Atom("p"), "PSI": Atom("q"), "THETA": Atom("r")})
        cm = Countermodel(model, k, instance, "A6")
    else:
        valid = ", ".join(THEOREM_SEARCH)
        raise ValueError(f"unknown theorem {theorem!r} (valid: {valid})")

    cm.check()
    return cm
