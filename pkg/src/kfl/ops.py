"""Operations shared by the HTTP service and the command line client.

Functions here take and return the wire schemas; semantic failures raise
ValueError (or FormulaSyntaxError) and are mapped to protocol errors by the
callers.
"""

from __future__ import annotations

from . import lab
from .axioms import get_scheme, SCHEMES
from .formula import Scheme, metavariables_of, parse, render
from .kripke import Frame, bits, mask_of
from .lab import FRAME_FILTERS, SweepConfig, enumerate_frames, verify_theorem
from .schemas import (
    AxiomRequest, AxiomResponse, CheckRequest, CheckResponse, CountermodelDocument,
    EnumerateRequest, EnumerateResponse, FailingBlock, FrameDocument, ModelDocument,
    NodeProps, PropsResponse, SchemeInfo, VerifyRequest, VerifyResponse,
    WitnessRequest, WitnessResponse,
)
from .semantics import (
    Model, definable_sets, extension, frame_validates_scheme, is_atom_persistent,
    is_formula_persistent, model_validates_scheme,
)
from .witness import THEOREM_SEARCH, build_countermodel, find_violation


def doc_to_model(doc: ModelDocument) -> tuple[Model, list[str]]:
    """Decode a document; node indices follow the document's name order."""
    index = {name: i for i, name in enumerate(doc.nodes)}
    frame = Frame.from_edges(len(doc.nodes),
                             [(index[a], index[b]) for a, b in doc.edges])
    valuation = {atom: mask_of(index[name] for name in members)
                 for atom, members in doc.valuation.items()}
    return Model(frame, valuation), doc.nodes


def model_to_doc(model: Model, names: list[str]) -> ModelDocument:
    frame = model.frame
    return ModelDocument(
        nodes=list(names),
        edges=[(names[i], names[j]) for i, j in frame.edges()],
        valuation={atom: [names[k] for k in bits(mask)]
                   for atom, mask in sorted(model.valuation.items())},
    )


def run_check(request: CheckRequest) -> CheckResponse:
    model, names = doc_to_model(request.model)
    f = parse(request.formula)
    ext = extension(model, f)
    forcing = {name: bool(ext >> k & 1) for k, name in enumerate(names)}
    node_forces = None
    if request.node is not None:
        if request.node not in forcing:
            raise ValueError(f"unknown node {request.node!r}")
        node_forces = forcing[request.node]
    return CheckResponse(forcing=forcing, satisfied=ext == model.frame.full_mask,
                         node=request.node, node_forces=node_forces)


def run_props(doc: ModelDocument) -> PropsResponse:
    model, names = doc_to_model(doc)
    frame = model.frame
    full = frame.full_mask
    algebra = definable_sets(model)
    per_node = []
    for k in range(frame.n):
        reach = frame.reach_plus(k)
        per_node.append(NodeProps(
            node=names[k],
            reach=[names[j] for j in bits(reach)],
            reach_reflexive=frame.is_reflexive_on(reach),
            reach_transitive=frame.is_transitive_on(reach),
            reach_atom_persistent=is_atom_persistent(model, reach),
            reach_formula_persistent=is_formula_persistent(model, reach, algebra),
        ))
    return PropsResponse(
        reflexive=frame.is_reflexive_on(full),
        transitive=frame.is_transitive_on(full),
        connected=frame.is_connected(),
        atom_persistent=is_atom_persistent(model),
        formula_persistent=is_formula_persistent(model, algebra=algebra),
        per_node=per_node,
    )


def _ad_hoc_scheme(text: str) -> Scheme:
    body = parse(text, scheme_mode=True)
    if not metavariables_of(body):
        raise ValueError("an ad-hoc scheme needs at least one metavariable")
    return Scheme.axiom("adhoc", body)


def run_axiom(request: AxiomRequest) -> AxiomResponse:
    if (request.name is None) == (request.scheme is None):
        raise ValueError("provide exactly one of a scheme name or scheme text")
    if request.persistent_only and not request.frame:
        raise ValueError("persistent-only checking applies to frame-level checks")
    scheme = (get_scheme(request.name) if request.name is not None
              else _ad_hoc_scheme(request.scheme))
    model, names = doc_to_model(request.model)
    if request.frame:
        verdict = frame_validates_scheme(model.frame, scheme,
                                         persistent_only=request.persistent_only)
        level = "frame-persistent" if request.persistent_only else "frame"
    else:
        verdict = model_validates_scheme(model, scheme)
        level = "model"
    if verdict.holds:
        return AxiomResponse(holds=True, level=level, scheme=scheme.name)
    return AxiomResponse(
        holds=False, level=level, scheme=scheme.name,
        failing_node=names[verdict.failing_node],
        failing_assignment={meta: [names[k] for k in bits(mask)]
                            for meta, mask in verdict.failing_assignment.items()},
        failing_instance=render(verdict.failing_instance),
    )


def run_verify(request: VerifyRequest) -> VerifyResponse:
    mode = "sampled" if request.samples else "exhaustive"
    cfg = SweepConfig(max_nodes=request.max_nodes, atoms=request.atoms, mode=mode,
                      samples=request.samples or 0, seed=request.seed,
                      force=request.force)
    report = verify_theorem(request.theorem.lower(), cfg)
    payload = report.to_json_dict()
    return VerifyResponse(theorem=report.theorem, config=payload["config"],
                          counts=payload["counts"], mismatches=payload["mismatches"],
                          elapsed_ms=payload["elapsed_ms"], ok=report.ok)


def run_witness(request: WitnessRequest) -> WitnessResponse:
    theorem = request.theorem.casefold()
    if theorem not in THEOREM_SEARCH:
        valid = ", ".join(THEOREM_SEARCH)
        raise ValueError(f"unknown theorem {request.theorem!r} (valid: {valid})")
    model, names = doc_to_model(request.model)
    kind, region = THEOREM_SEARCH[theorem]
    witness = find_violation(model, kind, region=region or "plus")
    if witness is None:
        return WitnessResponse(found=False)
    base = model if region is not None else model.frame
    cm = build_countermodel(theorem, witness, base)
    doc = model_to_doc(cm.model, names)
    failing = FailingBlock(node=names[cm.failing_node],
                           instance=render(cm.failing_instance),
                           scheme=cm.scheme,
                           premises=[render(p) for p in cm.premises])
    return WitnessResponse(found=True, countermodel=CountermodelDocument(
        nodes=doc.nodes, edges=doc.edges, valuation=doc.valuation, failing=failing))


def run_enumerate(request: EnumerateRequest) -> EnumerateResponse:
    predicates = []
    for name in request.filters:
        try:
            predicates.append(FRAME_FILTERS[name])
        except KeyError:
            valid = ", ".join(FRAME_FILTERS)
            raise ValueError(f"unknown filter {name!r} (valid: {valid})") from None
    count = 0
    frames: list[FrameDocument] | None = None if request.count_only else []
    for frame in enumerate_frames(request.nodes, force=request.force):
        if all(p(frame) for p in predicates):
            count += 1
            if frames is not None and len(frames) < request.limit:
                frames.append(FrameDocument(n=frame.n, mask=frame.to_mask(),
                                            edges=frame.edges()))
    return EnumerateResponse(count=count, frames=frames)


def list_schemes() -> list[SchemeInfo]:
    out = []
    for name, scheme in SCHEMES.items():
        if scheme.kind == "axiom":
            template = render(scheme.body)
        else:
            template = "; ".join(render(p) for p in scheme.premises)
            template += " / " + render(scheme.conclusion)
        out.append(SchemeInfo(name=name, kind=scheme.kind, template=template,
                              metavariables=list(scheme.metavariables)))
    return out


def verify_theorem_ids() -> tuple[str, ...]:
    return lab.theorem_ids()


def witness_theorem_ids() -> tuple[str, ...]:
    return tuple(THEOREM_SEARCH)
