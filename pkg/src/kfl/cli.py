"""Command line front door; a thin client over the shared operations layer.

Exit codes: 0 the question holds / work produced, 1 a semantic check failed
(formula not satisfied, scheme not validated, sweep found mismatches),
2 usage, parse or file errors, 3 nothing to witness.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from . import ops
from .schemas import (
    AxiomRequest, CheckRequest, EnumerateRequest, ModelDocument, VerifyRequest,
    WitnessRequest,
)

EXIT_OK = 0
EXIT_DOES_NOT_HOLD = 1
EXIT_USAGE = 2
EXIT_NOTHING_TO_WITNESS = 3


def _load_document(path: str) -> ModelDocument:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise ValueError(f"cannot read model file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON in {path}: {exc}") from exc
    try:
        return ModelDocument.model_validate(payload)
    except ValidationError as exc:
        raise ValueError(f"invalid model document {path}: {exc}") from exc


def _cmd_check(args) -> int:
    doc = _load_document(args.model)
    response = ops.run_check(CheckRequest(model=doc, formula=args.formula,
                                          node=args.node))
    for name, value in response.forcing.items():
        print(f"{name}\t{'true' if value else 'false'}")
    if args.node is not None:
        return EXIT_OK if response.node_forces else EXIT_DOES_NOT_HOLD
    return EXIT_OK if response.satisfied else EXIT_DOES_NOT_HOLD


def _cmd_props(args) -> int:
    doc = _load_document(args.model)
    response = ops.run_props(doc)
    print(f"reflexive: {response.reflexive}")
    print(f"transitive: {response.transitive}")
    print(f"connected: {response.connected}")
    print(f"atom persistent: {response.atom_persistent}")
    print(f"formula persistent: {response.formula_persistent}")
    for entry in response.per_node:
        reach = ", ".join(entry.reach) if entry.reach else "-"
        print(f"node {entry.node}: reach [{reach}]"
              f" reflexive={entry.reach_reflexive}"
              f" transitive={entry.reach_transitive}"
              f" atom-persistent={entry.reach_atom_persistent}"
              f" formula-persistent={entry.reach_formula_persistent}")
    return EXIT_OK


def _cmd_axiom(args) -> int:
    doc = _load_document(args.model)
    response = ops.run_axiom(AxiomRequest(
        model=doc, name=args.name, scheme=args.scheme,
        frame=args.frame, persistent_only=args.persistent_only))
    print(f"{response.scheme} [{response.level}]: "
          + ("holds" if response.holds else "fails"))
    if not response.holds:
        print(f"failing node: {response.failing_node}")
        assignment = ", ".join(
            f"{meta} -> {{{', '.join(nodes)}}}"
            for meta, nodes in response.failing_assignment.items())
        print(f"failing assignment: {assignment}")
        print(f"failing instance: {response.failing_instance}")
    return EXIT_OK if response.holds else EXIT_DOES_NOT_HOLD


def _cmd_verify(args) -> int:
    response = ops.run_verify(VerifyRequest(
        theorem=args.theorem, max_nodes=args.max_nodes, atoms=args.atoms,
        samples=args.sample, seed=args.seed, force=args.force))
    if args.json:
        print(json.dumps({
            "theorem": response.theorem, "config": response.config,
            "counts": response.counts, "mismatches": response.mismatches,
            "elapsed_ms": response.elapsed_ms,
        }, sort_keys=True))
    else:
        by_n = response.counts["by_nodes"]
        shape = "+".join(str(by_n[k]) for k in sorted(by_n, key=int, reverse=True))
        print(f"theorem: {response.theorem}")
        print(f"{shape} {response.counts['unit']},"
              f" {response.counts['mismatches']} mismatches")
        print(f"condition true: {response.counts['condition_true']}"
              f"   valid: {response.counts['valid']}")
        for mismatch in response.mismatches:
            print(f"  mismatch: {json.dumps(mismatch, sort_keys=True)}")
        print(f"elapsed: {response.elapsed_ms:.1f} ms")
    return EXIT_OK if response.ok else EXIT_DOES_NOT_HOLD


def _cmd_witness(args) -> int:
    doc = _load_document(args.model)
    response = ops.run_witness(WitnessRequest(theorem=args.theorem, model=doc))
    if not response.found:
        print("no violation found; nothing to witness", file=sys.stderr)
        return EXIT_NOTHING_TO_WITNESS
    print(json.dumps(response.countermodel.model_dump(), sort_keys=True))
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    filters = [name for name in (args.filter or "").split(",") if name]
    response = ops.run_enumerate(EnumerateRequest(
        nodes=args.nodes, filters=filters, count_only=args.count_only,
        limit=args.limit, force=args.force))
    if args.count_only:
        print(response.count)
    else:
        for frame in response.frames:
            print(json.dumps(frame.model_dump(), sort_keys=True))
        if response.count > len(response.frames):
            print(f"... {response.count - len(response.frames)} more "
                  f"(raise --limit to stream them)", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kfl",
        description="Kripke-semantics workbench for fuzzy and superintuitionistic logics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a formula at every node of a model")
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--formula", required=True, help="formula text")
    p.add_argument("--node", help="report and gate on a single node")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("props", help="frame and persistency properties of a model")
    p.add_argument("--model", required=True)
    p.set_defaults(fn=_cmd_props)

    p = sub.add_parser("axiom", help="check a scheme at model or frame level")
    p.add_argument("--model", required=True)
    p.add_argument("--name", help="registered scheme name (A1..A7, MP, GODEL, LIN)")
    p.add_argument("--scheme", help="ad-hoc scheme text with metavariables")
    p.add_argument("--frame", action="store_true",
                   help="quantify over all valuations of the frame")
    p.add_argument("--persistent-only", action="store_true",
                   help="with --frame, restrict to persistent valuations")
    p.set_defaults(fn=_cmd_axiom)

    p = sub.add_parser("verify", help="sweep a theorem over enumerated frames/models")
    p.add_argument("--theorem", required=True)
    p.add_argument("--max-nodes", type=int, required=True)
    p.add_argument("--atoms", type=int, default=3)
    p.add_argument("--sample", type=int, help="samples per node count above 3")
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--force", action="store_true", help="override the budget guard")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("witness", help="find a defect and emit its countermodel")
    p.add_argument("--theorem", required=True,
                   help="mp, a1, a4-reflexivity, a4-persistency, a5a, "
                        "a5b-transitivity, a5b-persistency or a6")
    p.add_argument("--model", required=True)
    p.set_defaults(fn=_cmd_witness)

    p = sub.add_parser("enumerate", help="count or stream labeled frames")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--filter", help="comma separated: reflexive,transitive,connected")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--limit", type=int, default=100, help="stream at most this many")
    p.add_argument("--force", action="store_true", help="override the budget guard")
    p.set_defaults(fn=_cmd_enumerate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
