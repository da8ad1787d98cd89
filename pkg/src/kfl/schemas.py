"""Wire formats: the model document plus request/response bodies.

A model document names its nodes; the name-to-index mapping is the order of
the ``nodes`` list, and serialization preserves that order.  Loading ignores
unknown top-level keys, so a countermodel document round-trips through any
endpoint that takes a plain model.
"""

from __future__ import annotations

import re

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

_ATOM_NAME = re.compile(r"[a-z][a-z0-9_]*\Z")


class ModelDocument(BaseModel):
    model_config = ConfigDict(extra="ignore")

    nodes: list[str] = Field(min_length=1)
    edges: list[tuple[str, str]] = []
    valuation: dict[str, list[str]] = {}

    @field_validator("nodes")
    @classmethod
    def _nodes_unique(cls, nodes):
        if any(not name for name in nodes):
            raise ValueError("node names must be nonempty")
        if len(set(nodes)) != len(nodes):
            raise ValueError("node names must be unique")
        return nodes

    @model_validator(mode="after")
    def _members_known(self):
        known = set(self.nodes)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise ValueError(f"edge ({a!r}, {b!r}) uses an unknown node")
        for atom, members in self.valuation.items():
            if not _ATOM_NAME.match(atom):
                raise ValueError(f"invalid atom name {atom!r}")
            for name in members:
                if name not in known:
                    raise ValueError(f"valuation of {atom!r} uses unknown node {name!r}")
        return self


class FailingBlock(BaseModel):
    node: str
    instance: str
    scheme: str
    premises: list[str] = []


class CountermodelDocument(ModelDocument):
    failing: FailingBlock


class CheckRequest(BaseModel):
    model: ModelDocument
    formula: str
    node: str | None = None


class CheckResponse(BaseModel):
    forcing: dict[str, bool]
    satisfied: bool
    node: str | None = None
    node_forces: bool | None = None


class PropsRequest(BaseModel):
    model: ModelDocument


class NodeProps(BaseModel):
    node: str
    reach: list[str]
    reach_reflexive: bool
    reach_transitive: bool
    reach_atom_persistent: bool
    reach_formula_persistent: bool


class PropsResponse(BaseModel):
    reflexive: bool
    transitive: bool
    connected: bool
    atom_persistent: bool
    formula_persistent: bool
    per_node: list[NodeProps]


class AxiomRequest(BaseModel):
    model: ModelDocument
    name: str | None = None
    scheme: str | None = None
    frame: bool = False
    persistent_only: bool = False


class AxiomResponse(BaseModel):
    holds: bool
    level: str
    scheme: str
    failing_node: str | None = None
    failing_assignment: dict[str, list[str]] | None = None
    failing_instance: str | None = None


class VerifyRequest(BaseModel):
    theorem: str
    max_nodes: int
    atoms: int = 3
    samples: int | None = None
    seed: int | None = None
    force: bool = False


class VerifyResponse(BaseModel):
    theorem: str
    config: dict
    counts: dict
    mismatches: list[dict]
    elapsed_ms: float
    ok: bool


class WitnessRequest(BaseModel):
    theorem: str
    model: ModelDocument


class WitnessResponse(BaseModel):
    found: bool
    countermodel: CountermodelDocument | None = None


class FrameDocument(BaseModel):
    n: int
    mask: int
    edges: list[tuple[int, int]]


class EnumerateRequest(BaseModel):
    nodes: int
    filters: list[str] = []
    count_only: bool = True
    limit: int = 100
    force: bool = False


class EnumerateResponse(BaseModel):
    count: int
    frames: list[FrameDocument] | None = None


class SchemeInfo(BaseModel):
    name: str
    kind: str
    template: str
    metavariables: list[str]
