"""Propositional formulas over bot, &, | and ->, plus axiom-scheme templates.

The language has no primitive truth constant: ``top`` is the fixed formula
``bot -> bot`` and ``~f`` abbreviates ``f -> bot``.  Formulas are immutable
trees.  A concrete formula contains no metavariables; scheme templates may
contain uppercase metavariables such as PHI.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

__all__ = [
    "Formula", "Bot", "Atom", "Meta", "And", "Or", "Impl", "BOT", "TOP",
    "FormulaSyntaxError", "parse", "render", "to_dict", "from_dict",
    "metavariables_of", "contains_meta", "substitute",
    "Scheme", "instantiate",
]

_ATOM_NAME = re.compile(r"[a-z][a-z0-9_]*\Z")
_META_NAME = re.compile(r"[A-Z][A-Z0-9_]*\Z")


class Formula:
    """Base class for formula nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Bot(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not _ATOM_NAME.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True, slots=True)
class Meta(Formula):
    name: str

    def __post_init__(self):
        if not _META_NAME.match(self.name):
            raise ValueError(f"invalid metavariable name {self.name!r}")


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Impl(Formula):
    left: Formula
    right: Formula


BOT = Bot()
TOP = Impl(BOT, BOT)


class FormulaSyntaxError(ValueError):
    """Malformed formula text; ``position`` is the offending text offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<impl>->)"
    r"|(?P<punct>[&|~()])"
    r"|(?P<atom>[a-z][a-z0-9_]*)"
    r"|(?P<meta>[A-Z][A-Z0-9_]*)"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "punct":
                kind = value
            elif kind == "atom" and value in ("bot", "top"):
                kind = value
            tokens.append((kind, value, i))
        i = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent for: ``~`` > ``&`` > ``|`` > ``->`` (right assoc)."""

    def __init__(self, tokens, scheme_mode: bool):
        self.tokens = tokens
        self.pos = 0
        self.scheme_mode = scheme_mode

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        if tok[0] != "end":
            self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        kind, value, position = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"unexpected {value!r}", position)
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "impl":
            self.advance()
            return Impl(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[0] == "|":
            self.advance()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "&":
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.peek()[0] == "~":
            self.advance()
            return Impl(self.unary(), BOT)
        return self.primary()

    def primary(self) -> Formula:
        kind, value, position = self.advance()
        if kind == "(":
            f = self.implication()
            k, v, p = self.advance()
            if k != ")":
                raise FormulaSyntaxError("expected ')'", p)
            return f
        if kind == "bot":
            return BOT
        if kind == "top":
            return TOP
        if kind == "atom":
            return Atom(value)
        if kind == "meta":
            if not self.scheme_mode:
                raise FormulaSyntaxError(
                    f"metavariable {value!r} not allowed outside scheme mode", position)
            return Meta(value)
        if kind == "end":
            raise FormulaSyntaxError("unexpected end of input", position)
        raise FormulaSyntaxError(f"unexpected {value!r}", position)


def parse(text: str, *, scheme_mode: bool = False) -> Formula:
    """Parse formula text; uppercase identifiers are metavariables and are
    accepted only with ``scheme_mode=True``."""
    return _Parser(_tokenize(text), scheme_mode).parse()


# Precedence levels used by the renderer; leaves bind tightest.
_P_IMPL, _P_OR, _P_AND, _P_NEG, _P_LEAF = 1, 2, 3, 4, 5


def render(f: Formula) -> str:
    """Minimal-parenthesization text such that ``parse(render(f)) == f``."""
    return _render(f, 0)


def _render(f: Formula, context: int) -> str:
    if f == TOP:
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, (Atom, Meta)):
        return f.name
    if isinstance(f, Impl) and isinstance(f.right, Bot):
        text, level = "~" + _render(f.left, _P_NEG), _P_NEG
    elif isinstance(f, Impl):
        text = _render(f.left, _P_IMPL + 1) + " -> " + _render(f.right, _P_IMPL)
        level = _P_IMPL
    elif isinstance(f, Or):
        text = _render(f.left, _P_OR) + " | " + _render(f.right, _P_OR + 1)
        level = _P_OR
    else:
        text = _render(f.left, _P_AND) + " & " + _render(f.right, _P_AND + 1)
        level = _P_AND
    if level < context:
        return "(" + text + ")"
    return text


def to_dict(f: Formula) -> dict:
    """JSON-ready encoding, e.g. ``{"impl": [{"atom": "p"}, {"bot": true}]}``."""
    if isinstance(f, Bot):
        return {"bot": True}
    if isinstance(f, Atom):
        return {"atom": f.name}
    if isinstance(f, Meta):
        return {"meta": f.name}
    key = {And: "and", Or: "or", Impl: "impl"}[type(f)]
    return {key: [to_dict(f.left), to_dict(f.right)]}


def from_dict(obj: dict) -> Formula:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"invalid formula object: {obj!r}")
    key, value = next(iter(obj.items()))
    if key == "bot":
        if value is not True:
            raise ValueError('the "bot" key must map to true')
        return BOT
    if key == "atom":
        return Atom(value)
    if key == "meta":
        return Meta(value)
    if key in ("and", "or", "impl"):
        if not isinstance(value, list) or len(value) != 2:
            raise ValueError(f'the "{key}" key must map to a pair')
        cls = {"and": And, "or": Or, "impl": Impl}[key]
        return cls(from_dict(value[0]), from_dict(value[1]))
    raise ValueError(f"unknown formula key {key!r}")


def metavariables_of(f: Formula) -> tuple[str, ...]:
    """Metavariable names in first-appearance (preorder) order."""
    seen: list[str] = []

    def walk(g: Formula):
        if isinstance(g, Meta):
            if g.name not in seen:
                seen.append(g.name)
        elif isinstance(g, (And, Or, Impl)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return tuple(seen)


def contains_meta(f: Formula) -> bool:
    if isinstance(f, Meta):
        return True
    if isinstance(f, (And, Or, Impl)):
        return contains_meta(f.left) or contains_meta(f.right)
    return False


def substitute(f: Formula, assignment: Mapping[str, Formula]) -> Formula:
    """Simultaneously replace each metavariable by its assigned formula."""
    if isinstance(f, Meta):
        try:
            return assignment[f.name]
        except KeyError:
            raise ValueError(f"metavariable {f.name!r} has no assignment") from None
    if isinstance(f, (And, Or, Impl)):
        return type(f)(substitute(f.left, assignment), substitute(f.right, assignment))
    return f


@dataclass(frozen=True)
class Scheme:
    """A named axiom or rule template quantifying over its metavariables.

    Axioms carry a single ``body``; rules carry ``premises`` plus a
    ``conclusion``.  ``metavariables`` lists exactly the metavariable names
    appearing in the template, in first-appearance order.
    """

    name: str
    kind: str  # "axiom" or "rule"
    body: Formula | None = None
    premises: tuple[Formula, ...] = ()
    conclusion: Formula | None = None
    metavariables: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("axiom", "rule"):
            raise ValueError(f"scheme kind must be 'axiom' or 'rule', got {self.kind!r}")
        if self.kind == "axiom" and (self.body is None or self.premises or self.conclusion):
            raise ValueError("an axiom scheme has a body and nothing else")
        if self.kind == "rule" and (self.body is not None or self.conclusion is None):
            raise ValueError("a rule scheme has premises and a conclusion")
        if self.metavariables != _collect_metas(self.parts()):
            raise ValueError("metavariables list must match the template exactly")

    def parts(self) -> tuple[Formula, ...]:
        if self.kind == "axiom":
            return (self.body,)
        return self.premises + (self.conclusion,)

    @classmethod
    def axiom(cls, name: str, body: Union[str, Formula]) -> "Scheme":
        if isinstance(body, str):
            body = parse(body, scheme_mode=True)
        return cls(name=name, kind="axiom", body=body,
                   metavariables=metavariables_of(body))

    @classmethod
    def rule(cls, name: str, premises, conclusion) -> "Scheme":
        premises = tuple(parse(p, scheme_mode=True) if isinstance(p, str) else p
                         for p in premises)
        if isinstance(conclusion, str):
            conclusion = parse(conclusion, scheme_mode=True)
        return cls(name=name, kind="rule", premises=premises, conclusion=conclusion,
                   metavariables=_collect_metas(premises + (conclusion,)))


def _collect_metas(parts) -> tuple[str, ...]:
    seen: list[str] = []
    for part in parts:
        for name in metavariables_of(part):
            if name not in seen:
                seen.append(name)
    return tuple(seen)


def instantiate(scheme: Scheme, assignment: Mapping[str, Formula]):
    """Instantiate a scheme.

    Returns the instantiated body for axioms, or ``(premises, conclusion)``
    for rules.  Every metavariable must be assigned a metavariable-free
    formula.
    """
    for name in scheme.metavariables:
        if name not in assignment:
            raise ValueError(f"metavariable {name!r} has no assignment")
    for name, value in assignment.items():
        if contains_meta(value):
            raise ValueError(f"assignment for {name!r} contains a metavariable")
    if scheme.kind == "axiom":
        return substitute(scheme.body, assignment)
    premises = tuple(substitute(p, assignment) for p in scheme.premises)
    return premises, substitute(scheme.conclusion, assignment)
