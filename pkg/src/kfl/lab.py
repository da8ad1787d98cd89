"""Exhaustive and sampled verification of the frame/model characterizations.

Each theorem identifier names an empirically checkable statement:

  thm-mp       a frame validates MP iff the relation is reflexive
  thm-a1       a frame validates A1 iff the relation restricted to every
               reachability set is transitive
  thm-a5a      a frame validates A5a iff the relation restricted to every
               two-step image is reflexive
  thm-a4       per model: reachability-set reflexivity plus formula
               persistency at a node implies A4 holds there; a model
               validating A4 has formula-persistent reachability sets; a
               frame validating A4 has reflexive reachability sets
  thm-a5b      the analogous three directions with transitivity and
               two-step-region persistency
  thm-a6       over reflexive transitive frames: persistent valuations
               validate A6 iff the frame is connected
  lemma-trans  reflexivity plus transitivity of every restricted
               reachability set implies global transitivity
  prop-persist transitivity of a reachability set plus atom persistency on
               it implies formula persistency on it
  prop-trivial A2, A3, A7 and GODEL hold on every frame
  cor-bl       a frame validates all of BL (MP, A1, A2, A3, A5a, A7 under
               arbitrary valuations; A4, A5b, A6 under persistent ones) iff
               it is reflexive, transitive and connected

Sweeps are deterministic: frames are enumerated in ascending order of their
row-major relation bitmask, sampled frames come from a seeded generator, and
mismatches are reported in discovery order.  Set KFL_THREADS to partition a
sweep across worker processes (0 means one per CPU); the merged report is
identical to the single-threaded one.
"""

from __future__ import annotations

import os
import time
from dataclasses import asdict, dataclass, field
from itertools import product
from random import Random
from typing import Iterable, Iterator, Sequence

from .axioms import get_scheme
from .kripke import Frame, bits
from .semantics import (
    _sets_persistent_on, compile_body, eval_body, frame_validates_scheme,
    make_arrow,
)

__all__ = [
    "SweepConfig", "VerificationReport", "enumerate_frames", "verify_theorem",
    "theorem_ids", "FRAME_FILTERS", "MISMATCH_CAP",
]

MISMATCH_CAP = 20
HARD_NODE_CAP = 5
EXHAUSTIVE_NODE_CAP = 4
ATOM_NAMES = ("p", "q", "r")

_MODEL_LEVEL = {"thm-a4", "thm-a5b", "prop-persist"}


@dataclass(frozen=True)
class SweepConfig:
    """Sweep budget and determinism knobs.

    Exhaustive mode walks every labeled frame of 1..max_nodes nodes (and for
    model-level theorems every valuation of ``atoms`` atoms).  Sampled mode
    is exhaustive through 3 nodes and draws ``samples`` seeded frames (plus
    valuations where needed) per larger size.
    """

    max_nodes: int
    atoms: int = 3
    mode: str = "exhaustive"
    samples: int = 0
    seed: int | None = None
    force: bool = False

    def validate(self) -> None:
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")
        if self.max_nodes > HARD_NODE_CAP:
            raise ValueError(f"sweeps beyond {HARD_NODE_CAP} nodes are not supported")
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError("mode must be 'exhaustive' or 'sampled'")
        if not 1 <= self.atoms <= 3:
            raise ValueError("atoms must be between 1 and 3")
        if self.mode == "exhaustive":
            if self.max_nodes > EXHAUSTIVE_NODE_CAP and not self.force:
                raise ValueError(
                    f"exhaustive sweeps beyond {EXHAUSTIVE_NODE_CAP} nodes need force=True")
        else:
            if self.seed is None:
                raise ValueError("sampled mode needs a seed")
            if self.samples < 1:
                raise ValueError("sampled mode needs a positive sample count")

    def echo(self) -> dict:
        return asdict(self)


@dataclass
class VerificationReport:
    theorem: str
    config: dict
    unit: str
    instances: int = 0
    condition_true: int = 0
    valid: int = 0
    mismatch_total: int = 0
    instances_by_n: dict[int, int] = field(default_factory=dict)
    mismatches: list[dict] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return self.mismatch_total == 0

    def to_json_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "config": self.config,
            "counts": {
                "instances": self.instances,
                "condition_true": self.condition_true,
                "valid": self.valid,
                "mismatches": self.mismatch_total,
                "by_nodes": {str(n): c for n, c in sorted(self.instances_by_n.items())},
                "unit": self.unit,
            },
            "mismatches": self.mismatches,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }

    def to_text(self) -> str:
        by_n = "+".join(str(self.instances_by_n[n])
                        for n in sorted(self.instances_by_n, reverse=True))
        lines = [
            f"theorem: {self.theorem}",
            f"{by_n} {self.unit}, {self.mismatch_total} mismatches",
            f"condition true: {self.condition_true}   valid: {self.valid}",
        ]
        for m in self.mismatches:
            lines.append(f"  mismatch: {m}")
        lines.append(f"elapsed: {self.elapsed_ms:.1f} ms")
        lines.append("result: " + ("OK" if self.ok else "MISMATCHES FOUND"))
        return "\n".join(lines)


def enumerate_frames(n: int, force: bool = False) -> Iterator[Frame]:
    """All labeled frames on n nodes, ascending by relation bitmask."""
    if n < 1:
        raise ValueError("frame enumeration needs at least one node")
    if n > HARD_NODE_CAP:
        raise ValueError(f"frame enumeration beyond {HARD_NODE_CAP} nodes is not supported")
    if n > EXHAUSTIVE_NODE_CAP and not force:
        raise ValueError(
            f"enumerating all frames on {n} nodes needs force=True")
    for mask in range(1 << (n * n)):
        yield Frame.from_mask(n, mask)


FRAME_FILTERS = {
    "reflexive": lambda f: f.is_reflexive_on(f.full_mask),
    "transitive": lambda f: f.is_transitive_on(f.full_mask),
    "connected": lambda f: f.is_connected(),
}


# ---------------------------------------------------------------------------
# sweep plumbing

@dataclass
class _Partial:
    instances: int = 0
    condition: int = 0
    valid: int = 0
    mismatches: list[dict] = field(default_factory=list)

    def merge(self, other: "_Partial") -> None:
        self.instances += other.instances
        self.condition += other.condition
        self.valid += other.valid
        self.mismatches.extend(other.mismatches)


def _frame_info(n: int, frame: Frame) -> dict:
    return {"n": n, "frame": frame.to_mask(),
            "edges": [[i, j] for i, j in frame.edges()]}


def _valuation_info(vals: Sequence[int]) -> dict:
    return {name: sorted(bits(mask)) for name, mask in zip(ATOM_NAMES, vals)}


def _all_valuations(n: int, atoms: int):
    return product(range(1 << n), repeat=atoms)


# frame condition helpers

def _cond_reflexive(frame: Frame) -> bool:
    return frame.is_reflexive_on(frame.full_mask)


def _cond_reach_transitive(frame: Frame) -> bool:
    return all(frame.is_transitive_on(frame.reach_plus(k)) for k in range(frame.n))


def _cond_two_step_reflexive(frame: Frame) -> bool:
    return all(frame.is_reflexive_on(frame.n_step_image(k, 2)) for k in range(frame.n))


def _mask_closure(base: Iterable[int], arrow) -> tuple[int, ...]:
    """Mask-only definable-set closure (no witness formulas); fast sweep path."""
    family = {0}
    family.update(base)
    while True:
        members = sorted(family)
        new = set()
        for a in members:
            for b in members:
                v = a & b
                if v not in family:
                    new.add(v)
                v = a | b
                if v not in family:
                    new.add(v)
                v = arrow(a, b)
                if v not in family:
                    new.add(v)
        if not new:
            break
        family.update(new)
    return tuple(sorted(family))


# ---------------------------------------------------------------------------
# per-theorem checkers; each consumes one work unit

def _biconditional_frame_checker(scheme_name: str, condition):
    scheme = get_scheme(scheme_name)

    def check(n: int, unit, cfg: SweepConfig, out: _Partial) -> None:
        frame = Frame.from_mask(n, unit)
        cond = condition(frame)
        valid = frame_validates_scheme(frame, scheme).holds
        out.instances += 1
        out.condition += cond
        out.valid += valid
        if cond != valid:
            info = _frame_info(n, frame)
            info["direction"] = ("condition-true-but-invalid" if cond
                                 else "valid-but-condition-false")
            out.mismatches.append(info)

    return check


def _check_prop_trivial(n: int, unit, cfg: SweepConfig, out: _Partial) -> None:
    frame = Frame.from_mask(n, unit)
    out.instances += 1
    out.condition += 1
    ok = True
    for name in ("A2", "A3", "A7", "GODEL"):
        if not frame_validates_scheme(frame, get_scheme(name)).holds:
            ok = False
            info = _frame_info(n, frame)
            info["scheme"] = name
            out.mismatches.append(info)
    out.valid += ok


def _check_lemma_trans(n: int, unit, cfg: SweepConfig, out: _Partial) -> None:
    frame = Frame.from_mask(n, unit)
    hypothesis = _cond_reflexive(frame) and _cond_reach_transitive(frame)
    conclusion = frame.is_transitive_on(frame.full_mask)
    out.instances += 1
    out.condition += hypothesis
    out.valid += conclusion
    if hypothesis and not conclusion:
        info = _frame_info(n, frame)
        info["direction"] = "hypothesis-true-but-not-transitive"
        out.mismatches.append(info)


def _check_thm_a6(n: int, unit, cfg: SweepConfig, out: _Partial) -> None:
    frame = Frame.from_mask(n, unit)
    full = frame.full_mask
    if not (frame.is_reflexive_on(full) and frame.is_transitive_on(full)):
        return
    cond = frame.is_connected()
    valid = frame_validates_scheme(frame, get_scheme("A6"), persistent_only=True).holds
    out.instances += 1
    out.condition += cond
    out.valid += valid
    if cond != valid:
        info = _frame_info(n, frame)
        info["direction"] = ("condition-true-but-invalid" if cond
                             else "valid-but-condition-false")
        out.mismatches.append(info)


# Axioms whose characterizations constrain only the frame are checked under
# arbitrary valuations; those whose characterizations also constrain the
# satisfaction relation are checked under persistent valuations.
_CORBL_ANY_VALUATION = ("MP", "A1", "A5a", "A2", "A3", "A7")
_CORBL_PERSISTENT = ("A4", "A5b", "A6")


def _corbl_validates(frame: Frame) -> bool:
    for name in _CORBL_ANY_VALUATION:
        if not frame_validates_scheme(frame, get_scheme(name)).holds:
            return False
    for name in _CORBL_PERSISTENT:
        if not frame_validates_scheme(frame, get_scheme(name), persistent_only=True).holds:
            return False
    return True


def _check_cor_bl(n: int, unit, cfg: SweepConfig, out: _Partial) -> None:
    frame = Frame.from_mask(n, unit)
    full = frame.full_mask
    cond = (frame.is_reflexive_on(full) and frame.is_transitive_on(full)
            and frame.is_connected())
    valid = _corbl_validates(frame)
    out.instances += 1
    out.condition += cond
    out.valid += valid
    if cond != valid:
        info = _frame_info(n, frame)
        info["direction"] = ("condition-true-but-invalid" if cond
                             else "valid-but-condition-false")
        out.mismatches.append(info)


class _ModelTheorem:
    """Shared machinery for the model-level sweeps.

    Work units are either a frame mask (check every valuation of cfg.atoms
    atoms on it) or a (frame mask, valuation masks) pair from the sampler.
    Valuation classes with the same set of atom extensions share one cached
    verdict, since every check depends only on the definable algebra.
    """

    scheme_name: str | None = None

    def __call__(self, n: int, unit, cfg: SweepConfig, out: _Partial) -> None:
        if isinstance(unit, tuple):
            frame_mask, valuations = unit[0], [unit[1]]
        else:
            frame_mask, valuations = unit, _all_valuations(n, cfg.atoms)
        frame = Frame.from_mask(n, frame_mask)
        ctx = self.frame_setup(frame)
        cache: dict[tuple[int, ...], object] = {}
        self.frame_checks(n, frame, ctx, out)
        for vals in valuations:
            key = tuple(sorted(set(vals)))
            verdict = cache.get(key)
            if verdict is None:
                verdict = self.class_verdict(frame, ctx, key)
                cache[key] = verdict
            self.model_checks(n, frame, ctx, vals, verdict, out)

    # hooks
    def frame_setup(self, frame: Frame):
        raise NotImplementedError

    def frame_checks(self, n, frame, ctx, out) -> None:
        pass

    def class_verdict(self, frame, ctx, base_masks):
        raise NotImplementedError

    def model_checks(self, n, frame, ctx, vals, verdict, out) -> None:
        raise NotImplementedError


class _SchemeModelTheorem(_ModelTheorem):
    """Directional checks tying a scheme to a frame condition plus region
    persistency, per the shape all such characterizations share:

      sufficiency: frame condition at k and persistency of the region of k
                   imply the scheme holds at k (checked per node);
      persistency necessity: a model validating the scheme has persistent
                   regions (checked per model);
      frame necessity: a frame validating the scheme under arbitrary
                   valuations satisfies the frame condition everywhere.
    """

    scheme_name: str

    def __init__(self):
        scheme = get_scheme(self.scheme_name)
        self.scheme = scheme
        self.program = compile_body(scheme.body, scheme.metavariables)
        self.arity = len(scheme.metavariables)

    def frame_condition_at(self, frame: Frame, k: int) -> bool:
        raise NotImplementedError

    def persistency_region(self, frame: Frame, k: int) -> int:
        raise NotImplementedError

    def frame_setup(self, frame: Frame):
        arrow = make_arrow(frame)
        cond_k = tuple(self.frame_condition_at(frame, k) for k in range(frame.n))
        regions = tuple(self.persistency_region(frame, k) for k in range(frame.n))
        return {"arrow": arrow, "cond_k": cond_k, "regions": regions}

    def frame_checks(self, n, frame, ctx, out) -> None:
        if all(ctx["cond_k"]):
            return
        if frame_validates_scheme(frame, self.scheme).holds:
            info = _frame_info(n, frame)
            info["direction"] = "frame-necessity"
            info["scheme"] = self.scheme_name
            out.mismatches.append(info)

    def class_verdict(self, frame, ctx, base_masks):
        arrow = ctx["arrow"]
        algebra = _mask_closure(base_masks, arrow)
        rows = frame.rows
        persist = tuple(_sets_persistent_on(rows, algebra, region)
                        for region in ctx["regions"])
        valid_mask = frame.full_mask
        for assignment in product(algebra, repeat=self.arity):
            valid_mask &= eval_body(self.program, assignment, arrow)
            if not valid_mask:
                break
        return valid_mask, persist

    def model_checks(self, n, frame, ctx, vals, verdict, out) -> None:
        valid_mask, persist = verdict
        cond_k = ctx["cond_k"]
        out.instances += 1
        out.condition += all(cond_k) and all(persist)
        full = frame.full_mask
        out.valid += valid_mask == full
        for k in range(frame.n):
            if cond_k[k] and persist[k] and not valid_mask >> k & 1:
                info = _frame_info(n, frame)
                info["valuation"] = _valuation_info(vals)
                info["direction"] = "sufficiency"
                info["node"] = k
                out.mismatches.append(info)
        if valid_mask == full and not all(persist):
            info = _frame_info(n, frame)
            info["valuation"] = _valuation_info(vals)
            info["direction"] = "persistency-necessity"
            info["node"] = persist.index(False)
            out.mismatches.append(info)


class _CheckA4(_SchemeModelTheorem):
    scheme_name = "A4"

    def frame_condition_at(self, frame, k):
        return frame.is_reflexive_on(frame.reach_plus(k))

    def persistency_region(self, frame, k):
        return frame.reach_plus(k)


class _CheckA5b(_SchemeModelTheorem):
    scheme_name = "A5b"

    def frame_condition_at(self, frame, k):
        return frame.is_transitive_on(frame.reach_plus(k))

    def persistency_region(self, frame, k):
        return frame.reach_plusplus(k)


class _CheckPropPersist(_ModelTheorem):
    """Per (model, node): transitivity of the restricted reachability set
    plus atom persistency on it imply formula persistency on it."""

    def frame_setup(self, frame: Frame):
        arrow = make_arrow(frame)
        regions = tuple(frame.reach_plus(k) for k in range(frame.n))
        trans_k = tuple(frame.is_transitive_on(region) for region in regions)
        return {"arrow": arrow, "regions": regions, "trans_k": trans_k}

    def class_verdict(self, frame, ctx, base_masks):
        rows = frame.rows
        algebra = _mask_closure(base_masks, ctx["arrow"])
        atom_persist = tuple(_sets_persistent_on(rows, base_masks, region)
                             for region in ctx["regions"])
        formula_persist = tuple(_sets_persistent_on(rows, algebra, region)
                                for region in ctx["regions"])
        return atom_persist, formula_persist

    def model_checks(self, n, frame, ctx, vals, verdict, out) -> None:
        atom_persist, formula_persist = verdict
        trans_k = ctx["trans_k"]
        for k in range(frame.n):
            hypothesis = trans_k[k] and atom_persist[k]
            out.instances += 1
            out.condition += hypothesis
            out.valid += formula_persist[k]
            if hypothesis and not formula_persist[k]:
                info = _frame_info(n, frame)
                info["valuation"] = _valuation_info(vals)
                info["direction"] = "hypothesis-true-but-not-formula-persistent"
                info["node"] = k
                out.mismatches.append(info)


_CHECKERS = {
    "thm-mp": _biconditional_frame_checker("MP", _cond_reflexive),
    "thm-a1": _biconditional_frame_checker("A1", _cond_reach_transitive),
    "thm-a5a": _biconditional_frame_checker("A5a", _cond_two_step_reflexive),
    "thm-a6": _check_thm_a6,
    "thm-a4": _CheckA4(),
    "thm-a5b": _CheckA5b(),
    "lemma-trans": _check_lemma_trans,
    "prop-persist": _CheckPropPersist(),
    "prop-trivial": _check_prop_trivial,
    "cor-bl": _check_cor_bl,
}

_UNIT_WORDS = {
    "thm-a4": "models", "thm-a5b": "models", "prop-persist": "model-node pairs",
}


def theorem_ids() -> tuple[str, ...]:
    return tuple(_CHECKERS)


def _units_for(theorem: str, n: int, cfg: SweepConfig):
    """Work units for one node count: a mask range, or a list of samples."""
    if cfg.mode == "exhaustive" or n <= 3:
        return ("range", 0, 1 << (n * n))
    rng = Random(cfg.seed + n)
    units = []
    model_level = theorem in _MODEL_LEVEL
    for _ in range(cfg.samples):
        mask = rng.getrandbits(n * n)
        if model_level:
            units.append((mask, tuple(rng.getrandbits(n) for _ in range(cfg.atoms))))
        else:
            units.append(mask)
    return ("list", units)


def _thread_count() -> int:
    raw = os.environ.get("KFL_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"KFL_THREADS must be an integer, got {raw!r}") from None
    if value == 0:
        return os.cpu_count() or 1
    return max(1, value)


def _sweep_worker(args) -> tuple[int, int, int, list[dict]]:
    theorem, n, chunk, cfg_dict = args
    cfg = SweepConfig(**cfg_dict)
    checker = _CHECKERS[theorem]
    out = _Partial()
    if chunk[0] == "range":
        for mask in range(chunk[1], chunk[2]):
            checker(n, mask, cfg, out)
    else:
        for unit in chunk[1]:
            checker(n, unit, cfg, out)
    return out.instances, out.condition, out.valid, out.mismatches


def _run_units(theorem: str, n: int, units, cfg: SweepConfig, threads: int) -> _Partial:
    if units[0] == "range":
        start, stop = units[1], units[2]
        count = stop - start
        chunks = []
        if threads > 1 and count >= 2 * threads:
            step = (count + threads - 1) // threads
            for lo in range(start, stop, step):
                chunks.append(("range", lo, min(lo + step, stop)))
        else:
            chunks.append(("range", start, stop))
    else:
        items = units[1]
        chunks = []
        if threads > 1 and len(items) >= 2 * threads:
            step = (len(items) + threads - 1) // threads
            for lo in range(0, len(items), step):
                chunks.append(("list", items[lo:lo + step]))
        else:
            chunks.append(("list", items))

    out = _Partial()
    if len(chunks) == 1:
        result = _sweep_worker((theorem, n, chunks[0], cfg.echo()))
        out.merge(_Partial(*result[:3], result[3]))
        return out
    import multiprocessing

    with multiprocessing.Pool(processes=min(threads, len(chunks))) as pool:
        results = pool.map(_sweep_worker,
                           [(theorem, n, chunk, cfg.echo()) for chunk in chunks])
    for result in results:
        out.merge(_Partial(*result[:3], result[3]))
    return out


def verify_theorem(theorem: str, cfg: SweepConfig) -> VerificationReport:
    """Run one theorem's sweep under the given config.

    The report's mismatch list is empty exactly when every checked instance
    satisfied the theorem's statement; its body is byte-identical across
    runs with the same config (elapsed time aside) and across worker counts.
    """
    if theorem not in _CHECKERS:
        valid = ", ".join(_CHECKERS)
        raise ValueError(f"unknown theorem {theorem!r} (valid: {valid})")
    cfg.validate()
    threads = _thread_count()
    started = time.perf_counter()
    report = VerificationReport(theorem=theorem, config=cfg.echo(),
                                unit=_UNIT_WORDS.get(theorem, "frames"))
    for n in range(1, cfg.max_nodes + 1):
        units = _units_for(theorem, n, cfg)
        partial = _run_units(theorem, n, units, cfg, threads)
        report.instances += partial.instances
        report.condition_true += partial.condition
        report.valid += partial.valid
        report.mismatch_total += len(partial.mismatches)
        report.instances_by_n[n] = partial.instances
        room = MISMATCH_CAP - len(report.mismatches)
        if room > 0:
            report.mismatches.extend(partial.mismatches[:room])
    report.elapsed_ms = (time.perf_counter() - started) * 1000.0
    return report
