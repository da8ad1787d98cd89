"""Acceptance suite: every characterization checked at desk scale.

Each test runs one criterion end to end at its stated budget and prints a
PASS line (visible with ``pytest -s``); any mismatch fails the build.
"""

import json
import random
import time

from kfl.axioms import get_scheme
from kfl.lab import SweepConfig, enumerate_frames, verify_theorem
from kfl.semantics import Model, definable_sets, forces, model_validates_scheme
from kfl.witness import build_countermodel, find_violation

from conftest import FIXTURES, brute_force_extension_masks, random_model

SEED = 1105


def _sweep(theorem, budget_s, **cfg_kwargs):
    started = time.perf_counter()
    report = verify_theorem(theorem, SweepConfig(**cfg_kwargs))
    elapsed = time.perf_counter() - started
    assert report.mismatch_total == 0, (theorem, report.mismatches)
    assert report.mismatches == []
    assert elapsed < budget_s, f"{theorem} took {elapsed:.1f}s (budget {budget_s}s)"
    return report, elapsed


def test_c01_universal_schemes_on_all_small_frames():
    report, elapsed = _sweep("prop-trivial", 10.0, max_nodes=3)
    assert report.instances == 530
    assert report.valid == 530
    print(f"\nACCEPTANCE 1 PASS: A2/A3/A7/GODEL valid on all 530 frames "
          f"(n<=3) in {elapsed:.2f}s")


def test_c02_mp_iff_reflexive():
    report, elapsed = _sweep("thm-mp", 30.0, max_nodes=4, mode="sampled",
                             samples=10000, seed=SEED)
    assert report.instances_by_n == {1: 2, 2: 16, 3: 512, 4: 10000}
    assert report.condition_true == report.valid
    print(f"ACCEPTANCE 2 PASS: MP iff reflexivity exact on n<=3 plus 10000 "
          f"seeded n=4 samples in {elapsed:.2f}s")


def test_c03_a1_iff_reach_transitive():
    report, elapsed = _sweep("thm-a1", 60.0, max_nodes=4, mode="sampled",
                             samples=1000, seed=SEED)
    assert report.instances_by_n == {1: 2, 2: 16, 3: 512, 4: 1000}
    print(f"ACCEPTANCE 3 PASS: A1 iff transitive restricted reach sets, exact "
          f"n<=3 plus 1000 seeded n=4 samples in {elapsed:.2f}s")


def test_c04_a5a_iff_two_step_reflexive():
    report, elapsed = _sweep("thm-a5a", 60.0, max_nodes=3)
    assert report.instances == 530
    print(f"ACCEPTANCE 4 PASS: A5a iff reflexive two-step images, exact n<=3 "
          f"in {elapsed:.2f}s")


def test_c05_a4_and_a5b_model_level_directions():
    report_a4, elapsed_a4 = _sweep("thm-a4", 600.0, max_nodes=3, atoms=3)
    report_a5b, elapsed_a5b = _sweep("thm-a5b", 600.0, max_nodes=3, atoms=3)
    expected_models = 2 * 8 + 16 * 64 + 512 * 512
    assert report_a4.instances == expected_models == 263184
    assert report_a5b.instances == expected_models
    assert elapsed_a4 + elapsed_a5b < 600.0
    print(f"ACCEPTANCE 5 PASS: A4/A5b model-level directions exact over "
          f"{expected_models} models (n<=3, 3 atoms) in "
          f"{elapsed_a4 + elapsed_a5b:.2f}s")


def test_c06_a6_iff_connected_and_subset_fork_fixture():
    report, elapsed = _sweep("thm-a6", 60.0, max_nodes=3)
    assert report.instances == 34  # the reflexive transitive frames
    with open(FIXTURES / "subset_fork.json", "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    from kfl.ops import doc_to_model
    from kfl.schemas import ModelDocument
    model, _ = doc_to_model(ModelDocument.model_validate(payload))
    # the inclusion model with the empty valuation validates A6 even though
    # its frame is not connected: model-level validity does not transfer
    assert model_validates_scheme(model, get_scheme("A6")).holds
    assert not model.frame.is_connected()
    print(f"ACCEPTANCE 6 PASS: A6 iff connectedness on reflexive transitive "
          f"frames (persistent valuations), and the inclusion-order fixture "
          f"validates A6 without connectedness, in {elapsed:.2f}s")


def test_c07_corollary_at_persistent_frame_level():
    report, elapsed = _sweep("cor-bl", 60.0, max_nodes=3)
    assert report.instances == 530
    assert report.condition_true == report.valid == 31
    print(f"ACCEPTANCE 7 PASS: BL validation iff reflexive+transitive+"
          f"connected, exact on 530 frames in {elapsed:.2f}s")


def test_c08_transitivity_lemma_and_persistency_transfer():
    report_lemma, elapsed_lemma = _sweep("lemma-trans", 120.0, max_nodes=4)
    assert report_lemma.instances == 2 + 16 + 512 + 65536
    report_persist, elapsed_persist = _sweep("prop-persist", 300.0, max_nodes=3)
    assert report_persist.instances == 2 * 8 * 1 + 16 * 64 * 2 + 512 * 512 * 3
    print(f"ACCEPTANCE 8 PASS: transitivity lemma on all n<=4 frames and "
          f"persistency transfer on all n<=3 models in "
          f"{elapsed_lemma + elapsed_persist:.2f}s")


FRAME_THEOREMS = (
    ("mp", "non-reflexive-node"),
    ("a1", "non-transitive-triple-in-Rplus"),
    ("a4-reflexivity", "non-reflexive-in-Rplus"),
    ("a5a", "non-reflexive-in-R2"),
    ("a5b-transitivity", "non-transitive-triple-in-Rplus"),
)


def _recheck(cm):
    for premise in cm.premises:
        assert forces(cm.model, cm.failing_node, premise)
    assert not forces(cm.model, cm.failing_node, cm.failing_instance)


def test_c09_witness_soundness_at_desk_scale():
    started = time.perf_counter()
    produced = 0
    for n in (1, 2, 3):
        for frame in enumerate_frames(n):
            for theorem, kind in FRAME_THEOREMS:
                witness = find_violation(frame, kind)
                if witness is None:
                    continue
                cm = build_countermodel(theorem, witness, frame)
                _recheck(cm)
                produced += 1
            if (frame.is_reflexive_on(frame.full_mask)
                    and frame.is_transitive_on(frame.full_mask)):
                witness = find_violation(frame, "non-connected-pair")
                if witness is not None:
                    cm = build_countermodel("a6", witness, frame)
                    _recheck(cm)
                    produced += 1
    # persistency defects: every 2-atom model on n<=2 plus seeded n=3 models
    models = []
    for n in (1, 2):
        for frame in enumerate_frames(n):
            for vp in range(1 << n):
                for vq in range(1 << n):
                    models.append(Model(frame, {"p": vp, "q": vq}))
    rng = random.Random(SEED)
    models.extend(random_model(rng, 3, atoms=("p", "q", "r")) for _ in range(500))
    for model in models:
        for theorem, region in (("a4-persistency", "plus"),
                                ("a5b-persistency", "plusplus")):
            witness = find_violation(model, "persistency-break", region=region)
            if witness is None:
                continue
            cm = build_countermodel(theorem, witness, model)
            _recheck(cm)
            produced += 1
    elapsed = time.perf_counter() - started
    assert produced > 1500
    print(f"ACCEPTANCE 9 PASS: {produced} countermodels built from defects "
          f"found at n<=3, all re-evaluated successfully, in {elapsed:.2f}s")


def test_c10_algebra_agrees_with_formula_enumeration():
    started = time.perf_counter()
    rng = random.Random(SEED)
    for _ in range(200):
        model = random_model(rng, rng.randint(1, 3), atoms=("p", "q"))
        algebra = set(definable_sets(model, ["p", "q"]).masks)
        brute = brute_force_extension_masks(model, ("p", "q"), depth=5)
        assert algebra == brute
    elapsed = time.perf_counter() - started
    print(f"ACCEPTANCE 10 PASS: definable algebra equals depth-5 formula "
          f"enumeration on 200 seeded models in {elapsed:.2f}s")
