import random
from pathlib import Path

import pytest

from kfl.formula import And, Atom, BOT, Impl, Or
from kfl.kripke import Frame, mask_of
from kfl.semantics import Model, forces

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def random_frame(rng: random.Random, n: int) -> Frame:
    return Frame.from_mask(n, rng.getrandbits(n * n))


def random_model(rng: random.Random, n: int, atoms=("p", "q")) -> Model:
    frame = random_frame(rng, n)
    return Model(frame, {a: rng.getrandbits(n) for a in atoms})


def random_formula(rng: random.Random, atoms=("p", "q"), depth: int = 5):
    if depth == 0 or rng.random() < 0.25:
        return BOT if rng.random() < 0.25 else Atom(rng.choice(atoms))
    cls = rng.choice((And, Or, Impl))
    return cls(random_formula(rng, atoms, depth - 1),
               random_formula(rng, atoms, depth - 1))


def warshall_rows(frame: Frame) -> list[int]:
    """Independent O(n^3) transitive closure used as an oracle."""
    n = frame.n
    reach = [[bool(frame.rows[i] >> j & 1) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return [mask_of(j for j in range(n) if reach[i][j]) for i in range(n)]


def brute_force_extension_masks(model: Model, atoms, depth: int) -> set[int]:
    """Truth sets of all formulas over ``atoms`` up to the given nesting
    depth, evaluated with the recursive forcing checker.

    Enumeration is pruned by truth set: once some formula realizes a set,
    deeper formulas built from another realization of the same set add no
    new sets (extensions compose).  Every kept mask is witnessed by a real
    formula and evaluated nodewise, independent of the compositional path.
    """

    def ext(f) -> int:
        return mask_of(k for k in range(model.frame.n) if forces(model, k, f))

    seen: dict[int, object] = {}
    for f in [BOT] + [Atom(a) for a in atoms]:
        seen.setdefault(ext(f), f)
    for _ in range(depth):
        masks = sorted(seen)
        fresh: dict[int, object] = {}
        for a in masks:
            for b in masks:
                for g in (And(seen[a], seen[b]), Or(seen[a], seen[b]),
                          Impl(seen[a], seen[b])):
                    m = ext(g)
                    if m not in seen and m not in fresh:
                        fresh[m] = g
        if not fresh:
            break
        seen.update(fresh)
    return set(seen)
