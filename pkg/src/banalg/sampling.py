"""Random inputs for certificate campaigns.  Trial i uses random.Random(seed + i)."""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from .scalars import BanachRingDescriptor
from .series import FormalPS, MultiSeries, monomials

COEFF_RANGE = 99
PSI_RANGE = (1, 5)


def trial_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed + index)


def _degree_part(rng: random.Random, k: int, density: float, bound: int) -> list[int]:
    """Coefficients of y^k, y^{k-1} z, .., z^k summing to zero, each in [-bound, bound]."""
    if k == 0:
        return [0]
    while True:
        head = [rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(k)]
        last = -sum(head)
        if abs(last) <= bound:
            return head + [last]


def random_diagonal_vanishing(rng: random.Random, max_degree: int = 10, ring=None,
                              order: int | None = None, bound: int = COEFF_RANGE) -> MultiSeries:
    """Random f in Z[y, z] with f(z, z) = 0, total degree <= max_degree and f != 0."""
    ring = ring or BanachRingDescriptor.integer()
    d = rng.randint(1, max_degree)
    density = rng.choice((0.3, 0.6, 1.0))
    order = max_degree if order is None else order
    while True:
        coeffs = {}
        for k in range(1, d + 1):
            for i, c in enumerate(_degree_part(rng, k, density, bound)):
                if c:
                    coeffs[(k - i, i)] = c
        if coeffs:
            return MultiSeries(ring, 2, order, coeffs)


def random_psi(rng: random.Random, max_degree: int = 10) -> FormalPS:
    """Weight table on pairs (i, j) with i + j <= max_degree and values in 1..5."""
    return FormalPS(tuple((J, rng.randint(*PSI_RANGE)) for J in monomials(2, max_degree)), 2)


def run_trials(fn: Callable[[int, int], object], trials: int, seed: int, workers: int = 1) -> list:
    """[fn(seed, i) for i in range(trials)], optionally across processes; ordered by index."""
    if workers <= 1 or trials < 2:
        return [fn(seed, i) for i in range(trials)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, [seed] * trials, range(trials), chunksize=max(1, trials // (4 * workers))))
