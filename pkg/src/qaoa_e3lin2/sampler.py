"""Measurement sampling, satisfied-equation statistics, and small-n optima.

The state is prepared at the raw angles given (no sign convention applied);
the report also records ``analytic_gamma = -gamma``, the angle under which
``analytic.objective_expectation`` predicts the same state's objective
expectation. A run's predicted mean satisfied count is m/2 plus that
expectation, and the empirical mean over shots converges to it at the
usual 1/sqrt(samples) rate.

The sample-size policy is ceil(m ln m) draws: enough that, with probability
about 1 - 1/m, some draw reaches the expectation. ``brute_force_max`` is
the exact optimum for desk-scale n, used to sanity-check everything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _caps
from .instance import Assignment, Instance
from .statevector import AngleParams, expectation, prepare, sample

_CHUNK = 1 << 22


@dataclass(frozen=True)
class SampleReport:
    """Satisfied-count statistics for one batch of shots.

    ``gamma`` and ``beta`` are the raw state-preparation angles;
    ``analytic_gamma`` is their sign-flipped counterpart for the analytic
    module. ``best_string`` is the first sampled assignment reaching
    ``best_satisfied``.
    """

    gamma: float
    beta: float
    analytic_gamma: float
    samples: int
    mean_satisfied: float
    best_satisfied: int
    best_string: Assignment
    predicted_mean: float
    seed: int


def satisfied_count_batch(instance: Instance, bits: np.ndarray) -> np.ndarray:
    """Satisfied-equation counts for a (batch, n) bit matrix."""
    counts = np.zeros(bits.shape[0], dtype=np.int64)
    for cl in instance.clauses:
        parity = bits[:, cl.a] ^ bits[:, cl.b] ^ bits[:, cl.c]
        counts += parity == cl.rhs
    return counts


def run(
    instance: Instance,
    gamma: float,
    beta: float,
    samples: int,
    seed: int = 0,
    n_max: int | None = None,
) -> SampleReport:
    """Prepare, measure ``samples`` times, and score every string."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    state = prepare(instance, AngleParams(gamma=gamma, beta=beta), n_max=n_max)
    predicted = instance.m / 2.0 + expectation(state, instance)
    draws = sample(state, samples, seed=seed)
    bits = np.stack([a.bits for a in draws])
    counts = satisfied_count_batch(instance, bits)
    best_idx = int(np.argmax(counts))
    return SampleReport(
        gamma=gamma,
        beta=beta,
        analytic_gamma=-gamma,
        samples=samples,
        mean_satisfied=float(np.mean(counts)),
        best_satisfied=int(counts[best_idx]),
        best_string=draws[best_idx],
        predicted_mean=predicted,
        seed=seed,
    )


def recommended_samples(m: int) -> int:
    """ceil(m ln m): with probability ~1 - 1/m some draw meets the mean."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    return math.ceil(m * math.log(m))


def brute_force_max(instance: Instance, n_max: int | None = None) -> tuple[int, Assignment]:
    """Exact maximum satisfied count and its lowest-index maximizer."""
    n_max = _caps.default_brute_force_n_max() if n_max is None else n_max
    if instance.n > n_max:
        raise ValueError(f"n={instance.n} exceeds brute-force cap {n_max}")
    best_count = -1
    best_code = 0
    size = 1 << instance.n
    for start in range(0, size, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        counts = np.zeros(codes.size, dtype=np.int64)
        for cl in instance.clauses:
            parity = ((codes >> cl.a) ^ (codes >> cl.b) ^ (codes >> cl.c)) & 1
            counts += parity == cl.rhs
        idx = int(np.argmax(counts))
        if counts[idx] > best_count:
            best_count = int(counts[idx])
            best_code = int(codes[idx])
    bits = [(best_code >> v) & 1 for v in range(instance.n)]
    return best_count, Assignment(bits)
