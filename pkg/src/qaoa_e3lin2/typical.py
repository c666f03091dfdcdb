"""Sign-ensemble averages over a fixed collection of triples.

Fix the triples and draw every right-hand side independently (equivalently,
each clause sign +1 or -1 with probability 1/2). Averaging a clause term
over the signs collapses the four-sine expression to a closed form,

    E_d[term] = (1/2) sin(gamma) cos(gamma)^(p1 + p2 + p3),

with p_i the number of neighbor clauses attached to focal variable i: the
focal-sign average kills the odd component outright, and each neighbor sign
average turns one quadratic-form factor into a cos(gamma). Summing over
clauses and bounding the exponent by 3D sandwiches the ensemble mean
between (m/2) sin(gamma) cos(gamma)^(3D) and (m/2) sin(gamma) on
(0, pi/2). The lower bound peaks near gamma = 1/sqrt(3D), giving an
expected advantage of about m / (2 sqrt(3e) sqrt(D)) over random guessing.

Everything here is desk-checkable: the exhaustive path enumerates all 2^m
sign assignments and must reproduce the closed form exactly; the Monte
Carlo path estimates the same mean with a seeded stream and reports the
empirical variance, which stays under (1/4) m (6D+3)(D+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analytic import build_neighborhood, clause_adjacency, objective_expectation
from .instance import Clause, Instance, resample_signs, with_signs

EXHAUSTIVE_MAX_M = 20

EXHAUSTIVE = "exhaustive"
MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class EnsembleReport:
    """Mean and spread of W(gamma) over the sign ensemble of one collection.

    ``mean_w`` is the (exhaustive or estimated) ensemble mean,
    ``closed_form_mean`` the clause-wise prediction, and the bounds are the
    3D sandwich and the variance ceiling for the collection's derived
    occurrence parameter. For the exhaustive method, ``trials`` is the full
    ensemble size 2^m and ``stderr`` is 0.
    """

    triples: tuple[tuple[int, int, int], ...]
    m: int
    d_bound: int
    gamma: float
    mean_w: float
    stderr: float
    variance: float
    closed_form_mean: float
    lower_bound: float
    upper_bound: float
    variance_bound: float
    trials: int
    method: str


def base_instance(triples: Sequence[tuple[int, int, int]], n: int | None = None) -> Instance:
    """All-zero-rhs instance over the triples; n inferred when omitted."""
    triples = [tuple(t) for t in triples]
    for t in triples:
        if len(t) != 3 or not t[0] < t[1] < t[2]:
            raise ValueError(f"triple must be strictly increasing, got {t}")
    if len(set(triples)) != len(triples):
        raise ValueError("duplicate triples in collection")
    if n is None:
        n = 1 + max((t[2] for t in triples), default=2)
    clauses = tuple(Clause(a, b, c, 0) for a, b, c in triples)
    return Instance(n=n, clauses=clauses)


def clause_mean_closed_form(nbhd, gamma: float) -> float:
    """Sign-ensemble mean of one clause term; depends only on pair counts."""
    p1, p2, p3 = nbhd.pair_counts
    return 0.5 * math.sin(gamma) * math.cos(gamma) ** (p1 + p2 + p3)


def collection_closed_form(instance: Instance, gamma: float) -> float:
    """Sum of the per-clause closed forms over the whole collection."""
    adjacency = clause_adjacency(instance)
    return math.fsum(
        clause_mean_closed_form(build_neighborhood(instance, j, adjacency=adjacency), gamma)
        for j in range(instance.m)
    )


def sandwich_bounds(m: int, d_bound: int, gamma: float) -> tuple[float, float]:
    """(lower, upper) = ((m/2) sin g cos^(3D) g, (m/2) sin g)."""
    s = 0.5 * m * math.sin(gamma)
    return s * math.cos(gamma) ** (3 * d_bound), s


def variance_bound(m: int, d_bound: int) -> float:
    """Ensemble variance ceiling (1/4) m (6D+3)(D+1)."""
    return 0.25 * m * (6 * d_bound + 3) * (d_bound + 1)


def _assemble(
    base: Instance,
    gamma: float,
    mean_w: float,
    stderr: float,
    variance: float,
    trials: int,
    method: str,
) -> EnsembleReport:
    d = base.d_bound
    lower, upper = sandwich_bounds(base.m, d, gamma)
    return EnsembleReport(
        triples=base.triples(),
        m=base.m,
        d_bound=d,
        gamma=gamma,
        mean_w=mean_w,
        stderr=stderr,
        variance=variance,
        closed_form_mean=collection_closed_form(base, gamma),
        lower_bound=lower,
        upper_bound=upper,
        variance_bound=variance_bound(base.m, d),
        trials=trials,
        method=method,
    )


def ensemble_mean_exhaustive(
    triples: Sequence[tuple[int, int, int]],
    gamma: float,
    n: int | None = None,
    q_max: int | None = None,
) -> EnsembleReport:
    """Average W(gamma) over every one of the 2^m sign assignments.

    Exact: the returned variance is the full-ensemble population variance
    and stderr is 0. Refuses m > 20.
    """
    base = base_instance(triples, n=n)
    m = base.m
    if m > EXHAUSTIVE_MAX_M:
        raise ValueError(f"m={m} too large for exhaustive ensemble (max {EXHAUSTIVE_MAX_M})")
    values = []
    for code in range(1 << m):
        rhs = [(code >> j) & 1 for j in range(m)]
        report = objective_expectation(with_signs(base, rhs), gamma, mode="exact", q_max=q_max)
        values.append(report.total)
    size = float(1 << m)
    mean = math.fsum(values) / size
    variance = math.fsum((v - mean) ** 2 for v in values) / size
    return _assemble(base, gamma, mean, 0.0, variance, 1 << m, EXHAUSTIVE)


def ensemble_mean_mc(
    triples: Sequence[tuple[int, int, int]],
    gamma: float,
    trials: int,
    seed: int = 0,
    n: int | None = None,
    q_max: int | None = None,
) -> EnsembleReport:
    """Monte Carlo over sign assignments, one seeded draw per trial."""
    if trials < 2:
        raise ValueError(f"trials must be >= 2, got {trials}")
    base = base_instance(triples, n=n)
    values = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        inst = resample_signs(base, seed=[seed, t])
        values[t] = objective_expectation(inst, gamma, mode="auto", q_max=q_max).total
    mean = float(np.mean(values))
    variance = float(np.var(values, ddof=1))
    stderr = math.sqrt(variance / trials)
    return _assemble(base, gamma, mean, stderr, variance, trials, MONTE_CARLO)


def optimal_gamma_typical(d_bound: int) -> float:
    """gamma = 1/sqrt(3D): maximizer of the large-D ensemble advantage."""
    if d_bound < 1:
        raise ValueError(f"d_bound must be >= 1, got {d_bound}")
    return 1.0 / math.sqrt(3.0 * d_bound)


def typical_guarantee(m: float, d_bound: int) -> float:
    """Expected advantage m / (2 sqrt(3e) sqrt(D)) at the typical gamma."""
    if d_bound < 1:
        raise ValueError(f"d_bound must be >= 1, got {d_bound}")
    return m / (2.0 * math.sqrt(3.0 * math.e) * math.sqrt(d_bound))
