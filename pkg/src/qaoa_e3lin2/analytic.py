"""Exact per-clause expectation values at mixing angle pi/4.

For one focal clause with sign d, the contribution to the objective
expectation W(gamma) = <state(-gamma, pi/4)| C |state(-gamma, pi/4)> reduces
to a classical average over the spins of the clause's neighborhood: the
clauses sharing exactly one variable with the focal triple define three
quadratic forms c1, c2, c3 (one per focal variable), each a signed sum of
spin pair products over the support bits, and the clause term is

    (d/8) * E_z[  sin(gamma (d + c1 + c2 + c3))
                + sin(gamma (d + c1 - c2 - c3))
                + sin(gamma (d - c1 + c2 - c3))
                + sin(gamma (d - c1 - c2 + c3)) ]

with E_z the uniform average over the support spins. Clauses sharing two
variables with the focal triple cancel identically and never enter the
forms; clauses sharing none commute away. The average is over at most
2^(6D) spin configurations, so the cost is governed by the occurrence bound
D instead of the instance size n.

Enumeration works by tabulating the joint distribution of the integer
triple (c1, c2, c3) over all support assignments (each form is bounded by
its pair count, so the table is tiny) and then evaluating the four sines
per distinct cell. The histogram depends only on the neighborhood, not on
gamma, so angle scans reuse it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _caps
from .instance import Clause, Instance

#: The four sign patterns applied to (c1, c2, c3) in the clause term.
SIGN_PATTERNS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))

_CHUNK = 1 << 20

EXACT_METHOD = "exact-enumeration"
MC_METHOD = "monte-carlo"


class SupportTooLargeError(ValueError):
    """Neighborhood support exceeds the exact-enumeration cap."""


@dataclass(frozen=True)
class Neighborhood:
    """Everything the focal clause term depends on.

    ``forms[i]`` lists the pairs of form ``c_{i+1}`` as ``(a, b, sign)``
    where ``a`` and ``b`` are positions into ``support`` (support bits are
    compacted to 0..q-1); ``support`` maps positions back to original
    variable indices, ascending. ``cancelled`` records the indices of
    clauses sharing exactly two variables with the focal triple, which drop
    out of the term identically.
    """

    focal_index: int
    focal: Clause
    support: tuple[int, ...]
    forms: tuple[tuple[tuple[int, int, int], ...], ...]
    cancelled: tuple[int, ...]

    @property
    def q_size(self) -> int:
        return len(self.support)

    @property
    def pair_counts(self) -> tuple[int, int, int]:
        return tuple(len(f) for f in self.forms)


@dataclass(frozen=True)
class ClauseTerm:
    """One clause's contribution to W(gamma); |value| <= 1/2 always."""

    clause_index: int
    value: float
    method: str
    stderr: float = 0.0


@dataclass(frozen=True)
class ExpectationReport:
    n: int
    m: int
    d_bound: int
    gamma: float
    mode: str
    total: float
    stderr: float
    terms: tuple[ClauseTerm, ...]


@dataclass(frozen=True)
class MomentReport:
    """Exact low-order moments of the forms and their signed combinations."""

    pair_counts: tuple[int, int, int]
    form_means: tuple[float, float, float]
    form_second_moments: tuple[float, float, float]
    combo_second_moments: tuple[float, float, float, float]

    @property
    def max_combo_second_moment(self) -> float:
        return max(self.combo_second_moments)


def clause_adjacency(instance: Instance) -> tuple[tuple[int, ...], ...]:
    """For each variable, the indices of clauses containing it."""
    touching: list[list[int]] = [[] for _ in range(instance.n)]
    for j, cl in enumerate(instance.clauses):
        for v in cl.triple:
            touching[v].append(j)
    return tuple(tuple(t) for t in touching)


def build_neighborhood(
    instance: Instance,
    clause_index: int,
    adjacency: Sequence[Sequence[int]] | None = None,
) -> Neighborhood:
    """Partition the other clauses by overlap with the focal triple.

    Overlap-1 clauses populate the form keyed by the shared focal variable,
    overlap-2 clauses are recorded as cancelled, overlap-0 clauses are
    ignored.
    """
    if not 0 <= clause_index < instance.m:
        raise IndexError(f"clause_index {clause_index} out of range for m={instance.m}")
    focal = instance.clauses[clause_index]
    focal_vars = focal.triple

    if adjacency is None:
        candidates = sorted(
            {j for j in range(instance.m) if j != clause_index
             and set(instance.clauses[j].triple) & set(focal_vars)}
        )
    else:
        near: set[int] = set()
        for v in focal_vars:
            near.update(adjacency[v])
        near.discard(clause_index)
        candidates = sorted(near)

    raw_forms: tuple[list[tuple[int, int, int]], ...] = ([], [], [])
    cancelled: list[int] = []
    support_vars: set[int] = set()
    for j in candidates:
        other = instance.clauses[j]
        shared = [v for v in other.triple if v in focal_vars]
        if len(shared) == 1:
            slot = focal_vars.index(shared[0])
            pair = tuple(v for v in other.triple if v != shared[0])
            raw_forms[slot].append((pair[0], pair[1], other.sign))
            support_vars.update(pair)
        elif len(shared) == 2:
            cancelled.append(j)

    support = tuple(sorted(support_vars))
    pos = {v: i for i, v in enumerate(support)}
    forms = tuple(
        tuple((pos[a], pos[b], s) for (a, b, s) in form) for form in raw_forms
    )
    return Neighborhood(
        focal_index=clause_index,
        focal=focal,
        support=support,
        forms=forms,
        cancelled=tuple(cancelled),
    )


def _eval_forms(
    forms: tuple[tuple[tuple[int, int, int], ...], ...], codes: np.ndarray
) -> np.ndarray:
    """Evaluate (c1, c2, c3) on assignment bitmasks; bit j set = spin -1."""
    out = np.zeros((3, codes.size), dtype=np.int64)
    for i, form in enumerate(forms):
        acc = out[i]
        for a, b, s in form:
            parity = ((codes >> a) ^ (codes >> b)) & 1
            acc += s * (1 - 2 * parity)
    return out


def form_value_table(nbhd: Neighborhood, max_q: int = 22) -> np.ndarray:
    """Full (3, 2^q) table of form values over every support assignment."""
    if nbhd.q_size > max_q:
        raise SupportTooLargeError(f"q={nbhd.q_size} exceeds table cap {max_q}")
    codes = np.arange(1 << nbhd.q_size, dtype=np.int64)
    return _eval_forms(nbhd.forms, codes)


def combo_histogram(nbhd: Neighborhood) -> tuple[np.ndarray, np.ndarray]:
    """Joint counts of the integer triple (c1, c2, c3) over all assignments.

    Returns ``(values, counts)`` where ``values`` has shape (K, 3). Counts
    sum to 2^q. Cached on the form structure alone: the histogram does not
    depend on gamma, the focal sign, or which clause is focal, so angle
    scans and sign-ensemble sweeps reuse it.
    """
    return _histogram_cached(nbhd.q_size, nbhd.forms)


@lru_cache(maxsize=4096)
def _histogram_cached(
    q_size: int, forms: tuple[tuple[tuple[int, int, int], ...], ...]
) -> tuple[np.ndarray, np.ndarray]:
    pairs = tuple(len(f) for f in forms)
    p1, p2, p3 = pairs
    dims = (2 * p1 + 1, 2 * p2 + 1, 2 * p3 + 1)
    total_cells = dims[0] * dims[1] * dims[2]
    hist = np.zeros(total_cells, dtype=np.int64)
    size = 1 << q_size
    for start in range(0, size, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        c = _eval_forms(forms, codes)
        keys = ((c[0] + p1) * dims[1] + (c[1] + p2)) * dims[2] + (c[2] + p3)
        hist += np.bincount(keys, minlength=total_cells)
    occupied = np.nonzero(hist)[0]
    counts = hist[occupied]
    v1, rem = np.divmod(occupied, dims[1] * dims[2])
    v2, v3 = np.divmod(rem, dims[2])
    values = np.stack([v1 - p1, v2 - p2, v3 - p3], axis=1)
    values.setflags(write=False)
    counts.setflags(write=False)
    return values, counts


def _four_sine_bracket(gamma: float, d: int, c1, c2, c3):
    total = None
    for s1, s2, s3 in SIGN_PATTERNS:
        term = np.sin(gamma * (d + s1 * c1 + s2 * c2 + s3 * c3))
        total = term if total is None else total + term
    return total


def clause_term_exact(
    nbhd: Neighborhood, gamma: float, q_max: int | None = None
) -> ClauseTerm:
    """Exact clause term by enumeration over the support assignments.

    When every pair in the forms uses its own two variables (q = 2(p1+p2+p3),
    the generic situation on sparse instances), the average factorizes
    through the characteristic function E[e^(i gamma c_i)] = cos^(p_i) gamma
    and the term collapses to (1/2) sin(gamma) cos(gamma)^(p1+p2+p3) with no
    enumeration; this path is exact and needs no support cap.
    """
    pairs_total = sum(nbhd.pair_counts)
    if nbhd.q_size == 2 * pairs_total:
        value = 0.5 * math.sin(gamma) * math.cos(gamma) ** pairs_total
        return ClauseTerm(
            clause_index=nbhd.focal_index,
            value=value,
            method=EXACT_METHOD,
            stderr=0.0,
        )
    q_max = _caps.default_q_max() if q_max is None else q_max
    if nbhd.q_size > q_max:
        raise SupportTooLargeError(
            f"q={nbhd.q_size} exceeds exact-enumeration cap {q_max}; use clause_term_mc"
        )
    d = nbhd.focal.sign
    values, counts = combo_histogram(nbhd)
    bracket = _four_sine_bracket(gamma, d, values[:, 0], values[:, 1], values[:, 2])
    mean = float(np.dot(counts.astype(np.float64), bracket)) / float(1 << nbhd.q_size)
    return ClauseTerm(
        clause_index=nbhd.focal_index,
        value=d / 8.0 * mean,
        method=EXACT_METHOD,
        stderr=0.0,
    )


def clause_term_mc(
    nbhd: Neighborhood,
    gamma: float,
    samples: int,
    seed: int | Sequence[int] = 0,
) -> ClauseTerm:
    """Unbiased Monte Carlo estimate of the clause term.

    One shared spin draw feeds all four sign patterns per sample, which
    correlates the four sines and lowers the estimator variance.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    d = nbhd.focal.sign
    rng = np.random.default_rng(seed)
    spins = 1 - 2 * rng.integers(0, 2, size=(samples, nbhd.q_size), dtype=np.int8)
    c = np.zeros((3, samples), dtype=np.int64)
    for i, form in enumerate(nbhd.forms):
        for a, b, s in form:
            c[i] += s * (spins[:, a].astype(np.int64) * spins[:, b])
    vals = (d / 8.0) * _four_sine_bracket(gamma, d, c[0], c[1], c[2])
    value = float(np.mean(vals))
    if samples == 1 or nbhd.q_size == 0:
        stderr = 0.0
    else:
        stderr = float(np.std(vals, ddof=1) / math.sqrt(samples))
    return ClauseTerm(
        clause_index=nbhd.focal_index, value=value, method=MC_METHOD, stderr=stderr
    )


def objective_expectation(
    instance: Instance,
    gamma: float,
    mode: str = "auto",
    q_max: int | None = None,
    mc_samples: int = 100_000,
    seed: int = 0,
) -> ExpectationReport:
    """W(gamma): the sum of all clause terms at mixing angle pi/4.

    ``mode`` is one of ``exact`` (fail when a support is too large),
    ``auto`` (exact where the support fits under ``q_max`` or the term
    factorizes through disjoint pairs, Monte Carlo elsewhere) or ``mc``
    (Monte Carlo everywhere). Monte Carlo draws are seeded per clause from
    ``(seed, clause_index)``.
    """
    if mode not in ("exact", "auto", "mc"):
        raise ValueError(f"mode must be exact, auto or mc, got {mode!r}")
    q_cap = _caps.default_q_max() if q_max is None else q_max
    adjacency = clause_adjacency(instance)
    terms: list[ClauseTerm] = []
    for j in range(instance.m):
        nbhd = build_neighborhood(instance, j, adjacency=adjacency)
        if mode == "mc":
            terms.append(clause_term_mc(nbhd, gamma, mc_samples, seed=[seed, j]))
        elif mode == "exact":
            terms.append(clause_term_exact(nbhd, gamma, q_max=q_cap))
        else:
            factorizes = nbhd.q_size == 2 * sum(nbhd.pair_counts)
            if factorizes or nbhd.q_size <= q_cap:
                terms.append(clause_term_exact(nbhd, gamma, q_max=q_cap))
            else:
                terms.append(clause_term_mc(nbhd, gamma, mc_samples, seed=[seed, j]))
    total = math.fsum(t.value for t in terms)
    stderr = math.sqrt(math.fsum(t.stderr**2 for t in terms))
    return ExpectationReport(
        n=instance.n,
        m=instance.m,
        d_bound=instance.d_bound,
        gamma=gamma,
        mode=mode,
        total=total,
        stderr=stderr,
        terms=tuple(terms),
    )


def moment_checks(nbhd: Neighborhood, q_max: int | None = None) -> MomentReport:
    """Exact first and second moments of the forms under uniform spins.

    Each form has mean 0 and second moment equal to its pair count; the
    signed combinations d + s1 c1 + s2 c2 + s3 c3 therefore have second
    moment 1 + E[(s1 c1 + s2 c2 + s3 c3)^2].
    """
    q_max = _caps.default_q_max() if q_max is None else q_max
    if nbhd.q_size > q_max:
        raise SupportTooLargeError(f"q={nbhd.q_size} exceeds enumeration cap {q_max}")
    values, counts = combo_histogram(nbhd)
    weights = counts.astype(np.float64) / float(1 << nbhd.q_size)
    means = tuple(float(np.dot(weights, values[:, i])) for i in range(3))
    seconds = tuple(float(np.dot(weights, values[:, i] ** 2)) for i in range(3))
    d = nbhd.focal.sign
    combos = tuple(
        float(np.dot(weights, (d + s1 * values[:, 0] + s2 * values[:, 1] + s3 * values[:, 2]) ** 2))
        for s1, s2, s3 in SIGN_PATTERNS
    )
    return MomentReport(
        pair_counts=nbhd.pair_counts,
        form_means=means,
        form_second_moments=seconds,
        combo_second_moments=combos,
    )


def cosine_product_mean(
    nbhd: Neighborhood, gamma: float, q_max: int | None = None
) -> float:
    """Exact E_z[cos(gamma c1) cos(gamma c2) cos(gamma c3)].

    Averaging a clause term over its focal sign at fixed neighbor signs
    leaves exactly (1/2) sin(gamma) times this quantity; averaging over the
    neighbor signs as well turns it into cos(gamma)^(p1+p2+p3).
    """
    q_max = _caps.default_q_max() if q_max is None else q_max
    if nbhd.q_size > q_max:
        raise SupportTooLargeError(f"q={nbhd.q_size} exceeds enumeration cap {q_max}")
    values, counts = combo_histogram(nbhd)
    weights = counts.astype(np.float64) / float(1 << nbhd.q_size)
    prod = (
        np.cos(gamma * values[:, 0])
        * np.cos(gamma * values[:, 1])
        * np.cos(gamma * values[:, 2])
    )
    return float(np.dot(weights, prod))


def combo_abs_moment(
    nbhd: Neighborhood,
    pattern: tuple[int, int, int],
    power: float,
    q_max: int | None = None,
) -> float:
    """Exact E[|d + s1 c1 + s2 c2 + s3 c3|^power] for one sign pattern."""
    q_max = _caps.default_q_max() if q_max is None else q_max
    if nbhd.q_size > q_max:
        raise SupportTooLargeError(f"q={nbhd.q_size} exceeds enumeration cap {q_max}")
    values, counts = combo_histogram(nbhd)
    weights = counts.astype(np.float64) / float(1 << nbhd.q_size)
    s1, s2, s3 = pattern
    combo = nbhd.focal.sign + s1 * values[:, 0] + s2 * values[:, 1] + s3 * values[:, 2]
    return float(np.dot(weights, np.abs(combo.astype(np.float64)) ** power))
