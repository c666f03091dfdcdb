import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaoa_e3lin2.analytic import build_neighborhood
from qaoa_e3lin2.instance import generate_random
from qaoa_e3lin2.typical import (
    EXHAUSTIVE,
    EXHAUSTIVE_MAX_M,
    MONTE_CARLO,
    base_instance,
    clause_mean_closed_form,
    collection_closed_form,
    ensemble_mean_exhaustive,
    ensemble_mean_mc,
    optimal_gamma_typical,
    sandwich_bounds,
    typical_guarantee,
    variance_bound,
)

from conftest import instances

# four triples whose incidence rows sum to zero over GF(2); the sign
# ensemble splits into two orbits, yet W still cannot tell them apart:
# every neighborhood here has a single active slot, so each clause term
# reduces to (1/2) sin cos with no sign left in it
DEPENDENT_QUAD = ((0, 1, 2), (0, 1, 3), (2, 4, 5), (3, 4, 5))

# three triples with independent incidence rows: every sign assignment is
# reachable from every other by flipping variables, so W is constant
INDEPENDENT_TRIO = ((0, 1, 2), (0, 1, 3), (0, 1, 4))

# dense octet with verified positive ensemble variance (0.030 at gamma =
# 0.52): several clauses see all three slots occupied, which keeps the
# focal-sign-odd part of their terms alive
SPREAD_OCTET = (
    (4, 5, 7),
    (0, 6, 7),
    (3, 4, 6),
    (4, 6, 7),
    (1, 5, 7),
    (0, 3, 5),
    (0, 1, 5),
    (0, 2, 3),
)


class TestBaseInstance:
    def test_infers_width(self):
        inst = base_instance(DEPENDENT_QUAD)
        assert inst.n == 6
        assert inst.m == 4
        assert all(cl.rhs == 0 for cl in inst.clauses)

    def test_explicit_width(self):
        assert base_instance(((0, 1, 2),), n=9).n == 9

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            base_instance(((2, 1, 0),))

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            base_instance(((0, 1, 2), (0, 1, 2)))


class TestClosedForm:
    def test_isolated_clause(self):
        inst = base_instance(((0, 1, 2),))
        nb = build_neighborhood(inst, 0)
        for g in (0.0, 0.4, 1.2):
            assert clause_mean_closed_form(nb, g) == pytest.approx(
                0.5 * math.sin(g), abs=1e-15
            )

    def test_zero_angle_kills_everything(self):
        inst = base_instance(DEPENDENT_QUAD)
        assert collection_closed_form(inst, 0.0) == 0.0

    def test_exponent_counts_neighbor_pairs(self):
        # star: focal (0,1,2) with two neighbors through variable 0 and one
        # through variable 2, so the focal clause carries cos^3
        inst = base_instance(((0, 1, 2), (0, 3, 4), (0, 5, 6), (2, 7, 8)))
        nb = build_neighborhood(inst, 0)
        assert nb.pair_counts == (2, 0, 1)
        g = 0.7
        assert clause_mean_closed_form(nb, g) == pytest.approx(
            0.5 * math.sin(g) * math.cos(g) ** 3, abs=1e-15
        )


class TestExhaustive:
    def test_single_clause(self):
        rep = ensemble_mean_exhaustive(((0, 1, 2),), 0.9)
        assert rep.method == EXHAUSTIVE
        assert rep.trials == 2
        assert rep.stderr == 0.0
        assert rep.mean_w == pytest.approx(0.5 * math.sin(0.9), abs=1e-15)
        assert rep.variance == pytest.approx(0.0, abs=1e-20)

    @pytest.mark.parametrize(
        "triples",
        [
            DEPENDENT_QUAD,
            INDEPENDENT_TRIO,
            ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)),
            ((0, 1, 2), (2, 3, 4), (4, 5, 6), (0, 5, 6)),
        ],
    )
    def test_matches_closed_form(self, triples):
        rep = ensemble_mean_exhaustive(triples, 0.43)
        assert rep.mean_w == pytest.approx(rep.closed_form_mean, abs=1e-10)

    def test_random_collection_matches_closed_form(self):
        inst = generate_random(n=9, m=8, d_bound=3, seed=140)
        rep = ensemble_mean_exhaustive(inst.triples(), 0.31)
        assert rep.mean_w == pytest.approx(rep.closed_form_mean, abs=1e-10)

    def test_gauge_orbit_collapses_variance(self):
        # independent incidence rows: variable flips reach every sign
        # assignment, so the ensemble carries no spread at all
        rep = ensemble_mean_exhaustive(INDEPENDENT_TRIO, 0.52)
        assert rep.variance <= 1e-24

    def test_dependent_rows_alone_do_not_spread(self):
        # rank deficiency is necessary for spread but not sufficient
        rep = ensemble_mean_exhaustive(DEPENDENT_QUAD, 0.52)
        assert rep.variance <= 1e-24

    def test_dense_collection_spreads(self):
        rep = ensemble_mean_exhaustive(SPREAD_OCTET, 0.52)
        assert rep.variance > 1e-3
        assert rep.variance <= rep.variance_bound
        assert rep.mean_w == pytest.approx(rep.closed_form_mean, abs=1e-10)

    def test_refuses_large_m(self):
        triples = tuple((0, j + 1, j + 2) for j in range(EXHAUSTIVE_MAX_M + 1))
        with pytest.raises(ValueError):
            ensemble_mean_exhaustive(triples, 0.1)

    def test_empty_collection(self):
        rep = ensemble_mean_exhaustive((), 0.4)
        assert rep.mean_w == 0.0
        assert rep.trials == 1


class TestMonteCarlo:
    def test_deterministic(self):
        a = ensemble_mean_mc(SPREAD_OCTET, 0.4, trials=50, seed=8)
        b = ensemble_mean_mc(SPREAD_OCTET, 0.4, trials=50, seed=8)
        assert a == b
        assert a.method == MONTE_CARLO
        assert a != ensemble_mean_mc(SPREAD_OCTET, 0.4, trials=50, seed=9)

    def test_tracks_closed_form(self):
        rep = ensemble_mean_mc(SPREAD_OCTET, 0.35, trials=400, seed=3)
        assert rep.stderr > 0.0
        assert abs(rep.mean_w - rep.closed_form_mean) <= 4.0 * rep.stderr

    def test_degenerate_collection_pins_to_closed_form(self):
        # zero ensemble variance: every trial returns the same W, and that
        # constant must be the closed form itself
        inst = generate_random(n=10, m=12, d_bound=3, seed=21)
        rep = ensemble_mean_mc(inst.triples(), 0.35, trials=50, seed=3)
        assert abs(rep.mean_w - rep.closed_form_mean) <= max(4.0 * rep.stderr, 1e-9)

    def test_variance_stays_under_ceiling(self):
        rep = ensemble_mean_mc(SPREAD_OCTET, 0.5, trials=300, seed=0)
        assert rep.variance > 0.0
        assert rep.variance <= rep.variance_bound

    def test_rejects_tiny_trials(self):
        with pytest.raises(ValueError):
            ensemble_mean_mc(DEPENDENT_QUAD, 0.4, trials=1)


class TestSandwich:
    def test_formula(self):
        lo, hi = sandwich_bounds(10, 2, 0.3)
        assert hi == pytest.approx(5.0 * math.sin(0.3), rel=1e-15)
        assert lo == pytest.approx(hi * math.cos(0.3) ** 6, rel=1e-15)

    @given(inst=instances(min_n=4, max_n=10, max_m=8), idx=st.integers(0, 30))
    @settings(max_examples=40)
    def test_brackets_the_closed_form(self, inst, idx):
        gammas = np.linspace(0.01, math.pi / 2 - 0.01, 31)
        g = float(gammas[idx % 31])
        base = base_instance(inst.triples(), n=inst.n)
        mean = collection_closed_form(base, g)
        lo, hi = sandwich_bounds(base.m, base.d_bound, g)
        assert lo - 1e-12 <= mean <= hi + 1e-12


class TestOptimalAngle:
    def test_pinned_values(self):
        assert optimal_gamma_typical(3) == pytest.approx(1.0 / 3.0, rel=1e-15)
        assert optimal_gamma_typical(1) == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-15)

    def test_rejects_bad_d(self):
        with pytest.raises(ValueError):
            optimal_gamma_typical(0)

    def test_near_maximizer_of_lower_bound_at_large_d(self):
        d = 100
        gammas = np.linspace(1e-4, 0.2, 20001)
        lower = np.sin(gammas) * np.cos(gammas) ** (3 * d)
        best = float(gammas[int(np.argmax(lower))])
        assert abs(best - optimal_gamma_typical(d)) <= 1e-3

    def test_gaussian_shape_at_large_d(self):
        # for large D the lower-bound shape is the Gaussian g e^(-3 D g^2 / 2)
        d = 100
        for u in (0.3, 0.6, 1.0, 1.4):
            g = u / math.sqrt(3.0 * d)
            exact = math.sin(g) * math.cos(g) ** (3 * d)
            gaussian = g * math.exp(-1.5 * d * g * g)
            assert exact == pytest.approx(gaussian, rel=0.02)

    def test_peak_ratio_approaches_inverse_root_e(self):
        d = 100
        g = optimal_gamma_typical(d)
        ratio = math.cos(g) ** (3 * d)
        assert ratio == pytest.approx(math.exp(-0.5), rel=0.02)


class TestGuarantee:
    def test_normalization(self):
        m = 2.0 * math.sqrt(3.0 * math.e)
        assert typical_guarantee(m, 1) == pytest.approx(1.0, rel=1e-15)

    def test_pinned_value(self):
        assert typical_guarantee(1000, 4) == pytest.approx(
            87.54515991421256, rel=1e-12
        )

    def test_rejects_bad_d(self):
        with pytest.raises(ValueError):
            typical_guarantee(10, 0)

    def test_matches_lower_bound_at_typical_angle_up_to_root_e(self):
        # (m/2) sin(g*) e^(-1/2) with sin g* ~ g* reproduces the guarantee
        m, d = 500, 25
        g = optimal_gamma_typical(d)
        approx = 0.5 * m * g * math.exp(-0.5)
        assert typical_guarantee(m, d) == pytest.approx(approx, rel=0.01)
