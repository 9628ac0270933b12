import math

import numpy as np
import pytest
from scipy import integrate, optimize
from scipy.special import lambertw

from dist import DistributionSpec, abs_moment, tail_moment, tilted_third
from regularity import (
    FamilySweep,
    bernstein_parameter,
    bernstein_terms,
    exp_tail_profile,
    refine_sup,
    regularity_report,
    relation_check,
    sakhanenko_parameter,
    solve_sakhanenko,
    sub_gaussian_lambda,
    sub_gaussian_moment_bound,
    sub_gaussian_sigma,
    sub_gaussian_tilted_bound,
    uniform_moment_conditions,
    uniform_tail_profile,
)
from utils.exceptions import InfeasibleParameterError, InvalidSpecError, VacuousConstantError

W1 = float(lambertw(1.0).real)


class TestSakhanenko:
    def test_rademacher_is_lambert_w(self, rademacher):
        assert sakhanenko_parameter(rademacher, tol=1e-12) == pytest.approx(W1, abs=1e-9)

    def test_gaussian_against_quadrature_oracle(self, gaussian):
        def h(lam):
            value, _ = integrate.quad(lambda z: z ** 3 * math.exp(lam * z - z * z / 2.0), 0.0, np.inf)
            return lam * 2.0 * value / math.sqrt(2.0 * math.pi) - 1.0

        oracle = optimize.brentq(h, 1e-3, 5.0, xtol=1e-13)
        assert sakhanenko_parameter(gaussian) == pytest.approx(oracle, rel=1e-8)

    def test_pareto_heavy_tail(self):
        solution = solve_sakhanenko(DistributionSpec.pareto(3.0, 1.0))
        assert solution.value == 0.0
        assert solution.heavy_tail

    def test_bracketing_certificate(self, light_specs):
        tol = 1e-10
        for spec in light_specs:
            lam = sakhanenko_parameter(spec, tol=tol)
            var = spec.law.variance
            assert lam * tilted_third(spec, lam) <= var
            above = lam * (1.0 + tol) + tol
            assert above * tilted_third(spec, above) > var

    def test_invalid_tolerance(self, rademacher):
        with pytest.raises(InfeasibleParameterError):
            solve_sakhanenko(rademacher, tol=0.0)


class TestBernstein:
    def test_rademacher(self, rademacher):
        result = bernstein_terms(rademacher, 200)
        assert result.value == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert result.argmax_q == 3

    def test_stable_under_doubling(self, rademacher, gaussian):
        for spec in (rademacher, gaussian):
            assert bernstein_parameter(spec, 400) == pytest.approx(bernstein_parameter(spec, 200), rel=1e-12)

    def test_pareto_diverges(self):
        result = bernstein_terms(DistributionSpec.pareto(3.0, 1.0), 10)
        assert result.value == math.inf
        assert result.divergent_q == 3

    def test_gaussian_exact_scan(self, gaussian):
        def double_factorial(n):
            return math.prod(range(n, 0, -2)) if n > 0 else 1

        def exact(q):
            moment = double_factorial(q - 1) * (math.sqrt(2.0 / math.pi) if q % 2 else 1.0)
            return (2.0 * moment / math.factorial(q)) ** (1.0 / (q - 2))

        oracle = max(exact(q) for q in range(3, 60))
        assert bernstein_parameter(gaussian, 60) == pytest.approx(oracle, rel=1e-10)

    def test_third_term_is_lower_bound(self, light_specs):
        for spec in light_specs:
            assert bernstein_parameter(spec) >= 2.0 * abs_moment(spec, 3) / (6.0 * spec.law.variance) * (1 - 1e-12)

    def test_q_max_precondition(self, rademacher):
        with pytest.raises(InfeasibleParameterError):
            bernstein_terms(rademacher, 2)


class TestRelations:
    def test_rademacher_edges(self, rademacher):
        report = relation_check(rademacher, 1.0)
        assert report.passed
        assert report.edge("e.C_from_lambda").value == pytest.approx(W1 ** -3 + math.exp(W1), rel=1e-8)
        assert report.edge("e.C_from_lambda").slack > 0

    @pytest.mark.parametrize("seed", range(3))
    def test_random_light_battery(self, seed):
        rng = np.random.default_rng(seed)
        specs = [
            DistributionSpec.uniform(float(rng.uniform(0.2, 4.0))),
            DistributionSpec.gaussian(float(rng.uniform(0.2, 4.0))),
            DistributionSpec.laplace(float(rng.uniform(0.2, 3.0))),
            DistributionSpec.two_point(float(rng.uniform(0.1, 0.9)), float(rng.uniform(0.2, 4.0))),
            DistributionSpec.rademacher(),
            DistributionSpec.uniform(float(rng.uniform(0.2, 4.0))),
            DistributionSpec.gaussian(float(rng.uniform(0.2, 4.0))),
        ]
        for spec in specs:
            report = relation_check(spec, 0.5 * spec.law.sigma)
            for row in report.rows:
                if row.quantity.startswith(("c.", "d.", "e.")):
                    assert row.slack >= -1e-9, (spec.label, row.quantity)

    def test_frame_columns(self, rademacher):
        frame = relation_check(rademacher, 1.0).to_frame()
        assert list(frame.columns) == ["quantity", "value", "slack", "q_or_m", "status"]

    def test_infeasible_ubar_sigma(self, rademacher):
        with pytest.raises(InfeasibleParameterError):
            relation_check(rademacher, 2.0)

    def test_heavy_tail_rejected(self):
        with pytest.raises(InfeasibleParameterError):
            relation_check(DistributionSpec.pareto(4.0, 1.0), 0.1)


class TestReport:
    def test_rademacher_report(self, rademacher):
        report = regularity_report(rademacher, ubar_sigma=1.0)
        payload = report.to_dict()
        assert payload["lambda_sak"] == pytest.approx(W1, abs=1e-9)
        assert payload["bernstein"] == pytest.approx(1.0 / 3.0)
        assert payload["exp_pair"]["t"] == pytest.approx(W1 / 2.0, abs=1e-9)
        assert payload["relations"]["passed"]
        assert payload["sub_gaussian_sigma"] == 1.0

    def test_pareto_report(self):
        report = regularity_report(DistributionSpec.pareto(3.0, 1.0), ubar_sigma=0.5)
        assert report.heavy_tail
        assert report.lambda_sak == 0.0
        assert report.relations is None
        assert report.sub_gaussian_sigma is None


class TestSubGaussian:
    def test_lambda_values(self):
        assert sub_gaussian_lambda(0.05, 0.05) == pytest.approx(20.0 * math.sqrt(math.log(0.0025 / (8 * math.sqrt(3) * 0.05 ** 3))))
        assert sub_gaussian_lambda(0.01, 0.01) == pytest.approx(140.6, abs=0.1)

    def test_vacuous(self):
        with pytest.raises(VacuousConstantError):
            sub_gaussian_lambda(1.0, 1.0)

    @pytest.mark.parametrize("q, sigma, expected", [(2, 1.0, 4.0), (6, 1.0, 96.0), (4, 2.0, 256.0)])
    def test_moment_bound(self, q, sigma, expected):
        assert sub_gaussian_moment_bound(q, sigma) == pytest.approx(expected)

    @pytest.mark.parametrize("q", [2, 3, 4, 6])
    def test_moment_bound_dominates_gaussian(self, q):
        for sigma in (0.3, 1.0, 2.5):
            assert abs_moment(DistributionSpec.gaussian(sigma), q) <= sub_gaussian_moment_bound(q, sigma)

    @pytest.mark.parametrize("spec, expected", [
        (DistributionSpec.rademacher(), 1.0),
        (DistributionSpec.gaussian(2.0), 2.0),
        (DistributionSpec.uniform(3.0), 3.0),
        (DistributionSpec.laplace(1.0), None),
        (DistributionSpec.pareto(3.0, 1.0), None),
    ])
    def test_sigma_by_family(self, spec, expected):
        assert sub_gaussian_sigma(spec) == expected

    def test_tilted_bound_dominates_gaussian(self):
        for sigma, lam in ((1.0, 0.5), (0.5, 2.0), (2.0, 0.1)):
            assert tilted_third(DistributionSpec.gaussian(sigma), lam) <= sub_gaussian_tilted_bound(sigma, lam)


class TestProfiles:
    def test_rademacher_profile(self, rademacher):
        profile = uniform_tail_profile(FamilySweep([rademacher], m_grid=[0.5, 2.0]), 3.0)
        assert profile.values == [1.0, 0.0]
        assert profile.is_monotone

    def test_uniform_family_sup(self):
        sweep = FamilySweep([DistributionSpec.uniform(h) for h in (1.0, 2.0, 3.0)], m_grid=[0.0])
        profile = uniform_tail_profile(sweep, 3.0)
        assert profile.values[0] == pytest.approx(6.75, rel=1e-10)
        assert profile.argmax[0] == "uniform(halfwidth=3)"

    def test_singleton_matches_tail_moment(self, gaussian):
        sweep = FamilySweep([gaussian])
        profile = uniform_tail_profile(sweep, 4.0)
        assert profile.values == [tail_moment(gaussian, 4.0, m) for m in sweep.m_grid]

    def test_threshold(self, rademacher):
        profile = uniform_tail_profile(FamilySweep([rademacher], m_grid=[0.5, 2.0]), 3.0, threshold=0.1)
        assert profile.below_threshold_at == 2.0

    def test_heavy_member_propagates_inf(self, rademacher):
        sweep = FamilySweep([rademacher, DistributionSpec.pareto(2.5, 1.0)], m_grid=[0.0, 10.0])
        assert uniform_tail_profile(sweep, 3.0).values == [math.inf, math.inf]

    def test_exp_tail_profile(self, rademacher):
        profile = exp_tail_profile(FamilySweep([rademacher], k_grid=[1.0, 10.0]), 1.0)
        assert profile.values == pytest.approx([math.e, 0.0])

    def test_empty_sweep(self):
        with pytest.raises(InvalidSpecError):
            FamilySweep([])

    def test_refine_sup_monotone_functional(self):
        result = refine_sup(DistributionSpec.uniform(1.0), "halfwidth", (1.0, 3.0), lambda s: abs_moment(s, 3))
        assert result.argmax == pytest.approx(3.0)
        assert result.value == pytest.approx(6.75, rel=1e-10)

    def test_uniform_moment_conditions(self, rademacher):
        a = np.arange(1, 2001, dtype=float) ** 0.5
        report = uniform_moment_conditions(FamilySweep([rademacher]), a, 3.0)
        assert report.sup_sum == pytest.approx(float(np.sum(a ** -3.0)))
        assert all(b <= x for x, b in zip(report.sup_tail[:-1], report.sup_tail[1:]))
