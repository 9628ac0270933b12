import math

import numpy as np
import pytest
from scipy import integrate

from dist import (
    DistributionSpec,
    Family,
    abs_moment,
    exp_abs_moment,
    exp_tail_moment,
    log_abs_moment,
    moment_profile,
    sample,
    tail_moment,
    tilted_third,
    truncated_variance,
    variance,
)
from utils.exceptions import InfeasibleParameterError, InvalidSpecError


class TestSpec:
    def test_json_round_trip(self):
        spec = DistributionSpec.two_point(0.3, 2.0)
        assert DistributionSpec.from_json(spec.to_json()) == spec

    def test_family_aliases(self):
        spec = DistributionSpec.from_json('{"family": "CenteredGaussian", "params": {"sigma": 2}}')
        assert spec.family == Family.GAUSSIAN

    @pytest.mark.parametrize("text", [
        '{"family": "gaussian", "params": {}}',
        '{"family": "gaussian", "params": {"sigma": -1}}',
        '{"family": "pareto", "params": {"kappa": 2, "scale": 1}}',
        '{"family": "two_point", "params": {"p": 1.5, "variance": 1}}',
        '{"family": "cauchy", "params": {}}',
        '{"family": "gaussian"',
    ])
    def test_invalid_specs(self, text):
        with pytest.raises(InvalidSpecError):
            DistributionSpec.from_json(text)

    def test_two_point_is_centered(self):
        law = DistributionSpec.two_point(0.2, 3.0).law
        assert float(np.sum(law.probs * law.values)) == pytest.approx(0.0, abs=1e-14)
        assert law.variance == pytest.approx(3.0)


class TestSampling:
    def test_rademacher_support(self, rademacher):
        assert set(sample(rademacher, 4, seed=11).tolist()) <= {-1.0, 1.0}

    def test_gaussian_mean(self, gaussian):
        draws = sample(gaussian, 10_000, seed=3)
        assert abs(draws.mean()) < 5 / math.sqrt(10_000)

    def test_uniform_variance(self, uniform2):
        assert sample(uniform2, 100_000, seed=5).var() == pytest.approx(4.0 / 3.0, abs=0.05)

    def test_deterministic(self, light_specs):
        for spec in light_specs:
            np.testing.assert_array_equal(sample(spec, 50, seed=99), sample(spec, 50, seed=99))

    def test_size_precondition(self, gaussian):
        with pytest.raises(InfeasibleParameterError):
            sample(gaussian, 0, seed=1)

    @pytest.mark.parametrize("q", [2, 3])
    def test_sample_moments_within_six_standard_errors(self, light_specs, q):
        for spec in light_specs:
            powered = np.abs(sample(spec, 100_000, seed=17)) ** q
            se = powered.std() / math.sqrt(powered.size)
            assert abs(powered.mean() - abs_moment(spec, q)) <= 6 * se + 1e-12


class TestMoments:
    def test_rademacher_moment(self, rademacher):
        assert abs_moment(rademacher, 7) == 1.0

    def test_gaussian_sixth_moment(self, gaussian):
        assert abs_moment(gaussian, 6) == pytest.approx(15.0, rel=1e-12)

    def test_pareto_divergence(self):
        assert abs_moment(DistributionSpec.pareto(3.0, 1.0), 4) == math.inf

    def test_exp_moment_rademacher(self, rademacher):
        assert exp_abs_moment(rademacher, 1.3) == pytest.approx(math.exp(1.3))

    def test_exp_moment_laplace_diverges(self):
        assert exp_abs_moment(DistributionSpec.laplace(1.0), 2.0) == math.inf

    def test_exp_moment_uniform(self):
        assert exp_abs_moment(DistributionSpec.uniform(1.0), 1.0) == pytest.approx(math.e - 1.0, rel=1e-10)

    def test_exp_moment_quadrature_agrees(self):
        spec = DistributionSpec.uniform(1.0)
        assert exp_abs_moment(spec, 1.0, method="quadrature") == pytest.approx(math.e - 1.0, rel=1e-10)

    def test_tilted_third(self, rademacher, gaussian):
        assert tilted_third(rademacher, 0.7) == pytest.approx(math.exp(0.7))
        assert tilted_third(gaussian, 0.0) == pytest.approx(2.0 * math.sqrt(2.0 / math.pi), rel=1e-10)

    def test_tail_moment_rademacher(self, rademacher):
        assert tail_moment(rademacher, 3, 2.0) == 0.0
        assert tail_moment(rademacher, 3, 0.5) == 1.0

    def test_tail_moment_uniform_against_integral(self):
        spec = DistributionSpec.uniform(1.0)
        # |X| is uniform on [0, 1]
        cut = 0.5 ** 0.25
        expected, _ = integrate.quad(lambda x: x ** 4, cut, 1.0)
        assert tail_moment(spec, 4, 0.5) == pytest.approx(expected, rel=1e-9)

    def test_tail_moment_at_zero_is_moment(self, light_specs):
        for spec in light_specs:
            assert tail_moment(spec, 3, 0.0) == pytest.approx(abs_moment(spec, 3), rel=1e-9)

    def test_tail_moment_nonincreasing(self, light_specs):
        for spec in light_specs:
            values = [tail_moment(spec, 3, m) for m in (0.0, 0.1, 1.0, 10.0, 100.0)]
            assert all(b <= a + 1e-12 for a, b in zip(values[:-1], values[1:]))

    def test_truncated_variance(self, rademacher):
        assert truncated_variance(rademacher, 2.0) == 1.0
        assert truncated_variance(rademacher, 0.5) == 0.0
        assert truncated_variance(DistributionSpec.uniform(1.0), 0.5) == pytest.approx(1.0 / 24.0, rel=1e-10)

    def test_truncated_variance_converges(self, light_specs):
        for spec in light_specs:
            assert truncated_variance(spec, 1e3) == pytest.approx(variance(spec), abs=1e-9)

    def test_lyapunov(self, light_specs):
        for spec in light_specs:
            profile = moment_profile(spec, qs=(1, 2, 3, 4, 6))
            assert profile.lyapunov_violations() == []
            assert profile.abs_moments[2] == pytest.approx(profile.variance, rel=1e-10)

    def test_log_abs_moment_large_q(self, gaussian):
        assert math.isfinite(log_abs_moment(gaussian, 400))
        assert log_abs_moment(gaussian, 6) == pytest.approx(math.log(15.0))

    def test_exp_tail_moment(self, rademacher):
        assert exp_tail_moment(rademacher, 1.0, 2.0) == pytest.approx(math.e)
        assert exp_tail_moment(rademacher, 1.0, 3.0) == 0.0

    def test_preconditions(self, gaussian):
        with pytest.raises(InfeasibleParameterError):
            abs_moment(gaussian, 0.5)
        with pytest.raises(InfeasibleParameterError):
            tail_moment(gaussian, 2.0, 1.0)
        with pytest.raises(InfeasibleParameterError):
            truncated_variance(gaussian, 0.0)


class TestQuantilePieces:
    def test_rademacher_cdf_pieces(self, rademacher):
        law = rademacher.law
        x = np.array([-1.0, 1.0])
        np.testing.assert_allclose(law.left_cdf(x), [0.0, 0.5])
        np.testing.assert_allclose(law.atom(x), [0.5, 0.5])
        np.testing.assert_allclose(law.right_sf(x), [0.5, 0.0])

    def test_continuous_pieces_sum_to_one(self, light_specs):
        x = np.linspace(-3.0, 3.0, 13)
        for spec in light_specs:
            law = spec.law
            np.testing.assert_allclose(law.left_cdf(x) + law.atom(x) + law.right_sf(x), 1.0, atol=1e-12)

    def test_pareto_quantile_inverts_cdf(self):
        law = DistributionSpec.pareto(3.0, 2.0).law
        u = np.array([0.01, 0.3, 0.7, 0.99])
        np.testing.assert_allclose(law.left_cdf(law.quantile(u)), u, rtol=1e-12)
        assert np.all(np.abs(law.quantile(u)) >= 2.0)
