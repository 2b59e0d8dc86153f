import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from cusum_lp import (
    Power,
    Uniform,
    analytic_darling_erdos,
    compute_a,
    compute_b,
    critical_value,
    p_value,
    sample_brownian_bridge,
    sample_fb,
    sample_limit_general,
)
from cusum_lp.errors import DivergentLimitError, InvalidParameterError, PrecisionError
from cusum_lp.limits import (
    _folded_moment,
    fb_truncation_horizon,
    read_draws,
    read_table,
    write_draws,
    write_table,
)


class TestBrownianBridge:
    def test_endpoints_exact_zero(self, rng):
        b = sample_brownian_bridge(64, rng)
        assert b[0] == 0.0
        assert b[-1] == 0.0
        assert b.shape == (65,)

    def test_moments(self):
        rng = np.random.default_rng(31)
        reps = 20_000
        m = 20
        paths = np.array([sample_brownian_bridge(m, rng) for _ in range(reps)])
        for t in (0.25, 0.5, 0.75):
            j = int(t * m)
            assert abs(paths[:, j].mean()) < 0.02
            assert paths[:, j].var() == pytest.approx(t * (1 - t), abs=0.02)

    def test_covariance(self):
        rng = np.random.default_rng(32)
        reps = 100_000
        m = 4
        paths = np.array([sample_brownian_bridge(m, rng) for _ in range(reps)])
        cov = np.mean(paths[:, 1] * paths[:, 3])  # Cov[B(1/4), B(3/4)] = 1/4 - 3/16
        assert cov == pytest.approx(0.0625, abs=0.01)

    def test_seed_reproducible(self):
        b1 = sample_brownian_bridge(128, 99)
        b2 = sample_brownian_bridge(128, 99)
        assert np.array_equal(b1, b2)


class TestConstants:
    def test_b_trivial_values(self):
        assert abs(compute_b(2.0) - 1.0) < 1e-12
        assert abs(compute_b(4.0) - 3.0) < 1e-12

    def test_b_closed_form_p1(self):
        assert compute_b(1.0) == pytest.approx(np.sqrt(2.0 / np.pi), rel=1e-12)

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, 4.0])
    def test_b_against_quadrature(self, p):
        want, _ = quad(lambda x: abs(x) ** p * stats.norm.pdf(x), -12, 12, epsabs=1e-12)
        assert compute_b(p) == pytest.approx(want, abs=1e-9)

    @pytest.mark.parametrize("p", [1.0, 2.0])
    def test_a_positive(self, p):
        pair = compute_a(p)
        assert pair.a_p > 0
        assert pair.quadrature_error_estimate < 1e-4 * pair.a_p

    def test_c_vanishes_at_large_u(self):
        for p in (1.0, 2.0, 4.0):
            bp2 = compute_b(p) ** 2
            c20 = _folded_moment(np.exp(-20.0), p, 192, 192) - bp2
            assert abs(c20) <= 1e-6

    def test_c_symmetric_in_u(self):
        # the integrand depends on u only through exp(-|u|)
        p = 2.0
        bp2 = compute_b(p) ** 2
        for u in (0.5, 2.0):
            c_pos = _folded_moment(np.exp(-abs(u)), p, 128, 128) - bp2
            c_neg = _folded_moment(np.exp(-abs(-u)), p, 128, 128) - bp2
            assert c_pos == pytest.approx(c_neg, rel=1e-12)

    def test_printed_density_mass_is_not_one(self):
        # mass of the (unnormalized) density is 1 + 2 arcsin(rho)/pi
        for u in (0.2, 1.0, 3.0):
            rho = np.exp(-u)
            mass = _folded_moment(rho, 0.0, 192, 192)
            assert mass == pytest.approx(1.0 + 2.0 * np.arcsin(rho) / np.pi, abs=1e-8)
        pair = compute_a(2.0)
        assert pair.g_u_mass_deviation > 0.5  # surfaced, not silently normalized


class TestSampleLimitGeneral:
    def test_mean_p2_uniform(self):
        s = sample_limit_general(2.0, Uniform(), grid_size=2048, replications=20_000, seed=1)
        assert s.draws.mean() == pytest.approx(1.0 / 6.0, abs=0.005)

    def test_mean_p1_uniform(self):
        s = sample_limit_general(1.0, Uniform(), grid_size=2048, replications=20_000, seed=2)
        assert s.draws.mean() == pytest.approx(np.sqrt(2.0 / np.pi) * np.pi / 8.0, abs=0.005)

    def test_mean_p2_power_half(self):
        # E int B^2 (t(1-t))^{-1/2} dt = int (t(1-t))^{1/2} dt = pi/8
        s = sample_limit_general(2.0, Power(0.5), grid_size=2048, replications=20_000, seed=3)
        assert s.draws.mean() == pytest.approx(np.pi / 8.0, abs=0.005)

    def test_cvm_quantile_against_series_oracle(self):
        # independent oracle: Karhunen-Loeve series sum eta_k^2 / (k pi)^2
        rng = np.random.default_rng(77)
        k = np.arange(1, 201)
        lam = 1.0 / (k * np.pi) ** 2
        oracle = rng.standard_normal((200_000, 200)) ** 2 @ lam + (1.0 / 6.0 - lam.sum())
        s = sample_limit_general(2.0, Uniform(), grid_size=4096, replications=50_000, seed=4)
        got = critical_value(s, 0.05)
        assert got == pytest.approx(np.quantile(oracle, 0.95), abs=0.01)
        assert got == pytest.approx(0.4614, abs=0.01)

    def test_grid_refinement_self_consistency(self):
        a = sample_limit_general(2.0, Power(0.5), grid_size=1024, replications=20_000, seed=5)
        b = sample_limit_general(2.0, Power(0.5), grid_size=512, replications=20_000, seed=6)
        ks = stats.ks_2samp(a.draws, b.draws).statistic
        assert ks < 0.02

    def test_reproducible(self):
        a = sample_limit_general(2.0, Uniform(), grid_size=256, replications=500, seed=11)
        b = sample_limit_general(2.0, Uniform(), grid_size=256, replications=500, seed=11)
        assert np.array_equal(a.draws, b.draws)

    def test_draws_nonnegative_and_sorted(self):
        s = sample_limit_general(1.0, Power(1.0), grid_size=256, replications=500, seed=12)
        assert np.all(s.draws >= 0)
        assert np.all(np.diff(s.draws) >= 0)
        assert s.bias_bound > 0


class TestSampleFb:
    def test_truncation_horizon_formula(self):
        # b(2)/(kappa - p/2 - 1) * T^(p/2+1-kappa) = tail_tol at T
        t = fb_truncation_horizon(2.0, 3.0, 1e-3)
        assert t == pytest.approx(1000.0, rel=1e-12)

    def test_divergent_kappa(self):
        with pytest.raises(DivergentLimitError):
            sample_fb(2.0, 2.0, replications=100)

    def test_single_integral_mean(self):
        # E I = b(p)/(kappa-p/2-1) * (1 - T^(p/2+1-kappa)); the two-component
        # draw with gamma1 = gamma2 = 1 has twice that mean
        s = sample_fb(2.0, 3.0, replications=10_000, tail_tol=1e-2, grid_step=0.02, seed=21)
        horizon = s.truncation_horizon
        want = 2.0 * (1.0 - 1.0 / horizon)
        assert s.draws.mean() == pytest.approx(want, abs=0.05)

    def test_tail_tolerance_monotone(self):
        loose = sample_fb(2.0, 3.0, replications=2_000, tail_tol=2e-2, grid_step=0.05, seed=22)
        tight = sample_fb(2.0, 3.0, replications=2_000, tail_tol=1e-2, grid_step=0.05, seed=22)
        assert tight.truncation_horizon > loose.truncation_horizon
        # same seed, longer horizon: means differ by less than the tail budget
        assert abs(tight.draws.mean() - loose.draws.mean()) < 2 * 2e-2 + 0.01

    def test_exchangeability_of_components(self):
        a = sample_fb(2.0, 3.0, gamma1=0.5, gamma2=1.0, replications=20_000,
                      tail_tol=1e-2, grid_step=0.05, seed=23)
        b = sample_fb(2.0, 3.0, gamma1=1.0, gamma2=0.5, replications=20_000,
                      tail_tol=1e-2, grid_step=0.05, seed=24)
        ks = stats.ks_2samp(a.draws, b.draws).statistic
        assert ks < 0.02

    def test_nonnegative(self):
        s = sample_fb(1.0, 2.5, replications=500, tail_tol=5e-2, grid_step=0.05, seed=25)
        assert np.all(s.draws >= 0)

    def test_bad_gamma(self):
        with pytest.raises(InvalidParameterError):
            sample_fb(2.0, 3.0, gamma1=-1.0, replications=100)


@pytest.fixture(scope="module")
def sample():
    return sample_limit_general(2.0, Uniform(), grid_size=512, replications=4_000, seed=41)


class TestCriticalValuesAndPValues:
    def test_monotone_in_alpha(self, sample):
        assert critical_value(sample, 0.01) >= critical_value(sample, 0.05)
        assert critical_value(sample, 0.05) >= critical_value(sample, 0.10)

    def test_darling_erdos_is_analytic_normal(self):
        de = analytic_darling_erdos()
        assert critical_value(de, 0.5) == pytest.approx(0.0, abs=1e-9)
        assert critical_value(de, 0.05) == pytest.approx(stats.norm.ppf(0.95), abs=1e-9)
        assert p_value(de, 1.6448536269514722) == pytest.approx(0.05, abs=1e-9)

    def test_too_few_replications(self):
        tiny = sample_limit_general(2.0, Uniform(), grid_size=64, replications=50, seed=42)
        with pytest.raises(PrecisionError):
            critical_value(tiny, 0.05)

    def test_p_value_extremes(self, sample):
        n = sample.replications
        assert p_value(sample, sample.draws[0] - 1.0) == 1.0
        assert p_value(sample, sample.draws[-1] + 1.0) == pytest.approx(1.0 / (n + 1))

    def test_p_value_at_median(self, sample):
        med = float(np.median(sample.draws))
        assert p_value(sample, med) == pytest.approx(0.5, abs=2.0 / np.sqrt(sample.replications))


class TestPersistence:
    def test_table_roundtrip(self, tmp_path):
        s = sample_limit_general(2.0, Power(0.5), grid_size=128, replications=300, seed=51)
        path = tmp_path / "table.csv"
        write_table(path, s)
        meta, rows = read_table(path)
        assert meta["family"] == "general-weighted"
        assert meta["params"]["weight"] == {"kind": "power", "q": 0.5}
        alphas = [a for a, _ in rows]
        cvs = [cv for _, cv in rows]
        assert alphas == [0.10, 0.05, 0.025, 0.01]
        assert cvs == sorted(cvs)  # stricter alpha -> larger critical value
        assert cvs == [critical_value(s, a) for a in alphas]

    def test_draws_roundtrip(self, tmp_path):
        s = sample_fb(2.0, 3.0, replications=200, tail_tol=5e-2, grid_step=0.05, seed=52)
        path = tmp_path / "draws.csv"
        write_draws(path, s)
        back = read_draws(path)
        assert np.array_equal(back.draws, s.draws)
        assert back.family == s.family
        assert back.truncation_horizon == s.truncation_horizon
