import numpy as np
import pytest

from cusum_lp import (
    AR1,
    MA,
    ChangeSpec,
    Demeaning,
    IIDNormal,
    Kernel,
    LrvConfig,
    auto_bandwidth,
    estimate_lrv,
    generate_series,
)
from cusum_lp.errors import InsufficientDataError, InvalidParameterError
from cusum_lp.variance import kernel_weights


def test_kernel_weights_at_zero_and_one():
    for kernel in Kernel:
        w = kernel_weights(kernel, np.array([0.0, 1.0, 1.5]))
        assert w[0] == pytest.approx(1.0)
        assert w[1] == pytest.approx(0.0)
        assert w[2] == 0.0


def test_flat_top_is_flat_near_origin():
    w = kernel_weights(Kernel.FLAT_TOP, np.array([0.1, 0.4, 0.5]))
    assert np.allclose(w, 1.0)


def test_iid_normal_lrv():
    x = generate_series(IIDNormal(1.0), ChangeSpec(), 100_000, seed_or_rng=101)
    r = estimate_lrv(x)
    assert r.value == pytest.approx(1.0, abs=0.05)


def test_ar1_lrv():
    x = generate_series(AR1(0.5, 1.0), ChangeSpec(), 100_000, seed_or_rng=102)
    r = estimate_lrv(x)
    assert r.value == pytest.approx(4.0, abs=0.4)


def test_ma_lrv():
    x = generate_series(MA((0.5,), 1.0), ChangeSpec(), 100_000, seed_or_rng=103)
    r = estimate_lrv(x)
    assert r.value == pytest.approx(2.25, abs=0.225)


def test_constant_series_floored_and_flagged():
    r = estimate_lrv([5.0] * 20)
    assert r.degenerate
    assert r.value > 0.0


def test_bandwidth_one_bartlett_gives_gamma0():
    rng = np.random.default_rng(4)
    x = rng.standard_normal(200)
    r = estimate_lrv(x, LrvConfig(kernel=Kernel.BARTLETT, bandwidth=1.0))
    e = x - x.mean()
    assert r.value == pytest.approx(np.dot(e, e) / 200, rel=1e-12)


def test_location_invariance():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(500)
    a = estimate_lrv(x).value
    b = estimate_lrv(x + 17.0).value
    assert b == pytest.approx(a, rel=1e-10)


def test_scale_quadratic():
    rng = np.random.default_rng(6)
    x = rng.standard_normal(500)
    a = estimate_lrv(x).value
    b = estimate_lrv(3.0 * x).value
    assert b == pytest.approx(9.0 * a, rel=1e-10)


def test_split_half_removes_mean_shift():
    x = generate_series(
        IIDNormal(1.0), ChangeSpec(k_star=5000, delta=3.0), 10_000, seed_or_rng=107
    )
    full = estimate_lrv(x, LrvConfig(demeaning=Demeaning.FULL_SAMPLE)).value
    split = estimate_lrv(x, LrvConfig(demeaning=Demeaning.SPLIT_HALF)).value
    assert split == pytest.approx(1.0, abs=0.2)
    assert full > split  # shift contaminates the full-sample autocovariances


def test_auto_bandwidth_iid_small():
    x = generate_series(IIDNormal(1.0), ChangeSpec(), 10_000, seed_or_rng=108)
    assert auto_bandwidth(x) <= 3


def test_auto_bandwidth_clamped_at_sqrt_n():
    x = generate_series(AR1(0.95, 1.0), ChangeSpec(), 100, seed_or_rng=109)
    assert auto_bandwidth(x) <= 10.0


def test_auto_bandwidth_grows_with_dependence():
    iid = generate_series(IIDNormal(1.0), ChangeSpec(), 10_000, seed_or_rng=110)
    ar = generate_series(AR1(0.8, 1.0), ChangeSpec(), 10_000, seed_or_rng=110)
    assert auto_bandwidth(ar) > auto_bandwidth(iid)


def test_too_few_observations():
    with pytest.raises(InsufficientDataError):
        estimate_lrv([1.0, 2.0, 3.0])


def test_bad_explicit_bandwidth():
    with pytest.raises(InvalidParameterError):
        estimate_lrv(np.arange(20.0), LrvConfig(bandwidth=50.0))
