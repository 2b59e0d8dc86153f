import numpy as np
import pytest


def riemann_lp_oracle(x, p, inv_weight_fn, npts=10**6, t_lo=0.0, t_hi=1.0):
    """Brute-force midpoint Riemann sum of |Z_N(t)|^p * inv_weight_fn(t).

    Evaluates the step function directly through floor((N+1) t), independent
    of the package's segment-integration path.  The grid is snapped to a
    multiple of N+1 so cell midpoints never straddle a step discontinuity.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    s = np.concatenate(([0.0], np.cumsum(x)))
    z = s - np.arange(n + 1) / n * s[-1]
    npts = (n + 1) * int(np.ceil(npts / (n + 1)))
    t = t_lo + (np.arange(npts) + 0.5) / npts * (t_hi - t_lo)
    k = np.minimum(np.floor((n + 1) * t).astype(int), n)
    vals = np.abs(z[k]) / np.sqrt(n)
    integrand = np.where(vals > 0, vals**p * inv_weight_fn(t), 0.0)
    return float(integrand.mean() * (t_hi - t_lo))


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
