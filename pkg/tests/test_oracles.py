import math

import numpy as np
import pytest

from gconc.core import dm_from_pure, isotropic, max_entangled, random_density, random_pure
from gconc.oracles import (
    _haar_isometry,
    _smoothed,
    constrained_cg_min,
    convex_roof_upper,
    threshold_bisect,
)
from gconc.pure_measures import cg_pure


def test_threshold_bisect():
    assert threshold_bisect(lambda x: x - 0.3, 0, 1, 1e-12) == pytest.approx(0.3, abs=1e-12)
    assert threshold_bisect(lambda x: 0.3 - x, 0, 1, 1e-12) == pytest.approx(0.3, abs=1e-12)
    assert threshold_bisect(lambda x: x, 0, 1) == 0
    with pytest.raises(ValueError):
        threshold_bisect(lambda x: x + 1, 0, 1)


def test_isometry_is_isometric(rng):
    U = _haar_isometry(7, 4, rng)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-12)


def test_smoothed_gradient_finite_difference(rng):
    d, r, m = 3, 3, 4
    rho = random_density(d, rng, rank=r)
    mu, E = np.linalg.eigh(rho)
    V = E[:, -r:] * np.sqrt(mu[-r:])
    U = _haar_isometry(m, r, rng)
    eps = 1e-6
    _, g = _smoothed(U, V, d, eps)
    D = rng.standard_normal(U.shape) + 1j * rng.standard_normal(U.shape)
    h = 1e-6
    fp, _ = _smoothed(U + h * D, V, d, eps)
    fm, _ = _smoothed(U - h * D, V, d, eps)
    fd = (fp - fm) / (2 * h)
    # real directional derivative is 2 Re <grad, D> for a conjugate gradient
    assert fd == pytest.approx(2 * np.real(np.vdot(g, D)), rel=1e-5)


def test_upper_exact_on_pure(rng):
    c = random_pure(3, rng)
    res = convex_roof_upper(dm_from_pure(c), trials=2)
    assert res.value == pytest.approx(cg_pure(c), rel=1e-10)
    assert res.best_decomposition_size == 1


def test_upper_on_phi_and_isotropic():
    assert convex_roof_upper(dm_from_pure(max_entangled(3)), trials=1).value == pytest.approx(1.0)
    # exact value on isotropic states is max(0, 1 - d(1 - F)) = 0.2 at p = 0.7
    val = convex_roof_upper(isotropic(3, 0.7), trials=4, refine_steps=350).value
    assert 0.2 - 1e-9 <= val <= 0.3


@pytest.mark.slow
def test_upper_reaches_zero_region():
    val = convex_roof_upper(isotropic(3, 5 / 8), trials=4, refine_steps=1400).value
    assert val <= 0.05


def test_upper_history_monotone(rng):
    res = convex_roof_upper(random_density(3, rng, rank=3), trials=5, refine_steps=0)
    assert all(b <= a for a, b in zip(res.history, res.history[1:]))
    assert res.trials == 5


def test_upper_deterministic(rng):
    rho = random_density(3, rng, rank=2)
    a = convex_roof_upper(rho, trials=3, seed=7, refine_steps=70)
    b = convex_roof_upper(rho, trials=3, seed=7, refine_steps=70)
    assert a == b


def test_constrained_min_endpoints():
    for d in (3, 4, 5):
        assert constrained_cg_min(d, 1.0) == pytest.approx(1.0)
        assert constrained_cg_min(d, (d - 1) / d) == pytest.approx(0.0, abs=1e-6)
    with pytest.raises(ValueError):
        constrained_cg_min(3, 0.2)


def test_constrained_min_below_two_value_points():
    # the minimum can only be below any explicit feasible point
    d, F = 4, 0.85
    a = math.sqrt(F / d) + math.sqrt((d - 2) / 2) * math.sqrt((1 - F) / d)
    b = math.sqrt(F / d) - math.sqrt(2 / (d - 2)) * math.sqrt((1 - F) / d)
    lam = np.array([a, a, b, b])
    assert np.sum(lam**2) == pytest.approx(1)
    assert constrained_cg_min(d, F) <= d * np.prod(lam**2) ** (1 / d) + 1e-12
