import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gconc.core import InvalidStateError, haar_unitary, max_entangled, random_pure
from gconc.oracles import constrained_cg_min
from gconc.pure_measures import c2_pure, cg_of_F, cg_pure, cg_pure_det, cg_pure_lower, cg_unnormalized

seeds = st.integers(0, 2**32 - 1)


def schmidt_state(lams, rng=None):
    c = np.diag(np.asarray(lams, dtype=complex))
    if rng is None:
        return c
    d = len(lams)
    return haar_unitary(d, rng) @ c @ haar_unitary(d, rng).T


def test_cg_pure_examples(rng):
    for d in range(2, 7):
        assert cg_pure(max_entangled(d)) == pytest.approx(1.0, abs=1e-14)
    assert cg_pure(schmidt_state([1, 0, 0])) == 0.0
    assert cg_pure(schmidt_state([math.sqrt(0.8), math.sqrt(0.2)])) == pytest.approx(0.8, abs=1e-14)
    # 3 * (0.5 * 0.3 * 0.2) ** (1/3)
    lams = np.sqrt([0.5, 0.3, 0.2])
    assert cg_pure(schmidt_state(lams, rng)) == pytest.approx(3 * 0.03 ** (1 / 3), rel=1e-12)


def test_cg_pure_large_dimension_stays_finite():
    d = 64
    lam = np.linspace(1, 2, d)
    lam /= np.linalg.norm(lam)
    expected = d * math.exp(2 * np.mean(np.log(lam)))
    assert cg_pure(schmidt_state(lam)) == pytest.approx(expected, rel=1e-12)


def test_cg_pure_rejects_unnormalized():
    with pytest.raises(InvalidStateError):
        cg_pure(np.eye(2))


def test_c2_pure_examples():
    assert c2_pure(max_entangled(3)) == pytest.approx(1.0)
    assert c2_pure(schmidt_state([1, 0])) == 0.0
    # two qubits: usual concurrence 2 lam0 lam1
    lam = [math.sqrt(0.8), math.sqrt(0.2)]
    assert c2_pure(schmidt_state(lam)) == pytest.approx(2 * lam[0] * lam[1])


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(2, 6))
def test_cg_pure_invariants(seed, d):
    rng = np.random.default_rng(seed)
    c = random_pure(d, rng)
    val = cg_pure(c)
    assert 0.0 <= val <= 1.0 + 1e-12
    assert val == pytest.approx(cg_pure_det(c), rel=1e-9, abs=1e-12)
    U, V = haar_unitary(d, rng), haar_unitary(d, rng)
    assert cg_pure(U @ c @ V.T) == pytest.approx(val, rel=1e-9, abs=1e-12)
    # G-concurrence never exceeds the normalized 2-concurrence
    assert val <= c2_pure(c) + 1e-9
    # rank-deficient -> 0
    assert cg_pure(random_pure(d, rng, rank=d - 1)) < 1e-10


def test_cg_unnormalized_homogeneity(rng):
    c = random_pure(3, rng)
    stack = np.stack([c * math.sqrt(0.3), c * math.sqrt(0.7)])
    np.testing.assert_allclose(cg_unnormalized(stack), [0.3 * cg_pure(c), 0.7 * cg_pure(c)], rtol=1e-12)


def explicit_lower(c):
    """Direct transcription with explicit double sums, independent of the kernel."""
    import itertools

    d = c.shape[0]
    pos = sum((c[i, i] * np.conj(c[j, j])).real for i in range(d) for j in range(d) if i != j)
    diag = (d - 2) * sum(abs(c[i, i]) ** 2 for i in range(d))
    perm = 0.0
    for s in itertools.permutations(range(d)):
        if s != tuple(range(d)):
            perm += math.prod(abs(c[i, s[i]]) ** 2 for i in range(d)) ** (1 / d)
    return pos - diag - d * perm


def test_cg_pure_lower_examples(rng):
    for d in range(2, 6):
        assert cg_pure_lower(max_entangled(d)) == pytest.approx(1.0, abs=1e-14)
    for _ in range(10):
        c = random_pure(4, rng)
        assert cg_pure_lower(c) == pytest.approx(explicit_lower(c), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 5))
def test_cg_pure_lower_is_a_lower_bound(seed, d):
    c = random_pure(d, np.random.default_rng(seed))
    assert cg_pure_lower(c) <= cg_pure(c) + 1e-9


def test_cg_of_F_endpoints():
    for d in range(2, 8):
        assert cg_of_F(d, 1.0).cg == pytest.approx(1.0, abs=1e-14)
        assert cg_of_F(d, (d - 1) / d).cg == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        cg_of_F(3, 0.5)
    with pytest.raises(ValueError):
        cg_of_F(3, 1.1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.floats(0.0, 1.0))
def test_cg_of_F_minimizer_is_feasible(d, t):
    F = (d - 1) / d + t / d
    pt = cg_of_F(d, F)
    lams = np.array([pt.alpha] + [pt.beta] * (d - 1))
    assert np.sum(lams**2) == pytest.approx(1.0, abs=1e-12)
    assert np.sum(lams) ** 2 / d == pytest.approx(pt.F, abs=1e-12)
    assert pt.cg <= 1.0


@pytest.mark.parametrize("d", [3, 4])
def test_cg_of_F_matches_constrained_minimizer(d):
    for F in np.linspace((d - 1) / d, 1.0, 9):
        assert cg_of_F(d, F).cg == pytest.approx(constrained_cg_min(d, F, trials=4), abs=1e-4)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 5))
def test_cg_of_F_lies_below_random_pure_states(seed, d):
    c = random_pure(d, np.random.default_rng(seed))
    F = abs(np.trace(c)) ** 2 / d
    if F >= (d - 1) / d:
        assert cg_of_F(d, F).cg <= cg_pure(c) + 1e-9
