import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gconc import _kernels


def brute_perm_sum(P):
    d = P.shape[0]
    total = 0.0
    for s in itertools.permutations(range(d)):
        if s == tuple(range(d)):
            continue
        total += math.prod(P[i, s[i]] for i in range(d)) ** (1.0 / d)
    return total


def test_perm_sum_small_examples(kernel_path):
    assert _kernels.perm_root_sum(np.ones((2, 2))) == pytest.approx(1.0)
    # all ones: d! - 1 non-identity permutations
    assert _kernels.perm_root_sum(np.ones((4, 4))) == pytest.approx(23.0)
    assert _kernels.perm_root_sum(np.eye(5)) == 0.0
    P = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
    assert _kernels.perm_root_sum(P) == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6), st.booleans())
def test_perm_sum_matches_brute_force(seed, d, sparse):
    rng = np.random.default_rng(seed)
    P = rng.random((d, d))
    if sparse:
        P[rng.random((d, d)) < 0.4] = 0.0
    ref = brute_perm_sum(P)
    assert _kernels.perm_root_sum_numpy(P) == pytest.approx(ref, rel=1e-12, abs=1e-14)
    if _kernels.HAVE_NUMBA:
        assert _kernels.perm_root_sum_numba(P) == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_perm_sum_paths_agree_d8(rng):
    if not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    P = rng.random((8, 8))
    assert _kernels.perm_root_sum_numba(P) == pytest.approx(_kernels.perm_root_sum_numpy(P), rel=1e-12)


def test_phase_ascent_rank_one_reaches_max(kernel_path, rng):
    # M = w w^H with real positive weights: optimum is sum(|w|)^2
    w = rng.random(5) * np.exp(2j * np.pi * rng.random(5))
    M = np.outer(w, w.conj())
    v0 = np.exp(2j * np.pi * rng.random(5))
    v, obj, sweeps = _kernels.phase_ascent(M, v0)
    assert obj == pytest.approx(np.sum(np.abs(w)) ** 2, rel=1e-10)
    np.testing.assert_allclose(np.abs(v), 1.0, atol=1e-14)
    assert sweeps >= 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 7))
def test_phase_ascent_paths_agree_and_never_decrease(seed, d):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    M = G @ G.conj().T
    v0 = np.exp(2j * np.pi * rng.random(d))
    start = float(np.real(np.vdot(v0, M @ v0)))
    v1, o1, _ = _kernels.phase_ascent_numpy(M, v0, 1e-12, 10_000)
    assert o1 >= start - 1e-9
    if _kernels.HAVE_NUMBA:
        v2, o2, _ = _kernels.phase_ascent_numba(M, v0.copy(), 1e-12, 10_000)
        # sweep counts may differ by one: the sums are ordered differently
        assert o2 == pytest.approx(o1, rel=1e-9)
