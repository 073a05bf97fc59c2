import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphenergy import rgraph
from graphenergy.eigensym import (
    ConvergenceError,
    Spectrum,
    eigenvalues,
    scaled_spectrum,
    tridiagonal_eigenvalues,
    tridiagonalize,
)
from oracles import eig2, eig3


def random_symmetric(rng, n, scale=1.0):
    m = rng.standard_normal((n, n)) * scale
    return (m + m.T) / 2.0


def test_identity():
    np.testing.assert_array_equal(eigenvalues(np.eye(4)).values, [1, 1, 1, 1])


def test_complete_graph_adjacency():
    vals = eigenvalues(np.ones((5, 5)) - np.eye(5)).values
    np.testing.assert_allclose(vals, [-1, -1, -1, -1, 4], atol=1e-12)


def test_two_by_two_swap():
    assert eigenvalues([[0, 1], [1, 0]]).values.tolist() == [-1.0, 1.0]
    assert eigenvalues([[1, -1], [-1, 1]]).values.tolist() == [0.0, 2.0]


def test_one_by_one():
    assert eigenvalues([[3.5]]).values.tolist() == [3.5]


def test_zero_matrix():
    assert eigenvalues(np.zeros((6, 6))).values.tolist() == [0.0] * 6


def test_diagonal_input_sorted():
    vals = eigenvalues(np.diag([3.0, -1.0, 2.0, -1.0])).values
    assert vals.tolist() == [-1.0, -1.0, 2.0, 3.0]


def test_closed_form_small_matrices():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(500):
        a, b, c = rng.standard_normal(3)
        got = eigenvalues([[a, b], [b, c]]).values
        worst = max(worst, np.max(np.abs(got - eig2(a, b, c))))
    for _ in range(500):
        m = random_symmetric(rng, 3)
        got = eigenvalues(m).values
        worst = max(worst, np.max(np.abs(got - eig3(m.tolist()))))
    assert worst <= 1e-10


@pytest.mark.parametrize("n", [4, 17, 60, 150])
def test_matches_lapack(n):
    m = random_symmetric(np.random.default_rng(n), n)
    ours = eigenvalues(m).values
    ref = np.linalg.eigvalsh(m)
    assert np.max(np.abs(ours - ref)) <= 1e-11 * max(1.0, np.max(np.abs(ref)))


@pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
def test_graph_matrices_match_lapack(p):
    g = rgraph.sample_graph(120, p, 31)
    for build in (rgraph.adjacency, rgraph.gutman_matrix):
        m = build(g)
        np.testing.assert_allclose(eigenvalues(m).values, np.linalg.eigvalsh(m), atol=1e-10)


def test_lapack_method_agrees():
    m = random_symmetric(np.random.default_rng(5), 40)
    np.testing.assert_allclose(
        eigenvalues(m, method="lapack").values, eigenvalues(m).values, atol=1e-11
    )


def test_tridiagonal_form_preserves_spectrum():
    m = random_symmetric(np.random.default_rng(9), 12)
    d, e = tridiagonalize(m)
    t = np.diag(d) + np.diag(e[1:], 1) + np.diag(e[1:], -1)
    np.testing.assert_allclose(np.linalg.eigvalsh(t), np.linalg.eigvalsh(m), atol=1e-12)


@pytest.mark.parametrize(
    "bad",
    [np.zeros((2, 3)), np.zeros((0, 0)), [[np.nan, 0.0], [0.0, 1.0]], [[np.inf]]],
)
def test_rejects_malformed_input(bad):
    with pytest.raises(ValueError):
        eigenvalues(bad)


def test_unknown_method():
    with pytest.raises(ValueError):
        eigenvalues(np.eye(2), method="jacobi")


def test_nan_tridiagonal_does_not_converge():
    with pytest.raises(ConvergenceError):
        tridiagonal_eigenvalues([np.nan, 1.0, 2.0], [0.0, 1.0, 1.0])


def test_deterministic():
    m = random_symmetric(np.random.default_rng(77), 80)
    assert eigenvalues(m).values.tobytes() == eigenvalues(m.copy()).values.tobytes()


def test_spectrum_is_read_only_and_sorted():
    s = Spectrum([3.0, 1.0, 2.0])
    assert s.values.tolist() == [1.0, 2.0, 3.0]
    assert len(s) == s.order == 3
    with pytest.raises(ValueError):
        s.values[0] = 5.0


class TestScaledSpectrum:
    def test_doubling(self):
        assert scaled_spectrum(Spectrum([-1.0, 1.0]), 2.0).values.tolist() == [-2.0, 2.0]

    def test_inverse_sqrt_n(self):
        s = scaled_spectrum(Spectrum([-1.0, -1.0, -1.0, -1.0, 4.0]), 1 / math.sqrt(5))
        np.testing.assert_allclose(s.values, [-0.4472136] * 4 + [1.7888544], atol=1e-7)

    def test_unit_scale_is_identity(self):
        s = Spectrum([-2.5, 0.0, 7.0])
        assert scaled_spectrum(s, 1.0).values.tolist() == s.values.tolist()

    @pytest.mark.parametrize("c", [0.0, -1.0])
    def test_rejects_nonpositive(self, c):
        with pytest.raises(ValueError):
            scaled_spectrum(Spectrum([1.0]), c)


sizes = st.integers(min_value=1, max_value=30)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=100, deadline=None)
@given(sizes, seeds)
def test_permutation_similarity(n, seed):
    rng = np.random.default_rng(seed)
    m = random_symmetric(rng, n)
    perm = rng.permutation(n)
    pm = m[np.ix_(perm, perm)]
    np.testing.assert_allclose(eigenvalues(pm).values, eigenvalues(m).values, rtol=0, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(sizes, seeds, st.floats(min_value=-50, max_value=50))
def test_shift_identity(n, seed, c):
    m = random_symmetric(np.random.default_rng(seed), n)
    shifted = eigenvalues(m + c * np.eye(n)).values
    np.testing.assert_allclose(shifted, eigenvalues(m).values + c, rtol=0, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(sizes, seeds, st.floats(min_value=1e-3, max_value=1e3))
def test_trace_and_frobenius_conservation(n, seed, scale):
    m = random_symmetric(np.random.default_rng(seed), n, scale)
    vals = eigenvalues(m).values
    tr = np.trace(m)
    assert abs(vals.sum() - tr) <= 1e-8 * max(1.0, abs(tr))
    fro = np.sum(m * m)
    assert abs(np.sum(vals**2) - fro) <= 1e-8 * fro
