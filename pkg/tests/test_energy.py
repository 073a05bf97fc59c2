import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphenergy import rgraph
from graphenergy.eigensym import Spectrum, eigenvalues, scaled_spectrum
from graphenergy.energy import (
    EnergyReport,
    energy_sandwich,
    graph_energy,
    kyfan_check,
    laplacian_energy,
    matrix_energy,
    within,
)

K2 = rgraph.from_edges(2, [(0, 1)])


class TestMatrixEnergy:
    def test_complete_graph_shift(self):
        # E(J - I) = 2 (n - 1)
        rep = matrix_energy(eigenvalues(np.ones((5, 5)) - np.eye(5)))
        assert rep.raw == pytest.approx(8.0, abs=1e-12)

    def test_zero(self):
        assert matrix_energy(Spectrum(np.zeros(4))).raw == 0.0

    def test_pair(self):
        assert matrix_energy(Spectrum([-1.0, 1.0])).raw == 2.0

    def test_normalized(self):
        rep = matrix_energy(Spectrum([-3.0, 1.0, 2.0, 0.0]))
        assert rep.normalized * 4**1.5 == pytest.approx(rep.raw, rel=1e-12)


class TestGraphEnergies:
    def test_k2(self):
        assert graph_energy(K2).raw == pytest.approx(2.0, abs=1e-14)
        assert laplacian_energy(K2).raw == pytest.approx(2.0, abs=1e-14)

    def test_complete_six(self):
        k6 = rgraph.sample_graph(6, 1.0, 0)
        assert graph_energy(k6).raw == pytest.approx(10.0, abs=1e-12)
        assert laplacian_energy(k6).raw == pytest.approx(10.0, abs=1e-12)

    def test_empty(self):
        g = rgraph.from_edges(7, [])
        assert graph_energy(g).raw == 0.0
        assert laplacian_energy(g).raw == 0.0

    def test_report_carries_sigma(self):
        g = rgraph.sample_graph(10, 0.5, 1)
        assert graph_energy(g).sigma == pytest.approx(0.5)


class TestKyFan:
    def test_zeros(self):
        z = np.zeros((3, 3))
        assert kyfan_check(z, z) == (0.0, 0.0, True)

    def test_cancelling_pair(self):
        x = np.array([[1.0, 2.0], [2.0, -3.0]])
        lhs, rhs, holds = kyfan_check(x, -x)
        assert lhs == pytest.approx(2 * matrix_energy(eigenvalues(x)).raw)
        assert rhs == 0.0 and holds

    def test_aligned_pair(self):
        a = rgraph.adjacency(K2)
        lhs, rhs, holds = kyfan_check(a, 0.5 * a)
        assert lhs == pytest.approx(3.0, abs=1e-14)
        assert rhs == pytest.approx(3.0, abs=1e-14)
        assert holds

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            kyfan_check(np.eye(2), np.eye(3))


class TestSandwich:
    def test_no_shift(self):
        assert energy_sandwich(EnergyReport(10.0, 4), 0.0) == (10.0, 10.0)

    def test_shift(self):
        assert energy_sandwich(EnergyReport(10.0, 4), 4.0) == (6.0, 14.0)

    def test_negative_shift_rejected(self):
        with pytest.raises(ValueError):
            energy_sandwich(10.0, -1.0)

    def test_within_tolerance(self):
        assert within(14.0 + 1e-9, (6.0, 14.0))
        assert not within(14.1, (6.0, 14.0))

    def test_large_sample_contains_adjacency_energy(self):
        n, p = 1000, 0.5
        g = rgraph.sample_graph(n, p, 42)
        centered = matrix_energy(eigenvalues(rgraph.centered_adjacency(g, p)))
        lo, hi = energy_sandwich(centered, 2 * p * (n - 1))
        assert within(graph_energy(g).raw, (lo, hi))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=2, max_value=40),
    st.floats(min_value=0.05, max_value=0.95),
    st.integers(min_value=0, max_value=2**64 - 1),
)
def test_sandwich_containments_for_samples(n, p, seed):
    g = rgraph.sample_graph(n, p, seed)
    shift = 2 * p * (n - 1)
    e_centered = matrix_energy(eigenvalues(rgraph.centered_adjacency(g, p)))
    assert within(graph_energy(g).raw, energy_sandwich(e_centered, shift))
    e_l1 = matrix_energy(eigenvalues(rgraph.l1_matrix(g, p)))
    assert within(laplacian_energy(g).raw, energy_sandwich(e_l1, shift))


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=1, max_value=20),
    st.integers(min_value=0, max_value=2**32 - 1),
    st.floats(min_value=1e-3, max_value=1e3),
)
def test_scale_equivariance(n, seed, c):
    m = np.random.default_rng(seed).standard_normal((n, n))
    s = eigenvalues(m + m.T)
    base = matrix_energy(s).raw
    scaled = matrix_energy(scaled_spectrum(s, c)).raw
    assert scaled == pytest.approx(c * base, rel=1e-12, abs=1e-300)
