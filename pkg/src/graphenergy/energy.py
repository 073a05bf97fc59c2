"""Matrix, graph and Laplacian energies, and the Ky Fan sandwich."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rgraph
from .eigensym import Spectrum, eigenvalues

__all__ = [
    "EnergyReport",
    "KYFAN_TOL",
    "matrix_energy",
    "graph_energy",
    "laplacian_energy",
    "kyfan_check",
    "energy_sandwich",
    "within",
]

KYFAN_TOL = 1e-9


@dataclass(frozen=True)
class EnergyReport:
    """Sum of absolute eigenvalues, with its ``n**1.5`` normalization.

    ``sigma`` is ``sqrt(p (1 - p))`` when the source is a G(n, p) sample.
    """

    raw: float
    n: int
    sigma: float | None = None

    @property
    def normalized(self) -> float:
        return self.raw / self.n**1.5

    def as_dict(self) -> dict:
        return {"raw": self.raw, "normalized": self.normalized, "sigma": self.sigma, "n": self.n}


def matrix_energy(s: Spectrum, sigma: float | None = None) -> EnergyReport:
    # math.fsum keeps the sum independent of summation order
    return EnergyReport(math.fsum(np.abs(s.values).tolist()), s.order, sigma)


def graph_energy(g: rgraph.GraphSample, method: str = "householder") -> EnergyReport:
    return matrix_energy(eigenvalues(rgraph.adjacency(g), method), g.sigma)


def laplacian_energy(g: rgraph.GraphSample, method: str = "householder") -> EnergyReport:
    return matrix_energy(eigenvalues(rgraph.gutman_matrix(g), method), g.sigma)


def kyfan_check(x, y, method: str = "householder") -> tuple[float, float, bool]:
    """Compare ``E(x) + E(y)`` with ``E(x + y)``.

    Returns ``(lhs, rhs, holds)`` where ``holds`` tolerates ``KYFAN_TOL``
    of absolute slack.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"order mismatch: {x.shape} vs {y.shape}")
    lhs = matrix_energy(eigenvalues(x, method)).raw + matrix_energy(eigenvalues(y, method)).raw
    rhs = matrix_energy(eigenvalues(x + y, method)).raw
    return lhs, rhs, lhs >= rhs - KYFAN_TOL


def energy_sandwich(center: EnergyReport | float, shift_energy: float) -> tuple[float, float]:
    """Interval that Ky Fan forces around ``center`` after adding a matrix
    of energy ``shift_energy``."""
    if shift_energy < 0:
        raise ValueError("shift energy must be nonnegative")
    raw = center.raw if isinstance(center, EnergyReport) else float(center)
    return raw - shift_energy, raw + shift_energy


def within(value: float, interval: tuple[float, float], tol: float = KYFAN_TOL) -> bool:
    """Interval membership with ``tol`` relative slack (absolute below 1)."""
    lo, hi = interval
    slack = tol * max(1.0, abs(value))
    return lo - slack <= value <= hi + slack
