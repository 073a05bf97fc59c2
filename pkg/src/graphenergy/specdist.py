"""Empirical spectral distributions and the semicircle law."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .eigensym import Spectrum

__all__ = [
    "EmpiricalDist",
    "SemicircleLaw",
    "esd",
    "semicircle_cdf",
    "semicircle_abs_moment",
    "ks_distance",
    "dist_moment",
    "abs_mean",
]


@dataclass(frozen=True, eq=False)
class EmpiricalDist:
    """Sorted sample putting mass ``1/n`` on each point."""

    samples: np.ndarray

    def __post_init__(self):
        samples = np.sort(np.array(self.samples, dtype=float), kind="stable")
        if samples.ndim != 1 or samples.size < 1:
            raise ValueError("an empirical distribution needs at least one sample")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return self.samples.size

    def cdf(self, x):
        """Right-continuous ECDF, ``#{samples <= x} / n``."""
        return np.searchsorted(self.samples, x, side="right") / self.n

    def cdf_left(self, x):
        """Left limit of the ECDF, ``#{samples < x} / n``."""
        return np.searchsorted(self.samples, x, side="left") / self.n

    def to_csv(self, path=None) -> str:
        """One sample per line, 17 significant digits."""
        text = "".join(f"{v:.17g}\n" for v in self.samples.tolist())
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, path) -> "EmpiricalDist":
        lines = Path(path).read_text().split()
        return cls(np.array([float(v) for v in lines]))


@dataclass(frozen=True)
class SemicircleLaw:
    """Semicircle law on ``[-2 sigma2, 2 sigma2]`` with variance ``sigma2**2``."""

    sigma2: float = 1.0

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")

    @property
    def radius(self) -> float:
        return 2.0 * self.sigma2

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        r2 = self.radius**2
        inside = np.clip(r2 - x * x, 0.0, None)
        return np.sqrt(inside) / (2.0 * math.pi * self.sigma2**2)

    def cdf(self, x):
        return semicircle_cdf(self, x)

    def abs_moment(self) -> float:
        return semicircle_abs_moment(self)


def esd(s: Spectrum, scale: float) -> EmpiricalDist:
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return EmpiricalDist(s.values * scale)


def semicircle_cdf(law: SemicircleLaw, x):
    """Closed-form CDF; accepts scalars or arrays."""
    r = law.radius
    xa = np.asarray(x, dtype=float)
    xc = np.clip(xa, -r, r)
    out = (
        0.5
        + xc * np.sqrt(np.clip(r * r - xc * xc, 0.0, None)) / (4.0 * math.pi * law.sigma2**2)
        + np.arcsin(xc / r) / math.pi
    )
    out = np.where(xa <= -r, 0.0, np.where(xa >= r, 1.0, out))
    return float(out) if out.ndim == 0 else out


def semicircle_abs_moment(law: SemicircleLaw) -> float:
    """Exact mean of ``|x|`` under the law: ``8 sigma2 / (3 pi)``."""
    return 8.0 * law.sigma2 / (3.0 * math.pi)


def ks_distance(e: EmpiricalDist, law: SemicircleLaw) -> float:
    """Sup distance between the ECDF and the law's CDF.

    The supremum is attained at a sample point, on one side or the other of
    its jump, so both ECDF limits are compared there.
    """
    x = e.samples
    f = semicircle_cdf(law, x)
    upper = np.abs(e.cdf(x) - f)
    lower = np.abs(e.cdf_left(x) - f)
    return float(max(upper.max(), lower.max()))


def dist_moment(e: EmpiricalDist, k: int) -> float:
    if int(k) != k or k < 1:
        raise ValueError(f"moment order must be a positive integer, got {k!r}")
    return math.fsum((e.samples ** int(k)).tolist()) / e.n


def abs_mean(e: EmpiricalDist) -> float:
    return math.fsum(np.abs(e.samples).tolist()) / e.n
