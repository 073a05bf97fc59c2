"""Eigenvalues of dense real symmetric matrices.

Householder reduction to tridiagonal form followed by implicit-shift QL
iteration. Only eigenvalues are computed. The kernels are compiled with
numba; ``method="lapack"`` routes through :func:`numpy.linalg.eigvalsh`
instead and exists for cross-checking and for quick large runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

__all__ = [
    "ConvergenceError",
    "Spectrum",
    "eigenvalues",
    "scaled_spectrum",
    "tridiagonalize",
    "tridiagonal_eigenvalues",
]

MAX_SWEEPS = 50


class ConvergenceError(ArithmeticError):
    """QL iteration failed to isolate an eigenvalue within ``MAX_SWEEPS``."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues of a symmetric matrix, sorted ascending."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("spectrum values must be one-dimensional")
        if np.any(np.diff(values) < 0):
            values = np.sort(values, kind="stable")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def order(self) -> int:
        return self.values.shape[0]

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.values.tolist())

    def scaled(self, c: float) -> "Spectrum":
        return scaled_spectrum(self, c)


@numba.njit(cache=True, fastmath={"reassoc", "contract"})
def _householder_tridiagonal(a, d, e):
    # a is overwritten; full symmetric storage is kept so every inner loop
    # walks a contiguous row.
    n = a.shape[0]
    for i in range(n - 1, 0, -1):
        l = i - 1
        h = 0.0
        if l > 0:
            scale = 0.0
            for k in range(l + 1):
                scale += abs(a[i, k])
            if scale == 0.0:
                e[i] = a[i, l]
            else:
                for k in range(l + 1):
                    a[i, k] /= scale
                    h += a[i, k] * a[i, k]
                f = a[i, l]
                g = -math.sqrt(h) if f >= 0.0 else math.sqrt(h)
                e[i] = scale * g
                h -= f * g
                a[i, l] = f - g
                # q = A u / h, then K = u.q / 2h and q <- q - K u
                f = 0.0
                for j in range(l + 1):
                    g = 0.0
                    for k in range(l + 1):
                        g += a[j, k] * a[i, k]
                    e[j] = g / h
                    f += e[j] * a[i, j]
                hh = f / (h + h)
                for j in range(l + 1):
                    e[j] -= hh * a[i, j]
                # rank-2 update of the leading block, both triangles
                for j in range(l + 1):
                    uj = a[i, j]
                    qj = e[j]
                    for k in range(l + 1):
                        a[j, k] -= uj * e[k] + qj * a[i, k]
        else:
            e[i] = a[i, l]
        d[i] = h
    e[0] = 0.0
    for i in range(n):
        d[i] = a[i, i]


@numba.njit(cache=True)
def _eig2x2(a, b, c):
    """Eigenvalues of [[a, b], [b, c]] (larger first), the LAPACK dlae2 way."""
    sm = a + c
    adf = abs(a - c)
    ab = abs(b + b)
    if abs(a) > abs(c):
        acmx, acmn = a, c
    else:
        acmx, acmn = c, a
    if adf > ab:
        rt = adf * math.sqrt(1.0 + (ab / adf) ** 2)
    elif adf < ab:
        rt = ab * math.sqrt(1.0 + (adf / ab) ** 2)
    else:
        rt = ab * math.sqrt(2.0)
    if sm < 0.0:
        rt1 = 0.5 * (sm - rt)
        rt2 = (acmx / rt1) * acmn - (b / rt1) * b
    elif sm > 0.0:
        rt1 = 0.5 * (sm + rt)
        rt2 = (acmx / rt1) * acmn - (b / rt1) * b
    else:
        rt1 = 0.5 * rt
        rt2 = -0.5 * rt
    return rt1, rt2


@numba.njit(cache=True)
def _implicit_ql(d, e, max_sweeps):
    """Implicit QL with Wilkinson-type shifts; returns -1 or the failing index."""
    n = d.shape[0]
    eps = np.finfo(np.float64).eps
    for i in range(1, n):
        e[i - 1] = e[i]
    if n > 0:
        e[n - 1] = 0.0
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                return l
            sweeps += 1
            if m == l + 1:
                d[l], d[m] = _eig2x2(d[l], e[l], d[m])
                e[l] = 0.0
                continue
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


def tridiagonalize(m) -> tuple[np.ndarray, np.ndarray]:
    """Householder-reduce ``m`` to (diagonal, subdiagonal).

    The subdiagonal is returned with a leading zero, ``e[i]`` coupling rows
    ``i-1`` and ``i``.
    """
    a = _as_symmetric(m).copy()
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    _householder_tridiagonal(a, d, e)
    return d, e


def tridiagonal_eigenvalues(d, e) -> np.ndarray:
    d = np.array(d, dtype=float)
    e = np.array(e, dtype=float)
    failed = _implicit_ql(d, e, MAX_SWEEPS)
    if failed >= 0:
        raise ConvergenceError(
            f"eigenvalue {failed} not isolated after {MAX_SWEEPS} QL sweeps"
        )
    return np.sort(d, kind="stable")


def _as_symmetric(m) -> np.ndarray:
    a = np.ascontiguousarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def eigenvalues(m, method: str = "householder") -> Spectrum:
    """Sorted eigenvalues of the symmetric matrix ``m``.

    Only the lower triangle is trusted to define the matrix when it is not
    exactly symmetric; the builders in :mod:`graphenergy.rgraph` always emit
    exact symmetry.

    Raises
    ------
    ValueError
        Non-square, empty or non-finite input, or an unknown ``method``.
    ConvergenceError
        The QL iteration exceeded ``MAX_SWEEPS`` sweeps for some eigenvalue.
    """
    a = _as_symmetric(m)
    if method == "lapack":
        return Spectrum(np.linalg.eigvalsh(a, UPLO="L"))
    if method != "householder":
        raise ValueError(f"unknown eigenvalue method {method!r}")
    if not np.array_equal(a, a.T):
        a = np.tril(a) + np.tril(a, -1).T
    d, e = tridiagonalize(a)
    return Spectrum(tridiagonal_eigenvalues(d, e))


def scaled_spectrum(s: Spectrum, c: float) -> Spectrum:
    if not c > 0:
        raise ValueError(f"scale must be positive, got {c}")
    return Spectrum(s.values * c)
