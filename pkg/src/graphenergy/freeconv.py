"""Exact combinatorial free convolution on truncated moment series.

A measure with moments ``m_k`` has moment series ``M(z) = 1 + sum m_k z^k``
and a cumulant series ``T(z) = sum_{k>=1} c_k z^(k-1)`` tied to it by

    M(z) = 1 + z M(z) T(z M(z)).

The ``c_k`` are the free cumulants, and free convolution adds ``T`` series.
Everything here is carried out in :class:`fractions.Fraction` arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "TruncatedSeries",
    "MomentSequence",
    "DEFAULT_DEGREE",
    "semicircle_moments",
    "normal_moments",
    "moments_to_t",
    "t_to_moments",
    "free_convolve",
    "psi_moments",
    "abs_moment_bounds",
]

DEFAULT_DEGREE = 8


class TruncatedSeries:
    """Power series ``c_0 + c_1 z + ... + c_N z^N`` modulo ``z^(N+1)``.

    Binary operations truncate to the smaller of the two degrees.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable, degree: int | None = None):
        coeffs = [Fraction(c) for c in coeffs]
        if degree is not None:
            if degree < 0:
                raise ValueError("degree must be nonnegative")
            coeffs = (coeffs + [Fraction(0)] * (degree + 1))[: degree + 1]
        if not coeffs:
            raise ValueError("a series needs at least one coefficient")
        self._coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, c, degree: int) -> "TruncatedSeries":
        return cls([c], degree)

    @classmethod
    def z(cls, degree: int) -> "TruncatedSeries":
        return cls([0, 1], degree)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self._coeffs[k] if 0 <= k <= self.degree else Fraction(0)

    def __repr__(self):
        return f"TruncatedSeries({[str(c) for c in self._coeffs]})"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def truncate(self, degree: int) -> "TruncatedSeries":
        return TruncatedSeries(self._coeffs, degree)

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.degree)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.degree, other.degree)
        return TruncatedSeries([self[k] + other[k] for k in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self._coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = Fraction(other)
            return TruncatedSeries([c * a for a in self._coeffs])
        n = min(self.degree, other.degree)
        a, b = self._coeffs, other._coeffs
        return TruncatedSeries(
            [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n + 1)]
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return self.reciprocal() ** (-k)
        result = TruncatedSeries.constant(1, self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def reciprocal(self) -> "TruncatedSeries":
        a = self._coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        inv = [1 / a[0]]
        for k in range(1, self.degree + 1):
            s = sum((a[i] * inv[k - i] for i in range(1, k + 1)), Fraction(0))
            inv.append(-s / a[0])
        return TruncatedSeries(inv)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """``self(inner(z))``; ``inner`` must vanish at 0."""
        if inner[0] != 0:
            raise ValueError("composition needs an inner series with zero constant term")
        n = min(self.degree, inner.degree)
        inner = inner.truncate(n)
        # Horner from the top coefficient down
        out = TruncatedSeries.constant(self[n], n)
        for k in range(n - 1, -1, -1):
            out = out * inner + self[k]
        return out

    __call__ = compose

    def derivative(self) -> "TruncatedSeries":
        """Formal derivative; the degree drops by one (a constant stays degree 0)."""
        if self.degree == 0:
            return TruncatedSeries([0])
        return TruncatedSeries([k * self._coeffs[k] for k in range(1, self.degree + 1)])


@dataclass(frozen=True)
class MomentSequence:
    """Moments ``m_1 .. m_N`` of a probability measure; ``m_0 = 1`` is implicit."""

    moments: tuple[Fraction, ...]
    even: bool = field(default=False, compare=False)

    def __post_init__(self):
        moments = tuple(Fraction(m) for m in self.moments)
        if not moments:
            raise ValueError("need at least one moment")
        if self.even and any(moments[k] != 0 for k in range(0, len(moments), 2)):
            raise ValueError("declared-even sequence has a nonzero odd moment")
        object.__setattr__(self, "moments", moments)

    @property
    def degree(self) -> int:
        return len(self.moments)

    def __getitem__(self, k: int) -> Fraction:
        """Moment of order ``k`` (``k = 0`` gives 1)."""
        if k == 0:
            return Fraction(1)
        if not 1 <= k <= self.degree:
            raise IndexError(f"moment order {k} outside 0..{self.degree}")
        return self.moments[k - 1]

    def is_even(self) -> bool:
        return all(self.moments[k] == 0 for k in range(0, self.degree, 2))

    def series(self) -> TruncatedSeries:
        return TruncatedSeries((1,) + self.moments)

    def to_strings(self) -> list[str]:
        return [str(m) for m in self.moments]

    def to_json(self) -> str:
        return json.dumps(self.to_strings())

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "MomentSequence":
        return cls(tuple(Fraction(s) for s in items))


def _check_degree(N: int) -> int:
    if int(N) != N or N < 1:
        raise ValueError(f"degree must be a positive integer, got {N!r}")
    return int(N)


def semicircle_moments(N: int) -> MomentSequence:
    """Standard semicircle: ``m_2k`` is the ``k``-th Catalan number."""
    N = _check_degree(N)
    return MomentSequence(
        tuple(0 if k % 2 else math.comb(k, k // 2) // (k // 2 + 1) for k in range(1, N + 1)),
        even=True,
    )


def normal_moments(N: int) -> MomentSequence:
    """Standard normal: ``m_2k = (2k - 1)!!``."""
    N = _check_degree(N)
    out = []
    dfact = 1
    for k in range(1, N + 1):
        if k % 2:
            out.append(0)
        else:
            dfact *= k - 1
            out.append(dfact)
    return MomentSequence(tuple(out), even=True)


def moments_to_t(m: MomentSequence) -> TruncatedSeries:
    """Free cumulants of ``m`` packed as ``T(z) = sum c_k z^(k-1)``, k = 1..N.

    ``c_1 = m_1``; for ``k >= 2``,
    ``c_k = -1/(k-1) [z^k] M(z)^(-(k-1))``, which is the k-th derivative
    formula with ``d^k/dz^k |_0 = k! [z^k]``.
    """
    N = m.degree
    M = m.series()
    inv_m = M.reciprocal()
    cumulants = [m[1]]
    power = inv_m
    for k in range(2, N + 1):
        # power == M^-(k-1)
        cumulants.append(-power[k] / (k - 1))
        power = power * inv_m
    return TruncatedSeries(cumulants)


def t_to_moments(t: TruncatedSeries, N: int) -> MomentSequence:
    """Solve ``M = 1 + z M T(z M)`` degree by degree up to ``z^N``.

    Cumulants beyond those stored in ``t`` are taken as zero.
    """
    N = _check_degree(N)
    T = t.truncate(N - 1)
    M = TruncatedSeries.constant(1, 0)
    for n in range(1, N + 1):
        Mn = M.truncate(n)
        w = TruncatedSeries.z(n) * Mn
        inner = T.truncate(n).compose(w)
        M = TruncatedSeries.z(n) * Mn * inner + 1
    return MomentSequence(M.coeffs[1:])


def free_convolve(a: MomentSequence, b: MomentSequence) -> MomentSequence:
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    return t_to_moments(moments_to_t(a) + moments_to_t(b), a.degree)


def psi_moments(N: int = DEFAULT_DEGREE) -> MomentSequence:
    """Moments of the standard semicircle freely convolved with N(0, 1)."""
    return free_convolve(semicircle_moments(N), normal_moments(N))


def abs_moment_bounds(m2, m4) -> tuple[float, float]:
    """Cauchy–Schwarz bracket for ``E|X|`` from the second and fourth moments.

    Upper: ``sqrt(m2)``. Lower: ``m2**2 / sqrt(m2 m4)``, from
    ``m2**2 <= E|X| E|X|^3 <= E|X| sqrt(m2 m4)``.
    """
    m2 = Fraction(m2)
    m4 = Fraction(m4)
    if m2 <= 0 or m4 <= 0:
        raise ValueError("moments must be positive")
    if m4 < m2 * m2:
        raise ValueError(f"inconsistent moments: m4={m4} < m2**2={m2 * m2}")
    # sqrt(m2**4 / (m2 m4)) = sqrt(m2**3 / m4), computed once from the exact ratio
    lower = math.sqrt(m2**3 / m4)
    upper = math.sqrt(m2)
    return lower, upper
