"""Truncated formal power series with exact rational coefficients.

Supports exactly what the generating-function identities need: ring
operations, exp of a series with zero constant term, and inversion of a
series with nonzero constant term. Everything is truncated at a fixed order
and every coefficient is a Fraction, so results are exact by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .scalars import parse_rational


def _coerce(value: Fraction | int | str) -> Fraction:
    return parse_rational(value) if isinstance(value, str) else Fraction(value)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients of x^0..x^order; arithmetic truncates past ``order``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")

    @classmethod
    def from_coefficients(cls, values: Sequence[Fraction | int | str], order: int | None = None) -> "TruncatedSeries":
        coeffs = [_coerce(v) for v in values]
        if order is not None:
            if order < 0:
                raise ValueError("order must be >= 0")
            coeffs = coeffs[: order + 1]
            coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls.from_coefficients([], order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.from_coefficients([1], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> Fraction:
        if not 0 <= k <= self.order:
            raise IndexError(f"coefficient index {k} out of range 0..{self.order}")
        return self.coeffs[k]

    def _common_order(self, other: "TruncatedSeries") -> int:
        # Truncation order of a combined result: information past the
        # shorter operand is unknown, so the result stops there.
        return min(self.order, other.order)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._common_order(other)
        return TruncatedSeries(tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._common_order(other)
        return TruncatedSeries(tuple(self.coeffs[k] - other.coeffs[k] for k in range(n + 1)))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._common_order(other)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return TruncatedSeries(tuple(out))

    def scale(self, factor: Fraction | int) -> "TruncatedSeries":
        f = Fraction(factor)
        return TruncatedSeries(tuple(f * c for c in self.coeffs))

    def exp(self) -> "TruncatedSeries":
        """exp(S) for a series with S(0) = 0.

        Uses the derivative recurrence E' = S' E, i.e.

            (n + 1) e_{n+1} = sum_{k=0}^{n} (k + 1) s_{k+1} e_{n-k}

        which needs no factorials and stays in lowest-terms rationals.
        """
        if self.coeffs[0] != 0:
            raise ValueError("exp requires a zero constant term")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        out[0] = Fraction(1)
        for m in range(n):
            acc = Fraction(0)
            for k in range(m + 1):
                s = self.coeffs[k + 1]
                if s != 0:
                    acc += (k + 1) * s * out[m - k]
            out[m + 1] = acc / (m + 1)
        return TruncatedSeries(tuple(out))

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        if self.coeffs[0] == 0:
            raise ValueError("inverse requires a nonzero constant term")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        out[0] = 1 / self.coeffs[0]
        for m in range(1, n + 1):
            acc = Fraction(0)
            for k in range(1, m + 1):
                s = self.coeffs[k]
                if s != 0:
                    acc += s * out[m - k]
            out[m] = -acc / self.coeffs[0]
        return TruncatedSeries(tuple(out))
