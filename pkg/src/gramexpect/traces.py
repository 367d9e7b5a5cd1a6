"""Power traces t_n = trace(M^n) of a moment matrix, two ways.

The direct route multiplies matrices; the indirect route recovers the same
numbers from the characteristic coefficients via Newton's identities. Both
are exact, and keeping both alive is the point: they cross-check each other
in the test suite and in the CLI verification path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .matrices import CharCoeffs, ExactMatrix
from .models import MomentMatrix


@dataclass(frozen=True)
class TraceSequence:
    """Traces t_1..t_N of successive powers; indexing is 1-based like t_n."""

    values: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Fraction:
        if not 1 <= n <= len(self.values):
            raise IndexError(f"trace index {n} out of range 1..{len(self.values)}")
        return self.values[n - 1]


def _as_square(matrix: MomentMatrix | ExactMatrix) -> ExactMatrix:
    m = matrix.as_exact_matrix() if isinstance(matrix, MomentMatrix) else matrix
    if not m.is_square:
        raise ValueError("traces require a square matrix")
    return m


def traces_by_power(matrix: MomentMatrix | ExactMatrix, count: int) -> TraceSequence:
    """t_1..t_count by iterated exact multiplication."""
    if count < 0:
        raise ValueError("count must be >= 0")
    m = _as_square(matrix)
    values = []
    power = m
    for n in range(count):
        if n > 0:
            power = power @ m
        values.append(power.trace())
    return TraceSequence(tuple(values))


def traces_from_char_coeffs(coeffs: CharCoeffs, count: int) -> TraceSequence:
    """t_1..t_count from elementary symmetric functions, Newton's identities.

    With c_k = 0 for k > dimension:

        t_n = sum_{i=1}^{n-1} (-1)^(i-1) c_i t_{n-i}  +  (-1)^(n-1) n c_n

    so the sequence extends to any length even though only c_1..c_t exist.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    t = coeffs.dimension

    def c(k: int) -> Fraction:
        return coeffs[k] if k <= t else Fraction(0)

    values: list[Fraction] = []
    for n in range(1, count + 1):
        total = Fraction(0)
        for i in range(1, n):
            term = c(i) * values[n - i - 1]
            total += term if i % 2 == 1 else -term
        tail = n * c(n)
        total += tail if n % 2 == 1 else -tail
        values.append(total)
    return TraceSequence(tuple(values))
