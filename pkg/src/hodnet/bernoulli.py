"""Bernoulli polynomials with exact rational coefficients.

Generated from B_0 = 1 by the derivative relation B_r' = r * B_{r-1}
together with the zero-mean normalization over [0, 1].  Coefficients are
:class:`fractions.Fraction` values, so downstream exact integration stays
exact; evaluation accepts floats or Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import UsageError


@lru_cache(maxsize=None)
def bernoulli_coeffs(r: int) -> tuple[Fraction, ...]:
    """Coefficients of the degree-r Bernoulli polynomial, lowest degree first."""
    if r < 0:
        raise UsageError("Bernoulli polynomial degree must be nonnegative")
    if r == 0:
        return (Fraction(1),)
    prev = bernoulli_coeffs(r - 1)
    # Integrate r * B_{r-1}, then fix the constant so the mean on [0,1] is 0.
    coeffs = [Fraction(0)] * (r + 1)
    for j, c in enumerate(prev):
        coeffs[j + 1] = Fraction(r) * c / (j + 1)
    coeffs[0] = -sum(c / (j + 1) for j, c in enumerate(coeffs) if j >= 1)
    return tuple(coeffs)


def bernoulli(r: int, x):
    """Evaluate B_r at ``x``.  Exact for Fraction input, float for float input."""
    acc = 0
    for c in reversed(bernoulli_coeffs(r)):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def bernoulli_float_coeffs(r: int) -> tuple[float, ...]:
    """Float coefficients of B_r, highest degree first (numpy polyval order)."""
    return tuple(float(c) for c in reversed(bernoulli_coeffs(r)))
