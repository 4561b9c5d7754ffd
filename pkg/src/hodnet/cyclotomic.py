"""Exact arithmetic in the cyclotomic field Q(w) for w = exp(2*pi*i/b), b prime.

Values are stored as rational coordinate vectors in the power basis
1, w, ..., w**(b-2); the relation 1 + w + ... + w**(b-1) = 0 reduces any
length-b representation to this canonical form.  For b = 2 the field
degenerates to the plain rationals (w = -1).

This representation makes "exactly zero" a decidable predicate, which the
Walsh-coefficient sparsity checks rely on.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

from .errors import UsageError
from .gf import is_prime


class Cyclotomic:
    """An element of Q(w_b), immutable."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base: int, coeffs) -> None:
        if not is_prime(base):
            raise UsageError(f"cyclotomic base must be prime, got {base}")
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != base - 1:
            raise UsageError(
                f"expected {base - 1} power-basis coordinates, got {len(cs)}"
            )
        self.base = base
        self.coeffs = cs

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, base: int) -> "Cyclotomic":
        return cls(base, (Fraction(0),) * (base - 1))

    @classmethod
    def one(cls, base: int) -> "Cyclotomic":
        return cls.rational(base, Fraction(1))

    @classmethod
    def rational(cls, base: int, value) -> "Cyclotomic":
        cs = [Fraction(0)] * (base - 1)
        cs[0] = Fraction(value)
        return cls(base, cs)

    @classmethod
    def root(cls, base: int, exponent: int) -> "Cyclotomic":
        """The root of unity w**exponent."""
        e = exponent % base
        if e == base - 1:
            return cls(base, (Fraction(-1),) * (base - 1))
        cs = [Fraction(0)] * (base - 1)
        cs[e] = Fraction(1)
        return cls(base, cs)

    @classmethod
    def _from_length_b(cls, base: int, full) -> "Cyclotomic":
        # Reduce modulo 1 + w + ... + w**(b-1) = 0 by subtracting the last
        # coordinate from every coordinate.
        last = full[base - 1]
        return cls(base, tuple(full[i] - last for i in range(base - 1)))

    # -- arithmetic --------------------------------------------------------

    def _compat(self, other: "Cyclotomic") -> None:
        if not isinstance(other, Cyclotomic) or other.base != self.base:
            raise UsageError("cyclotomic operands must share the same base")

    def __add__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._compat(other)
        return Cyclotomic(
            self.base, tuple(a + c for a, c in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._compat(other)
        return Cyclotomic(
            self.base, tuple(a - c for a, c in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.base, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.base, tuple(a * other for a in self.coeffs))
        self._compat(other)
        b = self.base
        full = [Fraction(0)] * b
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, c in enumerate(other.coeffs):
                if c == 0:
                    continue
                full[(i + j) % b] += a * c
        return Cyclotomic._from_length_b(b, full)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of cyclotomic value by zero")
            return Cyclotomic(self.base, tuple(a / other for a in self.coeffs))
        self._compat(other)
        return self * other.inverse()

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugate (w -> w**-1)."""
        b = self.base
        full = [Fraction(0)] * b
        for i, a in enumerate(self.coeffs):
            full[(-i) % b] += a
        return Cyclotomic._from_length_b(b, full)

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via a rational linear solve."""
        if self.is_zero():
            raise ZeroDivisionError("zero cyclotomic value has no inverse")
        n = self.base - 1
        # Columns of the matrix are self * w**j expressed in the power basis.
        cols = [(self * Cyclotomic.root(self.base, j)).coeffs for j in range(n)]
        aug = [[cols[j][i] for j in range(n)] + [Fraction(1 if i == 0 else 0)]
               for i in range(n)]
        for col in range(n):
            pivot = next(r for r in range(col, n) if aug[r][col] != 0)
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv_p = 1 / aug[col][col]
            aug[col] = [v * inv_p for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
        return Cyclotomic(self.base, tuple(aug[j][n] for j in range(n)))

    # -- predicates and conversions ----------------------------------------

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def is_rational(self) -> bool:
        return all(a == 0 for a in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise UsageError("value is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        b = self.base
        acc = complex(0.0)
        for i, a in enumerate(self.coeffs):
            if a != 0:
                acc += float(a) * cmath.exp(2j * cmath.pi * i / b)
        return acc

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cyclotomic)
            and other.base == self.base
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.base, self.coeffs))

    def __repr__(self) -> str:
        return f"Cyclotomic(b={self.base}, {list(self.coeffs)})"
