"""Exact scalar types: reduced rationals and a restricted square-root extension.

``Rational`` is an alias for :class:`fractions.Fraction`, which already keeps
every value reduced with a positive denominator at arbitrary precision.  On
top of it this module provides

* :class:`QuadSurd` — values of the form ``r*sqrt(s)`` with rational ``r`` and
  rational ``s >= 0``, closed under the handful of operations the constant
  pipeline needs (square, product, ratio, comparison against a rational);
* :class:`OffsetSurd` — ``c + r*sqrt(s)``, the affine extension required for
  interval endpoints of the form ``delta +- sqrt(...)``;
* canonical string serialization ("p/q" and "r*sqrt(s)") used by certificates.

Floating mirrors (``approx`` / ``approx_mp``) exist for advisory cross-checks
only; nothing on the certified path consumes them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

Rational = Fraction


def rational_to_str(x: Fraction) -> str:
    """Serialize as "p/q" (reduced, q > 0), including q = 1 explicitly."""
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


def sqrt_exact(x: Fraction) -> Fraction | None:
    """Exact square root of ``x`` if it is the square of a rational, else None."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


@dataclass(frozen=True)
class QuadSurd:
    """The exact value ``coeff * sqrt(radicand)`` with ``radicand >= 0``.

    Instances are canonicalized on construction: a radicand that is a perfect
    rational square is folded into the coefficient (radicand becomes 1), and
    the zero value is stored as ``0*sqrt(1)``.  Use :meth:`make` or the
    arithmetic operations; the raw constructor does not normalize.
    """

    coeff: Fraction
    radicand: Fraction

    @staticmethod
    def make(coeff: Fraction | int, radicand: Fraction | int) -> "QuadSurd":
        coeff = Fraction(coeff)
        radicand = Fraction(radicand)
        if radicand < 0:
            raise ValueError("radicand must be nonnegative")
        if coeff == 0 or radicand == 0:
            return QuadSurd(Fraction(0), Fraction(1))
        root = sqrt_exact(radicand)
        if root is not None:
            return QuadSurd(coeff * root, Fraction(1))
        return QuadSurd(coeff, radicand)

    @staticmethod
    def from_rational(x: Fraction | int) -> "QuadSurd":
        return QuadSurd.make(Fraction(x), Fraction(1))

    def is_rational(self) -> bool:
        return self.radicand == 1 or self.coeff == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.coeff

    def square(self) -> Fraction:
        """Exactly ``coeff**2 * radicand`` as a Rational."""
        return self.coeff * self.coeff * self.radicand

    def sign(self) -> int:
        if self.coeff > 0:
            return 1
        if self.coeff < 0:
            return -1
        return 0

    def __mul__(self, other: "QuadSurd") -> "QuadSurd":
        return QuadSurd.make(self.coeff * other.coeff, self.radicand * other.radicand)

    def __truediv__(self, other: "QuadSurd") -> "QuadSurd":
        if other.coeff == 0:
            raise ZeroDivisionError("division by zero surd")
        return QuadSurd.make(self.coeff / other.coeff, self.radicand / other.radicand)

    def scale(self, r: Fraction | int) -> "QuadSurd":
        return QuadSurd.make(self.coeff * Fraction(r), self.radicand)

    def compare_rational(self, y: Fraction | int) -> int:
        """Exact ordering versus a rational: -1 (less), 0 (equal), +1 (greater).

        Decided by sign analysis and squaring; no floating arithmetic.
        """
        y = Fraction(y)
        s = self.sign()
        if s == 0:
            return 0 if y == 0 else (-1 if y > 0 else 1)
        if s > 0 and y <= 0:
            return 1
        if s < 0 and y >= 0:
            return -1
        # both sides share a strict sign; squaring preserves order for that sign
        left, right = self.square(), y * y
        if left == right:
            return 0
        bigger_abs = 1 if left > right else -1
        return bigger_abs if s > 0 else -bigger_abs

    def approx(self) -> float:
        """Advisory double-precision value; not used by any exact check."""
        return float(self.coeff) * float(self.radicand) ** 0.5

    def approx_mp(self, dps: int = 50) -> mpmath.mpf:
        """Advisory high-precision value at ``dps`` significant digits."""
        with mpmath.workdps(dps):
            return mpmath.mpf(self.coeff.numerator) / self.coeff.denominator * mpmath.sqrt(
                mpmath.mpf(self.radicand.numerator) / self.radicand.denominator
            )

    def __str__(self) -> str:
        return f"{rational_to_str(self.coeff)}*sqrt({rational_to_str(self.radicand)})"

    @staticmethod
    def from_str(s: str) -> "QuadSurd":
        s = s.strip()
        head, _, tail = s.partition("*sqrt(")
        if not tail.endswith(")"):
            raise ValueError(f"not a surd string: {s!r}")
        return QuadSurd.make(Fraction(head), Fraction(tail[:-1]))


def surd_compare(x: QuadSurd, y: Fraction | int) -> int:
    """Module-level alias for :meth:`QuadSurd.compare_rational`."""
    return x.compare_rational(y)


def surd_product(x: QuadSurd, y: QuadSurd) -> Fraction | QuadSurd:
    """Exact product; collapses to a Rational when the radicands multiply to a square."""
    p = x * y
    return p.as_rational() if p.is_rational() else p


def surd_ratio(x: QuadSurd, y: QuadSurd) -> Fraction | QuadSurd:
    """Exact ratio; collapses to a Rational when possible."""
    p = x / y
    return p.as_rational() if p.is_rational() else p


@dataclass(frozen=True)
class OffsetSurd:
    """The exact value ``offset + surd`` (rational plus a QuadSurd)."""

    offset: Fraction
    surd: QuadSurd

    @staticmethod
    def make(offset: Fraction | int, surd: QuadSurd) -> "OffsetSurd":
        offset = Fraction(offset)
        if surd.is_rational():
            return OffsetSurd(offset + surd.as_rational(), QuadSurd.from_rational(0))
        return OffsetSurd(offset, surd)

    def is_rational(self) -> bool:
        return self.surd.is_rational()

    def as_rational(self) -> Fraction:
        return self.offset + self.surd.as_rational()

    def compare_rational(self, t: Fraction | int) -> int:
        """Exact ordering of ``offset + surd`` versus a rational ``t``."""
        return self.surd.compare_rational(Fraction(t) - self.offset)

    def scale(self, r: Fraction | int) -> "OffsetSurd":
        r = Fraction(r)
        return OffsetSurd.make(self.offset * r, self.surd.scale(r))

    def shift(self, c: Fraction | int) -> "OffsetSurd":
        return OffsetSurd.make(self.offset + Fraction(c), self.surd)

    def approx(self) -> float:
        return float(self.offset) + self.surd.approx()

    def approx_mp(self, dps: int = 50) -> mpmath.mpf:
        with mpmath.workdps(dps):
            return mpmath.mpf(self.offset.numerator) / self.offset.denominator + self.surd.approx_mp(dps)

    def __str__(self) -> str:
        return f"{rational_to_str(self.offset)} + {self.surd}"

    @staticmethod
    def from_str(s: str) -> "OffsetSurd":
        head, _, tail = s.partition(" + ")
        return OffsetSurd.make(Fraction(head), QuadSurd.from_str(tail))
