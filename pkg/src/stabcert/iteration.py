"""Level-set iteration machinery: admissible exponents and decay constants.

Covers the exact pieces of the weighted-test-function iteration:

* the open interval of admissible 2k values, with surd endpoints
  delta -+ sqrt(delta(delta - (n-2)/n)) compared exactly,
* the Caccioppoli positivity coefficient (2k + 1/n - 1/2 - 1/s) delta/k^2 - 2
  and the resulting constants C1, C2 (C2 = (p^2 C1 / 4)^(p/2), p = 4k + 2),
* the critical threshold delta_c = n(n-2)/(4(n-1)) where the interval's upper
  endpoint collapses to the rational (n-2)/2 and the exponent p reaches n,
* delta1(n) = max{delta0(n), delta_c},
* the dyadic iteration constants C (an exact power of 2 with rational
  exponent, compared via exponents, never floating logs) and C0, the
  smallness threshold epsilon1, and a worst-case recursion simulator with
  exact exponent bookkeeping.

The Sobolev-type constant C_MS has no closed-form value here; it is a
configuration input whose placeholder default 1 is non-physical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import published
from .rational import OffsetSurd, QuadSurd
from .report import ApproxValue

Rat = Fraction


@dataclass(frozen=True)
class KInterval:
    """The admissible set {2k : delta - sqrt(rad) < 2k < delta + sqrt(rad)}.

    rad = delta*(delta - (n-2)/n).  Nonempty iff delta > (n-2)/n; degenerate
    ({delta}) at equality; empty below, where the endpoints do not exist.
    """

    n: int
    delta: Fraction
    radicand: Fraction
    lower: OffsetSurd | None
    upper: OffsetSurd | None

    @property
    def is_empty(self) -> bool:
        return self.radicand < 0

    @property
    def is_degenerate(self) -> bool:
        return self.radicand == 0

    def contains_two_k(self, two_k: Rat) -> bool:
        """Strict membership of 2k, decided by exact surd comparison."""
        if self.is_empty or self.is_degenerate:
            return False
        assert self.lower is not None and self.upper is not None
        return self.lower.compare_rational(two_k) < 0 and self.upper.compare_rational(two_k) > 0


def k_interval(n: int, delta: Rat) -> KInterval:
    if delta <= 0:
        raise ValueError("delta must be positive")
    delta = Fraction(delta)
    rad = delta * (delta - Fraction(n - 2, n))
    if rad < 0:
        return KInterval(n, delta, rad, None, None)
    half = QuadSurd.make(Fraction(1), rad)
    return KInterval(
        n,
        delta,
        rad,
        OffsetSurd.make(delta, half.scale(-1)),
        OffsetSurd.make(delta, half),
    )


def caccioppoli_coefficient(n: int, delta: Rat, k: Rat, s: Rat) -> Fraction:
    """(2k + 1/n - 1/2 - 1/s) * delta / k^2 - 2, exact."""
    if k <= 0 or s <= 0:
        raise ValueError("k and s must be positive")
    return (2 * k + Fraction(1, n) - Fraction(1, 2) - 1 / Fraction(s)) * delta / (k * k) - 2


def caccioppoli_coefficient_limit(n: int, delta: Rat, k: Rat) -> Fraction:
    """The s -> infinity limit (2k + 1/n - 1/2) * delta / k^2 - 2.

    Strictly positive exactly when 2k lies strictly inside the admissible
    interval, zero at its endpoints, negative outside.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    return (2 * k + Fraction(1, n) - Fraction(1, 2)) * delta / (k * k) - 2


class NoCaccioppoliConstantError(ValueError):
    """Both branch coefficients nonpositive at this (k, s, s1); enlarge s, s1."""


@dataclass(frozen=True)
class CaccioppoliBranch:
    name: str
    coefficient: Fraction
    constant: Fraction | None  # None when the coefficient is nonpositive


@dataclass(frozen=True)
class CaccioppoliConstants:
    c1: Fraction
    p: Fraction  # 4k + 2
    c2_exact: Fraction | None  # exact when p is an even integer
    c2_approx: ApproxValue | None  # flagged floating otherwise
    branches: tuple[CaccioppoliBranch, CaccioppoliBranch]
    both_branches_positive: bool


def caccioppoli_constants(n: int, delta: Rat, k: Rat, s: Rat, s1: Rat, dps: int = 50) -> CaccioppoliConstants:
    """C1 and C2 from the two absorption branches of the weighted inequality.

    Branch 1: coefficient (2k + 1/n - 1/2 - 1/s) delta/k^2 - 2 with numerator
    s + (2k + 1/n - 1/2 - 1/s)/k^2.  Branch 2: coefficient
    (k + 1/(2n) - 1/4) s1 delta / (k^2 (s1 + 1)) - 1 with numerator
    (s1/k^2)(k + 1/(2n) - 1/4).  C1 is the max of the per-branch ratios over
    branches with positive coefficient; both nonpositive is an error.
    """
    k, s, s1 = Fraction(k), Fraction(s), Fraction(s1)
    coeff1 = caccioppoli_coefficient(n, delta, k, s)
    num1 = s + (2 * k + Fraction(1, n) - Fraction(1, 2) - 1 / s) / (k * k)
    kato = k + Fraction(1, 2 * n) - Fraction(1, 4)
    coeff2 = kato * s1 * delta / (k * k * (s1 + 1)) - 1
    num2 = (s1 / (k * k)) * kato
    b1 = CaccioppoliBranch("sign_drop", coeff1, num1 / coeff1 if coeff1 > 0 else None)
    b2 = CaccioppoliBranch("young_absorb", coeff2, num2 / coeff2 if coeff2 > 0 else None)
    candidates = [b.constant for b in (b1, b2) if b.constant is not None]
    if not candidates:
        raise NoCaccioppoliConstantError(
            f"branch coefficients {coeff1} and {coeff2} both nonpositive at k={k}, s={s}, s1={s1}"
        )
    c1 = max(candidates)
    p = 4 * k + 2
    base = p * p * c1 / 4
    c2_exact = None
    c2_approx = None
    if p.denominator == 1 and p.numerator % 2 == 0:
        c2_exact = base ** (p.numerator // 2)
    else:
        with mpmath.workdps(dps):
            val = (mpmath.mpf(base.numerator) / base.denominator) ** (
                mpmath.mpf(p.numerator) / p.denominator / 2
            )
            c2_approx = ApproxValue.from_mpf(val, internal_dps=dps)
    return CaccioppoliConstants(
        c1=c1,
        p=p,
        c2_exact=c2_exact,
        c2_approx=c2_approx,
        branches=(b1, b2),
        both_branches_positive=coeff1 > 0 and coeff2 > 0,
    )


@dataclass(frozen=True)
class CriticalExponent:
    two_k: OffsetSurd
    p: OffsetSurd
    p_exceeds_n: bool
    collapse_value: Fraction  # sqrt(delta_c (delta_c - (n-2)/n)), a rational


def critical_delta_threshold(n: int) -> Fraction:
    """delta_c = n(n-2)/(4(n-1))."""
    return Fraction(n * (n - 2), 4 * (n - 1))


def collapse_sqrt(n: int) -> Fraction:
    """Exact sqrt(delta_c (delta_c - (n-2)/n)) = (n-2)^2/(4(n-1)).

    The radicand is a perfect rational square for every n >= 3.
    """
    dc = critical_delta_threshold(n)
    rad = dc * (dc - Fraction(n - 2, n))
    root = QuadSurd.make(Fraction(1), rad)
    if not root.is_rational():
        raise ArithmeticError(f"collapse radicand {rad} unexpectedly not a perfect square")
    value = root.as_rational()
    expected = Fraction((n - 2) ** 2, 4 * (n - 1))
    if value != expected:
        raise ArithmeticError(f"collapse value {value} != (n-2)^2/(4(n-1)) = {expected}")
    return value


def critical_delta_exponent(n: int, delta: Rat) -> CriticalExponent:
    """The shifted exponent choice above the critical threshold.

    For delta > delta_c, with the midpoint shift eps = (delta - delta_c)/2,
    chooses 2k = (delta_c + eps) + sqrt((delta_c + eps)((delta_c + eps) -
    (n-2)/n)); then p = 4k + 2 = 2*(2k) + 2 exceeds n exactly (the boundary
    choice at delta_c gives 2k = (n-2)/2 and p = n).
    """
    delta = Fraction(delta)
    dc = critical_delta_threshold(n)
    if delta <= dc:
        raise ValueError(f"delta = {delta} must exceed the critical threshold {dc}")
    shifted = dc + (delta - dc) / 2
    rad = shifted * (shifted - Fraction(n - 2, n))
    two_k = OffsetSurd.make(shifted, QuadSurd.make(Fraction(1), rad))
    p = two_k.scale(2).shift(2)
    return CriticalExponent(
        two_k=two_k,
        p=p,
        p_exceeds_n=p.compare_rational(Fraction(n)) > 0,
        collapse_value=collapse_sqrt(n),
    )


def delta1_of(n: int) -> Fraction:
    """max{delta0(n), n(n-2)/(4(n-1))}; checked against the published table."""
    if n not in published.DELTA0:
        raise ValueError(f"no built-in delta0 for n = {n}")
    value = max(published.DELTA0[n], critical_delta_threshold(n))
    if value != published.DELTA1[n]:
        raise ArithmeticError(
            f"computed delta1({n}) = {value} != published {published.DELTA1[n]}"
        )
    return value


@dataclass(frozen=True, order=False)
class Pow2:
    """An exact power of two with rational exponent; compared via exponents."""

    exponent: Fraction

    def __lt__(self, other: "Pow2") -> bool:
        return self.exponent < other.exponent

    def __le__(self, other: "Pow2") -> bool:
        return self.exponent <= other.exponent

    def as_rational(self) -> Fraction:
        if self.exponent.denominator != 1:
            raise ValueError(f"2^{self.exponent} is irrational")
        e = self.exponent.numerator
        return Fraction(2**e) if e >= 0 else Fraction(1, 2**-e)

    def approx_mp(self, dps: int = 50) -> mpmath.mpf:
        with mpmath.workdps(dps):
            return mpmath.power(2, mpmath.mpf(self.exponent.numerator) / self.exponent.denominator)

    def __str__(self) -> str:
        return f"2^({self.exponent.numerator}/{self.exponent.denominator})"


@dataclass(frozen=True)
class DeGiorgiConstants:
    n: int
    delta: Fraction
    q: Fraction
    C_MS: float
    R: float
    C: Pow2
    C0: ApproxValue
    C0_prefactor_1: Fraction  # (2q/(q - (n-2)/n) + 1) * 2^7, exact
    C0_prefactor_2: Fraction  # q^3 / ((delta - q)(q - (n-2)/n)), exact
    R_exponent_1: Fraction  # (2n-4)/n
    R_exponent_2: Fraction  # 2(n-2)/(nq) - 4/n
    hypothesis_exponent: Fraction  # (n-2)/q - 2, recorded separately
    epsilon1: ApproxValue


def _check_q_window(n: int, delta: Rat, q: Rat) -> None:
    if not Fraction(n - 2, n) < q < delta:
        raise ValueError(f"q = {q} must lie in ((n-2)/n, delta) = ({Fraction(n - 2, n)}, {delta})")


def degiorgi_constants(n: int, delta: Rat, q: Rat, C_MS: float, R: float, dps: int = 50) -> DeGiorgiConstants:
    """The dyadic iteration constants C (exact base-2 exponent) and C0.

    C = max{2^((3n+2)/(n-2)), 2^(2n/(n-2) - 2/q + 1)}, compared exactly.
    C0 = C_MS * { pref1 * R^(-(2n-4)/n) + pref2 * 2^(2/q) * R^(-(2(n-2)/(nq) - 4/n)) }.
    """
    delta, q = Fraction(delta), Fraction(q)
    _check_q_window(n, delta, q)
    if R <= 1:
        raise ValueError("R must exceed 1")
    if C_MS <= 0:
        raise ValueError("C_MS must be positive")
    e1 = Fraction(3 * n + 2, n - 2)
    e2 = Fraction(2 * n, n - 2) - 2 / q + 1
    C = Pow2(max(e1, e2))
    gap = q - Fraction(n - 2, n)
    pref1 = (2 * q / gap + 1) * 2**7
    pref2 = q**3 / ((delta - q) * gap)
    rexp1 = Fraction(2 * n - 4, n)
    rexp2 = Fraction(2 * (n - 2), 1) / (n * q) - Fraction(4, n)
    with mpmath.workdps(dps):
        Rmp = mpmath.mpf(R)
        term1 = mpmath.mpf(pref1.numerator) / pref1.denominator * Rmp ** (
            -mpmath.mpf(rexp1.numerator) / rexp1.denominator
        )
        two_pow = mpmath.power(2, mpmath.mpf(2) / (mpmath.mpf(q.numerator) / q.denominator))
        term2 = mpmath.mpf(pref2.numerator) / pref2.denominator * two_pow * Rmp ** (
            -mpmath.mpf(rexp2.numerator) / rexp2.denominator
        )
        c0 = mpmath.mpf(C_MS) * (term1 + term2)
        c0_approx = ApproxValue.from_mpf(c0, internal_dps=dps)
    eps1 = epsilon1_threshold(n, delta, q, C_MS, dps=dps)
    return DeGiorgiConstants(
        n=n,
        delta=delta,
        q=q,
        C_MS=C_MS,
        R=R,
        C=C,
        C0=c0_approx,
        C0_prefactor_1=pref1,
        C0_prefactor_2=pref2,
        R_exponent_1=rexp1,
        R_exponent_2=rexp2,
        hypothesis_exponent=Fraction(n - 2, 1) / q - 2,
        epsilon1=ApproxValue.from_mpf(eps1, internal_dps=dps),
    )


def epsilon1_threshold(
    n: int, delta: Rat, q: Rat, C_MS: float, safety: Fraction = Fraction(1, 2), dps: int = 50
) -> mpmath.mpf:
    """Largest admissible smallness threshold, shrunk by a documented safety factor.

    The critical value solves eps1 * C^(n^2/2) * C_MS * bracket^(n/2) = 1 with
    bracket = pref1 + pref2 * 2^(2/q); the returned threshold is safety (default
    1/2) times the critical value, keeping the required strict inequality.
    """
    delta, q = Fraction(delta), Fraction(q)
    _check_q_window(n, delta, q)
    if C_MS <= 0:
        raise ValueError("C_MS must be positive")
    gap = q - Fraction(n - 2, n)
    pref1 = (2 * q / gap + 1) * 2**7
    pref2 = q**3 / ((delta - q) * gap)
    e1 = Fraction(3 * n + 2, n - 2)
    e2 = Fraction(2 * n, n - 2) - 2 / q + 1
    c_exp = max(e1, e2) * Fraction(n * n, 2)
    with mpmath.workdps(dps):
        bracket = (
            mpmath.mpf(pref1.numerator) / pref1.denominator
            + mpmath.mpf(pref2.numerator)
            / pref2.denominator
            * mpmath.power(2, mpmath.mpf(2) * q.denominator / q.numerator)
        )
        c_power = mpmath.power(2, mpmath.mpf(c_exp.numerator) / c_exp.denominator)
        critical = 1 / (c_power * mpmath.mpf(C_MS) * bracket ** (mpmath.mpf(n) / 2))
        return critical * mpmath.mpf(safety.numerator) / safety.denominator


@dataclass
class RecursionResult:
    steps: int
    log10_values: list[float]
    log10_bounds: list[float]
    dominated: bool
    tends_to_zero: bool
    exponent_identity_ok: bool
    log_direct_agreement_ok: bool
    values_str: list[str]
    bounds_str: list[str]


def recursion_simulate(S1: float, C0: float, C: float, n: int, steps: int = 20, dps: int = 60) -> RecursionResult:
    """Worst-case iteration of the odd-index decay recursion, with its closed bound.

    Iterates T_m = C0^theta * C^(theta (2m-1)) * T_(m-1)^theta from T_0 = S1,
    theta = n/(n-2) (equality, the worst case), tracking the exponents of C0,
    C and S1 as exact rationals; values are evaluated in the log domain from
    those exponents and cross-checked against a direct product iteration at
    1e-9 relative precision.  The closed-form bound is
    (C0^(n/2) C^(n^2/2) S1)^(theta^m); domination is verified at every step.

    The dyadic level/radius ladder behind the recursion enters only through
    the constants C0 and C; the ladder itself is not simulated.
    """
    if S1 <= 0 or C0 <= 0 or C <= 0:
        raise ValueError("all recursion inputs must be positive")
    theta = Fraction(n, n - 2)
    with mpmath.workdps(dps):
        logC0, logC, logS1 = mpmath.log(mpmath.mpf(C0)), mpmath.log(mpmath.mpf(C)), mpmath.log(mpmath.mpf(S1))
        log10 = mpmath.log(10)
        e0, eC, eS = Fraction(0), Fraction(0), Fraction(1)
        exponent_ok = True
        dominated = True
        agreement_ok = True
        theta_mp = mpmath.mpf(n) / (n - 2)
        t_direct = mpmath.mpf(S1)

        def fmt(log_value) -> str:
            if abs(log_value) < 5e4:
                return mpmath.nstr(mpmath.exp(log_value), 12)
            return f"10^{float(log_value / log10):.6g}"

        logP = mpmath.mpf(n) / 2 * logC0 + mpmath.mpf(n * n) / 2 * logC + logS1
        log10_values = [float(logS1 / log10)]
        log10_bounds = [float(logP / log10)]
        values_str = [fmt(logS1)]
        bounds_str = [fmt(logP)]
        for m in range(1, steps + 1):
            e0 = theta * (1 + e0)
            eC = theta * (2 * m - 1) + theta * eC
            eS = theta * eS
            # geometric-sum identity for the C0 exponent
            closed_e0 = theta * (theta**m - 1) / (theta - 1)
            if e0 != closed_e0 or eS != theta**m:
                exponent_ok = False
            log_t = (
                mpmath.mpf(e0.numerator) / e0.denominator * logC0
                + mpmath.mpf(eC.numerator) / eC.denominator * logC
                + mpmath.mpf(eS.numerator) / eS.denominator * logS1
            )
            t_direct = mpmath.mpf(C0) ** theta_mp * mpmath.mpf(C) ** (theta_mp * (2 * m - 1)) * t_direct**theta_mp
            log_direct = mpmath.log(t_direct)
            if abs(log_direct - log_t) > mpmath.mpf("1e-9") * max(1, abs(log_t)):
                agreement_ok = False
            theta_pow = Fraction(theta**m)
            log_bound = mpmath.mpf(theta_pow.numerator) / theta_pow.denominator * logP
            if log_t > log_bound + mpmath.mpf("1e-9"):
                dominated = False
            log10_values.append(float(log_t / log10))
            log10_bounds.append(float(log_bound / log10))
            values_str.append(fmt(log_t))
            bounds_str.append(fmt(log_bound))
        tends_to_zero = bool(logP < 0) and log10_values[-1] < log10_values[0]
    return RecursionResult(
        steps=steps,
        log10_values=log10_values,
        log10_bounds=log10_bounds,
        dominated=dominated,
        tends_to_zero=tends_to_zero,
        exponent_identity_ok=exponent_ok,
        log_direct_agreement_ok=agreement_ok,
        values_str=values_str,
        bounds_str=bounds_str,
    )
