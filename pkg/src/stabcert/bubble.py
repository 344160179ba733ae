"""Warped-bubble coefficient chain: spectral bound, Young parameter, barrier data.

Starting from a parameter row with q = b/beta this module derives, exactly:

* the spectral coefficient 4/(4-q) * beta/alpha and its (n-2)/(n-3) bound,
* the mean-curvature quadratic-form coefficient
      (4 beta^2 - (n-2) alpha^2) / (4 beta ((n-1) beta - (n-2) alpha)),
* the largest Young parameter L_max keeping the squared-mean-curvature
  coefficient nonnegative, and the barrier coefficient gamma0 under both
  conventions in circulation (the bare bracket 1/q - (1/L)|1/2 - 1/q| and the
  same bracket multiplied by beta/alpha) — both are carried through the whole
  downstream chain in parallel,
* the barrier amplitudes x0 = sqrt(eps/(2 alpha gamma0)) and
  y0 = (1/(2 beta)) sqrt(alpha eps gamma0 / 2) as exact surds, with their two
  defining identities 2(beta/alpha) x0 y0 = eps/(2 alpha) and
  2(beta/alpha) y0/x0 = gamma0 checked in surd arithmetic,
* area/volume growth constants (approximate fields: pi, exp and unit-ball
  measures are irrational; computed at >= 50 significant digits, reported at
  12, and never used in pass/fail checks).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .curvature import ParamSet
from .rational import QuadSurd, rational_to_str
from .report import ApproxValue, ConstraintReport

Rat = Fraction


class InfeasibleParamsError(ValueError):
    """A derived-constant precondition failed; the row cannot be certified."""


def spectral_coeff(q: Rat, alpha: Rat, beta: Rat) -> Fraction:
    """4/(4-q) * beta/alpha; pole at q = 4."""
    if q >= 4:
        raise InfeasibleParamsError(f"q = {q} >= 4: spectral coefficient undefined")
    return Fraction(4) / (4 - q) * beta / alpha


def spectral_coeff_check(params: ParamSet) -> ConstraintReport:
    """Exact margins for 0 < 4/(4-q) * beta/alpha <= (n-2)/(n-3).

    The upper bound applies for n >= 4 only; for n = 3 just 0 < q < 4 is
    checked and the bound is recorded as not applicable.
    """
    report = ConstraintReport()
    q = params.q
    report.add("q_positive", q > 0, margin=q)
    report.add("q_below_4", q < 4, margin=4 - q)
    if q <= 0 or q >= 4:
        return report
    coeff = spectral_coeff(q, params.alpha, params.beta)
    report.add("spectral_coeff_positive", coeff > 0, margin=coeff)
    if params.n == 3:
        report.add(
            "spectral_coeff_bound",
            True,
            kind="info",
            requirement="not applicable (n = 3)",
            detail="the (n-2)/(n-3) bound needs n > 3",
        )
    else:
        bound = Fraction(params.n - 2, params.n - 3)
        report.add(
            "spectral_coeff_bound",
            coeff <= bound,
            margin=bound - coeff,
            requirement=">= 0",
            detail=f"coefficient {rational_to_str(coeff)} vs bound {rational_to_str(bound)}",
        )
    return report


def mean_curv_coeff(n: int, alpha: Rat, beta: Rat) -> Fraction:
    """(4 beta^2 - (n-2) alpha^2) / (4 beta ((n-1) beta - (n-2) alpha)).

    Requires alpha/beta < (n-1)/(n-2), i.e. (n-1) beta - (n-2) alpha > 0.
    """
    denom_core = (n - 1) * beta - (n - 2) * alpha
    if denom_core <= 0:
        raise InfeasibleParamsError(
            f"(n-1)beta - (n-2)alpha = {denom_core} <= 0: alpha/beta must stay below (n-1)/(n-2)"
        )
    return (4 * beta * beta - (n - 2) * alpha * alpha) / (4 * beta * denom_core)


def quadform_lower_bound_check(
    n: int, alpha: Rat, beta: Rat, sample_count: int = 1000, seed: int = 0
) -> ConstraintReport:
    """Exact sampling of the trace-free quadratic-form bound plus its tightness.

    For random rational (mu1, H):
        A*mu1^2 + B*H*mu1 + C*H^2 >= mean_curv_coeff * H^2
    with A = (n-1)/(n-2) - alpha/beta, B = (n-3)alpha/((n-1)beta),
    C = (1/(n-1)) (1 + (alpha/beta)(n-2)/(n-1)); additionally the parabola
    vertex in mu1 must achieve the bound exactly (completing the square).
    """
    coeff = mean_curv_coeff(n, alpha, beta)
    A = Fraction(n - 1, n - 2) - alpha / beta
    B = Fraction(n - 3) * alpha / ((n - 1) * beta)
    C = Fraction(1, n - 1) * (1 + alpha / beta * Fraction(n - 2, n - 1))
    rng = random.Random(seed)
    report = ConstraintReport()
    violations = 0
    tight_failures = 0
    witness = ""
    for _ in range(sample_count):
        mu1 = Fraction(rng.randrange(-200, 201), rng.randrange(1, 20))
        H = Fraction(rng.randrange(-200, 201), rng.randrange(1, 20))
        lhs = A * mu1 * mu1 + B * H * mu1 + C * H * H
        if lhs < coeff * H * H:
            violations += 1
            if not witness:
                witness = f"mu1={mu1}, H={H}"
        vertex = -B * H / (2 * A)
        vertex_val = A * vertex * vertex + B * H * vertex + C * H * H
        if vertex_val != coeff * H * H:
            tight_failures += 1
    report.add(
        "quadform_lower_bound",
        violations == 0,
        kind="sampled",
        requirement="0 violations",
        detail=f"{sample_count} samples, {violations} violations, seed={seed}"
        + (f"; first witness: {witness}" if witness else ""),
    )
    report.add(
        "quadform_bound_tight_at_vertex",
        tight_failures == 0,
        kind="sampled",
        requirement="exact equality",
        detail=f"{tight_failures} vertex mismatches",
    )
    return report


def young_numerator(mcc: Rat, q: Rat) -> Fraction:
    """mean_curv_coeff + 1/q - 1, the numerator binding the Young parameter."""
    return mcc + 1 / q - 1


def l_max(n: int, q: Rat, alpha: Rat, beta: Rat) -> Fraction | None:
    """Largest Young parameter with nonnegative squared-mean-curvature coefficient.

    Solves mean_curv_coeff + 1/q - 1 - L*|1/2 - 1/q| = 0.  Returns None when
    q = 2 (the cross term vanishes and any L works); raises when the
    numerator is nonpositive (row infeasible at this stage).
    """
    mcc = mean_curv_coeff(n, alpha, beta)
    num = young_numerator(mcc, q)
    if num <= 0:
        raise InfeasibleParamsError(f"Young numerator {num} <= 0: no admissible Young parameter")
    if q == 2:
        return None
    return num / abs(Fraction(1, 2) - 1 / q)


def hbar_coeff_margin(mcc: Rat, q: Rat, L: Rat) -> Fraction:
    """mean_curv_coeff + 1/q - 1 - L*|1/2 - 1/q|; zero exactly at L = L_max."""
    return young_numerator(mcc, q) - L * abs(Fraction(1, 2) - 1 / q)


def gamma0(n: int, q: Rat, L: Rat | None, alpha: Rat, beta: Rat) -> tuple[Fraction, Fraction]:
    """(bare, with_ratio): 1/q - (1/L)|1/2 - 1/q|, and the same times beta/alpha.

    Both conventions are returned; certificates carry the divergence flag.
    With L = None (the q = 2 unconstrained case) the bracket is just 1/q.
    """
    if L is None:
        bare = 1 / q
    else:
        if L <= 0:
            raise InfeasibleParamsError("Young parameter must be positive")
        bare = 1 / q - (1 / L) * abs(Fraction(1, 2) - 1 / q)
    return bare, bare * beta / alpha


def x0_y0(n: int, alpha: Rat, beta: Rat, epsilon: Rat, gamma0_value: Rat) -> tuple[QuadSurd, QuadSurd]:
    """Barrier amplitudes x0 = sqrt(eps/(2 alpha g0)), y0 = (1/(2 beta)) sqrt(alpha eps g0 / 2)."""
    if epsilon <= 0 or gamma0_value <= 0:
        raise InfeasibleParamsError("epsilon and gamma0 must be positive for the barrier")
    x0 = QuadSurd.make(Fraction(1), epsilon / (2 * alpha * gamma0_value))
    y0 = QuadSurd.make(1 / (2 * beta), alpha * epsilon * gamma0_value / 2)
    return x0, y0


def surd_identities_check(
    alpha: Rat, beta: Rat, epsilon: Rat, gamma0_value: Rat, x0: QuadSurd, y0: QuadSurd
) -> ConstraintReport:
    """Exact surd checks of 2(b/a) x0 y0 = eps/(2a) and 2(b/a) y0/x0 = gamma0."""
    report = ConstraintReport()
    prod = x0 * y0
    ok1 = prod.is_rational() and 2 * (beta / alpha) * prod.as_rational() == epsilon / (2 * alpha)
    report.add("barrier_product_identity", ok1, requirement="exact equality",
               detail=f"2(beta/alpha)*x0*y0 vs epsilon/(2 alpha); x0*y0 = {prod}")
    ratio = y0 / x0
    ok2 = ratio.is_rational() and 2 * (beta / alpha) * ratio.as_rational() == gamma0_value
    report.add("barrier_ratio_identity", ok2, requirement="exact equality",
               detail=f"2(beta/alpha)*y0/x0 vs gamma0; y0/x0 = {ratio}")
    return report


def barrier_ode_check(
    x0: QuadSurd,
    y0: QuadSurd,
    sample_count: int = 1000,
    dps: int = 50,
    tol: float = 1e-9,
) -> ConstraintReport:
    """Finite-difference residual of -eta' = x0*y0 + (y0/x0)*eta^2.

    eta(t) = -x0 * tan(y0*t - pi/2) on (0, pi/y0); the residual at each sample
    point must satisfy |eta' + x0*y0 + (y0/x0)*eta^2| <= tol * (1 + |eta|^2),
    with a central-difference step shrunk where tan is steep.
    """
    if x0.sign() <= 0 or y0.sign() <= 0:
        raise InfeasibleParamsError("barrier amplitudes must be positive")
    report = ConstraintReport()
    with mpmath.workdps(dps):
        x0v = x0.approx_mp(dps)
        y0v = y0.approx_mp(dps)
        period = mpmath.pi / y0v
        margin = period / 1000
        lo, hi = margin, period - margin

        def eta(t):
            return -x0v * mpmath.tan(y0v * t - mpmath.pi / 2)

        worst = mpmath.mpf(0)
        breaches = 0
        for i in range(1, sample_count + 1):
            t = lo + (hi - lo) * i / (sample_count + 1)
            e = eta(t)
            h = mpmath.mpf("1e-6") / y0v / (1 + abs(e) / x0v)
            deriv = (eta(t + h) - eta(t - h)) / (2 * h)
            residual = deriv + x0v * y0v + (y0v / x0v) * e * e
            rel = abs(residual) / (1 + abs(e) ** 2)
            worst = max(worst, rel)
            if rel > tol:
                breaches += 1
        report.add(
            "barrier_ode_residual",
            breaches == 0,
            kind="approximate",
            requirement=f"relative residual <= {tol}",
            detail=f"{sample_count} points, max relative residual {mpmath.nstr(worst, 6)}, dps={dps}",
        )
    return report


def growth_constants(
    n: int, alpha: Rat, epsilon: Rat, y0: QuadSurd, dps: int = 50, digits: int = 12
) -> tuple[ApproxValue, ApproxValue]:
    """Area and volume growth constants (approximate, flagged).

    area  = ((n-2) alpha / eps)^((n-1)/2) * Area(S^(n-1))
    Lambda = ((n-2) alpha / eps)^(n/2) * Vol(B^n) * (2 exp(3 pi / y0))^n
    """
    base = (n - 2) * alpha / epsilon
    with mpmath.workdps(dps):
        base_mp = mpmath.mpf(base.numerator) / base.denominator
        sphere_area = 2 * mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2)
        ball_vol = mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2 + 1)
        y0v = y0.approx_mp(dps)
        area = base_mp ** (mpmath.mpf(n - 1) / 2) * sphere_area
        volume = base_mp ** (mpmath.mpf(n) / 2) * ball_vol * (2 * mpmath.exp(3 * mpmath.pi / y0v)) ** n
        return (
            ApproxValue.from_mpf(area, digits, dps),
            ApproxValue.from_mpf(volume, digits, dps),
        )


@dataclass(frozen=True)
class BarrierBranch:
    """The downstream chain under one gamma0 convention."""

    convention: str  # "bare" | "with_ratio"
    gamma0: Fraction
    x0: QuadSurd
    y0: QuadSurd
    area_const: ApproxValue
    volume_const: ApproxValue


@dataclass(frozen=True)
class BubbleConstants:
    q: Fraction
    spectral_coeff: Fraction
    mean_curv_coeff: Fraction
    L_max: Fraction | None
    gamma0_bare: Fraction
    gamma0_with_ratio: Fraction
    branches: tuple[BarrierBranch, BarrierBranch]

    def branch(self, convention: str) -> BarrierBranch:
        for b in self.branches:
            if b.convention == convention:
                return b
        raise KeyError(convention)


def certify_chain(
    params: ParamSet,
    epsilon: Rat,
    quadform_samples: int = 1000,
    barrier_samples: int = 1000,
    dps: int = 50,
    seed: int = 0,
):
    """Run the whole chain on a row and emit certificate checks, targets, flags.

    Returns (constants, checks, targets, flags, values) for assembly into a
    certificate: the spectral bound margins, the sampled quadratic-form check,
    L_max and gamma0 against their published values (when the row is a
    built-in one), the two exact surd identities and the barrier ODE residual
    under both gamma0 conventions, and the flagged approximate growth
    constants.  The divergence between the two gamma0 conventions is always
    flagged.
    """
    from . import published
    from .certificate import CertCheck, PublishedTarget

    n = params.n
    checks: list[CertCheck] = []
    targets: list[PublishedTarget] = []
    flags: list[dict] = []
    values: dict = {}

    spectral = spectral_coeff_check(params)
    for entry in spectral.entries:
        status = "pass" if entry.satisfied else "fail"
        checks.append(
            CertCheck(
                f"spectral/{entry.name}",
                "exact",
                status,
                margin=rational_to_str(entry.margin) if entry.margin is not None else None,
                detail=entry.detail or entry.requirement,
            )
        )
    quadform = quadform_lower_bound_check(n, params.alpha, params.beta, quadform_samples, seed)
    for entry in quadform.entries:
        checks.append(
            CertCheck(f"quadform/{entry.name}", "sampled", "pass" if entry.satisfied else "fail", detail=entry.detail)
        )

    constants = derive(params, epsilon, dps=dps)
    values["q"] = rational_to_str(constants.q)
    values["spectral_coeff"] = rational_to_str(constants.spectral_coeff)
    values["mean_curv_coeff"] = rational_to_str(constants.mean_curv_coeff)
    if constants.L_max is not None:
        values["L_max"] = rational_to_str(constants.L_max)
        margin = hbar_coeff_margin(constants.mean_curv_coeff, constants.q, constants.L_max)
        checks.append(
            CertCheck(
                "hbar_coeff_zero_at_l_max",
                "exact",
                "pass" if margin == 0 else "fail",
                margin=rational_to_str(margin),
                detail="binding margin, zero allowed",
            )
        )
    values["gamma0_bare"] = rational_to_str(constants.gamma0_bare)
    values["gamma0_with_ratio"] = rational_to_str(constants.gamma0_with_ratio)

    is_published_row = n in published.PARAM_ROWS and params == ParamSet.published_row(n)
    if is_published_row and constants.L_max is not None:
        match = constants.L_max == published.L_VALUES[n]
        targets.append(
            PublishedTarget("L", rational_to_str(published.L_VALUES[n]), rational_to_str(constants.L_max), match)
        )
        if not match:
            checks.append(
                CertCheck(
                    "l_max_matches_published",
                    "exact",
                    "discrepancy",
                    detail=f"computed {rational_to_str(constants.L_max)} != published "
                    f"{rational_to_str(published.L_VALUES[n])}",
                )
            )
    if is_published_row:
        match = constants.gamma0_bare == published.GAMMA0[n]
        targets.append(
            PublishedTarget(
                "gamma0", rational_to_str(published.GAMMA0[n]), rational_to_str(constants.gamma0_bare), match
            )
        )
        if not match:
            checks.append(
                CertCheck(
                    "gamma0_matches_published",
                    "exact",
                    "discrepancy",
                    detail=f"bare convention computed {rational_to_str(constants.gamma0_bare)} != published "
                    f"{rational_to_str(published.GAMMA0[n])}",
                )
            )
    flags.append(
        {
            "name": "gamma0_convention_divergence",
            "detail": "the defining bracket carries an extra beta/alpha factor that the quoted "
            "values omit; both conventions are computed and carried through the chain",
            "bare": rational_to_str(constants.gamma0_bare),
            "with_ratio": rational_to_str(constants.gamma0_with_ratio),
        }
    )

    for branch in constants.branches:
        prefix = f"barrier[{branch.convention}]"
        values[f"{prefix}/gamma0"] = rational_to_str(branch.gamma0)
        values[f"{prefix}/x0"] = str(branch.x0)
        values[f"{prefix}/y0"] = str(branch.y0)
        values[f"{prefix}/area_const"] = branch.area_const.to_jsonable()
        values[f"{prefix}/volume_const"] = branch.volume_const.to_jsonable()
        identities = surd_identities_check(
            params.alpha, params.beta, epsilon, branch.gamma0, branch.x0, branch.y0
        )
        for entry in identities.entries:
            checks.append(
                CertCheck(
                    f"{prefix}/{entry.name}", "exact", "pass" if entry.satisfied else "fail", detail=entry.detail
                )
            )
        ode = barrier_ode_check(branch.x0, branch.y0, barrier_samples, dps)
        entry = ode.entries[0]
        checks.append(
            CertCheck(
                f"{prefix}/{entry.name}",
                "approximate",
                "pass" if entry.satisfied else "fail",
                residual=entry.detail.split("max relative residual ")[-1].split(",")[0]
                if "max relative residual" in entry.detail
                else None,
                detail=entry.detail,
            )
        )
    return constants, checks, targets, flags, values


def derive(params: ParamSet, epsilon: Rat, dps: int = 50, l_cap: Rat | None = None) -> BubbleConstants:
    """Full exact chain for one row: q, coefficients, L_max, both barrier branches.

    ``l_cap`` optionally caps the Young parameter below L_max (configuration
    box); the default uses the binding value.
    """
    n, alpha, beta = params.n, params.alpha, params.beta
    q = params.q
    coeff = spectral_coeff(q, alpha, beta)
    mcc = mean_curv_coeff(n, alpha, beta)
    L = l_max(n, q, alpha, beta)
    if L is not None and l_cap is not None and l_cap < L:
        L = l_cap
    g_bare, g_ratio = gamma0(n, q, L, alpha, beta)
    if g_bare <= 0:
        raise InfeasibleParamsError(f"gamma0 bare = {g_bare} <= 0")
    branches = []
    for convention, g in (("bare", g_bare), ("with_ratio", g_ratio)):
        x0, y0 = x0_y0(n, alpha, beta, epsilon, g)
        area, volume = growth_constants(n, alpha, epsilon, y0, dps)
        branches.append(BarrierBranch(convention, g, x0, y0, area, volume))
    return BubbleConstants(
        q=q,
        spectral_coeff=coeff,
        mean_curv_coeff=mcc,
        L_max=L,
        gamma0_bare=g_bare,
        gamma0_with_ratio=g_ratio,
        branches=tuple(branches),
    )
