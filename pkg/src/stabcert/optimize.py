"""Parameter search with float exploration, rational rounding, exact recertification.

The exact feasibility chain for a row (n, a, b, alpha, beta), a = b*delta0:

    b, alpha, beta > 0;  f_xx, f_yy > 0;  D > 0;  epsilon = min(F(0), F(1)) > 0;
    0 < q = b/beta < 4;  spectral coefficient <= (n-2)/(n-3) for n >= 4;
    (n-1)beta - (n-2)alpha > 0;  Young numerator mcc + 1/q - 1 > 0;
    gamma0 (bare, at L = L_max) > 0.

Searching runs in two phases: a fast floating mirror of those margins drives
multistart coordinate descent inside a box, then candidates are rounded to
rationals by continued fractions (denominator-bounded) and recertified with
exact arithmetic.  Floating error is harmless: unsound candidates simply fail
exact recertification.  Fixed seeds and budgets make results deterministic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import bubble, published, quadmin
from .curvature import ParamSet, epsilon_of
from .rational import rational_to_str
from .report import ConstraintReport

Rat = Fraction

_BIG_NEGATIVE = -1e18


def feasibility(params: ParamSet) -> ConstraintReport:
    """Every named constraint with its exact margin; feasible iff all satisfied.

    Margins the chain leaves undefined after an upstream failure are reported
    unsatisfied with a note instead of raising.
    """
    n = params.n
    report = ConstraintReport()
    report.add("b_positive", params.b > 0, margin=params.b)
    report.add("alpha_positive", params.alpha > 0, margin=params.alpha)
    report.add("beta_positive", params.beta > 0, margin=params.beta)

    fxx = Fraction(2 * (n - 1), n - 2) * params.a - 2 * params.beta
    fyy = Fraction(2 * (n - 1), n - 2) * params.a - 2 * params.alpha
    report.add("hessian_fxx", fxx > 0, margin=fxx)
    report.add("hessian_fyy", fyy > 0, margin=fyy)
    D = quadmin.discriminant(n, params.a, params.alpha, params.beta)
    report.add("discriminant", D > 0, margin=D)
    if fxx <= 0 or fyy <= 0 or D <= 0:
        report.add("epsilon", False, margin=None, detail="undefined: Hessian conditions failed")
        return report

    eps = epsilon_of(params).epsilon
    report.add("epsilon", eps > 0, margin=eps)

    q = params.q
    report.add("q_below_4", q < 4, margin=4 - q)
    if n >= 4:
        if q < 4:
            coeff = bubble.spectral_coeff(q, params.alpha, params.beta)
            bound = Fraction(n - 2, n - 3)
            report.add("spectral_bound", coeff < bound, margin=bound - coeff)
        else:
            report.add("spectral_bound", False, margin=None, detail="undefined: q >= 4")

    ricci_denom = (n - 1) * params.beta - (n - 2) * params.alpha
    report.add("ricci_coeff_denominator", ricci_denom > 0, margin=ricci_denom)
    if ricci_denom <= 0 or q >= 4 or q <= 0:
        report.add("young_numerator", False, margin=None, detail="undefined: upstream failure")
        return report

    mcc = bubble.mean_curv_coeff(n, params.alpha, params.beta)
    young_num = bubble.young_numerator(mcc, q)
    report.add("young_numerator", young_num > 0, margin=young_num)
    if young_num <= 0:
        report.add("gamma0_bare", False, margin=None, detail="undefined: no Young parameter")
        return report

    L = bubble.l_max(n, q, params.alpha, params.beta)
    g_bare, _ = bubble.gamma0(n, q, L, params.alpha, params.beta)
    report.add("gamma0_bare", g_bare > 0, margin=g_bare)
    if L is not None:
        report.add(
            "hbar_coeff_at_l_max",
            True,
            kind="info",
            margin=bubble.hbar_coeff_margin(mcc, q, L),
            requirement="= 0 (binding allowed)",
            detail=f"L_max = {rational_to_str(L)}",
        )
    return report


# Names and order of the float mirror must match feasibility()'s strict margins.
_MARGIN_NAMES_N3 = (
    "b_positive", "alpha_positive", "beta_positive",
    "hessian_fxx", "hessian_fyy", "discriminant", "epsilon",
    "q_below_4", "ricci_coeff_denominator", "young_numerator", "gamma0_bare",
)
_MARGIN_NAMES_N4 = (
    "b_positive", "alpha_positive", "beta_positive",
    "hessian_fxx", "hessian_fyy", "discriminant", "epsilon",
    "q_below_4", "spectral_bound", "ricci_coeff_denominator", "young_numerator", "gamma0_bare",
)


def margin_names(n: int) -> tuple[str, ...]:
    return _MARGIN_NAMES_N3 if n == 3 else _MARGIN_NAMES_N4


def float_margins(n: int, delta0: float, b: float, alpha: float, beta: float) -> list[float]:
    """Floating mirror of the exact margins, in the order of margin_names(n).

    Advisory only; every accepted candidate is recertified exactly.
    """
    out = [b, alpha, beta]
    a = delta0 * b
    fxx = 2 * (n - 1) / (n - 2) * a - 2 * beta
    fyy = 2 * (n - 1) / (n - 2) * a - 2 * alpha
    D = 4 * n / (n - 2) * a * a - 4 * ((n - 1) / (n - 2) * beta + alpha) * a + (4 * beta - alpha) * alpha
    out += [fxx, fyy, D]
    if min(b, alpha, beta) <= 0 or fxx <= 0 or fyy <= 0 or D <= 0:
        return out + [_BIG_NEGATIVE] * (len(margin_names(n)) - len(out))
    Qnum = (
        (n - 2) * alpha**3
        - ((n * n - 5 * n + 8) * a + (3 * n - 7) * beta) * alpha**2
        + ((n - 2) ** 2 * alpha - (n - 1) * (n - 2) * a) * beta**2
        + 4 * (n - 2) * a * alpha * beta
    )
    Q = Qnum / D
    const = 2 * (n - 1) * beta + 2 * (n - 2) * alpha - b * n * (n - 2) / 2
    mx = max((n - 2) * beta - alpha, (n - 3) * alpha)
    F0 = const + Q
    F1 = const + (n * n - 4) / 4 * b - (n * beta + (n - 1) * alpha) - mx
    eps = min(F0, F1)
    out.append(eps)
    q = b / beta
    out.append(4 - q)
    if n >= 4:
        if q >= 4:
            return out + [_BIG_NEGATIVE] * (len(margin_names(n)) - len(out))
        out.append((n - 2) / (n - 3) - 4 / (4 - q) * beta / alpha)
    ricci_denom = (n - 1) * beta - (n - 2) * alpha
    out.append(ricci_denom)
    if ricci_denom <= 0 or q >= 4 or q <= 0:
        return out + [_BIG_NEGATIVE] * (len(margin_names(n)) - len(out))
    mcc = (4 * beta * beta - (n - 2) * alpha * alpha) / (4 * beta * ricci_denom)
    young_num = mcc + 1 / q - 1
    out.append(young_num)
    if young_num <= 0:
        return out + [_BIG_NEGATIVE]
    half = abs(0.5 - 1 / q)
    if half == 0:
        g_bare = 1 / q
    else:
        l_max = young_num / half
        g_bare = 1 / q - (1 / l_max) * half
    out.append(g_bare)
    return out


@dataclass
class SearchConfig:
    n: int
    objective: str = "minimize_delta0"  # or "maximize_epsilon"
    budget: int = 100_000
    denominator_bound: int = 10**6
    seeds: tuple[int, ...] = (0, 1, 2, 3)
    box: dict[str, tuple[float, float]] | None = None
    descent_rounds: int = 6
    bisection_steps: int = 10

    def __post_init__(self):
        if self.denominator_bound < 2:
            raise ValueError("denominator_bound must be >= 2")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.objective not in ("minimize_delta0", "maximize_epsilon"):
            raise ValueError(f"unknown objective {self.objective!r}")


@dataclass
class SearchResult:
    n: int
    objective: str
    best_params: ParamSet | None
    certified: bool
    delta0: Fraction | None
    epsilon: Fraction | None
    constraint_report: ConstraintReport | None
    improvement_vs_published: Fraction | None
    evaluations_used: int
    notes: list[str] = field(default_factory=list)
    best_margin_profile: dict[str, float] | None = None  # for uncertified searches


def default_box(n: int) -> dict[str, tuple[float, float]]:
    """Search box for (b, alpha, beta); rows 3..5 bracket the built-in values,
    n = 6 extrapolates the row trend geometrically (heuristic)."""
    if n in published.PARAM_ROWS:
        row = published.PARAM_ROWS[n]
        return {
            key: (float(row[key]) / 4, float(row[key]) * 4)
            for key in ("b", "alpha", "beta")
        }
    if n == 6:
        # rows shrink roughly geometrically in n; centre on the extrapolation
        centers = {"b": 0.47, "alpha": 0.72, "beta": 0.52}
        return {key: (val / 8, val * 8) for key, val in centers.items()}
    raise ValueError(f"no default search box for n = {n}")


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, k: int = 1) -> bool:
        self.used += k
        return self.used <= self.limit

    @property
    def exhausted(self) -> bool:
        return self.used >= self.limit


def _round_params(n: int, delta0: Fraction, b: float, alpha: float, beta: float, bound: int) -> ParamSet | None:
    """Continued-fraction rounding with a denominator bound, then exact a = delta0*b."""
    try:
        b_r = Fraction(b).limit_denominator(bound)
        alpha_r = Fraction(alpha).limit_denominator(bound)
        beta_r = Fraction(beta).limit_denominator(bound)
        if b_r <= 0 or alpha_r <= 0 or beta_r <= 0:
            return None
        return ParamSet(n=n, a=delta0 * b_r, b=b_r, alpha=alpha_r, beta=beta_r)
    except (ValueError, ZeroDivisionError):
        return None


def _scales(n: int) -> list[float]:
    """Per-constraint normalization from the built-in row margins (n = 6 uses n = 5)."""
    ref_n = n if n in published.PARAM_ROWS else 5
    row = ParamSet.published_row(ref_n)
    margins = float_margins(
        n=ref_n,
        delta0=float(row.delta0),
        b=float(row.b),
        alpha=float(row.alpha),
        beta=float(row.beta),
    )
    names_ref = margin_names(ref_n)
    by_name = dict(zip(names_ref, margins))
    return [max(abs(by_name.get(name, 1.0)), 1e-9) for name in margin_names(n)]


def _objective_margin(n: int, delta0: float, vec: tuple[float, float, float], scales: list[float]) -> float:
    margins = float_margins(n, delta0, *vec)
    return min(m / s for m, s in zip(margins, scales))


def _coordinate_descent(
    n: int,
    delta0: float,
    start: tuple[float, float, float],
    box: dict[str, tuple[float, float]],
    scales: list[float],
    budget: _Budget,
    rounds: int,
    objective,
) -> tuple[tuple[float, float, float], float]:
    """Pattern-search descent maximizing ``objective`` over (b, alpha, beta)."""
    keys = ("b", "alpha", "beta")
    point = list(start)
    best = objective(n, delta0, tuple(point), scales)
    budget.spend()
    for _ in range(rounds):
        improved = False
        for idx, key in enumerate(keys):
            lo, hi = box[key]
            step = (hi - lo) / 8
            while step > (hi - lo) * 1e-5:
                if budget.exhausted:
                    return tuple(point), best
                moved = False
                for direction in (1.0, -1.0):
                    trial = list(point)
                    trial[idx] = min(hi, max(lo, point[idx] + direction * step))
                    if trial[idx] == point[idx]:
                        continue
                    if not budget.spend():
                        return tuple(point), best
                    val = objective(n, delta0, tuple(trial), scales)
                    if val > best:
                        best, point = val, trial
                        moved = improved = True
                        break
                if not moved:
                    step /= 2
        if not improved:
            break
    return tuple(point), best


def _starts(n: int, box: dict[str, tuple[float, float]], seeds: tuple[int, ...]) -> list[tuple[float, float, float]]:
    starts: list[tuple[float, float, float]] = []
    if n in published.PARAM_ROWS:
        row = published.PARAM_ROWS[n]
        starts.append((float(row["b"]), float(row["alpha"]), float(row["beta"])))
    center = tuple(math.sqrt(lo * hi) for lo, hi in (box["b"], box["alpha"], box["beta"]))
    starts.append(center)
    for seed in seeds:
        rng = random.Random(seed)
        starts.append(
            tuple(
                math.exp(rng.uniform(math.log(lo), math.log(hi)))
                for lo, hi in (box["b"], box["alpha"], box["beta"])
            )
        )
    return starts


def _search_at_delta0(
    n: int,
    delta0: Fraction,
    box: dict[str, tuple[float, float]],
    scales: list[float],
    budget: _Budget,
    config: SearchConfig,
    objective=_objective_margin,
) -> tuple[ParamSet | None, float, tuple[float, float, float] | None]:
    """Multistart inner search at a fixed rational delta0.

    Returns the first exactly-certified rounded candidate (best float score
    first), the best float score seen, and its float point.
    """
    results = []
    for start in _starts(n, box, config.seeds):
        if budget.exhausted:
            break
        point, score = _coordinate_descent(
            n, float(delta0), start, box, scales, budget, config.descent_rounds, objective
        )
        results.append((score, point))
    results.sort(key=lambda t: -t[0])
    best_score = results[0][0] if results else _BIG_NEGATIVE
    best_point = results[0][1] if results else None
    for score, point in results:
        if score <= 0:
            continue
        candidate = _round_params(n, delta0, *point, bound=config.denominator_bound)
        if candidate is None:
            continue
        if feasibility(candidate).all_satisfied:
            return candidate, best_score, best_point
    return None, best_score, best_point


def minimize_delta0(config: SearchConfig) -> SearchResult:
    """Smallest certified delta0 via outer bisection and exact recertification.

    For n with a built-in row the row is certified first (witness), so the
    result never does worse than it; for other n the search scans a coarse
    descending grid of delta0 candidates in (0, 1] and reports the best
    infeasibility margin profile if nothing certifies.
    """
    n = config.n
    box = config.box or default_box(n)
    scales = _scales(n)
    budget = _Budget(config.budget)
    notes: list[str] = []

    best_params: ParamSet | None = None
    best_delta0: Fraction | None = None
    if n in published.PARAM_ROWS:
        witness = ParamSet.published_row(n)
        if feasibility(witness).all_satisfied:
            best_params, best_delta0 = witness, witness.delta0
            notes.append(f"built-in row certified at delta0 = {rational_to_str(witness.delta0)}")
        else:  # pragma: no cover - the built-in rows always certify
            notes.append("built-in row failed exact certification")
        lo, hi = Fraction(0), best_delta0 if best_delta0 is not None else Fraction(1)
    else:
        lo, hi = Fraction(0), Fraction(1)
        best_profile: dict[str, float] | None = None
        for delta0 in (Fraction(1), Fraction(99, 100), Fraction(49, 50), Fraction(9, 10)):
            candidate, score, point = _search_at_delta0(n, delta0, box, scales, budget, config)
            if candidate is not None:
                best_params, best_delta0 = candidate, delta0
                hi = delta0
                notes.append(f"feasible row certified at delta0 = {rational_to_str(delta0)} (finding)")
                break
            if point is not None and (best_profile is None or score > best_profile.get("_score", _BIG_NEGATIVE)):
                margins = float_margins(n, float(delta0), *point)
                best_profile = {name: m for name, m in zip(margin_names(n), margins)}
                best_profile["_score"] = score
                best_profile["_delta0"] = float(delta0)
            if budget.exhausted:
                break
        if best_params is None:
            return SearchResult(
                n=n,
                objective="minimize_delta0",
                best_params=None,
                certified=False,
                delta0=None,
                epsilon=None,
                constraint_report=None,
                improvement_vs_published=None,
                evaluations_used=budget.used,
                notes=notes + ["no certified row found; margin profile reported"],
                best_margin_profile=best_profile,
            )

    for _ in range(config.bisection_steps):
        if budget.exhausted or hi - lo <= Fraction(1, 1 << 12):
            break
        mid = ((lo + hi) / 2).limit_denominator(4096)
        if not lo < mid < hi:
            break
        candidate, _, _ = _search_at_delta0(n, mid, box, scales, budget, config)
        if candidate is not None:
            best_params, best_delta0 = candidate, mid
            hi = mid
            notes.append(f"improved certified delta0 = {rational_to_str(mid)}")
        else:
            lo = mid

    assert best_params is not None and best_delta0 is not None
    rep = feasibility(best_params)
    eps = epsilon_of(best_params).epsilon
    improvement = published.DELTA0[n] - best_delta0 if n in published.DELTA0 else None
    return SearchResult(
        n=n,
        objective="minimize_delta0",
        best_params=best_params,
        certified=rep.all_satisfied,
        delta0=best_delta0,
        epsilon=eps,
        constraint_report=rep,
        improvement_vs_published=improvement,
        evaluations_used=budget.used,
        notes=notes,
    )


def maximize_epsilon(config: SearchConfig, delta0_fixed: Rat) -> SearchResult:
    """Largest exactly-certified epsilon at a fixed delta0.

    When delta0_fixed equals a built-in row's threshold the row itself seeds
    the search, so the result is never below the published epsilon.
    """
    n = config.n
    delta0 = Fraction(delta0_fixed)
    box = config.box or default_box(n)
    scales = _scales(n)
    budget = _Budget(config.budget)
    notes: list[str] = []

    def eps_objective(n_, d0, vec, scales_):
        margins = float_margins(n_, d0, *vec)
        worst = min(m / s for m, s in zip(margins, scales_))
        if worst <= 0:
            return worst  # infeasible: chase feasibility first
        return margins[margin_names(n_).index("epsilon")]

    best_params: ParamSet | None = None
    best_eps: Fraction | None = None
    if n in published.PARAM_ROWS and published.DELTA0[n] == delta0:
        witness = ParamSet.published_row(n)
        if feasibility(witness).all_satisfied:
            best_params, best_eps = witness, epsilon_of(witness).epsilon
            notes.append(f"built-in row certified with epsilon = {rational_to_str(best_eps)}")

    for start in _starts(n, box, config.seeds):
        if budget.exhausted:
            break
        point, _ = _coordinate_descent(
            n, float(delta0), start, box, scales, budget, config.descent_rounds, eps_objective
        )
        candidate = _round_params(n, delta0, *point, bound=config.denominator_bound)
        if candidate is None:
            continue
        rep = feasibility(candidate)
        if not rep.all_satisfied:
            continue
        eps = epsilon_of(candidate).epsilon
        if best_eps is None or eps > best_eps:
            best_params, best_eps = candidate, eps
            notes.append(f"improved epsilon = {rational_to_str(eps)}")

    if best_params is None:
        return SearchResult(
            n=n,
            objective="maximize_epsilon",
            best_params=None,
            certified=False,
            delta0=delta0,
            epsilon=None,
            constraint_report=None,
            improvement_vs_published=None,
            evaluations_used=budget.used,
            notes=notes + ["no certified row found at this delta0"],
        )
    rep = feasibility(best_params)
    improvement = best_eps - published.EPSILON[n] if n in published.EPSILON and published.DELTA0[n] == delta0 else None
    return SearchResult(
        n=n,
        objective="maximize_epsilon",
        best_params=best_params,
        certified=rep.all_satisfied,
        delta0=delta0,
        epsilon=best_eps,
        constraint_report=rep,
        improvement_vs_published=improvement,
        evaluations_used=budget.used,
        notes=notes,
    )


@dataclass(frozen=True)
class SensitivityRow:
    parameter: str
    constraint: str
    base_margin: Fraction
    derivative: Fraction  # symmetric difference quotient, exact
    binding: bool


def sensitivity_report(params: ParamSet, perturbation: Rat) -> list[SensitivityRow]:
    """One-at-a-time exact margin derivatives (symmetric difference, rational step).

    Includes the Young-parameter row: the squared-mean-curvature coefficient
    margin is exactly zero at L = L_max (the binding the chain allows).
    """
    h = Fraction(perturbation)
    base = feasibility(params)
    if not base.all_satisfied:
        raise bubble.InfeasibleParamsError("sensitivity analysis needs a feasible base row")
    strict = [e for e in base.entries if e.kind == "exact" and e.margin is not None]
    min_margin = min(e.margin for e in strict)
    rows: list[SensitivityRow] = []

    def with_param(name: str, value: Fraction) -> ParamSet:
        fields = {"a": params.a, "b": params.b, "alpha": params.alpha, "beta": params.beta}
        fields[name] = value
        return ParamSet(n=params.n, **fields)

    for pname in ("a", "b", "alpha", "beta"):
        base_value = getattr(params, pname)
        if h == 0:
            plus = minus = base
        else:
            plus = feasibility(with_param(pname, base_value + h))
            minus = feasibility(with_param(pname, base_value - h))
        for entry in strict:
            try:
                m_plus = plus.entry(entry.name).margin
                m_minus = minus.entry(entry.name).margin
            except KeyError:
                continue
            if m_plus is None or m_minus is None:
                continue
            derivative = (m_plus - m_minus) / (2 * h) if h != 0 else Fraction(0)
            rows.append(
                SensitivityRow(
                    parameter=pname,
                    constraint=entry.name,
                    base_margin=entry.margin,
                    derivative=derivative,
                    binding=entry.margin == min_margin,
                )
            )
    # the Young parameter binds exactly at L_max
    mcc = bubble.mean_curv_coeff(params.n, params.alpha, params.beta)
    L = bubble.l_max(params.n, params.q, params.alpha, params.beta)
    if L is not None:
        margin_at_lmax = bubble.hbar_coeff_margin(mcc, params.q, L)
        rows.append(
            SensitivityRow(
                parameter="L",
                constraint="hbar_coeff",
                base_margin=margin_at_lmax,
                derivative=-abs(Fraction(1, 2) - 1 / params.q) if h != 0 else Fraction(0),
                binding=True,
            )
        )
    return rows


def reverify(params_strings: dict[str, str]) -> tuple[ParamSet, ConstraintReport]:
    """Re-run exact feasibility from serialized parameter strings alone."""
    params = ParamSet(
        n=int(params_strings["n"]),
        a=Fraction(params_strings["a"]),
        b=Fraction(params_strings["b"]),
        alpha=Fraction(params_strings["alpha"]),
        beta=Fraction(params_strings["beta"]),
    )
    return params, feasibility(params)
