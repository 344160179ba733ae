from fractions import Fraction as F

import pytest

from stabcert import published
from stabcert.curvature import ParamSet, epsilon_of
from stabcert.optimize import (
    SearchConfig,
    default_box,
    feasibility,
    float_margins,
    margin_names,
    maximize_epsilon,
    minimize_delta0,
    reverify,
    sensitivity_report,
)


def row(n):
    return ParamSet.published_row(n)


class TestFeasibility:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_builtin_rows_feasible(self, n):
        report = feasibility(row(n))
        assert report.all_satisfied, [e.name for e in report.failures()]

    def test_exact_spectral_margin_recorded(self):
        assert feasibility(row(4)).entry("spectral_bound").margin == F(83, 7854)
        assert feasibility(row(5)).entry("spectral_bound").margin == F(1893, 4800350)

    def test_alpha_bumped_to_3_fails(self):
        p = row(3)
        bad = ParamSet(3, p.a, p.b, F(3), p.beta)
        report = feasibility(bad)
        assert not report.all_satisfied
        assert not report.entry("hessian_fyy").satisfied  # 2a = 20/11 < 3

    def test_tiny_b_fails(self):
        # keep delta0 = 1/3, so a shrinks with b and the Hessian collapses
        p = row(3)
        bad = ParamSet(3, F(1, 300), F(1, 100), p.alpha, p.beta)
        report = feasibility(bad)
        assert not report.all_satisfied
        assert not report.entry("hessian_fxx").satisfied

    def test_undefined_margins_reported_not_raised(self):
        bad = ParamSet(3, F(5), F(1), F(3), F(1))  # ricci denominator 2 - 3 < 0
        report = feasibility(bad)
        assert not report.all_satisfied
        assert report.entry("young_numerator").margin is None

    def test_binding_info_entry(self):
        report = feasibility(row(3))
        entry = report.entry("hbar_coeff_at_l_max")
        assert entry.kind == "info" and entry.margin == 0


class TestFloatMirror:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_matches_exact_margins(self, n):
        p = row(n)
        exact = feasibility(p)
        approx = float_margins(n, float(p.delta0), float(p.b), float(p.alpha), float(p.beta))
        for name, value in zip(margin_names(n), approx):
            truth = exact.entry(name).margin
            assert value == pytest.approx(float(truth), rel=1e-9, abs=1e-12), name

    def test_infeasible_region_padded(self):
        values = float_margins(4, 0.5, 1.0, 50.0, 0.01)
        assert len(values) == len(margin_names(4))
        assert min(values) < 0


class TestMinimizeDelta0:
    def test_never_worse_than_builtin_row(self):
        result = minimize_delta0(SearchConfig(n=3, budget=4000, seeds=(0, 1)))
        assert result.certified
        assert result.delta0 <= F(1, 3)
        assert result.improvement_vs_published >= 0
        assert result.evaluations_used <= 4000

    def test_deterministic(self):
        cfg = dict(n=4, budget=3000, seeds=(5, 6))
        a = minimize_delta0(SearchConfig(**cfg))
        b = minimize_delta0(SearchConfig(**cfg))
        assert a.delta0 == b.delta0
        assert a.best_params == b.best_params
        assert a.evaluations_used == b.evaluations_used

    def test_certified_result_passes_full_downstream_chain(self):
        # feasibility margins imply the whole barrier chain works on found rows
        from stabcert.bubble import certify_chain

        result = minimize_delta0(SearchConfig(n=3, budget=3000, seeds=(2,)))
        assert result.certified
        eps = epsilon_of(result.best_params).epsilon
        _, checks, targets, _, _ = certify_chain(
            result.best_params, eps, quadform_samples=50, barrier_samples=20
        )
        assert all(c.status == "pass" for c in checks)
        assert targets == []  # published targets only apply to the built-in rows

    def test_certified_result_reverifies_exactly(self):
        result = minimize_delta0(SearchConfig(n=3, budget=3000, seeds=(0,)))
        assert result.certified
        params, report = reverify(result.best_params.as_strings())
        assert params == result.best_params
        assert report.all_satisfied
        original = {e.name: e.margin for e in result.constraint_report.entries}
        replayed = {e.name: e.margin for e in report.entries}
        assert original == replayed

    def test_open_dimension_probe_reports_profile(self):
        result = minimize_delta0(SearchConfig(n=6, budget=2500, seeds=(0,)))
        if result.certified:  # would be a finding; surface loudly
            pytest.fail(f"unexpected certified n=6 row: {result.best_params}")
        assert result.best_margin_profile is not None
        assert "_delta0" in result.best_margin_profile


class TestMaximizeEpsilon:
    def test_witness_dominance_row3(self):
        result = maximize_epsilon(SearchConfig(n=3, budget=3000, seeds=(0,)), F(1, 3))
        assert result.certified
        assert result.epsilon >= published.EPSILON[3]

    def test_witness_dominance_row5(self):
        result = maximize_epsilon(SearchConfig(n=5, budget=2500, seeds=(0,)), F(21, 22))
        assert result.certified
        assert result.epsilon >= published.EPSILON[5]

    def test_result_epsilon_is_exact(self):
        result = maximize_epsilon(SearchConfig(n=4, budget=2000, seeds=(1,)), F(1, 2))
        assert result.epsilon == epsilon_of(result.best_params).epsilon


class TestSensitivity:
    def test_zero_perturbation_zero_derivatives(self):
        rows = sensitivity_report(row(3), F(0))
        assert rows and all(r.derivative == 0 for r in rows)

    def test_young_binding_row(self):
        rows = sensitivity_report(row(3), F(1, 1000))
        young = [r for r in rows if r.parameter == "L"]
        assert len(young) == 1
        assert young[0].base_margin == 0 and young[0].binding

    def test_beta_perturbation_moves_epsilon(self):
        rows = sensitivity_report(row(4), F(1, 1000))
        eps_row = next(r for r in rows if r.parameter == "beta" and r.constraint == "epsilon")
        assert eps_row.derivative != 0

    def test_infeasible_base_rejected(self):
        from stabcert.bubble import InfeasibleParamsError

        bad = ParamSet(3, F(1, 300), F(1, 100), F(18, 11), F(3, 2))
        with pytest.raises(InfeasibleParamsError):
            sensitivity_report(bad, F(1, 1000))


def test_rounding_respects_denominator_bound():
    import random

    from stabcert.optimize import _round_params

    rng = random.Random(21)
    for _ in range(300):
        b, alpha, beta = (rng.uniform(0.05, 5.0) for _ in range(3))
        bound = rng.choice([10, 1000, 10**6])
        params = _round_params(3, F(1, 3), b, alpha, beta, bound)
        assert params is not None
        for value, raw in ((params.b, b), (params.alpha, alpha), (params.beta, beta)):
            assert value.denominator <= bound
            assert abs(float(value) - raw) <= 1.0 / bound
        assert params.delta0 == F(1, 3)  # a = delta0 * b holds exactly after rounding


def test_rounding_recovers_builtin_row_from_floats():
    from stabcert.optimize import _round_params

    p = ParamSet.published_row(5)
    rounded = _round_params(5, F(21, 22), float(p.b), float(p.alpha), float(p.beta), 10**6)
    assert rounded == p


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(n=3, denominator_bound=1)
    with pytest.raises(ValueError):
        SearchConfig(n=3, budget=0)
    with pytest.raises(ValueError):
        SearchConfig(n=3, objective="noise")
    with pytest.raises(ValueError):
        default_box(9)
