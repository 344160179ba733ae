from fractions import Fraction as F

import mpmath
import pytest

from stabcert import published
from stabcert.bubble import (
    InfeasibleParamsError,
    barrier_ode_check,
    certify_chain,
    derive,
    gamma0,
    growth_constants,
    hbar_coeff_margin,
    l_max,
    mean_curv_coeff,
    quadform_lower_bound_check,
    spectral_coeff,
    spectral_coeff_check,
    surd_identities_check,
    x0_y0,
)
from stabcert.curvature import ParamSet


def row(n):
    return ParamSet.published_row(n)


def eps(n):
    return published.EPSILON[n]


class TestSpectral:
    def test_row4(self):
        report = spectral_coeff_check(row(4))
        assert report.all_satisfied
        assert spectral_coeff(row(4).q, row(4).alpha, row(4).beta) == F(15625, 7854)
        assert report.entry("spectral_coeff_bound").margin == F(83, 7854)

    def test_row5(self):
        report = spectral_coeff_check(row(5))
        assert report.all_satisfied
        assert report.entry("spectral_coeff_bound").margin == F(1893, 4800350)

    def test_row3_bound_not_applicable(self):
        report = spectral_coeff_check(row(3))
        assert report.all_satisfied
        assert report.entry("spectral_coeff_bound").kind == "info"

    def test_pole_at_q_equal_4(self):
        with pytest.raises(InfeasibleParamsError):
            spectral_coeff(F(4), F(1), F(1))
        # the report form flags it instead of raising
        bad = ParamSet(3, F(1), F(4), F(1), F(1))  # q = 4
        report = spectral_coeff_check(bad)
        assert not report.entry("q_below_4").satisfied


class TestMeanCurvature:
    def test_values(self):
        assert mean_curv_coeff(3, F(18, 11), F(3, 2)) == F(17, 22)
        assert mean_curv_coeff(4, F(51, 50), F(5, 4)) == F(10423, 21375)
        assert mean_curv_coeff(5, F(31, 40), F(207, 250)) == F(313487, 1089648)

    def test_numerator_vanishing_boundary(self):
        # at n = 3 the coefficient reduces to (2 beta + alpha)/(4 beta); the
        # alpha = 2 beta point where 4 beta^2 - alpha^2 = 0 also zeroes the
        # denominator and sits outside the precondition
        assert mean_curv_coeff(3, F(199, 100), F(1)) == (2 + F(199, 100)) / 4
        with pytest.raises(InfeasibleParamsError):
            mean_curv_coeff(3, F(2), F(1))

    def test_precondition(self):
        with pytest.raises(InfeasibleParamsError):
            mean_curv_coeff(3, F(3), F(1))  # alpha/beta = 3 >= 2 = (n-1)/(n-2)


class TestQuadFormBound:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_clean_and_tight(self, n):
        p = row(n)
        report = quadform_lower_bound_check(p.n, p.alpha, p.beta, sample_count=400, seed=3)
        assert report.all_satisfied

    def test_zero_case(self):
        # mu1 = H = 0 trivially passes; included in the sampled sweep
        report = quadform_lower_bound_check(3, F(18, 11), F(3, 2), sample_count=10, seed=0)
        assert report.all_satisfied


class TestYoungParameter:
    def test_l_max_rows(self):
        for n in (3, 4, 5):
            p = row(n)
            assert l_max(p.n, p.q, p.alpha, p.beta) == published.L_VALUES[n]

    def test_row3_margin_identity(self):
        # 17/22 - 9/20 - (71/11)(1/20) = 0 exactly
        assert F(17, 22) - F(9, 20) - F(71, 11) * F(1, 20) == 0
        assert hbar_coeff_margin(F(17, 22), F(20, 11), F(71, 11)) == 0

    def test_margin_positive_below_l_max(self):
        p = row(4)
        mcc = mean_curv_coeff(p.n, p.alpha, p.beta)
        L = l_max(p.n, p.q, p.alpha, p.beta)
        assert hbar_coeff_margin(mcc, p.q, L) == 0
        assert hbar_coeff_margin(mcc, p.q, L - F(1, 100)) > 0
        assert hbar_coeff_margin(mcc, p.q, L + F(1, 100)) < 0

    def test_unconstrained_at_q_two(self):
        # q = 2: the cross term vanishes; any Young parameter works
        assert l_max(3, F(2), F(18, 11), F(3, 2)) is None
        bare, with_ratio = gamma0(3, F(2), None, F(18, 11), F(3, 2))
        assert bare == F(1, 2)
        assert with_ratio == F(1, 2) * F(3, 2) / F(18, 11)

    def test_nonpositive_numerator_rejected(self):
        # mcc = 5/8 at (beta, alpha) = (1, 1/2); q = 3 makes the numerator negative
        with pytest.raises(InfeasibleParamsError):
            l_max(3, F(3), F(1, 2), F(1))

    def test_l_max_decreasing_in_half_term(self):
        import random

        rng = random.Random(6)
        for _ in range(50):
            mcc = F(rng.randrange(1, 30), rng.randrange(20, 40))
            q1 = F(rng.randrange(21, 35), 10)  # > 2
            q2 = q1 + F(rng.randrange(1, 10), 10)
            num = mcc + 1 / q1 - 1
            if num <= 0:
                continue
            h1, h2 = abs(F(1, 2) - 1 / q1), abs(F(1, 2) - 1 / q2)
            assert h2 > h1
            assert num / h2 < num / h1  # larger |1/2 - 1/q| shrinks L_max at fixed numerator


class TestGamma0:
    def test_rows_bare_match_published(self):
        for n in (3, 4, 5):
            p = row(n)
            L = l_max(p.n, p.q, p.alpha, p.beta)
            bare, with_ratio = gamma0(p.n, p.q, L, p.alpha, p.beta)
            assert bare == published.GAMMA0[n]
            assert with_ratio == bare * p.beta / p.alpha

    def test_row3_with_ratio_value(self):
        p = row(3)
        L = l_max(p.n, p.q, p.alpha, p.beta)
        _, with_ratio = gamma0(p.n, p.q, L, p.alpha, p.beta)
        assert with_ratio == F(77, 142) * F(11, 12) == F(847, 1704)


class TestBarrier:
    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("convention", ["bare", "with_ratio"])
    def test_surd_identities(self, n, convention):
        p = row(n)
        constants = derive(p, eps(n))
        branch = constants.branch(convention)
        report = surd_identities_check(p.alpha, p.beta, eps(n), branch.gamma0, branch.x0, branch.y0)
        assert report.all_satisfied

    def test_scaling_in_epsilon(self):
        p = row(3)
        g = published.GAMMA0[3]
        x1, y1 = x0_y0(p.n, p.alpha, p.beta, eps(3), g)
        x4, y4 = x0_y0(p.n, p.alpha, p.beta, 4 * eps(3), g)
        assert x4.square() == 4 * x1.square() and x4.sign() == x1.sign()
        assert y4.square() == 4 * y1.square() and y4.sign() == y1.sign()

    def test_nonpositive_inputs_rejected(self):
        with pytest.raises(InfeasibleParamsError):
            x0_y0(3, F(1), F(1), F(-1), F(1))
        with pytest.raises(InfeasibleParamsError):
            x0_y0(3, F(1), F(1), F(1), F(0))

    def test_ode_residuals_row3(self):
        constants = derive(row(3), eps(3))
        for branch in constants.branches:
            report = barrier_ode_check(branch.x0, branch.y0, sample_count=100)
            assert report.all_satisfied, report.entries[0].detail

    def test_ode_midpoint_and_oddness(self):
        constants = derive(row(3), eps(3))
        branch = constants.branch("bare")
        with mpmath.workdps(50):
            x0 = branch.x0.approx_mp()
            y0 = branch.y0.approx_mp()

            def eta(t):
                return -x0 * mpmath.tan(y0 * t - mpmath.pi / 2)

            mid = mpmath.pi / (2 * y0)
            assert abs(eta(mid)) < mpmath.mpf("1e-45")
            t = mpmath.pi / (5 * y0)
            assert abs(eta(t) + eta(mpmath.pi / y0 - t)) < mpmath.mpf("1e-40")


class TestGrowthConstants:
    def test_row3_prefactor_is_two(self):
        # (n-2) alpha / eps = (18/11)/(9/11) = 2; area factor 2 * Area(S^2) = 8 pi
        p = row(3)
        assert (p.n - 2) * p.alpha / eps(3) == 2
        constants = derive(p, eps(3))
        area = mpmath.mpf(constants.branch("bare").area_const.value)
        assert abs(area - 8 * mpmath.pi) / (8 * mpmath.pi) < 1e-10

    def test_epsilon_doubling_halves_base(self):
        p = row(3)
        g = published.GAMMA0[3]
        _, y0 = x0_y0(p.n, p.alpha, p.beta, eps(3), g)
        area1, _ = growth_constants(p.n, p.alpha, eps(3), y0)
        area2, _ = growth_constants(p.n, p.alpha, 2 * eps(3), y0)
        ratio = mpmath.mpf(area1.value) / mpmath.mpf(area2.value)
        assert abs(ratio - 2) < 1e-9  # exponent (n-1)/2 = 1 at n = 3

    def test_volume_positive_and_annotated(self):
        constants = derive(row(4), eps(4))
        for branch in constants.branches:
            assert branch.volume_const.digits == 12
            assert mpmath.mpf(branch.volume_const.value) > 0


def test_certify_chain_assembles_flag_and_targets():
    p = row(5)
    constants, checks, targets, flags, values = certify_chain(
        p, eps(5), quadform_samples=50, barrier_samples=20
    )
    assert constants.L_max == published.L_VALUES[5]
    assert any(f["name"] == "gamma0_convention_divergence" for f in flags)
    by_q = {t.quantity: t for t in targets}
    assert by_q["L"].match and by_q["gamma0"].match
    assert all(c.status == "pass" for c in checks)
    assert values["gamma0_with_ratio"] == "138273723/165829628350"
