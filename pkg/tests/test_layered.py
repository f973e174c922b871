import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from lattice_secrecy.layered import (
    STRONG_LIMIT,
    WEAK_LIMIT,
    Regime,
    RegimeError,
    alpha_strong,
    alpha_weak,
    build_plan,
    dof,
    fig2_dataset,
    finite_m_dof,
    growth,
    layers_for_power,
    modsum_layer_bound,
    own_layer_bound,
    per_layer_rate,
    per_layer_secrecy_rate,
    qbit_dof,
    regime_for,
    sdof,
    sdof_zero_crossing,
    strong_discriminant,
)

# Frozen with mpmath at 40 digits.
ALPHA_01 = 84.40763653560052532111
GROWTH_01 = 178.2560367247611031743
RATE_01 = 1.619451781204807371524
SECRET_01 = 0.309725890602403685762
DOF_01 = 1.299406433602516673351
SDOF_01 = 0.248516084006291683378
P3_01 = 2697201.345624758804965
ALPHA_BOUNDARY = 2.060660171779821286601
RATE_4 = 0.694241913630617301739
DOF_4 = 1.102856011169720095488
SDOF_9 = 0.089248635353608935571
QBIT_8 = 0.207518749639421909273

strong_b2 = st.floats(1e-4, STRONG_LIMIT * (1 - 1e-9))
weak_b2 = st.floats(WEAK_LIMIT * (1 + 1e-9), 1e4)


def strong_balance_gap(alpha, b2):
    """Difference of the two decodability arguments at P_i = alpha, A_i = 1."""
    return (0.5 + alpha / (b2 * alpha + 1)) - (1 + b2 * alpha)


def weak_balance_gap(alpha, b2):
    return (1 + b2 * alpha / (2 * alpha + 1)) - (0.5 + alpha)


class TestAlpha:
    def test_strong_value(self):
        assert alpha_strong(0.1) == pytest.approx(ALPHA_01, rel=1e-13)

    def test_strong_solves_balance_equation(self):
        # independent root of the rate-balance equation
        root = brentq(strong_balance_gap, 1.0, 1e4, args=(0.1,), xtol=1e-14)
        assert alpha_strong(0.1) == pytest.approx(root, rel=1e-12)

    def test_strong_boundary(self):
        assert abs(strong_discriminant(STRONG_LIMIT)) < 1e-9
        # sqrt of a rounding-level discriminant perturbs alpha by ~1e-7
        assert alpha_strong(STRONG_LIMIT) == pytest.approx(ALPHA_BOUNDARY, rel=1e-6)
        assert STRONG_LIMIT == pytest.approx(0.34315, abs=1e-5)

    def test_strong_small_gain_asymptote(self):
        b2 = 1e-6
        assert alpha_strong(b2) * b2 * b2 == pytest.approx(1.0, abs=1e-5)

    def test_strong_rejects_beyond_limit(self):
        with pytest.raises(RegimeError):
            alpha_strong(0.35)

    @pytest.mark.parametrize("b2,expected", [(1.5, 1.0), (4.0, 2.118033988749895), (9.0, 4.554886114323222)])
    def test_weak_values(self, b2, expected):
        assert alpha_weak(b2) == pytest.approx(expected, rel=1e-13)

    def test_weak_solves_balance_equation(self):
        root = brentq(weak_balance_gap, 1.0, 100.0, args=(4.0,), xtol=1e-14)
        assert alpha_weak(4.0) == pytest.approx(root, rel=1e-12)

    def test_weak_rejects_below_limit(self):
        with pytest.raises(RegimeError):
            alpha_weak(1.4)

    @given(strong_b2)
    def test_strong_feasible(self, b2):
        assert (1 - b2) * alpha_strong(b2) >= 1

    @given(weak_b2)
    def test_weak_feasible(self, b2):
        assert alpha_weak(b2) > 1


class TestRegime:
    @pytest.mark.parametrize("b2", [0.3431457505076194, 0.5, 1.0, 1.5])
    def test_gap(self, b2):
        with pytest.raises(RegimeError):
            regime_for(b2)

    def test_sides(self):
        assert regime_for(0.34) is Regime.STRONG
        assert regime_for(1.5000001) is Regime.WEAK


class TestBuildPlan:
    def test_total_power(self):
        plan = build_plan(0.1, 3)
        assert plan.total_power == pytest.approx(P3_01, rel=1e-12)
        assert plan.total_power_closed_form == pytest.approx(P3_01, rel=1e-12)

    @pytest.mark.parametrize("b2", [0.05, 0.2, 2.0, 30.0])
    def test_single_layer_power_is_alpha(self, b2):
        plan = build_plan(b2, 1)
        assert plan.total_power == pytest.approx(plan.alpha, rel=1e-15)

    def test_accumulation_ratio(self):
        plan = build_plan(0.1, 4)
        assert plan.A_i[3] / plan.A_i[2] == pytest.approx(GROWTH_01, rel=1e-12)

    def test_gap_raises(self):
        with pytest.raises(RegimeError):
            build_plan(1.0, 3)

    def test_rejects_zero_layers(self):
        with pytest.raises(ValueError):
            build_plan(0.1, 0)

    @given(st.one_of(strong_b2, weak_b2), st.integers(1, 20))
    def test_allocation_identities(self, b2, M):
        plan = build_plan(b2, M)
        assert plan.total_power == pytest.approx(plan.total_power_closed_form, rel=1e-10)
        # accumulated interference by direct summation
        acc = 1.0
        for i in range(M):
            assert plan.A_i[i] == pytest.approx(acc, rel=1e-10)
            assert plan.P_i[i] == pytest.approx(plan.alpha * plan.A_i[i], rel=1e-12)
            acc += plan.beta * plan.P_i[i]

    @given(st.one_of(strong_b2, weak_b2), st.integers(1, 20))
    def test_rate_balance(self, b2, M):
        plan = build_plan(b2, M)
        closed = per_layer_rate(b2)
        for p, a, r in zip(plan.P_i, plan.A_i, plan.R_layer):
            assert modsum_layer_bound(b2, p, a, plan.regime) == pytest.approx(r, abs=1e-9)
            assert r == pytest.approx(closed, abs=1e-9)

    @given(st.one_of(strong_b2, weak_b2), st.integers(1, 20))
    def test_sum_rate_telescopes(self, b2, M):
        plan = build_plan(b2, M)
        A_next = plan.A_i[-1] * (plan.alpha * plan.beta + 1)
        telescoped = 0.5 * (0.5 * math.log2(A_next) - 0.5 * M)
        assert plan.sum_rate == pytest.approx(telescoped, rel=1e-9)
        assert plan.sum_rate == pytest.approx(M * per_layer_rate(b2), rel=1e-9)


class TestLayersForPower:
    def test_weak_example(self):
        M = layers_for_power(4.0, 100.0)
        assert M == 2
        assert build_plan(4.0, M).total_power <= 100.0 < build_plan(4.0, M + 1).total_power

    @given(st.one_of(strong_b2, weak_b2), st.floats(1.0, 1e50))
    def test_inversion_brackets_budget(self, b2, power):
        try:
            M = layers_for_power(b2, power)
        except ValueError:
            assert power < build_plan(b2, 1).total_power
            return
        assert build_plan(b2, M).total_power <= power * (1 + 1e-12)
        g = growth(b2)
        assert (g ** (M + 1) - 1) / (b2 + 2) > power


class TestRates:
    def test_strong(self):
        assert per_layer_rate(0.1) == pytest.approx(RATE_01, rel=1e-12)
        assert per_layer_secrecy_rate(0.1) == pytest.approx(SECRET_01, rel=1e-12)

    def test_weak_both_sides(self):
        assert per_layer_rate(4.0) == pytest.approx(RATE_4, rel=1e-12)
        a = alpha_weak(4.0)
        assert own_layer_bound(4.0, a, 1.0, Regime.WEAK) == pytest.approx(RATE_4, rel=1e-12)
        assert modsum_layer_bound(4.0, a, 1.0, Regime.WEAK) == pytest.approx(RATE_4, rel=1e-12)

    def test_gap_raises(self):
        with pytest.raises(RegimeError):
            per_layer_rate(1.0)

    def test_regime_mismatch(self):
        with pytest.raises(RegimeError):
            per_layer_rate(0.1, Regime.WEAK)


class TestDoF:
    def test_values(self):
        assert dof(0.1) == pytest.approx(DOF_01, rel=1e-12)
        assert sdof(0.1) == pytest.approx(SDOF_01, rel=1e-12)
        assert dof(4.0) == pytest.approx(DOF_4, rel=1e-12)
        assert sdof(4.0) == 0.0
        assert sdof(9.0) == pytest.approx(SDOF_9, rel=1e-12)

    def test_small_gain_limit(self):
        assert abs(dof(1e-8) - 1.5) < 0.1
        assert dof(1e-8) > dof(1e-6) > dof(1e-4)

    def test_monotone_towards_limits(self):
        strong = [dof(v) for v in np.geomspace(0.34, 1e-10, 60)]
        weak = [dof(v) for v in np.geomspace(1.51, 1e10, 60)]
        for seq in (strong, weak):
            assert all(b > a for a, b in zip(seq, seq[1:]))
            assert seq[-1] < 1.5
        s_strong = [sdof(v) for v in np.geomspace(0.34, 1e-10, 60)]
        assert all(b >= a for a, b in zip(s_strong, s_strong[1:]))
        assert s_strong[-1] < 0.75

    @given(st.one_of(strong_b2, weak_b2))
    def test_ranges(self, b2):
        assert 0 < dof(b2) < 1.5
        assert 0 <= sdof(b2) < 0.75

    @pytest.mark.parametrize("b2", [0.01, 0.1, 0.3, 2.0, 9.0, 100.0])
    def test_finite_m_ratio_converges(self, b2):
        assert finite_m_dof(b2, 50) == pytest.approx(dof(b2), rel=0.02)


class TestZeroCrossing:
    def test_strong(self):
        # alpha*beta = 31 has the rational root b2 = 3/14 (alpha = 14)
        assert sdof_zero_crossing(Regime.STRONG) == pytest.approx(3 / 14, rel=1e-9)

    def test_weak(self):
        # alpha = 7/2 at b2 = 48/7
        assert sdof_zero_crossing(Regime.WEAK) == pytest.approx(48 / 7, rel=1e-9)

    @pytest.mark.parametrize("regime", list(Regime))
    def test_sign_change(self, regime):
        x = sdof_zero_crossing(regime)
        lo, hi = sdof(x * 0.9), sdof(x * 1.1)
        assert (lo > 0) != (hi > 0)


class TestQbit:
    def test_values(self):
        assert qbit_dof(3, 36.0) == pytest.approx(0.75, rel=1e-14)
        assert qbit_dof(3, 6.0) == pytest.approx(0.0, abs=1e-15)
        assert qbit_dof(3, 8.0) == pytest.approx(QBIT_8, rel=1e-13)

    def test_clamped(self):
        assert qbit_dof(3, 2.0) == 0.0

    @pytest.mark.parametrize("b", [1.0, 0.5])
    def test_domain(self, b):
        with pytest.raises(ValueError):
            qbit_dof(3, b)


class TestFig2:
    def test_rows(self):
        rows = fig2_dataset([0.1, 1.0, 1296.0])
        assert rows[0].regime is Regime.STRONG
        assert rows[0].dof == pytest.approx(DOF_01, rel=1e-12)
        assert rows[0].sdof == pytest.approx(SDOF_01, rel=1e-12)
        assert rows[0].qbit_dof is None
        gap = rows[1]
        assert (gap.regime, gap.alpha, gap.beta, gap.dof, gap.sdof) == (None,) * 5
        assert rows[2].qbit_dof == pytest.approx(0.75, rel=1e-14)

    def test_parallel_matches_serial(self):
        grid = np.geomspace(1e-4, 1e4, 101)
        assert fig2_dataset(grid, workers=4) == fig2_dataset(grid)

    def test_only_three_users(self):
        with pytest.raises(ValueError):
            fig2_dataset([0.1], K=4)
