"""Tests for the level/mantissa tower representation of huge magnitudes."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expbouquet.towerfloat import (
    H,
    LN_H,
    TowerReal,
    tf_cmp,
    tf_exp,
    tf_from_real,
    tf_ln,
)

representable = st.floats(
    allow_nan=False, allow_infinity=False, min_value=-9.9e14, max_value=1.7e308
)


class TestConstruction:
    def test_level_zero_holds_any_finite_mantissa(self):
        t = TowerReal(0, -123.5)
        assert t.level == 0 and t.mantissa == -123.5

    def test_positive_level_requires_large_mantissa(self):
        with pytest.raises(ValueError):
            TowerReal(1, 1.0)
        assert TowerReal(1, LN_H).mantissa == LN_H

    def test_negative_level_rejected(self):
        with pytest.raises(ValueError):
            TowerReal(-1, 0.0)

    def test_non_finite_mantissa_rejected(self):
        with pytest.raises(ValueError):
            TowerReal(0, math.nan)
        with pytest.raises(ValueError):
            TowerReal(0, math.inf)


class TestFromReal:
    def test_exact_below_threshold(self):
        assert TowerReal.from_real(123.5) == TowerReal(0, 123.5)
        assert TowerReal.from_real(-9e14) == TowerReal(0, -9e14)

    def test_promotes_at_threshold(self):
        assert TowerReal.from_real(H) == TowerReal(1, LN_H)
        t = TowerReal.from_real(2e306)
        assert t.level == 1 and t.mantissa == math.log(2e306)

    def test_rejects_unrepresentable(self):
        with pytest.raises(ValueError):
            TowerReal.from_real(-H)
        with pytest.raises(ValueError):
            TowerReal.from_real(math.inf)
        with pytest.raises(ValueError):
            TowerReal.from_real(math.nan)


class TestExp:
    def test_small_mantissa_goes_through_floats(self):
        assert TowerReal.from_real(0.0).exp() == TowerReal.from_real(1.0)

    def test_promoting_mantissa(self):
        t = TowerReal.from_real(40.0).exp()
        assert t.level == 1
        assert t.mantissa == pytest.approx(40.0, rel=1e-12)

    def test_large_mantissa_lifts_level_exactly(self):
        assert TowerReal(0, 800.0).exp() == TowerReal(1, 800.0)
        assert TowerReal(1, 800.0).exp() == TowerReal(2, 800.0)


class TestExpPlus:
    def test_matches_float_arithmetic_in_range(self):
        got = TowerReal.from_real(10.0).exp_plus(2.0)
        assert got.value() == pytest.approx(math.exp(10.0) + 2.0, rel=1e-12)

    def test_small_values_stay_exact(self):
        assert TowerReal.from_real(0.0).exp_plus(2.0) == TowerReal.from_real(3.0)

    def test_correction_dropped_past_direct_range(self):
        assert TowerReal(0, 710.0).exp_plus(5.0) == TowerReal(1, 710.0)

    def test_high_level_keeps_mantissa(self):
        assert TowerReal(1, 50.0).exp_plus(3.0) == TowerReal(2, 50.0)

    def test_negative_correction_rejected(self):
        with pytest.raises(ValueError):
            TowerReal.from_real(1.0).exp_plus(-0.5)


class TestLn:
    def test_inverse_of_exp_on_floats(self):
        assert TowerReal.from_real(math.e).ln().mantissa == pytest.approx(1.0)

    def test_drops_level_exactly(self):
        assert TowerReal(1, 50.0).ln() == TowerReal(0, 50.0)
        assert TowerReal(2, 50.0).ln() == TowerReal(1, 50.0)

    def test_non_positive_rejected(self):
        with pytest.raises(ValueError):
            TowerReal(0, 0.0).ln()
        with pytest.raises(ValueError):
            TowerReal(0, -3.0).ln()


class TestCompareAndValue:
    def test_orders_levels_then_mantissas(self):
        assert TowerReal.from_real(3.0).cmp(TowerReal.from_real(4.0)) == -1
        assert TowerReal(1, LN_H).cmp(TowerReal(0, 9e14)) == 1
        assert TowerReal(1, 40.0).cmp(TowerReal(1, 40.0)) == 0

    def test_rich_comparisons(self):
        small, big = TowerReal.from_real(1.0), TowerReal(2, 40.0)
        assert small < big and small <= big and big > small and big >= small

    def test_value(self):
        assert TowerReal.from_real(5.0).value() == 5.0
        assert TowerReal(1, 40.0).value() == math.exp(40.0)
        assert TowerReal(1, 800.0).value() == math.inf
        assert TowerReal(2, 40.0).value() == math.inf

    def test_str(self):
        assert str(TowerReal(1, 40.0)) == "T(1;40)"


class TestWrappers:
    def test_functions_match_methods(self):
        t = tf_from_real(12.0)
        assert t == TowerReal.from_real(12.0)
        assert tf_exp(t) == t.exp()
        assert tf_ln(t) == t.ln()
        assert tf_cmp(t, tf_exp(t)) == -1


class TestProperties:
    @given(representable)
    def test_value_round_trip(self, x):
        t = TowerReal.from_real(x)
        if abs(x) < H:
            assert t.value() == x

    @given(representable, representable)
    def test_cmp_matches_float_order(self, x, y):
        want = (x > y) - (x < y)
        assert TowerReal.from_real(x).cmp(TowerReal.from_real(y)) == want

    @given(representable, representable)
    def test_exp_never_inverts_order(self, x, y):
        tx, ty = TowerReal.from_real(x), TowerReal.from_real(y)
        c = tx.exp().cmp(ty.exp())
        assert c * tx.cmp(ty) >= 0

    @given(st.floats(min_value=-690.0, max_value=690.0))
    def test_ln_exp_round_trip(self, x):
        t = TowerReal.from_real(x)
        r = t.exp().ln()
        assert r.level == t.level
        assert r.mantissa == pytest.approx(x, rel=1e-12, abs=1e-12)

    @given(
        st.floats(min_value=-300.0, max_value=300.0),
        st.floats(min_value=0.0, max_value=1e6),
    )
    def test_exp_plus_matches_float_sum(self, x, c):
        got = TowerReal.from_real(x).exp_plus(c)
        assert got.value() == pytest.approx(math.exp(x) + c, rel=1e-12)

    @given(representable, st.floats(min_value=0.0, max_value=1e6))
    def test_exp_plus_dominates_exp(self, x, c):
        t = TowerReal.from_real(x)
        assert t.exp_plus(c).cmp(t.exp()) >= 0
