"""Tests for external addresses, hair tracing, and separation machinery."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expbouquet.classify import FastEscaping, classify_point, find_cycle
from expbouquet.expmap import Params, eval_map
from expbouquet.symbolic import (
    ExternalAddress,
    Membership,
    PreconditionError,
    SeparationConfig,
    endpoint_estimate,
    find_domination_index,
    inverse_branch,
    itinerary,
    real_part_margin,
    separating_set_membership,
    separation_index,
    strip_index,
    trace_hair,
)

P2 = Params(a=-2 + 0j)

REPELLING_FP = 1.1461932206205827
STRIP1_FP = complex(2.1310754576665873, 7.341435092197778)


class TestExternalAddress:
    def test_parse_and_str_round_trip(self):
        s = ExternalAddress.parse("0,1|2,3")
        assert s.prefix == (0, 1) and s.tail == (2, 3)
        assert str(s) == "0,1|2,3"
        assert ExternalAddress.parse(str(s)) == s

    def test_empty_prefix(self):
        s = ExternalAddress.parse("|0")
        assert s.prefix == () and s.tail == (0,)

    def test_tail_made_primitive(self):
        assert ExternalAddress((), (0, 1, 0, 1)).tail == (0, 1)

    def test_trailing_tail_copies_absorbed(self):
        assert ExternalAddress((0, 0), (0,)) == ExternalAddress((), (0,))
        assert ExternalAddress((5, 1), (0, 1)) == ExternalAddress((5,), (1, 0))

    def test_entries(self):
        s = ExternalAddress((7,), (0, 1))
        assert s.entries(6) == (7, 0, 1, 0, 1, 0)
        assert s.entry(0) == 7 and s.entry(4) == 1

    def test_shifted(self):
        s = ExternalAddress((7,), (0, 1))
        assert s.shifted() == ExternalAddress((), (0, 1))
        assert s.shifted().shifted() == ExternalAddress((), (1, 0))

    def test_entries_clipped(self):
        s = ExternalAddress((), (2**30,))
        assert s.tail == (2**20,)

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            ExternalAddress.parse("0,1")
        with pytest.raises(ValueError):
            ExternalAddress.parse("0|")
        with pytest.raises(ValueError):
            ExternalAddress.parse("a|b")


class TestStripIndex:
    def test_center_strip(self):
        assert strip_index(0j) == 0
        assert strip_index(complex(5.0, 3.0)) == 0

    def test_boundaries_are_half_open_above(self):
        assert strip_index(complex(0.0, math.pi)) == 0
        assert strip_index(complex(0.0, math.nextafter(math.pi, 4.0))) == 1
        assert strip_index(complex(0.0, -math.pi)) == -1
        assert strip_index(complex(0.0, 3 * math.pi)) == 1

    @given(st.floats(min_value=-50.0, max_value=50.0))
    def test_translation_by_two_pi(self, y):
        z = complex(1.0, y)
        assert strip_index(z + 2j * math.pi) == strip_index(z) + 1


class TestItinerary:
    def test_fixed_points(self):
        assert itinerary(P2, complex(REPELLING_FP, 0.0), 5) == (0, 0, 0, 0, 0)
        assert itinerary(P2, STRIP1_FP, 4) == (1, 1, 1, 1)

    def test_empty(self):
        assert itinerary(P2, 0j, 0) == ()


class TestInverseBranch:
    def test_inverts_the_map(self):
        w = complex(0.3, 0.4)
        for k in (-2, 0, 3):
            z = inverse_branch(P2, k, w)
            assert strip_index(z) == k
            assert eval_map(P2.a, z) == pytest.approx(w, abs=1e-12)

    def test_singular_value_rejected(self):
        with pytest.raises(ValueError):
            inverse_branch(P2, 0, P2.a)


class TestTraceHair:
    def test_residual_shrinks_with_depth(self):
        s = ExternalAddress((), (0,))
        r1 = trace_hair(P2, s, depth=6).residual
        r2 = trace_hair(P2, s, depth=12).residual
        assert r2 < r1

    def test_depth_precondition(self):
        with pytest.raises(ValueError):
            trace_hair(P2, ExternalAddress((), (0,)), depth=0)


class TestEndpointEstimate:
    def test_zero_address_lands_on_repelling_fixed_point(self):
        ep = endpoint_estimate(P2, ExternalAddress((), (0,)), tol=1e-10)
        assert ep.converged
        assert ep.z == pytest.approx(complex(REPELLING_FP, 0.0), abs=1e-9)

    def test_one_address_lands_on_strip_one_fixed_point(self):
        ep = endpoint_estimate(P2, ExternalAddress((), (1,)), tol=1e-10)
        assert ep.converged
        assert ep.z == pytest.approx(STRIP1_FP, abs=1e-9)

    def test_preconditions(self):
        s = ExternalAddress((), (0,))
        with pytest.raises(ValueError):
            endpoint_estimate(P2, s, tol=1e-13)
        with pytest.raises(ValueError):
            endpoint_estimate(P2, s, max_depth=1)


class TestSeparationIndex:
    def test_equal_orbits_never_separate(self):
        assert separation_index(P2, 0j, 0j, depth=8) is None

    def test_first_strip_mismatch(self):
        z0 = complex(REPELLING_FP, 0.0)
        assert separation_index(P2, z0, STRIP1_FP, depth=8) == 0
        ep = endpoint_estimate(P2, ExternalAddress((0, 1), (0,)), tol=1e-9)
        assert separation_index(P2, z0, ep.z, depth=8) == 1

    def test_depth_precondition(self):
        with pytest.raises(ValueError):
            separation_index(P2, 0j, 1j, depth=0)


class TestRealPartMargin:
    def test_reference_value_is_exact(self):
        cfg = SeparationConfig(c=3.0, delta=2.0 * math.pi + 1.0)
        assert real_part_margin(P2, cfg) == 13.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SeparationConfig(c=0.5, delta=7.0)
        with pytest.raises(ValueError):
            SeparationConfig(c=3.0, delta=6.0)
        with pytest.raises(ValueError):
            SeparationConfig(c=3.0, delta=7.0, kappa=0.0)

    @given(
        st.builds(
            complex,
            st.floats(min_value=-3.0, max_value=3.0),
            st.floats(min_value=-3.0, max_value=3.0),
        ),
        st.floats(min_value=1.0, max_value=20.0),
        st.floats(min_value=0.0, max_value=20.0),
    )
    def test_dominates_radius(self, a, c, extra):
        p = Params(a=a)
        cfg = SeparationConfig(c=c, delta=2.0 * math.pi + extra)
        assert real_part_margin(p, cfg) >= p.radius + 6.0


class TestFindDominationIndex:
    def test_reference_indices(self):
        fp = find_cycle(P2, -1.8 + 0j, 1)[0][0]
        assert find_domination_index(P2, 10 + 0j, fp, 1000.0, depth=64) == 1
        assert find_domination_index(P2, 10 + 0j, fp, 30000.0, depth=64) == 2

    def test_monotone_in_kappa(self):
        fp = find_cycle(P2, -1.8 + 0j, 1)[0][0]
        ns = [
            find_domination_index(P2, 10 + 0j, fp, k, depth=64)
            for k in (1e2, 1e3, 1e4, 3e4, 1e5)
        ]
        assert all(n is not None for n in ns)
        assert all(x <= y for x, y in zip(ns, ns[1:]))

    def test_preconditions(self):
        fp = find_cycle(P2, -1.8 + 0j, 1)[0][0]
        with pytest.raises(PreconditionError):
            find_domination_index(P2, fp, fp, 10.0, depth=16)
        with pytest.raises(PreconditionError):
            find_domination_index(P2, 10 + 0j, 11 + 0j, 10.0, depth=16)
        with pytest.raises(ValueError):
            find_domination_index(P2, 10 + 0j, fp, -1.0, depth=16)


class TestSeparatingSetMembership:
    CFG = SeparationConfig(c=3.0, delta=2.0 * math.pi + 1.0)

    def test_left_half_plane(self):
        assert (
            separating_set_membership(P2, self.CFG, None, complex(-3.0, 1.0))
            == Membership.HALFPLANE
        )
        assert (
            separating_set_membership(P2, self.CFG, None, complex(-2.9, 1.0))
            == Membership.OUTSIDE
        )

    def test_arc_hit_through_the_map(self):
        z = complex(1.0, 0.5)
        w = eval_map(P2.a, z)
        sigma = [w - 1.0, w + 1.0]
        assert separating_set_membership(P2, self.CFG, sigma, z) == Membership.ARC

    def test_arc_miss(self):
        z = complex(1.0, 0.5)
        sigma = [100 + 100j, 101 + 100j]
        assert separating_set_membership(P2, self.CFG, sigma, z) == Membership.OUTSIDE


class TestHairPointsAreNotFastEscaping:
    def test_endpoints_classify_bounded_or_slow(self):
        # Hair endpoints lie outside the fast-escaping set; at desk scale
        # their orbits stay near repelling cycles for many steps.
        for text in ("|0", "|1", "0,1|0"):
            ep = endpoint_estimate(P2, ExternalAddress.parse(text), tol=1e-9)
            got = classify_point(P2, ep.z, depth=12)
            assert not isinstance(got, FastEscaping)
