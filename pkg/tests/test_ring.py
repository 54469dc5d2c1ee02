from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvedainf.errors import InvariantError
from curvedainf.properties import standard_cones
from curvedainf.ring import ConeSpec, PowerSeries, Specialization, novikov_specialize

ORTHANT = ConeSpec.orthant(2)
SKEW = ConeSpec(2, ((1, 0), (1, 2)))
LINE = ConeSpec.orthant(1)


def brute_ord(cone, alpha, box=6):
    """Longest chain of nonzero steps, by dynamic programming over a box."""
    members = [v for v in product(range(-box, box + 1), repeat=cone.p_count)
               if cone.is_member(v) and any(v)]
    memo = {}

    def best(v):
        if not any(v):
            return 0
        if v in memo:
            return memo[v]
        out = 0
        for g in members:
            rest = tuple(a - b for a, b in zip(v, g))
            if cone.is_member(rest):
                out = max(out, 1 + best(rest))
        memo[v] = out
        return out

    return best(tuple(alpha))


class TestCone:
    def test_membership(self):
        assert ORTHANT.is_member((0, 0))
        assert not ORTHANT.is_member((-1, 0))
        assert SKEW.is_member((0, 1))

    def test_rank_condition(self):
        with pytest.raises(InvariantError, match="rank condition"):
            ConeSpec(2, ((1, 1), (2, 2)))

    def test_rational_generators_are_cleared(self):
        c = ConeSpec(2, ((Fraction(1, 2), 0), (0, Fraction(1, 3))))
        assert c.generators == ((1, 0), (0, 1))

    def test_decompositions(self):
        assert len(ORTHANT.decompositions((0, 0), 2)) == 1
        assert len(ORTHANT.decompositions((1, 1), 2)) == 4
        assert len(ORTHANT.decompositions((2, 1), 2)) == 6

    def test_ord_examples(self):
        assert ORTHANT.ord((0, 0)) == 0
        assert ORTHANT.ord((2, 1)) == 3
        assert SKEW.ord((0, 1)) == 1
        # (2,-1) is a Hilbert basis element of the skew monoid
        assert SKEW.ord((2, -1)) == 1
        assert SKEW.ord((2, 0)) == 2

    def test_dual_rays(self):
        assert sorted(SKEW.dual_rays()) == [(0, 1), (2, -1)]

    @pytest.mark.parametrize("cone", standard_cones())
    def test_ord_matches_brute_force_small(self, cone):
        for v in product(range(-2, 3), repeat=cone.p_count):
            if cone.is_member(v):
                assert cone.ord(v) == brute_ord(cone, v), v


class TestSeries:
    def test_geometric_inverse(self):
        one = PowerSeries.constant(LINE, 3, 1)
        t = PowerSeries.monomial(LINE, 3, (1,))
        assert (one - t) * (one + t + t * t) == one

    def test_difference_of_squares(self):
        one = PowerSeries.constant(ORTHANT, 5, 1)
        t = PowerSeries.monomial(ORTHANT, 5, (1, 1))
        assert (one + t) * (one - t) == one - PowerSeries.monomial(ORTHANT, 5, (2, 2))

    def test_monomial_product(self):
        a = PowerSeries.monomial(SKEW, 6, (0, 1))
        b = PowerSeries.monomial(SKEW, 6, (2, -1))
        assert a * b == PowerSeries.monomial(SKEW, 6, (2, 0))

    def test_truncation_drops_high_order(self):
        s = PowerSeries(ORTHANT, 3, {(1, 1): 2, (2, 1): 5})
        assert s.items() == [((1, 1), 2)]
        assert s.truncate(2).is_zero()

    def test_valuation(self):
        import math
        assert PowerSeries.zero(ORTHANT, 4).valuation() == math.inf
        assert (PowerSeries.constant(ORTHANT, 4) + PowerSeries.monomial(ORTHANT, 4, (1, 0))).valuation() == 0
        assert PowerSeries.monomial(ORTHANT, 5, (2, 1), 3).valuation() == 3

    def test_exponent_outside_the_monoid(self):
        with pytest.raises(InvariantError):
            PowerSeries.monomial(ORTHANT, 3, (-1, 0))

    def test_mixed_truncations_meet_at_the_lower_order(self):
        s = PowerSeries.constant(ORTHANT, 3) + PowerSeries.monomial(ORTHANT, 4, (2, 1))
        assert s.trunc_order == 3 and s == PowerSeries.constant(ORTHANT, 3)

    def test_different_cones_do_not_mix(self):
        with pytest.raises(InvariantError):
            PowerSeries.constant(ORTHANT, 3) + PowerSeries.constant(SKEW, 3)


series_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-4, 4), max_size=4)


@given(series_terms, series_terms, series_terms)
def test_ring_axioms_orthant(a, b, c):
    x, y, z = (PowerSeries(ORTHANT, 5, t) for t in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert (x - x).is_zero()


@given(series_terms, series_terms)
def test_valuation_is_superadditive(a, b):
    x, y = PowerSeries(ORTHANT, 6, a), PowerSeries(ORTHANT, 6, b)
    if x and y and x * y:
        assert (x * y).valuation() >= x.valuation() + y.valuation()


class TestNovikov:
    def test_examples(self):
        k = (1, 1)
        assert novikov_specialize(PowerSeries.monomial(ORTHANT, 3, (1, 0)), k).as_dict() == {1: 1}
        s = PowerSeries.monomial(ORTHANT, 3, (1, 0)) + PowerSeries.monomial(ORTHANT, 3, (0, 1))
        assert novikov_specialize(s, k).as_dict() == {1: 2}

    def test_kappa_must_be_interior(self):
        with pytest.raises(InvariantError, match="interior"):
            Specialization(ORTHANT, (1, 0))
        with pytest.raises(InvariantError):
            Specialization(SKEW, (1, 3))   # the ray (2,-1) goes to -1

    def test_scale_is_least_nonzero_value(self):
        assert Specialization(ORTHANT, (1, 2)).scale == 1
        assert Specialization(ORTHANT, (2, 3)).scale == 2
        # (0,1) ↦ 2, (2,-1) ↦ 4, (1,0) ↦ 3
        assert Specialization(SKEW, (3, 2)).scale == 2

    def test_filtration_levels(self):
        spec = Specialization(SKEW, (3, 2))
        s = PowerSeries.monomial(SKEW, 6, (2, 0)) * 5
        assert s.valuation() == 2
        assert spec(s).valuation() >= spec.scale * 2

    def test_multiplicative_on_a_fixed_pair(self):
        spec = Specialization(SKEW, (1, 1))
        x = PowerSeries(SKEW, 4, {(0, 0): 1, (0, 1): 2, (2, -1): -1})
        y = PowerSeries(SKEW, 4, {(1, 0): 3, (0, 1): 1})
        assert spec(x * y) == spec(x) * spec(y)
