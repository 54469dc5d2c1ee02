import pytest

from curvedainf.errors import InvariantError
from curvedainf.moduli import (Bubble, CombinatorialType, GeometrySpec, SphereClass, TangencyData,
                               bubble_config_bound, bubble_config_dim, canonical_tangency, disc_dim,
                               forgetful_dim_diff, sphere_exclusion)

E = frozenset()
CHERN_ONE = GeometrySpec(3, ("p", "q"), (SphereClass("L", 1, (1, 0)), SphereClass("C", 0, (0, 0))),
                         q0=frozenset({0}))
CHERN_ZERO = GeometrySpec(2, ("p",), (SphereClass("C", 0, (0,)), SphereClass("D", 0, (1,))))
NO_CLASSES = GeometrySpec(2, ("p",), ())


def test_disc_dim_examples():
    assert disc_dim(2, 1) == 1
    assert disc_dim(0, 2) == 0
    assert disc_dim(1, 1) == 0


class TestTangency:
    def test_empty(self):
        t = canonical_tangency(1, [], CHERN_ONE)
        assert t.ell == 0 and t.is_canonical()

    def test_unit_rows(self):
        g = GeometrySpec(2, ("p", "q"), (SphereClass("A", 2, (2, 1)),))
        t = canonical_tangency(0, ["p", "q", "p"], g)
        assert t.ell == 3 and t.is_canonical()
        assert all(sum(r) == 1 for r in t.rows)
        assert t.as_multiset() == canonical_tangency(0, ["q", "p", "p"], g).as_multiset()

    def test_wrong_assignment(self):
        g = GeometrySpec(2, ("p", "q"), (SphereClass("A", 2, (2, 1)),))
        with pytest.raises(InvariantError):
            canonical_tangency(0, ["p", "q"], g)

    def test_rows_must_sum_to_target(self):
        with pytest.raises(InvariantError):
            TangencyData(((1, 0),), (1, 1))


class TestBubbleDimension:
    def test_bare_canonical_is_disc_dim(self):
        t = canonical_tangency(0, ["p"], CHERN_ONE)
        assert bubble_config_dim(1, 1, t, [], CHERN_ONE) == disc_dim(1, 1)

    def test_hand_example_two_routes(self):
        # n=3, iA0=2, k=1, ℓ=1, |t(1)|=1, one single-vertex c1=0 bubble with K=∅
        t = TangencyData(((1, 0),), (1, 0))
        gamma = CombinatorialType(1, (), (0,), (E,), (1,))
        b = Bubble(0, gamma, t.support(0))
        assert bubble_config_dim(2, 1, t, [b], CHERN_ONE) == -3
        assert bubble_config_bound(2, 1, t, [b], CHERN_ONE) == -3

    def test_chern_zero_bubble_loses_two(self):
        t = TangencyData(((1, 0),), (1, 0))
        gamma = CombinatorialType(1, (), (0,), (E,), (1,))
        b = Bubble(0, gamma, t.support(0))
        assert bubble_config_dim(2, 1, t, [b], CHERN_ONE) <= disc_dim(2, 1) - 2

    def test_zero_class_bubble_rejected(self):
        t = TangencyData(((0,),), (0,))
        gamma = CombinatorialType(1, (), (0,), (E,), (None,))
        with pytest.raises(InvariantError):
            bubble_config_dim(0, 2, t, [Bubble(0, gamma, E)], NO_CLASSES)


class TestForgetful:
    def test_examples(self):
        t = TangencyData(((1, 0),), (1, 0))
        assert forgetful_dim_diff(0, t, CHERN_ONE) == 0
        t = TangencyData(((1, 0), (0, 1)), (1, 1))
        assert forgetful_dim_diff(1, t, CHERN_ONE) == 0
        t = TangencyData(((1, 0), (0, 2)), (1, 2))
        assert forgetful_dim_diff(1, t, CHERN_ONE) == -2

    def test_q0_point_not_forgettable(self):
        t = TangencyData(((1, 0),), (1, 0))
        with pytest.raises(InvariantError):
            forgetful_dim_diff(1, t, CHERN_ONE)


class TestExclusion:
    def test_empty_budget(self):
        r = sphere_exclusion(NO_CLASSES, 0, 2)
        assert [c.is_canonical_bare for c in r.configs] == [True]
        assert r.passed

    @pytest.mark.parametrize("iA,k,target", [(0, 2, (0,)), (1, 1, (1,)), (2, 1, (2,)), (-1, 2, (1,))])
    def test_chern_zero_classes(self, iA, k, target):
        r = sphere_exclusion(CHERN_ZERO, iA, k, target, {"C": 2, "D": 1})
        assert r.passed
        bubbled = [c for c in r.configs if c.bubbles]
        assert bubbled
        assert all(c.dim <= r.disc_dim - 2 for c in bubbled)
        if r.disc_dim <= 0:
            assert all(c.dim <= -2 for c in bubbled)

    @pytest.mark.parametrize("iA,k,target", [(1, 1, (1, 0)), (2, 1, (1, 1)), (0, 2, (0, 0)),
                                             (2, 0, (1, 0)), (0, 1, (1, 0)), (-2, 3, (1, 1))])
    def test_chern_one_class(self, iA, k, target):
        r = sphere_exclusion(CHERN_ONE, iA, k, target, {"L": 1, "C": 1})
        assert r.bound_holds
        assert r.passed
        for c in r.configs:
            if not c.is_canonical_bare:
                assert c.dim <= r.disc_dim - 2
        assert [c.is_canonical_bare for c in r.survivors] == [True] * len(r.survivors)

    def test_refuses_large_dimension(self):
        with pytest.raises(InvariantError):
            sphere_exclusion(CHERN_ONE, 4, 1, (1, 0))
