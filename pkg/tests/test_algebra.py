import pytest

from curvedainf.ainfty import (CurvedAlgebra, CurvedFunctor, Element, bc_structure_maps,
                               check_curved_ainfty, check_functor, check_mc, deform, gr0,
                               gr0_cohomology, mc_expression, pushforward_mc, transport_structure,
                               upper_triangular_category, verify_cunit)
from curvedainf.constructions import (DGAData, acyclic_extension_dga, exterior_dga, trivial_dga,
                                      with_curvature)
from curvedainf.errors import InvariantError
from curvedainf.homalg import Homology
from curvedainf.ring import ConeSpec, PowerSeries

CONE = ConeSpec.orthant(2)
N = 4


def T(alpha, c=1, n=N):
    return PowerSeries.monomial(CONE, n, alpha, c)


def one(n=N):
    return PowerSeries.constant(CONE, n, 1)


@pytest.fixture
def ring():
    return trivial_dga().algebra(CONE, N)


@pytest.fixture
def dga():
    return acyclic_extension_dga(1, square=True).algebra(CONE, N)


@pytest.fixture
def ext():
    return exterior_dga(("x", "y")).algebra(CONE, N)


class TestRelations:
    def test_ring_passes(self, ring):
        assert check_curved_ainfty(ring).passed

    def test_dga_passes(self, dga, ext):
        assert check_curved_ainfty(dga).passed
        assert check_curved_ainfty(ext).passed

    def test_nonassociative_product_is_caught(self):
        # (a·b)·a = b·a = c but a·(b·a) = a·c = 0
        alg = DGAData((("a", 0), ("b", 0), ("c", 0)), {},
                      {("a", "a"): {"a": 1}, ("a", "b"): {"b": 1}, ("b", "a"): {"c": 1}}).algebra(CONE, N)
        report = check_curved_ainfty(alg, 3)
        assert not report.passed
        assert {len(t) for t, _ in report.violations} == {3}
        assert ("a", "b", "a") in [t for t, _ in report.violations]

    def test_central_curvature_passes(self):
        good = with_curvature(trivial_dga(), {"e": T((1, 0))}).algebra(CONE, N)
        assert check_curved_ainfty(good).passed

    def test_curvature_must_be_closed(self):
        bad = with_curvature(acyclic_extension_dga(1), {"e": T((1, 0))})
        bad = DGAData(bad.basis, {"y1": {"z1": 1}, "e": {}}, bad.product, {"y1": T((1, 0))})
        with pytest.raises(InvariantError):
            bad.algebra(CONE, N)   # odd curvature breaks the degree rule

    def test_degree_rule(self):
        with pytest.raises(InvariantError, match="degree rule"):
            CurvedAlgebra(CONE, N, ["e"], [0], {1: {(0,): {0: one()}}})

    def test_curvature_condition(self):
        with pytest.raises(InvariantError, match="curvature condition"):
            CurvedAlgebra(CONE, N, ["e"], [0], {0: {(): {0: one()}}})

    def test_rank_zero_is_legal(self):
        alg = CurvedAlgebra(CONE, N, [], [])
        assert check_curved_ainfty(alg, 4).passed
        assert verify_cunit(alg, Element({}, 0))


class TestGr0:
    def test_curvature_disappears(self):
        alg = with_curvature(trivial_dga(), {"e": T((0, 1))}).algebra(CONE, N)
        assert gr0(alg).curvature().is_zero()

    def test_all_coefficients_in_m(self):
        alg = CurvedAlgebra(CONE, N, ["e"], [0], {2: {(0, 0): {0: T((1, 0))}}})
        assert gr0(alg).ops == {}

    def test_matches_termwise_filter(self):
        mixed = one() * 3 + T((1, 0), 2) + T((1, 1), -1)
        alg = CurvedAlgebra(CONE, N, ["e", "x"], [0, 1],
                            {2: {(0, 0): {0: mixed}, (0, 1): {1: T((0, 1)) + one() * -2}}})
        g = gr0(alg)
        assert g.ops[2][(0, 0)][0].items() == [((0, 0), 3)]
        assert g.ops[2][(0, 1)][1].items() == [((0, 0), -2)]

    def test_relations_descend(self, dga):
        curved = with_curvature(acyclic_extension_dga(1), {"z1": T((1, 0))}).algebra(CONE, N)
        assert check_curved_ainfty(curved).passed
        assert check_curved_ainfty(gr0(curved)).passed


class TestMaurerCartan:
    def test_zero_in_uncurved(self, ext):
        assert check_mc(ext, ext.zero())

    def test_closed_square_zero(self, ext):
        x = ext.element({"x": T((1, 0)), "y": T((0, 2))})
        assert check_mc(ext, x)

    def test_curved_zero_fails(self):
        alg = with_curvature(trivial_dga(), {"e": T((1, 0))}).algebra(CONE, N)
        assert not check_mc(alg, alg.zero())

    def test_parity_and_valuation_preconditions(self, ext):
        with pytest.raises(InvariantError):
            check_mc(ext, ext.element({"1": T((1, 0))}))
        with pytest.raises(InvariantError):
            check_mc(ext, ext.element({"x": 1}))

    def test_deform_by_zero(self, dga):
        assert deform(dga, dga.zero()) == dga

    def test_deform_kills_curvature(self):
        # curvature T·z with dy = z: a = -T·y solves the equation
        alg = with_curvature(acyclic_extension_dga(1), {"z1": T((1, 0))}).algebra(CONE, N)
        a = alg.element({"y1": T((1, 0), -1)})
        assert check_mc(alg, a)
        d = deform(alg, a)
        assert d.curvature().is_zero()
        assert check_curved_ainfty(d).passed

    def test_deform_composes(self, ext):
        x = ext.element({"x": T((1, 0))})
        y = ext.element({"y": T((0, 1)) + T((1, 1))})
        assert check_mc(ext, x) and check_mc(ext, y) and check_mc(ext, x + y)
        assert deform(deform(ext, x), y) == deform(ext, x + y)

    def test_mc_expression_is_curvature_of_deformed(self):
        alg = with_curvature(acyclic_extension_dga(1, square=True), {"z1": T((1, 0))}).algebra(CONE, N)
        x = alg.element({"y1": T((0, 1), 3)})
        assert mc_expression(alg, x) == deform(alg, x).curvature()


class TestCunit:
    def test_unit_of_a_ring(self, ring):
        assert verify_cunit(ring, ring.element({"e": 1}))

    def test_zero_multiplication(self):
        alg = CurvedAlgebra(CONE, N, ["a", "b"], [0, 0])
        for e in ({}, {"a": 1}, {"a": 1, "b": -1}):
            assert not verify_cunit(alg, alg.element(e, 0))

    def test_unit_with_acyclic_summand(self, dga):
        assert gr0_cohomology(dga) == Homology(1, (), 0, ())
        e = dga.element({"e": 1})
        assert verify_cunit(dga, e)
        # adding a coboundary keeps it a c-unit
        assert verify_cunit(dga, dga.element({"e": 1, "z1": 5}))
        assert not verify_cunit(dga, dga.element({"e": 2}))

    def test_odd_candidate_rejected(self, ext):
        with pytest.raises(InvariantError):
            verify_cunit(ext, ext.element({"x": 1}))


class TestFunctors:
    def test_identity_pushforward(self, ext):
        x = ext.element({"x": T((1, 0))})
        assert pushforward_mc(CurvedFunctor.identity(ext), x) == x
        assert check_functor(CurvedFunctor.identity(ext)).passed

    def test_strict_isomorphism(self, ext):
        # swap x and y: an algebra automorphism up to the sign of xy
        idx = ext.index
        g1 = {(idx("1"),): {idx("1"): one()}, (idx("x"),): {idx("y"): one()},
              (idx("y"),): {idx("x"): one()}, (idx("xy"),): {idx("xy"): -one()}}
        g = CurvedFunctor(ext, ext, {1: g1})
        assert check_functor(g, 3).passed
        x = ext.element({"x": T((1, 0)), "y": T((0, 1), 2)})
        image = pushforward_mc(g, x)
        assert image == ext.element({"y": T((1, 0)), "x": T((0, 1), 2)})
        assert check_mc(ext, image)

    def test_curvature_of_the_functor(self, ext):
        g0 = {(): {ext.index("x"): T((1, 1))}}
        g = CurvedFunctor(ext, ext, {0: g0, 1: CurvedFunctor.identity(ext).comps[1]})
        assert pushforward_mc(g, ext.zero()) == ext.element({"x": T((1, 1))})

    def test_functor_curvature_condition(self, ext):
        with pytest.raises(InvariantError):
            CurvedFunctor(ext, ext, {0: {(): {ext.index("x"): one()}}})

    def test_transport(self, ext):
        g2 = {(ext.index("x"), ext.index("x")): {ext.index("y"): T((1, 0))}}
        pulled, g = transport_structure(ext, {2: g2})
        assert check_curved_ainfty(pulled, 5).passed
        assert check_functor(g, 4).passed
        x = pulled.element({"x": T((0, 1))})
        if check_mc(pulled, x):
            assert check_mc(ext, pushforward_mc(g, x))


class TestCategories:
    def test_zero_assignment_leaves_category_unchanged(self, ext):
        cat = upper_triangular_category(ext)
        assert bc_structure_maps(cat, {}).algebra == cat.algebra

    def test_one_object_is_deform(self):
        alg = with_curvature(acyclic_extension_dga(1), {"z1": T((1, 0))}).algebra(CONE, N)
        cat = upper_triangular_category(alg, ("X",))
        a = alg.element({"y1": T((1, 0), -1)})
        out = bc_structure_maps(cat, {"X": a})
        end, direct = out.end_algebra("X"), deform(alg, a)
        assert end.ops == direct.ops and end.parities == direct.parities

    def test_two_objects(self):
        alg = with_curvature(acyclic_extension_dga(2), {"z1": T((1, 0)), "z2": T((0, 1))}).algebra(CONE, N)
        cat = upper_triangular_category(alg)
        ax = alg.element({"y1": T((1, 0), -1), "y2": T((0, 1), -1)})
        ay = ax
        out = bc_structure_maps(cat, {"X": ax, "Y": ay})
        assert out.algebra.curvature().is_zero()
        assert check_curved_ainfty(out.algebra).passed

    def test_non_mc_assignment_rejected(self):
        alg = with_curvature(acyclic_extension_dga(1), {"z1": T((1, 0))}).algebra(CONE, N)
        cat = upper_triangular_category(alg)
        with pytest.raises(InvariantError):
            bc_structure_maps(cat, {"X": alg.zero(), "Y": alg.element({"y1": T((1, 0), -1)})})

    def test_curved_object_without_element_rejected(self):
        alg = with_curvature(acyclic_extension_dga(1), {"z1": T((1, 0))}).algebra(CONE, N)
        with pytest.raises(InvariantError, match="no Maurer"):
            bc_structure_maps(upper_triangular_category(alg), {"X": alg.element({"y1": T((1, 0), -1)})})
