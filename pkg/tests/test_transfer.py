import pytest

from curvedainf.ainfty import Bimodule, Element, check_bimodule, check_curved_ainfty, check_mc
from curvedainf.constructions import (DGAData, acyclic_extension_dga, diagonal_problem, exterior_dga,
                                      obstructed_problems, solvable_problems, torsion_problem,
                                      trivial_dga, unit_dga)
from curvedainf.errors import InvariantError, ObstructionError
from curvedainf.ring import ConeSpec, PowerSeries
from curvedainf.transfer import (build_triangle, deform_by_f, is_quasi_iso, transfer_cunit,
                                 transfer_mc, verify_projections, verify_transfer)

CONE = ConeSpec.orthant(2)
N = 4


def T(alpha, c=1, n=N):
    return PowerSeries.monomial(CONE, n, alpha, c)


@pytest.fixture
def ring():
    return trivial_dga().algebra(CONE, N)


@pytest.fixture
def ext():
    return exterior_dga(("x", "y")).algebra(CONE, N)


class TestTriangle:
    def test_diagonal_of_a_ring(self, ring):
        M = Bimodule.diagonal(ring)
        assert check_bimodule(M).passed
        t = build_triangle(M.left, M.right, M)
        assert t.algebra.rank == 3
        assert check_curved_ainfty(t.algebra).passed

    def test_zero_bimodule_is_direct_sum(self, ring, ext):
        t = build_triangle(ring, ext, Bimodule.zero(ring, ext))
        assert t.algebra.rank == ring.rank + ext.rank
        assert check_curved_ainfty(t.algebra).passed
        mixed = [k for table in t.algebra.ops.values() for k in table
                 if {i < ring.rank for i in k} == {True, False}]
        assert not mixed

    def test_dga_pair(self):
        dga = acyclic_extension_dga(1, square=True).algebra(CONE, N)
        M = Bimodule.diagonal(dga)
        t = build_triangle(M.left, M.right, M)
        assert check_curved_ainfty(t.algebra).passed

    def test_ring_mismatch(self, ring):
        other = trivial_dga().algebra(ConeSpec.orthant(1), N)
        with pytest.raises(InvariantError):
            Bimodule.zero(ring, other)

    def test_at_most_one_bimodule_input(self, ext):
        M = Bimodule.diagonal(ext)
        t = build_triangle(M.left, M.right, M)
        m = set(t.m_indices)
        for table in t.algebra.ops.values():
            assert all(sum(1 for i in key if i in m) <= 1 for key in table)


class TestDeformByF:
    def test_zero(self, ext):
        M = Bimodule.diagonal(ext)
        t = build_triangle(M.left, M.right, M)
        assert deform_by_f(t, Element({}, 0)) == t.algebra

    def test_unit_projections(self, ext):
        M = Bimodule.diagonal(ext)
        t = build_triangle(M.left, M.right, M)
        f = M.element({"1[X,Y]": 1})
        deformed = deform_by_f(t, f)
        assert check_curved_ainfty(deformed).passed
        assert verify_projections(t, f).passed

    def test_non_closed_rejected(self):
        # an even generator p with dp = q
        data = DGAData((("e", 0), ("p", 0), ("q", 1)), {"p": {"q": 1}},
                       unit_dga("e", [("p", 0), ("q", 1)]))
        M = Bimodule.diagonal(data.algebra(CONE, N))
        t = build_triangle(M.left, M.right, M)
        with pytest.raises(InvariantError, match="not closed"):
            deform_by_f(t, M.element({"p[X,Y]": 1}))
        assert deform_by_f(t, M.element({"e[X,Y]": 1}))

    def test_quasi_iso(self, ext, ring):
        M = Bimodule.diagonal(ring)
        assert is_quasi_iso(M, M.element({"e[X,Y]": 1}))
        assert is_quasi_iso(M, M.element({"e[X,Y]": -1}))
        assert not is_quasi_iso(M, Element({}, 0))
        assert not is_quasi_iso(M, M.element({"e[X,Y]": 2}))

    def test_doubling_leaves_torsion(self, ring):
        M = Bimodule.diagonal(ring)
        report = verify_projections(build_triangle(M.left, M.right, M), M.element({"e[X,Y]": 2}))
        assert report.kernel_of_b.even_torsion + report.kernel_of_b.odd_torsion == (2,)


class TestTransfer:
    def test_trivial_problem(self):
        p = diagonal_problem(CONE, N, trivial_dga(), "e", {}, {})
        r = transfer_mc(p.A, p.B, p.M, p.m0, p.b)
        assert r.a.is_zero() and r.m == p.m0
        assert all(not e["monomials"] for e in r.log)

    def test_curvature_by_an_exact_element(self):
        # A = ℤ ⊕ (y → z) with curvature T·z; B = ℤ; a = -T·y solves it
        p = solvable_problems(1, seed=0)[0]
        r = transfer_mc(p.A, p.B, p.M, p.m0, p.b)
        assert all(verify_transfer(p.A, p.B, p.M, p.m0, p.b, r).values())
        assert check_mc(p.A.truncate(r.order_achieved), r.a)

    def test_exterior_diagonal(self):
        one = PowerSeries.monomial(CONE, N, (1, 0))
        p = diagonal_problem(CONE, N, exterior_dga(("x",)), "1", {"x": one}, {"x": one * 2})
        r = transfer_mc(p.A, p.B, p.M, p.m0, p.b)
        checks = verify_transfer(p.A, p.B, p.M, p.m0, p.b, r)
        assert checks == {"a_maurer_cartan": True, "m_closed": True,
                          "a_leading_zero": True, "m_leading": True}
        e_a, ok = transfer_cunit(p.A, p.B, p.M, r, p.b, p.unit_b, p.m0)
        assert ok

    @pytest.mark.parametrize("p", solvable_problems(), ids=lambda p: p.label)
    def test_solvable_corpus(self, p):
        r = transfer_mc(p.A, p.B, p.M, p.m0, p.b)
        assert all(verify_transfer(p.A, p.B, p.M, p.m0, p.b, r).values())
        assert r.a.valuation() >= 1
        assert (r.m - p.m0).truncate(1).is_zero()

    @pytest.mark.parametrize("p", solvable_problems(8, seed=5), ids=lambda p: p.label)
    def test_cunit_lifts(self, p):
        r = transfer_mc(p.A, p.B, p.M, p.m0, p.b)
        e_a, ok = transfer_cunit(p.A, p.B, p.M, r, p.b, p.unit_b, p.m0)
        assert ok

    @pytest.mark.parametrize("p", obstructed_problems(), ids=lambda p: p.label)
    def test_obstructed_corpus(self, p):
        with pytest.raises(ObstructionError) as info:
            transfer_mc(p.A, p.B, p.M, p.m0, p.b)
        assert info.value.order >= 1

    def test_obstruction_order_is_the_curvature_order(self):
        p = torsion_problem(ConeSpec.orthant(1), 4, 2, (2,))
        with pytest.raises(ObstructionError) as info:
            transfer_mc(p.A, p.B, p.M, p.m0, p.b)
        assert info.value.order == 2 and info.value.monomial == (2,)

    def test_b_must_be_maurer_cartan(self):
        one = PowerSeries.monomial(CONE, N, (1, 0))
        p = diagonal_problem(CONE, N, acyclic_extension_dga(1), "e", {"y1": one}, {"y1": one})
        with pytest.raises(InvariantError, match="Maurer"):
            transfer_mc(p.A, p.B, p.M, p.m0, Element({}, 1))

    def test_result_independent_of_solver_choice(self):
        from curvedainf.homalg import IntMatrix, integer_kernel, solve_integer

        def shifted(m: IntMatrix, b):
            x = solve_integer(m, b)
            if x is None:
                return None
            for k in integer_kernel(m):
                x = [a + 3 * c for a, c in zip(x, k)]
            return x

        for p in solvable_problems(6, seed=11):
            r1 = transfer_mc(p.A, p.B, p.M, p.m0, p.b)
            r2 = transfer_mc(p.A, p.B, p.M, p.m0, p.b, solve=shifted)
            for r in (r1, r2):
                assert all(verify_transfer(p.A, p.B, p.M, p.m0, p.b, r).values())
