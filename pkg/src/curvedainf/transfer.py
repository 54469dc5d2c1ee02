"""Triangle algebras and order-by-order Maurer–Cartan transfer.

Given algebras A, B, an A–B bimodule M, a Maurer–Cartan element b of B and
an element m0 of M that is closed and an integral quasi-isomorphism at
Gr_0, we look for ``a ∈ A`` and ``m ∈ M`` such that ``t = a + m + b`` solves
the Maurer–Cartan equation of the triangle algebra ``A ⊕ M[-1] ⊕ B``.  Its
A-component is the equation for ``a`` and its M-component says that ``m`` is
closed in the twisted bimodule ``^aM^b``.

The correction at order k only sees the Gr_0 differential of the triangle
deformed by ``m0``, restricted to ``A ⊕ M``: higher-order parts of ``t`` raise
the order of any product with an order-k monomial.  So the order-k
obstruction splits into one integer system per monomial of order k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .ainfty import (Bimodule, CurvedAlgebra, Element, assemble_triangle, bimodule_action,
                     deform, gr0, gr0_complex, mc_expression, verify_cunit)
from .ainfty.algebra import constant_matrix
from .ainfty.linear import add_into, insert_everywhere, truncated
from .errors import InvariantError, ObstructionError
from .homalg import Homology, IntMatrix, homology, solve_integer
from .ring import PowerSeries

Solver = Callable[[IntMatrix, Sequence[int]], "list[int] | None"]


@dataclass
class TriangleAlgebra:
    A: CurvedAlgebra
    B: CurvedAlgebra
    M: Bimodule
    algebra: CurvedAlgebra

    @property
    def a_indices(self) -> list[int]:
        return list(range(self.A.rank))

    @property
    def m_indices(self) -> list[int]:
        return list(range(self.A.rank, self.A.rank + self.M.rank))

    @property
    def b_indices(self) -> list[int]:
        off = self.A.rank + self.M.rank
        return list(range(off, off + self.B.rank))

    def embed(self, part: str, elem: Element) -> Element:
        """Move an element of A, M or B into the triangle basis."""
        off = {"A": 0, "M": self.A.rank, "B": self.A.rank + self.M.rank}[part]
        parity = (elem.parity + 1) % 2 if part == "M" else elem.parity
        return Element({off + i: s for i, s in elem.coeffs.items()}, parity)

    def split(self, elem: Element) -> tuple[Element, Element, Element]:
        """Inverse of :meth:`embed` on each summand; M keeps its own parity."""
        ra, rm = self.A.rank, self.M.rank
        a, m, b = {}, {}, {}
        for i, s in elem.coeffs.items():
            if i < ra:
                a[i] = s
            elif i < ra + rm:
                m[i - ra] = s
            else:
                b[i - ra - rm] = s
        p = elem.parity
        return Element(a, p), Element(m, (p + 1) % 2), Element(b, p)


def build_triangle(A: CurvedAlgebra, B: CurvedAlgebra, M: Bimodule) -> TriangleAlgebra:
    return TriangleAlgebra(A, B, M, assemble_triangle(A, B, M))


def _m_closed(t: TriangleAlgebra, f: Element) -> bool:
    """``μ^{0|1|0}(f) = 0`` in M."""
    out: dict = {}
    for (a, m, b), vec in t.M.ops.items():
        if not a and not b and m in f.coeffs:
            add_into(out, vec, f.coeffs[m])
    return not out


def deform_by_f(t: TriangleAlgebra, f: Element, check_closed: bool = True) -> CurvedAlgebra:
    """The triangle algebra with ``f ∈ M`` inserted in every gap.

    ``f`` has even parity in M, i.e. odd in the triangle, and may have
    valuation zero: every operation has at most one M-input, so at most one
    copy of ``f`` is ever inserted.
    """
    if f.coeffs and f.parity != 0:
        raise InvariantError("the bimodule element must have even parity")
    if check_closed and not _m_closed(t, f):
        raise InvariantError("the bimodule element is not closed under μ^{0|1|0}")
    fe = t.embed("M", f)
    if not fe.coeffs:
        return t.algebra
    return deform(t.algebra, fe, require_positive_valuation=False)


def _gr0_deformed(t: TriangleAlgebra, f: Element) -> CurvedAlgebra:
    g = gr0(t.algebra)
    ft = t.embed("M", f).truncate(1)
    if not ft.coeffs:
        return g
    return g.with_ops(insert_everywhere(g.ops, truncated(ft.coeffs, 1)))


@dataclass
class ProjectionReport:
    kernel_of_b: Homology
    kernel_of_a: Homology

    @property
    def passed(self) -> bool:
        return self.kernel_of_b.is_zero() and self.kernel_of_a.is_zero()


def verify_projections(t: TriangleAlgebra, f: Element) -> ProjectionReport:
    """Gr_0 homology of ``ker π_B = A ⊕ M`` and ``ker π_A = M ⊕ B`` in the f-deformed triangle.

    These kernels are the mapping cones of ``μ²(-, f): A → M`` and
    ``μ²(f, -): B → M``; both vanish exactly when the projections are
    quasi-isomorphisms.
    """
    g = _gr0_deformed(t, f)
    kb = homology(gr0_complex(g, t.a_indices + t.m_indices)[0])
    ka = homology(gr0_complex(g, t.m_indices + t.b_indices)[0])
    return ProjectionReport(kb, ka)


def is_quasi_iso(M: Bimodule, f: Element) -> bool:
    """Whether both action maps of ``f`` have integrally acyclic cones at Gr_0."""
    return verify_projections(build_triangle(M.left, M.right, M), f).passed


# -- transfer -------------------------------------------------------------------


@dataclass
class TransferResult:
    a: Element
    m: Element
    order_achieved: int
    log: list = field(default_factory=list)  # one dict per order


def _order_parts(vec: dict, k: int) -> dict[tuple, dict[int, int]]:
    """Coefficients of the order-exactly-k monomials, grouped by monomial."""
    out: dict[tuple, dict[int, int]] = {}
    for i, s in vec.items():
        cone = s.cone
        for alpha, c in s.items():
            if cone.ord(alpha) == k:
                out.setdefault(alpha, {})[i] = c
    return out


class _GradedSystem:
    """The Gr_0 differential on ``ker π_B`` split by parity."""

    def __init__(self, g: CurvedAlgebra, indices: Sequence[int]):
        self.even = [i for i in indices if g.parities[i] == 0]
        self.odd = [i for i in indices if g.parities[i] == 1]
        self.odd_to_even = constant_matrix(g, self.even, self.odd)
        self.even_to_odd = constant_matrix(g, self.odd, self.even)

    def closed_even(self, vec: dict[int, int]) -> bool:
        return not any(self.even_to_odd.apply([vec.get(i, 0) for i in self.even]))

    def closed_odd(self, vec: dict[int, int]) -> bool:
        return not any(self.odd_to_even.apply([vec.get(i, 0) for i in self.odd]))


def transfer_mc(A: CurvedAlgebra, B: CurvedAlgebra, M: Bimodule, m0: Element, b: Element,
                trunc_order: int | None = None, solve: Solver = solve_integer) -> TransferResult:
    """Solve for ``(a, m)`` with ``a ≡ 0`` and ``m ≡ m0`` modulo 𝔪.

    Raises :class:`InvariantError` when ``b`` fails the Maurer–Cartan equation
    at some order or an obstruction is not closed, and
    :class:`ObstructionError` when an integer system has no solution.
    """
    n = A.trunc_order if trunc_order is None else trunc_order
    if n > A.trunc_order:
        raise InvariantError("requested order exceeds the truncation of the inputs")
    if m0.coeffs and m0.parity != 0:
        raise InvariantError("m0 must have even parity in M")
    if b.coeffs and b.parity != 1:
        raise InvariantError("b must have odd parity")
    if b.valuation() < 1:
        raise InvariantError("b must have valuation ≥ 1")
    tri = build_triangle(A.truncate(n), B.truncate(n), M.truncate(n))
    g = _gr0_deformed(tri, m0)
    system = _GradedSystem(g, tri.a_indices + tri.m_indices)
    if not system.closed_odd({tri.A.rank + i: c for i, c in m0.constant_part().items()}):
        raise InvariantError("m0 is not closed modulo 𝔪")
    t_vec: dict = {}
    add_into(t_vec, tri.embed("M", m0.truncate(n)).coeffs)
    add_into(t_vec, tri.embed("B", b.truncate(n)).coeffs)
    log = []
    bset = set(tri.b_indices)
    for k in range(1, n):
        obstruction = mc_expression(tri.algebra, Element(t_vec, 1)).coeffs
        parts = _order_parts(obstruction, k)
        entry = {"order": k, "monomials": [], "b_component": 0}
        correction: dict = {}
        for alpha in sorted(parts):
            vec = parts[alpha]
            if any(i in bset for i in vec):
                raise InvariantError(
                    f"b fails the Maurer–Cartan equation at order {k} (monomial {alpha})")
            if not system.closed_even(vec):
                raise InvariantError(
                    f"order-{k} obstruction at {alpha} is not closed; the inputs violate "
                    "the A∞ relations")
            rhs = [-vec.get(i, 0) for i in system.even]
            x = solve(system.odd_to_even, rhs)
            if x is None:
                entry["monomials"].append({"class": list(alpha), "solved": False})
                log.append(entry)
                raise ObstructionError(
                    f"integer system unsolvable at order {k}, monomial {alpha}", order=k,
                    monomial=alpha, log=log)
            if system.odd_to_even.apply(x) != rhs:
                raise InvariantError("solver returned a vector that does not solve the system")
            entry["monomials"].append({"class": list(alpha), "solved": True,
                                       "obstruction": {tri.algebra.names[i]: c
                                                       for i, c in sorted(vec.items())}})
            for i, c in zip(system.odd, x):
                if c:
                    add_into(correction, {i: PowerSeries.monomial(A.cone, n, alpha, c)})
        add_into(t_vec, correction)
        log.append(entry)
    final = mc_expression(tri.algebra, Element(t_vec, 1))
    if not final.is_zero():
        raise InvariantError("transfer finished with a nonzero residual")
    a, m, _ = tri.split(Element(t_vec, 1))
    return TransferResult(Element(a.coeffs, 1), Element(m.coeffs, 0), n, log)


def verify_transfer(A: CurvedAlgebra, B: CurvedAlgebra, M: Bimodule, m0: Element, b: Element,
                    result: TransferResult) -> dict[str, bool]:
    """Independent substitution checks of a transfer result."""
    n = result.order_achieved
    An = A.truncate(n)
    a = result.a.truncate(n)
    checks = {
        "a_maurer_cartan": mc_expression(An, a).is_zero(),
        "m_closed": bimodule_action(M.truncate(n), a, result.m.truncate(n), b.truncate(n)).is_zero(),
        "a_leading_zero": a.valuation() >= 1,
        "m_leading": (result.m - m0).truncate(1).is_zero(),
    }
    return checks


def lift_cunit(A: CurvedAlgebra, B: CurvedAlgebra, M: Bimodule, result: TransferResult,
               b: Element, e_b: Element, m0: Element, solve: Solver = solve_integer) -> Element:
    """Lift a closed ``e_b`` of ``B^b`` to ``e_a`` with ``e_a + x_M + e_b`` closed in ``𝒯^t``.

    Solved order by order, starting at order zero, through the acyclic
    kernel of ``π_B``.  Raises :class:`ObstructionError` if a system fails.
    """
    n = result.order_achieved
    tri = build_triangle(A.truncate(n), B.truncate(n), M.truncate(n))
    t = Element({**tri.embed("A", result.a).coeffs, **tri.embed("M", result.m).coeffs,
                 **tri.embed("B", b).coeffs}, 1)
    deformed = deform(tri.algebra, t, require_positive_valuation=False)
    g = _gr0_deformed(tri, m0)
    system = _GradedSystem(g, tri.a_indices + tri.m_indices)
    bset = set(tri.b_indices)
    x: dict = dict(tri.embed("B", e_b.truncate(n)).coeffs)
    for k in range(n):
        residual = deformed.mu(Element(x, 0)).coeffs
        parts = _order_parts(residual, k)
        for alpha in sorted(parts):
            vec = parts[alpha]
            if any(i in bset for i in vec):
                raise InvariantError("e_b is not closed in the deformed algebra B^b")
            rhs = [-vec.get(i, 0) for i in system.odd]
            sol = solve(system.even_to_odd, rhs)
            if sol is None:
                raise ObstructionError(f"c-unit lift unsolvable at order {k}, monomial {alpha}",
                                       order=k, monomial=alpha)
            for i, c in zip(system.even, sol):
                if c:
                    add_into(x, {i: PowerSeries.monomial(A.cone, n, alpha, c)})
    if not deformed.mu(Element(x, 0)).is_zero():
        raise InvariantError("c-unit lift finished with a nonzero residual")
    e_a, _, _ = tri.split(Element(x, 0))
    return Element(e_a.coeffs, 0)


def transfer_cunit(A: CurvedAlgebra, B: CurvedAlgebra, M: Bimodule, result: TransferResult,
                   b: Element, e_b: Element, m0: Element) -> tuple[Element, bool]:
    """Lift ``e_b`` and check the lift is a c-unit of ``A^a``."""
    e_a = lift_cunit(A, B, M, result, b, e_b, m0)
    An = A.truncate(result.order_achieved)
    a = result.a.truncate(result.order_achieved)
    return e_a, verify_cunit(deform(An, a) if a.coeffs else An, e_a)
