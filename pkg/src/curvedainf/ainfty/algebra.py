"""Curved filtered A∞ algebras over a truncated monoid ring.

Sign convention.  Write ``‖x‖ = |x| - 1`` for the reduced degree.  The
relation checked for every input tuple is

    Σ_{i,j} (-1)^{‖x_1‖+…+‖x_i‖} μ(x_1..x_i, μ^j(x_{i+1}..x_{i+j}), x_{i+j+1}..x_k) = 0

including ``j = 0`` (curvature insertions).  This is the bar-construction form
of the reduced-degree convention: each μ^k has reduced degree one, so the
output parity of μ^k is the input parity sum plus k.  In this convention an
associative graded algebra becomes ``μ²(x, y) = (-1)^{|x|} x·y`` with
``μ¹ = d``; a strict unit then satisfies ``μ²(e, x) = x`` and
``μ²(x, e) = (-1)^{|x|} x``.

Odd elements have even reduced degree, so inserting them into gaps (the
deformation by a Maurer–Cartan element) needs no extra signs.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ..errors import InvariantError
from ..homalg import IntComplex, IntMatrix, homology, integer_kernel, solve_integer
from ..ring import ConeSpec, PowerSeries
from .linear import (OpTable, Vector, add_into, apply_op, by_output, clean_table,
                     insert_everywhere, negated, scaled, truncated, valuation)


@dataclass(frozen=True, eq=False)
class Element:
    """A homogeneous vector with series coefficients."""

    coeffs: Mapping[int, PowerSeries]
    parity: int

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self):
        return valuation(self.coeffs)

    def _combine(self, other: "Element", sign: int) -> "Element":
        if self.coeffs and other.coeffs and self.parity != other.parity:
            raise InvariantError("cannot add elements of different parity")
        par = self.parity if self.coeffs else other.parity
        acc = dict(self.coeffs)
        add_into(acc, other.coeffs, sign if sign != 1 else None)
        return Element(acc, par)

    def __add__(self, other: "Element") -> "Element":
        return self._combine(other, 1)

    def __sub__(self, other: "Element") -> "Element":
        return self._combine(other, -1)

    def __neg__(self) -> "Element":
        return Element(negated(self.coeffs), self.parity)

    def __mul__(self, scale) -> "Element":
        return Element(scaled(self.coeffs, scale), self.parity)

    __rmul__ = __mul__

    def truncate(self, n: int) -> "Element":
        return Element(truncated(self.coeffs, n), self.parity)

    def constant_part(self) -> dict[int, int]:
        return {i: s.constant_term() for i, s in self.coeffs.items() if s.constant_term()}

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if not self.coeffs and not other.coeffs:
            return True
        return self.parity == other.parity and dict(self.coeffs) == dict(other.coeffs)

    __hash__ = None


class CurvedAlgebra:
    """Free finite-rank ℤ/2-graded module with operation tensors μ^0..μ^k_max."""

    def __init__(self, cone: ConeSpec, trunc_order: int, names: Sequence[str],
                 parities: Sequence[int], ops: Mapping[int, Mapping] | None = None):
        self.cone = cone
        self.trunc_order = int(trunc_order)
        self.names = tuple(names)
        self.parities = tuple(int(p) % 2 for p in parities)
        if len(self.names) != len(self.parities):
            raise InvariantError("names and parities differ in length")
        if len(set(self.names)) != len(self.names):
            raise InvariantError("basis names must be distinct")
        self._index = {n: i for i, n in enumerate(self.names)}
        self.ops: dict[int, OpTable] = {}
        for k, table in (ops or {}).items():
            t = clean_table(table, self.trunc_order)
            if t:
                self.ops[int(k)] = t
        self._validate()

    # -- construction helpers --------------------------------------------------

    def _validate(self):
        r = len(self.names)
        for k, table in self.ops.items():
            if k < 0:
                raise InvariantError("negative arity")
            for key, vec in table.items():
                if len(key) != k or any(not 0 <= j < r for j in key):
                    raise InvariantError(f"operation key {key} does not fit arity {k} and rank {r}")
                want = (sum(self.parities[j] for j in key) + k) % 2
                for o, s in vec.items():
                    if not 0 <= o < r:
                        raise InvariantError(f"output index {o} out of range")
                    if s.cone != self.cone:
                        raise InvariantError("coefficient over a different cone")
                    if self.parities[o] != want:
                        raise InvariantError(
                            f"degree rule violated: μ^{k}{self._label(key)} has a component on "
                            f"{self.names[o]} of parity {self.parities[o]}, expected {want}")
        curv = self.ops.get(0, {}).get((), {})
        if any(s.valuation() < 1 for s in curv.values()):
            raise InvariantError("curvature condition violated: μ^0 must have valuation ≥ 1")

    def _label(self, key) -> str:
        return "(" + ", ".join(self.names[j] for j in key) + ")"

    def with_ops(self, ops: Mapping[int, Mapping], trunc_order: int | None = None) -> "CurvedAlgebra":
        return CurvedAlgebra(self.cone, self.trunc_order if trunc_order is None else trunc_order,
                             self.names, self.parities, ops)

    def truncate(self, n: int) -> "CurvedAlgebra":
        return self.with_ops(self.ops, min(n, self.trunc_order))

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def k_max(self) -> int:
        return max(self.ops, default=0)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InvariantError(f"unknown basis element {name!r}") from None

    def series(self, value) -> PowerSeries:
        if isinstance(value, PowerSeries):
            return value.truncate(self.trunc_order)
        return PowerSeries.constant(self.cone, self.trunc_order, int(value))

    def element(self, coeffs: Mapping | None = None, parity: int | None = None) -> Element:
        """Build an element from ``{name or index: series or int}``."""
        vec: Vector = {}
        for key, val in (coeffs or {}).items():
            i = self.index(key) if isinstance(key, str) else int(key)
            add_into(vec, {i: self.series(val)})
        pars = {self.parities[i] for i in vec}
        if len(pars) > 1:
            raise InvariantError("element is not homogeneous")
        if pars:
            p = pars.pop()
            if parity is not None and parity % 2 != p:
                raise InvariantError("element parity does not match its support")
            parity = p
        return Element(vec, 0 if parity is None else parity % 2)

    def zero(self, parity: int = 1) -> Element:
        return Element({}, parity)

    def parity_of(self, vec: Mapping) -> int | None:
        pars = {self.parities[i] for i in vec}
        return pars.pop() if len(pars) == 1 else None

    def mu(self, *args: Element) -> Element:
        """Evaluate μ^k on elements."""
        k = len(args)
        out = apply_op(self.ops.get(k, {}), [a.coeffs for a in args])
        par = (sum(a.parity for a in args) + k) % 2
        return Element(out, par)

    def curvature(self) -> Element:
        return Element(dict(self.ops.get(0, {}).get((), {})), 0)

    def __eq__(self, other):
        if not isinstance(other, CurvedAlgebra):
            return NotImplemented
        return (self.cone == other.cone and self.trunc_order == other.trunc_order
                and self.names == other.names and self.parities == other.parities
                and self.ops == other.ops)

    __hash__ = None

    def __repr__(self):
        arities = sorted(self.ops)
        return (f"CurvedAlgebra(rank={self.rank}, N={self.trunc_order}, arities={arities})")


# -- relation checking ---------------------------------------------------------


@dataclass
class RelationReport:
    arity_bound: int
    violations: list = field(default_factory=list)  # (tuple of names, {name: series})

    @property
    def passed(self) -> bool:
        return not self.violations


def _residual_chunk(ops, parities, outer_items, bound):
    indexed = {j: by_output(t) for j, t in ops.items()}
    res: dict[tuple, Vector] = {}
    for n, okey, ovec in outer_items:
        sign = 1
        for p in range(n):
            if p:
                # reduced degree of the input just passed
                if parities[okey[p - 1]] == 0:
                    sign = -sign
            slot = okey[p]
            for j, idx in indexed.items():
                if n - 1 + j > bound:
                    continue
                for ikey, c in idx.get(slot, ()):
                    tup = okey[:p] + ikey + okey[p + 1:]
                    acc = res.setdefault(tup, {})
                    add_into(acc, ovec, c if sign == 1 else -c)
    return res


def relation_residuals(ops: Mapping[int, OpTable], parities: Sequence[int], bound: int,
                       jobs: int = 1) -> dict[tuple, Vector]:
    """Nonzero left-hand sides of the curved A∞ relations, by input tuple."""
    items = [(n, key, vec) for n, t in sorted(ops.items()) for key, vec in sorted(t.items())]
    if jobs > 1 and len(items) > 1:
        chunks = [items[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_residual_chunk, [ops] * jobs, [parities] * jobs, chunks,
                                  [bound] * jobs))
    else:
        parts = [_residual_chunk(ops, parities, items, bound)]
    total: dict[tuple, Vector] = {}
    for part in parts:
        for tup, vec in part.items():
            add_into(total.setdefault(tup, {}), vec)
    return {t: v for t, v in sorted(total.items()) if v}


def default_arity_bound(alg: CurvedAlgebra) -> int:
    """Largest arity at which a relation can have a nonzero term."""
    return max(2 * alg.k_max - 1, 0)


def check_curved_ainfty(alg: CurvedAlgebra, arity_bound: int | None = None,
                        jobs: int = 1) -> RelationReport:
    """Check the curved A∞ relations on all basis tuples up to ``arity_bound``.

    Relations are assembled sparsely by composing stored entries, so cost
    scales with the number of nonzero structure constants, not rank^k.
    """
    bound = default_arity_bound(alg) if arity_bound is None else arity_bound
    res = relation_residuals(alg.ops, alg.parities, bound, jobs)
    report = RelationReport(bound)
    for tup, vec in res.items():
        report.violations.append((tuple(alg.names[j] for j in tup),
                                  {alg.names[o]: s for o, s in sorted(vec.items())}))
    return report


# -- associated graded, deformation, Maurer–Cartan -------------------------------


def gr0(alg: CurvedAlgebra) -> CurvedAlgebra:
    """Reduce every coefficient modulo 𝔪.

    The result lives over the same cone with truncation order one, which is
    ℤ⟦NE⟧/𝔪 = ℤ.  Curvature disappears since it has valuation ≥ 1.
    """
    return alg.truncate(1)


def _check_insertable(x: Element, need_valuation: bool):
    if x.parity != 1:
        raise InvariantError("Maurer–Cartan candidates must have odd parity")
    if need_valuation and x.valuation() < 1:
        raise InvariantError("Maurer–Cartan candidates must have valuation ≥ 1")


def deform(alg: CurvedAlgebra, x: Element, require_positive_valuation: bool = True) -> CurvedAlgebra:
    """The algebra ``A^x`` obtained by inserting ``x`` into every gap."""
    _check_insertable(x, require_positive_valuation)
    if x.is_zero():
        return alg
    return alg.with_ops(insert_everywhere(alg.ops, truncated(x.coeffs, alg.trunc_order)))


def mc_expression(alg: CurvedAlgebra, x: Element) -> Element:
    """``Σ_k μ^k(x, …, x)`` truncated at the algebra's order."""
    full = insert_everywhere(alg.ops, truncated(x.coeffs, alg.trunc_order), only_full=True)
    return Element(full.get(0, {}).get((), {}), 0)


def check_mc(alg: CurvedAlgebra, x: Element) -> bool:
    _check_insertable(x, True)
    return mc_expression(alg, x).is_zero()


# -- Gr_0 cohomology and c-units -------------------------------------------------


def constant_matrix(alg: CurvedAlgebra, rows: Sequence[int], cols: Sequence[int],
                    table: Mapping | None = None) -> IntMatrix:
    """Constant-term matrix of a unary table from ``cols`` to ``rows``."""
    table = alg.ops.get(1, {}) if table is None else table
    rpos = {r: i for i, r in enumerate(rows)}
    out = [[0] * len(cols) for _ in rows]
    for jc, c in enumerate(cols):
        for o, s in table.get((c,), {}).items():
            v = s.constant_term()
            if v:
                if o not in rpos:
                    raise InvariantError("index set is not closed under the differential")
                out[rpos[o]][jc] = v
    return IntMatrix(out, len(rows), len(cols))


def gr0_complex(alg: CurvedAlgebra, indices: Iterable[int] | None = None):
    """The Gr_0 cochain complex on a μ¹-stable set of basis indices.

    Returns ``(complex, even_indices, odd_indices)``.
    """
    idx = sorted(range(alg.rank) if indices is None else indices)
    even = [i for i in idx if alg.parities[i] == 0]
    odd = [i for i in idx if alg.parities[i] == 1]
    d_even = constant_matrix(alg, odd, even)
    d_odd = constant_matrix(alg, even, odd)
    return IntComplex(len(even), len(odd), d_even, d_odd), even, odd


def gr0_cohomology(alg: CurvedAlgebra, indices=None):
    return homology(gr0_complex(alg, indices)[0])


def _mu2_constant(alg: CurvedAlgebra, x: Mapping[int, int], y: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for (i, j), vec in alg.ops.get(2, {}).items():
        if i in x and j in y:
            for o, s in vec.items():
                v = s.constant_term()
                if v:
                    out[o] = out.get(o, 0) + x[i] * y[j] * v
    return {k: v for k, v in out.items() if v}


def verify_cunit(alg: CurvedAlgebra, e: Element) -> bool:
    """Whether ``[e]`` is a two-sided unit on ``H(gr0(alg))`` over ℤ.

    The product on cohomology is ``[x]·[y] = (-1)^{|x|} [μ²(x, y)]``, so we
    test that ``μ²(e, z) - z`` and ``(-1)^{|z|} μ²(z, e) - z`` are
    coboundaries for a generating set ``z`` of the cocycles in each parity.
    """
    if e.parity != 0:
        raise InvariantError("a c-unit candidate must have even parity")
    cx, even, odd = gr0_complex(alg)
    e0 = e.constant_part()
    blocks = {0: even, 1: odd}
    d_from = {0: cx.d_even, 1: cx.d_odd}
    # e must itself be a cocycle
    if any(v for v in d_from[0].apply([e0.get(i, 0) for i in even])):
        return False
    for p in (0, 1):
        gens = integer_kernel(d_from[p]) if blocks[p] else []
        into = d_from[1 - p]  # coboundaries landing in parity p
        for g in gens:
            z = {blocks[p][i]: c for i, c in enumerate(g) if c}
            sign = -1 if p else 1
            left = _mu2_constant(alg, e0, z)
            right = {k: sign * v for k, v in _mu2_constant(alg, z, e0).items()}
            for w in (left, right):
                diff = [w.get(i, 0) - z.get(i, 0) for i in blocks[p]]
                if any(diff) and solve_integer(into, diff) is None:
                    return False
    return True
