"""Curved filtered A∞ functors between algebras.

A functor ``G: A → B`` has components ``G^k: A^{⊗k} → B`` of reduced degree
zero, so ``G^k`` changes parity by ``k + 1``; ``G^0`` is its curvature and
must lie in 𝔪.  The functor equation, in the same bar convention as the
algebra relations, reads

    Σ (-1)^{‖x_1‖+…+‖x_i‖} G(x_1..x_i, μ_A(x_{i+1}..), ..)
        = Σ μ_B(G(x_1..), G(..), …, G(..))

where blocks on the right may be empty (``G^0`` insertions).
"""

from __future__ import annotations

from typing import Mapping

from ..errors import InvariantError
from ..ring import PowerSeries
from .algebra import CurvedAlgebra, Element, RelationReport
from .linear import OpTable, Vector, add_into, by_output, clean_table, insert_everywhere, truncated


class CurvedFunctor:
    def __init__(self, source: CurvedAlgebra, target: CurvedAlgebra,
                 comps: Mapping[int, Mapping]):
        if source.cone != target.cone:
            raise InvariantError("functor between algebras over different cones")
        self.source, self.target = source, target
        n = min(source.trunc_order, target.trunc_order)
        self.comps: dict[int, OpTable] = {}
        for k, table in comps.items():
            t = clean_table(table, n)
            if t:
                self.comps[int(k)] = t
        for k, table in self.comps.items():
            for key, vec in table.items():
                if len(key) != k or any(not 0 <= j < source.rank for j in key):
                    raise InvariantError(f"functor key {key} does not fit arity {k}")
                want = (sum(source.parities[j] for j in key) + k + 1) % 2
                for o in vec:
                    if target.parities[o] != want:
                        raise InvariantError(f"functor degree rule violated at {key}")
        g0 = self.comps.get(0, {}).get((), {})
        if any(s.valuation() < 1 for s in g0.values()):
            raise InvariantError("functor curvature G^0 must have valuation ≥ 1")

    @classmethod
    def identity(cls, alg: CurvedAlgebra) -> "CurvedFunctor":
        one = PowerSeries.constant(alg.cone, alg.trunc_order, 1)
        return cls(alg, alg, {1: {(i,): {i: one} for i in range(alg.rank)}})

    @property
    def k_max(self) -> int:
        return max(self.comps, default=0)


def pushforward_mc(g: CurvedFunctor, x: Element) -> Element:
    """``Σ_k G^k(x, …, x)``."""
    if x.parity != 1:
        raise InvariantError("Maurer–Cartan elements have odd parity")
    full = insert_everywhere(g.comps, truncated(x.coeffs, g.source.trunc_order), only_full=True)
    return Element(full.get(0, {}).get((), {}), 1)


def _rhs_terms(mu_ops: Mapping[int, OpTable], g_index: Mapping[int, list], bound: int):
    """All ``μ_B(G(block_1), …, G(block_r))`` contributions, by concatenated input tuple."""
    res: dict[tuple, Vector] = {}
    for r, table in mu_ops.items():
        for key, vec in table.items():
            # choose a component of G for each slot whose output feeds that slot
            partial = [((), None)]
            for slot in key:
                nxt = []
                for inputs, coeff in partial:
                    for gkey, c in g_index.get(slot, ()):
                        if len(inputs) + len(gkey) > bound:
                            continue
                        cc = c if coeff is None else coeff * c
                        if cc:
                            nxt.append((inputs + gkey, cc))
                partial = nxt
                if not partial:
                    break
            for inputs, coeff in partial:
                acc = res.setdefault(inputs, {})
                if coeff is None:
                    add_into(acc, vec)
                else:
                    add_into(acc, vec, coeff)
    return res


def _lhs_terms(g_comps: Mapping[int, OpTable], mu_index: Mapping[int, Mapping], parities,
               bound: int):
    res: dict[tuple, Vector] = {}
    for n, table in g_comps.items():
        for okey, ovec in table.items():
            sign = 1
            for p in range(n):
                if p and parities[okey[p - 1]] == 0:
                    sign = -sign
                for j, idx in mu_index.items():
                    if n - 1 + j > bound:
                        continue
                    for ikey, c in idx.get(okey[p], ()):
                        tup = okey[:p] + ikey + okey[p + 1:]
                        add_into(res.setdefault(tup, {}), ovec, c if sign == 1 else -c)
    return res


def _g_index(g_comps: Mapping[int, OpTable], rank: int, one: PowerSeries | None):
    idx: dict[int, list] = {}
    for k, table in g_comps.items():
        for key, vec in table.items():
            for o, c in vec.items():
                idx.setdefault(o, []).append((key, c))
    if one is not None:
        for i in range(rank):
            idx.setdefault(i, []).append(((i,), one))
    return idx


def check_functor(g: CurvedFunctor, arity_bound: int = 4) -> RelationReport:
    """Residuals of the functor equation on basis tuples up to ``arity_bound``."""
    src, tgt = g.source, g.target
    mu_index = {j: by_output(t) for j, t in src.ops.items()}
    lhs = _lhs_terms(g.comps, mu_index, src.parities, arity_bound)
    rhs = _rhs_terms(tgt.ops, _g_index(g.comps, src.rank, None), arity_bound)
    total: dict[tuple, Vector] = {}
    for tup, vec in lhs.items():
        add_into(total.setdefault(tup, {}), vec)
    for tup, vec in rhs.items():
        add_into(total.setdefault(tup, {}), vec, -1)
    report = RelationReport(arity_bound)
    for tup, vec in sorted(total.items()):
        if vec:
            report.violations.append((tuple(src.names[j] for j in tup),
                                      {tgt.names[o]: s for o, s in sorted(vec.items())}))
    return report


def transport_structure(target: CurvedAlgebra, comps: Mapping[int, Mapping]) -> tuple[CurvedAlgebra, CurvedFunctor]:
    """Pull ``target``'s structure back along a functor with ``G^1 = id``.

    ``comps`` gives ``G^0`` and ``G^k`` for ``k ≥ 2``, all of valuation ≥ 1.
    Returns the unique structure μ' on the same basis making ``G`` a functor
    ``(basis, μ') → target``, together with that functor.  Components of μ'
    vanish modulo 𝔪^N above arity ``k_max + N·(max G-arity − 1)``.
    """
    n = target.trunc_order
    comps = {int(k): clean_table(t, n) for k, t in comps.items() if int(k) != 1}
    for k, table in comps.items():
        for vec in table.values():
            if any(s.valuation() < 1 for s in vec.values()):
                raise InvariantError("transport needs higher functor components in 𝔪")
    gmax = max((k for k, t in comps.items() if t and k >= 2), default=1)
    bound = target.k_max + n * (gmax - 1)
    one = PowerSeries.constant(target.cone, n, 1)
    rhs = _rhs_terms(target.ops, _g_index(comps, target.rank, one), bound)
    by_arity: dict[int, dict] = {}
    for tup, vec in rhs.items():
        if vec:
            by_arity.setdefault(len(tup), {})[tup] = vec
    mu: dict[int, OpTable] = {}
    mu_index: dict[int, dict] = {}
    higher = {k: t for k, t in comps.items() if k >= 2}
    for k in range(bound + 1):
        table: dict[tuple, Vector] = {t: dict(v) for t, v in by_arity.get(k, {}).items()}
        # subtract G^m(.., μ'^j(..), ..) with m ≥ 2, j = k - m + 1 already known
        corr = _lhs_terms(higher, mu_index, target.parities, k)
        for tup, vec in corr.items():
            if len(tup) == k:
                add_into(table.setdefault(tup, {}), vec, -1)
        table = {t: v for t, v in table.items() if v}
        if table:
            mu[k] = table
            mu_index[k] = by_output(table)
    source = CurvedAlgebra(target.cone, n, target.names, target.parities, mu)
    full = dict(comps)
    full[1] = {(i,): {i: one} for i in range(target.rank)}
    return source, CurvedFunctor(source, target, full)
