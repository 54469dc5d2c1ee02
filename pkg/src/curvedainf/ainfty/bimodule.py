"""A∞ bimodules and their lower-triangular packaging.

A bimodule ``M`` over ``(A, B)`` has operations
``μ^{i|1|j}(a_1..a_i; m; b_1..b_j)`` stored under the key
``((a_1..a_i), m, (b_1..b_j))``.  Parities of ``M`` are its own (unshifted)
parities.  The bimodule relations are, by definition, the A∞ relations of
the algebra ``A ⊕ M[-1] ⊕ B`` in which ``M`` sits with parity shifted by one
and operations take A-inputs, then one M-input, then B-inputs.  Since μ^k
there has degree 2 - k, ``μ^{i|1|j}`` changes parity by ``i + j + 1``.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from ..errors import InvariantError
from .algebra import CurvedAlgebra, Element, RelationReport, check_curved_ainfty
from .linear import Vector, add_into, clean_table


class Bimodule:
    def __init__(self, left: CurvedAlgebra, right: CurvedAlgebra, names: Sequence[str],
                 parities: Sequence[int], ops: Mapping | None = None):
        if left.cone != right.cone or left.trunc_order != right.trunc_order:
            raise InvariantError("ring mismatch between the left and right algebras")
        self.left, self.right = left, right
        self.cone, self.trunc_order = left.cone, left.trunc_order
        self.names = tuple(names)
        self.parities = tuple(int(p) % 2 for p in parities)
        if len(set(self.names)) != len(self.names) or len(self.names) != len(self.parities):
            raise InvariantError("bimodule basis names must be distinct, one parity each")
        self._index = {n: i for i, n in enumerate(self.names)}
        raw = clean_table({(tuple(a), int(m), tuple(b)): v for (a, m, b), v in (ops or {}).items()},
                          self.trunc_order)
        self.ops: dict[tuple, Vector] = {k: v for k, v in raw.items()}
        self._validate()

    def _validate(self):
        ra, rm, rb = self.left.rank, len(self.names), self.right.rank
        for (a, m, b), vec in self.ops.items():
            if any(not 0 <= x < ra for x in a) or not 0 <= m < rm or any(not 0 <= x < rb for x in b):
                raise InvariantError(f"bimodule key {(a, m, b)} out of range")
            want = (sum(self.left.parities[x] for x in a) + self.parities[m]
                    + sum(self.right.parities[x] for x in b) + len(a) + len(b) + 1) % 2
            for o, s in vec.items():
                if not 0 <= o < rm:
                    raise InvariantError("bimodule output index out of range")
                if s.cone != self.cone:
                    raise InvariantError("coefficient over a different cone")
                if self.parities[o] != want:
                    raise InvariantError(
                        f"bimodule degree rule violated at {(a, m, b)}: output {self.names[o]} "
                        f"has parity {self.parities[o]}, expected {want}")

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InvariantError(f"unknown bimodule element {name!r}") from None

    def element(self, coeffs: Mapping | None = None, parity: int | None = None) -> Element:
        vec: Vector = {}
        for key, val in (coeffs or {}).items():
            i = self.index(key) if isinstance(key, str) else int(key)
            add_into(vec, {i: self.left.series(val)})
        pars = {self.parities[i] for i in vec}
        if len(pars) > 1:
            raise InvariantError("element is not homogeneous")
        if pars:
            parity = pars.pop()
        return Element(vec, 0 if parity is None else parity % 2)

    def truncate(self, n: int) -> "Bimodule":
        return Bimodule(self.left.truncate(n), self.right.truncate(n), self.names, self.parities,
                        self.ops)

    def __eq__(self, other):
        if not isinstance(other, Bimodule):
            return NotImplemented
        return (self.left == other.left and self.right == other.right and self.names == other.names
                and self.parities == other.parities and self.ops == other.ops)

    __hash__ = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, left: CurvedAlgebra, right: CurvedAlgebra) -> "Bimodule":
        return cls(left, right, (), (), {})

    @classmethod
    def from_category(cls, cat, x: str, y: str) -> "Bimodule":
        """``hom(x, y)`` as an ``End(x)``–``End(y)`` bimodule.

        Chains ``a.., m, b..`` of the category become bimodule operations,
        twisted by ``(-1)^{Σ ‖b‖}`` to account for the parity shift of M.
        """
        if x == y:
            raise InvariantError("source and target objects must differ")
        ia, im, ib = cat.hom_indices(x, x), cat.hom_indices(x, y), cat.hom_indices(y, y)
        pa = {g: i for i, g in enumerate(ia)}
        pm = {g: i for i, g in enumerate(im)}
        pb = {g: i for i, g in enumerate(ib)}
        left, right = cat.end_algebra(x), cat.end_algebra(y)
        pars = cat.algebra.parities
        ops: dict = {}
        for k, table in cat.algebra.ops.items():
            for key, vec in table.items():
                ms = [p for p, g in enumerate(key) if g in pm]
                if len(ms) != 1:
                    continue
                p = ms[0]
                a, b = key[:p], key[p + 1:]
                if not all(g in pa for g in a) or not all(g in pb for g in b):
                    continue
                out = {pm[o]: s for o, s in vec.items() if o in pm}
                if not out:
                    continue
                twist = sum(pars[g] + 1 for g in b) % 2
                if twist:
                    out = {o: -s for o, s in out.items()}
                ops[(tuple(pa[g] for g in a), pm[key[p]], tuple(pb[g] for g in b))] = out
        return cls(left, right, [cat.algebra.names[g] for g in im], [pars[g] for g in im], ops)

    @classmethod
    def diagonal(cls, alg: CurvedAlgebra) -> "Bimodule":
        """``alg`` as a bimodule over itself."""
        from .category import upper_triangular_category

        return cls.from_category(upper_triangular_category(alg), "X", "Y")


def assemble_triangle(A: CurvedAlgebra, B: CurvedAlgebra, M: Bimodule) -> CurvedAlgebra:
    """The algebra on ``A ⊕ M[-1] ⊕ B`` (basis in that order)."""
    if M.left.cone != A.cone or M.left.trunc_order != A.trunc_order or \
            B.cone != A.cone or B.trunc_order != A.trunc_order:
        raise InvariantError("ring mismatch between algebras and bimodule")
    if M.left.names != A.names or M.right.names != B.names:
        raise InvariantError("bimodule is not over the given algebras")
    ra, rm = A.rank, M.rank
    om, ob = ra, ra + rm
    names = [f"A:{n}" for n in A.names] + [f"M:{n}" for n in M.names] + [f"B:{n}" for n in B.names]
    pars = list(A.parities) + [(p + 1) % 2 for p in M.parities] + list(B.parities)
    ops: dict[int, dict] = {}
    for k, table in A.ops.items():
        for key, vec in table.items():
            ops.setdefault(k, {})[key] = dict(vec)
    for k, table in B.ops.items():
        for key, vec in table.items():
            nkey = tuple(ob + j for j in key)
            target = ops.setdefault(k, {}).setdefault(nkey, {})
            add_into(target, {ob + o: s for o, s in vec.items()})
    for (a, m, b), vec in M.ops.items():
        nkey = tuple(a) + (om + m,) + tuple(ob + j for j in b)
        ops.setdefault(len(nkey), {})[nkey] = {om + o: s for o, s in vec.items()}
    return CurvedAlgebra(A.cone, A.trunc_order, names, pars, ops)


def check_bimodule(M: Bimodule, arity_bound: int | None = None, jobs: int = 1) -> RelationReport:
    """Bimodule relations: triangle relations on tuples with one M input."""
    tri = assemble_triangle(M.left, M.right, M)
    report = check_curved_ainfty(tri, arity_bound, jobs)
    report.violations = [v for v in report.violations
                         if sum(1 for n in v[0] if n.startswith("M:")) == 1]
    return report


def bimodule_action(M: Bimodule, a: Element | None, m: Element, b: Element | None) -> Element:
    """``Σ_{i,j} μ^{i|1|j}(a..a; m; b..b)``, the differential of ``^aM^b`` applied to m."""
    out: Vector = {}
    ac = a.coeffs if a is not None else {}
    bc = b.coeffs if b is not None else {}
    for (ka, km, kb), vec in M.ops.items():
        c = m.coeffs.get(km)
        if c is None:
            continue
        for j in ka:
            s = ac.get(j)
            c = None if s is None else c * s
            if not c:
                break
        else:
            for j in kb:
                s = bc.get(j)
                c = None if s is None else c * s
                if not c:
                    break
            else:
                add_into(out, vec, c)
    return Element(out, (m.parity + 1) % 2)
