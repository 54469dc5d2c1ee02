"""Curved A∞ categories with finitely many objects.

A category is stored as one :class:`CurvedAlgebra` on the direct sum of its
morphism spaces, together with the source and target object of each basis
element.  Operations are only stored on composable chains
``hom(X0,X1) ⊗ … ⊗ hom(X_{k-1},X_k) → hom(X0,X_k)``, so non-composable
products vanish and relations of the big algebra are exactly the category
relations.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from ..errors import InvariantError
from .algebra import CurvedAlgebra, Element, check_mc, deform
from .linear import add_into


class CurvedCategory:
    def __init__(self, objects: Sequence[str], algebra: CurvedAlgebra,
                 source: Sequence[int], target: Sequence[int]):
        self.objects = tuple(objects)
        self.algebra = algebra
        self.source = tuple(source)
        self.target = tuple(target)
        if len(self.source) != algebra.rank or len(self.target) != algebra.rank:
            raise InvariantError("every basis element needs a source and a target object")
        self._validate()

    @classmethod
    def from_homs(cls, cone, trunc_order, objects: Sequence[str],
                  homs: Mapping[tuple[str, str], Sequence[tuple[str, int]]],
                  ops: Mapping[int, Mapping] | None = None) -> "CurvedCategory":
        """Build from ``{(X, Y): [(name, parity), ...]}`` and ops keyed by names."""
        objects = tuple(objects)
        pos = {o: i for i, o in enumerate(objects)}
        names, pars, src, tgt = [], [], [], []
        for (x, y), basis in homs.items():
            for name, p in basis:
                names.append(name)
                pars.append(p)
                src.append(pos[x])
                tgt.append(pos[y])
        index = {n: i for i, n in enumerate(names)}
        table: dict[int, dict] = {}
        for k, entries in (ops or {}).items():
            for key, vec in entries.items():
                ikey = tuple(index[n] for n in key)
                table.setdefault(k, {})[ikey] = {index[n]: s for n, s in vec.items()}
        alg = CurvedAlgebra(cone, trunc_order, names, pars, table)
        return cls(objects, alg, src, tgt)

    def _validate(self):
        for k, table in self.algebra.ops.items():
            for key, vec in table.items():
                if k == 0:
                    for o in vec:
                        if self.source[o] != self.target[o]:
                            raise InvariantError("curvature must lie in endomorphism spaces")
                    continue
                for a, b in zip(key, key[1:]):
                    if self.target[a] != self.source[b]:
                        raise InvariantError(f"operation on a non-composable chain {key}")
                s, t = self.source[key[0]], self.target[key[-1]]
                for o in vec:
                    if (self.source[o], self.target[o]) != (s, t):
                        raise InvariantError(f"output of {key} lies in the wrong morphism space")

    def object_index(self, x: str) -> int:
        try:
            return self.objects.index(x)
        except ValueError:
            raise InvariantError(f"unknown object {x!r}") from None

    def hom_indices(self, x: str, y: str) -> list[int]:
        i, j = self.object_index(x), self.object_index(y)
        return [b for b in range(self.algebra.rank) if self.source[b] == i and self.target[b] == j]

    def end_algebra(self, x: str) -> CurvedAlgebra:
        """``End(x)`` as a curved algebra, basis in the same relative order."""
        idx = self.hom_indices(x, x)
        return self.sub_algebra(idx)

    def sub_algebra(self, idx: Sequence[int]) -> CurvedAlgebra:
        pos = {b: i for i, b in enumerate(idx)}
        ops: dict[int, dict] = {}
        for k, table in self.algebra.ops.items():
            for key, vec in table.items():
                if all(j in pos for j in key):
                    out = {pos[o]: s for o, s in vec.items() if o in pos}
                    if k == 0 and not out:
                        continue
                    if out:
                        ops.setdefault(k, {})[tuple(pos[j] for j in key)] = out
        a = self.algebra
        return CurvedAlgebra(a.cone, a.trunc_order, [a.names[b] for b in idx],
                             [a.parities[b] for b in idx], ops)

    def embed(self, x: str, elem: Element) -> Element:
        """Move an element of ``End(x)`` into the direct-sum basis."""
        idx = self.hom_indices(x, x)
        return Element({idx[i]: s for i, s in elem.coeffs.items()}, elem.parity)

    def with_algebra(self, alg: CurvedAlgebra) -> "CurvedCategory":
        return CurvedCategory(self.objects, alg, self.source, self.target)


def deform_category(cat: CurvedCategory, assignment: Mapping[str, Element],
                    require_positive_valuation: bool = True) -> CurvedCategory:
    """Insert each object's element into every gap at that object."""
    total: dict = {}
    for x, elem in assignment.items():
        add_into(total, cat.embed(x, elem).coeffs)
    if not total:
        return cat
    alg = deform(cat.algebra, Element(total, 1), require_positive_valuation)
    return cat.with_algebra(alg)


def bc_structure_maps(cat: CurvedCategory, assignment: Mapping[str, Element]) -> CurvedCategory:
    """Structure maps on objects paired with Maurer–Cartan elements.

    Morphism spaces are unchanged; every assigned element must solve the
    Maurer–Cartan equation in its endomorphism algebra, which makes the
    resulting category uncurved modulo 𝔪^N.
    """
    for x, elem in assignment.items():
        if not check_mc(cat.end_algebra(x), elem):
            raise InvariantError(f"element assigned to {x!r} fails the Maurer–Cartan equation")
    missing = [x for x in cat.objects if x not in assignment]
    for x in missing:
        if not cat.end_algebra(x).curvature().is_zero():
            raise InvariantError(f"object {x!r} is curved but has no Maurer–Cartan element")
    out = deform_category(cat, assignment)
    assert out.algebra.curvature().is_zero()
    return out


def upper_triangular_category(alg: CurvedAlgebra, objects: Sequence[str] = ("X", "Y")) -> CurvedCategory:
    """``alg`` tensored with the path category of the chain X → Y → ….

    ``hom(X_i, X_j)`` is a copy of ``alg`` for ``i ≤ j`` and zero otherwise.
    Matrix units have degree zero and compose associatively, so relations
    hold whenever they hold for ``alg``.  Names are ``name[Xi,Xj]``.
    """
    objects = tuple(objects)
    n = len(objects)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    names, pars, src, tgt = [], [], [], []
    base: dict[tuple[int, int], int] = {}
    for (i, j) in pairs:
        base[(i, j)] = len(names)
        for nm, p in zip(alg.names, alg.parities):
            names.append(f"{nm}[{objects[i]},{objects[j]}]")
            pars.append(p)
            src.append(i)
            tgt.append(j)

    def chains(length):
        # nondecreasing object sequences o_0 ≤ … ≤ o_length
        def rec(prefix):
            if len(prefix) == length + 1:
                yield tuple(prefix)
                return
            for o in range(prefix[-1], n):
                yield from rec(prefix + [o])
        for start in range(n):
            yield from rec([start])

    ops: dict[int, dict] = {}
    for k, table in alg.ops.items():
        for key, vec in table.items():
            if k == 0:
                for i in range(n):
                    off = base[(i, i)]
                    ops.setdefault(0, {}).setdefault((), {}).update({off + o: s for o, s in vec.items()})
                continue
            for ch in chains(k):
                nkey = tuple(base[(ch[p], ch[p + 1])] + j for p, j in enumerate(key))
                off = base[(ch[0], ch[-1])]
                ops.setdefault(k, {})[nkey] = {off + o: s for o, s in vec.items()}
    big = CurvedAlgebra(alg.cone, alg.trunc_order, names, pars, ops)
    return CurvedCategory(objects, big, src, tgt)
