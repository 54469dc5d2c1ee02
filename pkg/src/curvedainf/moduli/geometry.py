"""Numerical data of a divisor complement: classes, Chern numbers, intersections."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from ..errors import InvariantError
from ..ring import ConeSpec, EffectiveClass


@dataclass(frozen=True)
class SphereClass:
    """A spherical class known only through ``c1(TX)(A)`` and ``A·V_q``.

    ``admissible`` lists the divisor subsets K with ``A ∈ H_2(V_K)``;
    ``None`` means every subset.
    """

    name: str
    c1: int
    intersections: tuple[int, ...]
    admissible: tuple[frozenset, ...] | None = None

    def allows(self, K: frozenset) -> bool:
        return self.admissible is None or K in self.admissible


@dataclass(frozen=True)
class GeometrySpec:
    n: int
    divisors: tuple[str, ...]
    classes: tuple[SphereClass, ...]
    q0: frozenset | None = None
    divisor_weights: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "divisors", tuple(self.divisors))
        object.__setattr__(self, "classes", tuple(self.classes))
        if self.n < 1:
            raise InvariantError("complex dimension n must be positive")
        if len(set(self.divisors)) != len(self.divisors):
            raise InvariantError("divisor names must be distinct")
        names = [c.name for c in self.classes]
        if len(set(names)) != len(names):
            raise InvariantError("class names must be distinct")
        q = len(self.divisors)
        for c in self.classes:
            if len(c.intersections) != q:
                raise InvariantError(f"class {c.name} needs one intersection number per divisor")
            if any(x < 0 for x in c.intersections):
                raise InvariantError(f"class {c.name} has a negative intersection number")
            if c.c1 < 0:
                raise InvariantError(f"class {c.name} has negative c1; semipositivity fails")
            for K in c.admissible or ():
                if any(not 0 <= i < q for i in K):
                    raise InvariantError(f"class {c.name} lists a divisor subset out of range")
        if self.q0 is not None and any(not 0 <= i < q for i in self.q0):
            raise InvariantError("Q0 must be a subset of the divisor indices")
        if self.divisor_weights is not None and len(self.divisor_weights) != q:
            raise InvariantError("one weight vector per divisor is required")

    @property
    def q_count(self) -> int:
        return len(self.divisors)

    def class_index(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < len(self.classes):
                raise InvariantError(f"unknown class index {name_or_index}")
            return name_or_index
        for i, c in enumerate(self.classes):
            if c.name == name_or_index:
                return i
        raise InvariantError(f"unknown class {name_or_index!r}")

    def sphere_class(self, idx: int | None) -> SphereClass:
        """``None`` is the zero class."""
        if idx is None:
            return SphereClass("0", 0, (0,) * self.q_count)
        return self.classes[self.class_index(idx)]

    def subsets(self) -> list[frozenset]:
        q = range(self.q_count)
        return [frozenset(s) for r in range(self.q_count + 1) for s in combinations(q, r)]


def c1_subvariety(A: SphereClass | int | None, K: Iterable[int], geom: GeometrySpec) -> int:
    """Adjunction: ``c1(TV_K)(A) = c1(TX)(A) - Σ_{q∈K} A·V_q``."""
    cls = A if isinstance(A, SphereClass) else geom.sphere_class(A)
    return cls.c1 - sum(cls.intersections[q] for q in K)


def sym_q_order(A: SphereClass | int, geom: GeometrySpec) -> int:
    """Order of the subgroup of Sym(ℓ) preserving a q-assignment: ``Π_q (A·V_q)!``."""
    cls = A if isinstance(A, SphereClass) else geom.sphere_class(A)
    return math.prod(math.factorial(x) for x in cls.intersections)


def total_intersections(parts: Sequence[SphereClass]) -> tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(col) for col in zip(*(p.intersections for p in parts)))


def monomial_weight(A: SphereClass | int | Sequence[SphereClass], geom: GeometrySpec,
                    cone: ConeSpec) -> EffectiveClass:
    """``[u]·D = Σ_q (A·V_q) w_q`` as an element of NE.

    A sequence of classes is treated as their sum.
    """
    if geom.divisor_weights is None:
        raise InvariantError("geometry has no divisor weights")
    if isinstance(A, (list, tuple)):
        inter = total_intersections(list(A)) or (0,) * geom.q_count
    else:
        cls = A if isinstance(A, SphereClass) else geom.sphere_class(A)
        inter = cls.intersections
    vec = [0] * cone.p_count
    for x, w in zip(inter, geom.divisor_weights):
        if len(w) != cone.p_count:
            raise InvariantError("divisor weight has the wrong length for this cone")
        for j, wj in enumerate(w):
            vec[j] += x * wj
    if not cone.is_member(vec):
        raise InvariantError(f"weight {tuple(vec)} is not in NE; the geometry is inconsistent")
    return cone.effective(vec)


def geometry_from_mapping(doc: Mapping) -> GeometrySpec:
    divisors = tuple(doc.get("divisors", ()))
    pos = {d: i for i, d in enumerate(divisors)}

    def subset(s):
        return frozenset(pos[x] if isinstance(x, str) else int(x) for x in s)

    classes = []
    for c in doc.get("classes", ()):
        adm = c.get("admissible")
        classes.append(SphereClass(c["name"], int(c["c1"]), tuple(int(x) for x in c["intersections"]),
                                   None if adm is None else tuple(subset(s) for s in adm)))
    q0 = doc.get("Q0")
    weights = doc.get("divisor_weights")
    return GeometrySpec(int(doc["n"]), divisors, tuple(classes),
                        None if q0 is None else subset(q0),
                        None if weights is None else tuple(tuple(int(x) for x in w) for w in weights))


def geometry_to_mapping(geom: GeometrySpec) -> dict:
    out: dict = {
        "n": geom.n,
        "divisors": list(geom.divisors),
        "classes": [],
    }
    for c in geom.classes:
        entry = {"name": c.name, "c1": c.c1, "intersections": list(c.intersections)}
        if c.admissible is not None:
            entry["admissible"] = [[geom.divisors[i] for i in sorted(K)] for K in c.admissible]
        out["classes"].append(entry)
    if geom.q0 is not None:
        out["Q0"] = [geom.divisors[i] for i in sorted(geom.q0)]
    if geom.divisor_weights is not None:
        out["divisor_weights"] = [list(w) for w in geom.divisor_weights]
    return out
