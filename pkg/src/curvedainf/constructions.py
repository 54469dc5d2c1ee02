"""Small explicit algebras, bimodules and transfer problems.

Everything here is built from curved differential graded data: a basis with
parities, a differential ``d``, a product and a curvature ``w``.  The A∞
structure is ``μ⁰ = w``, ``μ¹ = d``, ``μ²(x, y) = (-1)^{|x|} x·y``; the relations
hold exactly when ``d`` is a derivation, the product is associative,
``dw = 0`` and ``d²x = x·w - w·x``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .ainfty import (Bimodule, CurvedAlgebra, CurvedCategory, Element, deform_category,
                     upper_triangular_category)
from .errors import InvariantError
from .ring import ConeSpec, PowerSeries


def _series(cone: ConeSpec, n: int, value) -> PowerSeries:
    if isinstance(value, PowerSeries):
        return value.truncate(n)
    return PowerSeries.constant(cone, n, int(value))


@dataclass(frozen=True)
class DGAData:
    """A curved dga presented by structure constants on named basis elements.

    ``d`` maps a name to ``{name: coeff}``, ``product`` maps a pair of names to
    ``{name: coeff}`` and ``curvature`` is ``{name: coeff}``.  Coefficients
    are integers or power series.
    """

    basis: tuple
    d: Mapping = field(default_factory=dict)
    product: Mapping = field(default_factory=dict)
    curvature: Mapping = field(default_factory=dict)

    @property
    def parity(self) -> dict[str, int]:
        return {n: p % 2 for n, p in self.basis}

    def ops(self, cone: ConeSpec, n: int) -> dict[int, dict]:
        par = self.parity
        ops: dict[int, dict] = {}
        if self.curvature:
            ops[0] = {(): {z: _series(cone, n, c) for z, c in self.curvature.items()}}
        for x, vec in self.d.items():
            ops.setdefault(1, {})[(x,)] = {y: _series(cone, n, c) for y, c in vec.items()}
        for (x, y), vec in self.product.items():
            sign = -1 if par[x] else 1
            ops.setdefault(2, {})[(x, y)] = {z: _series(cone, n, c) * sign for z, c in vec.items()}
        return ops

    def algebra(self, cone: ConeSpec, n: int) -> CurvedAlgebra:
        names = [b for b, _ in self.basis]
        index = {b: i for i, b in enumerate(names)}
        ops = {k: {tuple(index[x] for x in key): {index[o]: s for o, s in vec.items()}
                   for key, vec in table.items()}
               for k, table in self.ops(cone, n).items()}
        return CurvedAlgebra(cone, n, names, [p for _, p in self.basis], ops)


def unit_dga(unit: str = "e", extra: Sequence[tuple[str, int]] = ()) -> dict:
    """Products ``unit·x = x = x·unit`` for every basis element."""
    names = [unit] + [n for n, _ in extra]
    return {**{(unit, x): {x: 1} for x in names}, **{(x, unit): {x: 1} for x in names[1:]}}


def trivial_dga(unit: str = "e") -> DGAData:
    """ℤ itself: one even generator with ``e·e = e``."""
    return DGAData(((unit, 0),), {}, {(unit, unit): {unit: 1}})


def exterior_dga(gens: Sequence[str] = ("x", "y"), unit: str = "1") -> DGAData:
    """The exterior algebra on odd generators, zero differential."""
    gens = list(gens)
    monos = [()]
    for r in range(1, len(gens) + 1):
        monos.extend(combinations(range(len(gens)), r))

    def name(m):
        return unit if not m else "".join(gens[i] for i in m)

    basis = tuple((name(m), len(m) % 2) for m in monos)
    product = {}
    for m1 in monos:
        for m2 in monos:
            if set(m1) & set(m2):
                continue
            seq = list(m1) + list(m2)
            inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq))
                             if seq[i] > seq[j])
            product[(name(m1), name(m2))] = {name(tuple(sorted(seq))): (-1) ** inversions}
    return DGAData(basis, {}, product)


def acyclic_extension_dga(pairs: int = 1, square: bool = False, factor: int = 1,
                          unit: str = "e", suffix: str = "") -> DGAData:
    """ℤ·e plus pairs ``y_i → factor·z_i``; all other products vanish.

    With ``square`` also ``y_i·y_i = z_i``.  For ``factor ≠ ±1`` the pairs
    contribute torsion ``ℤ/factor`` to cohomology.
    """
    basis = [(unit, 0)]
    d, extra = {}, []
    for i in range(1, pairs + 1):
        y, z = f"y{i}{suffix}", f"z{i}{suffix}"
        basis += [(y, 1), (z, 0)]
        extra += [(y, 1), (z, 0)]
        d[y] = {z: factor}
    product = unit_dga(unit, extra)
    if square:
        for i in range(1, pairs + 1):
            product[(f"y{i}{suffix}", f"y{i}{suffix}")] = {f"z{i}{suffix}": 1}
    return DGAData(tuple(basis), d, product)


def with_curvature(data: DGAData, curvature: Mapping) -> DGAData:
    return DGAData(data.basis, data.d, data.product, dict(curvature))


def dga_category(cone: ConeSpec, n: int, objects: Sequence[str],
                 homs: Mapping[tuple[str, str], DGAData | Sequence],
                 d: Mapping, product: Mapping, curvature: Mapping) -> CurvedCategory:
    """A curved dga category; ``homs`` gives each morphism space's basis."""
    basis_by_hom = {k: (v.basis if isinstance(v, DGAData) else tuple(v)) for k, v in homs.items()}
    parity = {b: p % 2 for basis in basis_by_hom.values() for b, p in basis}
    data = DGAData(tuple((b, p) for b, p in parity.items()), d, product, curvature)
    ops = data.ops(cone, n)
    return CurvedCategory.from_homs(cone, n, objects, basis_by_hom, ops)


def graph_category(cone: ConeSpec, n: int, a: DGAData, b: DGAData,
                   phi: Mapping[str, Mapping[str, int]]) -> CurvedCategory:
    """Objects X, Y with End(X) = a, End(Y) = b and hom(X, Y) a copy of b.

    ``a`` acts on the left of hom(X, Y) through the dga map ``phi``.  The
    relations hold when ``phi`` commutes with ``d``, is multiplicative and
    sends the curvature of ``a`` to that of ``b``.
    """
    def tag(name, suffix):
        return f"{name}{suffix}"

    ma, mm, mb = "", "'", ""
    if {x for x, _ in a.basis} & {x for x, _ in b.basis}:
        ma = "_A"
    homs = {("X", "X"): [(tag(x, ma), p) for x, p in a.basis],
            ("X", "Y"): [(tag(x, mm), p) for x, p in b.basis],
            ("Y", "Y"): [(tag(x, mb), p) for x, p in b.basis]}
    d, prod, curv = {}, {}, {}
    for x, vec in a.d.items():
        d[tag(x, ma)] = {tag(y, ma): c for y, c in vec.items()}
    for x, vec in b.d.items():
        d[tag(x, mm)] = {tag(y, mm): c for y, c in vec.items()}
        d[tag(x, mb)] = {tag(y, mb): c for y, c in vec.items()}
    for (x, y), vec in a.product.items():
        prod[(tag(x, ma), tag(y, ma))] = {tag(z, ma): c for z, c in vec.items()}
    for (x, y), vec in b.product.items():
        prod[(tag(x, mb), tag(y, mb))] = {tag(z, mb): c for z, c in vec.items()}
        prod[(tag(x, mm), tag(y, mb))] = {tag(z, mm): c for z, c in vec.items()}
    # a·m = phi(a)·m
    for x, _ in a.basis:
        for u, cu in phi.get(x, {}).items():
            for (y, v), vec in b.product.items():
                if y != u:
                    continue
                key = (tag(x, ma), tag(v, mm))
                acc = prod.setdefault(key, {})
                for z, c in vec.items():
                    acc[tag(z, mm)] = acc.get(tag(z, mm), 0) + cu * c
    prod = {k: {z: c for z, c in v.items() if not (isinstance(c, int) and c == 0)}
            for k, v in prod.items()}
    for z, c in a.curvature.items():
        curv[tag(z, ma)] = c
    for z, c in b.curvature.items():
        curv[tag(z, mb)] = c
    return dga_category(cone, n, ("X", "Y"), homs, d, prod, curv)


# -- transfer problems ------------------------------------------------------------


@dataclass
class TransferProblem:
    A: CurvedAlgebra
    B: CurvedAlgebra
    M: Bimodule
    m0: Element
    b: Element
    trunc_order: int
    label: str = ""
    unit_b: Element | None = None


def _element_from_names(names: Sequence[str], coeffs: Mapping[str, PowerSeries | int], parity: int,
                        cone, n) -> Element:
    index = {x: i for i, x in enumerate(names)}
    vec = {}
    for x, c in coeffs.items():
        s = _series(cone, n, c)
        if s:
            vec[index[x]] = s
    return Element(vec, parity)


def problem_from_category(cat: CurvedCategory, m0: Mapping[str, int], b: Mapping,
                          label: str = "", unit_b: str | None = None) -> TransferProblem:
    alg = cat.algebra
    A, B = cat.end_algebra("X"), cat.end_algebra("Y")
    M = Bimodule.from_category(cat, "X", "Y")
    cone, n = alg.cone, alg.trunc_order
    m0e = _element_from_names(M.names, m0, 0, cone, n)
    be = _element_from_names(B.names, b, 1, cone, n)
    ue = _element_from_names(B.names, {unit_b: 1}, 0, cone, n) if unit_b else None
    return TransferProblem(A, B, M, m0e, be, n, label, ue)


def diagonal_problem(cone: ConeSpec, n: int, data: DGAData, unit: str,
                     c_x: Mapping, c_y: Mapping, b_extra: Mapping | None = None,
                     m0_sign: int = 1, label: str = "") -> TransferProblem:
    """Deform the diagonal of ``data`` by ``c_x`` at X and ``c_y`` at Y.

    ``c_x`` and ``c_y`` are odd with valuation ≥ 1; ``b_extra`` must be a
    Maurer–Cartan element of ``data``.  Then ``b = b_extra - c_y`` solves
    the equation for B = data^{c_y}, and ``a = b_extra - c_x`` is one solution
    for A = data^{c_x}.
    """
    d = data.algebra(cone, n)
    cat = upper_triangular_category(d)
    ex = d.element({x: _series(cone, n, c) for x, c in c_x.items()}, 1)
    ey = d.element({x: _series(cone, n, c) for x, c in c_y.items()}, 1)
    dcat = deform_category(cat, {"X": ex, "Y": ey})
    b = {f"{x}[Y,Y]": -_series(cone, n, c) for x, c in c_y.items()}
    for x, c in (b_extra or {}).items():
        key = f"{x}[Y,Y]"
        b[key] = b.get(key, _series(cone, n, 0)) + _series(cone, n, c)
    return problem_from_category(dcat, {f"{unit}[X,Y]": m0_sign}, b, label, f"{unit}[Y,Y]")


def _random_class(rng: random.Random, cone: ConeSpec, n: int) -> tuple[int, ...]:
    cands = [v for v in cone.classes_below_order(n, 2) if any(v)]
    return rng.choice(cands)


def _random_odd(rng: random.Random, cone: ConeSpec, n: int, names: Sequence[str], terms: int = 2):
    out: dict[str, PowerSeries] = {}
    for _ in range(terms):
        x = rng.choice(list(names))
        s = PowerSeries.monomial(cone, n, _random_class(rng, cone, n), rng.choice([-2, -1, 1, 2]))
        out[x] = out[x] + s if x in out else s
    return out


def solvable_problems(count: int = 24, seed: int = 0, cones: Sequence[ConeSpec] | None = None,
                      max_order: int = 5) -> list[TransferProblem]:
    """Transfer problems whose bimodule element is an integral quasi-isomorphism."""
    rng = random.Random(seed)
    cones = list(cones or [ConeSpec.orthant(1), ConeSpec.orthant(2), ConeSpec(2, ((1, 0), (1, 2)))])
    out = []
    for i in range(count):
        cone = cones[i % len(cones)]
        n = rng.randint(2, max_order)
        kind = i % 4
        if kind == 0:
            # curved A = ℤ ⊕ acyclic with curvature T^β·z, projecting onto B = ℤ
            sq = rng.random() < 0.5
            a = acyclic_extension_dga(1, square=sq)
            beta = _random_class(rng, cone, n)
            a = with_curvature(a, {"z1": PowerSeries.monomial(cone, n, beta, rng.choice([-1, 1, 3]))})
            b = trivial_dga("u")
            cat = graph_category(cone, n, a, b, {"e": {"u": 1}})
            out.append(problem_from_category(cat, {"u'": rng.choice([1, -1])}, {},
                                             f"projection-{i}", "u"))
            continue
        data, unit, odd, mc_free = [
            (exterior_dga(("x",)), "1", ["x"], True),
            (exterior_dga(("x", "y")), "1", ["x", "y"], True),
            (acyclic_extension_dga(1, square=rng.random() < 0.5), "e", ["y1"], False),
        ][kind - 1]
        c_x = _random_odd(rng, cone, n, odd)
        c_y = _random_odd(rng, cone, n, odd, terms=rng.randint(0, 2))
        b_extra = _random_odd(rng, cone, n, odd, 1) if mc_free else None
        out.append(diagonal_problem(cone, n, data, unit, c_x, c_y, b_extra,
                                    rng.choice([1, -1]), f"diagonal-{i}"))
    return out


def torsion_problem(cone: ConeSpec, n: int, factor: int, beta, label: str = "") -> TransferProblem:
    """A bimodule element that is a rational but not an integral quasi-isomorphism.

    A has ``dy = factor·z`` and curvature ``T^β z``; B has ``dy' = z'`` and
    curvature ``T^β z'`` with Maurer–Cartan element ``-T^β y'``.  The dga map
    ``y ↦ factor·y'``, ``z ↦ z'`` makes hom(X, Y) = B an A–B bimodule.  The
    curvature of A is not an integral coboundary, so transfer is obstructed
    at the order of ``β``.
    """
    w = PowerSeries.monomial(cone, n, beta)
    a = with_curvature(acyclic_extension_dga(1, factor=factor), {"z1": w})
    b = with_curvature(acyclic_extension_dga(1, unit="u", suffix="b"), {"z1b": w})
    phi = {"e": {"u": 1}, "y1": {"y1b": factor}, "z1": {"z1b": 1}}
    cat = graph_category(cone, n, a, b, phi)
    return problem_from_category(cat, {"u'": 1}, {"y1b": -w}, label, "u")


def zero_bimodule_problem(cone: ConeSpec, n: int, factor: int, beta, label: str = "") -> TransferProblem:
    """A has no integral Maurer–Cartan element; the bimodule is zero and m0 = 0."""
    w = PowerSeries.monomial(cone, n, beta)
    a = with_curvature(acyclic_extension_dga(1, factor=factor), {"z1": w}).algebra(cone, n)
    b = trivial_dga("u").algebra(cone, n)
    M = Bimodule.zero(a, b)
    return TransferProblem(a, b, M, Element({}, 0), Element({}, 1), n, label)


def obstructed_problems(cones: Sequence[ConeSpec] | None = None) -> list[TransferProblem]:
    cones = list(cones or [ConeSpec.orthant(1), ConeSpec.orthant(2), ConeSpec(2, ((1, 0), (1, 2)))])
    out = []
    for i, (factor, n) in enumerate([(2, 2), (3, 3), (2, 4), (5, 3), (4, 5)]):
        cone = cones[i % len(cones)]
        beta = next(v for v in cone.classes_below_order(2, 2) if any(v))
        out.append(torsion_problem(cone, n, factor, beta, f"torsion-{factor}-{i}"))
    cone = cones[0]
    two = (2,) + (0,) * (cone.p_count - 1)
    out.append(torsion_problem(cone, 4, 2, two, "torsion-late"))
    out.append(zero_bimodule_problem(cone, 3, 2, (1,) + (0,) * (cone.p_count - 1), "zero-bimodule"))
    return out


def check_dga_data(data: DGAData) -> None:
    """Raise if any name used in ``data`` is missing from its basis."""
    names = {b for b, _ in data.basis}
    used = set(data.d) | {y for v in data.d.values() for y in v} | set(data.curvature)
    for (x, y), v in data.product.items():
        used |= {x, y, *v}
    missing = used - names
    if missing:
        raise InvariantError(f"names {sorted(missing)} are not in the basis")
