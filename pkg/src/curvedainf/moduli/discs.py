"""Disc moduli dimensions, tangency data and the sphere-exclusion count."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..errors import InvariantError
from .geometry import GeometrySpec, SphereClass
from .trees import CombinatorialType, dim_gamma, enumerate_types, normalize_budget


def disc_dim(iA: int, k: int) -> int:
    if k < 0:
        raise InvariantError("k must be nonnegative")
    return iA + k - 2


@dataclass(frozen=True)
class TangencyData:
    """Tangency vectors ``t(i) ∈ ℤ≥0^Q`` at interior points ``1..ℓ``.

    ``target`` is ``(A·V_q)_q`` for the disc class; the rows must sum to it.
    """

    rows: tuple[tuple[int, ...], ...]
    target: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        target = tuple(int(x) for x in self.target)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "target", target)
        if any(len(r) != len(target) for r in rows):
            raise InvariantError("tangency vectors need one entry per divisor")
        if any(x < 0 for r in rows for x in r):
            raise InvariantError("tangency entries are nonnegative")
        sums = tuple(sum(col) for col in zip(*rows)) if rows else (0,) * len(target)
        if sums != target:
            raise InvariantError(f"tangency rows sum to {sums}, expected {target}")

    @property
    def ell(self) -> int:
        return len(self.rows)

    def size(self, i: int) -> int:
        return sum(self.rows[i])

    def support(self, i: int) -> frozenset:
        return frozenset(q for q, x in enumerate(self.rows[i]) if x)

    def is_canonical(self) -> bool:
        return all(sum(r) == 1 for r in self.rows)

    def as_multiset(self) -> tuple:
        return tuple(sorted(self.rows))


def canonical_tangency(A: SphereClass | int, q_assignment: Sequence, geom: GeometrySpec) -> TangencyData:
    """``t(i) = e_{q(i)}``; ``q_assignment`` lists a divisor (name or index) per point."""
    cls = A if isinstance(A, SphereClass) else geom.sphere_class(A)
    pos = {d: i for i, d in enumerate(geom.divisors)}
    qs = []
    for q in q_assignment:
        if isinstance(q, str):
            if q not in pos:
                raise InvariantError(f"unknown divisor {q!r}")
            q = pos[q]
        if not 0 <= q < geom.q_count:
            raise InvariantError(f"divisor index {q} out of range")
        qs.append(q)
    for q in range(geom.q_count):
        if qs.count(q) != cls.intersections[q]:
            raise InvariantError(f"{qs.count(q)} points assigned to {geom.divisors[q]} "
                                 f"but A·V = {cls.intersections[q]}")
    rows = tuple(tuple(int(j == q) for j in range(geom.q_count)) for q in qs)
    return TangencyData(rows, cls.intersections)


@dataclass(frozen=True)
class Bubble:
    """A single-marked sphere tree attached at interior point ``point``.

    ``K_point`` is the divisor set containing the attaching point on the disc.
    """

    point: int
    gamma: CombinatorialType
    K_point: frozenset

    @property
    def K_marked(self) -> frozenset:
        return self.gamma.K[self.gamma.markings[0]]


def _check_bubbles(t: TangencyData, bubbles: Sequence[Bubble], geom: GeometrySpec) -> None:
    points = [b.point for b in bubbles]
    if len(set(points)) != len(points):
        raise InvariantError("two bubble trees at the same point")
    for b in bubbles:
        if not 0 <= b.point < t.ell:
            raise InvariantError(f"bubble at point {b.point + 1}, but ℓ = {t.ell}")
        if len(b.gamma.markings) != 1:
            raise InvariantError("bubble trees carry exactly one marked point")
        if not b.gamma.is_stable():
            raise InvariantError("bubble tree is not stable")
        if all(c is None for c in b.gamma.classes):
            raise InvariantError("a bubble tree of total class zero is not a bubble")
        if any(not 0 <= q < geom.q_count for q in b.K_point):
            raise InvariantError("bubble attaching set out of range")


def bubble_class_c1(b: Bubble, geom: GeometrySpec) -> int:
    return sum(geom.sphere_class(c).c1 for c in b.gamma.classes)


def bubble_config_dim(iA0: int, k: int, t: TangencyData, bubbles: Sequence[Bubble],
                      geom: GeometrySpec) -> int:
    """Expected dimension of a disc of index ``iA0`` with bubble trees at points in I."""
    _check_bubbles(t, bubbles, geom)
    total = iA0 + k - 2 + 2 * t.ell - 2 * sum(t.size(i) for i in range(t.ell))
    for b in bubbles:
        total += dim_gamma(b.gamma, geom) - 2 * geom.n + 2 * len(b.K_point & b.K_marked)
    return total


def bubble_config_bound(iA0: int, k: int, t: TangencyData, bubbles: Sequence[Bubble],
                        geom: GeometrySpec) -> int:
    """Upper bound from bounding each bubble tree and each excess tangency.

    With ``iA = iA0 + 2Σ c1(B_i)`` this is
    ``disc_dim(iA, k) - 2Σ_{i∉I}(|t(i)| - 1) - 2Σ_{i∈I}(|t(i)| + 1)``.
    """
    _check_bubbles(t, bubbles, geom)
    iA = iA0 + 2 * sum(bubble_class_c1(b, geom) for b in bubbles)
    at = {b.point for b in bubbles}
    loss = sum(t.size(i) - 1 for i in range(t.ell) if i not in at) \
        + sum(t.size(i) + 1 for i in at)
    return disc_dim(iA, k) - 2 * loss


@dataclass(frozen=True)
class BubbleConfig:
    """A disc configuration up to relabelling its interior points.

    Bubble points come first, in the order of ``bubbles``; ``rest`` holds the
    nonzero tangency vectors at the remaining points.
    """

    bubbles: tuple[tuple[CombinatorialType, tuple[int, ...]], ...]
    rest: tuple[tuple[int, ...], ...]
    dim: int
    bound: int

    @property
    def ell(self) -> int:
        return len(self.bubbles) + len(self.rest)

    @property
    def is_canonical_bare(self) -> bool:
        return not self.bubbles and all(sum(r) == 1 for r in self.rest)

    def describe(self, geom: GeometrySpec) -> str:
        parts = [f"bubble t={list(t)} [{g.describe(geom)}]" for g, t in self.bubbles]
        parts += [f"t={list(r)}" for r in self.rest]
        return "; ".join(parts) or "bare disc, ℓ=0"


@dataclass
class ExclusionReport:
    iA: int
    k: int
    target: tuple[int, ...]
    configs: list[BubbleConfig] = field(default_factory=list)

    @property
    def disc_dim(self) -> int:
        return disc_dim(self.iA, self.k)

    @property
    def survivors(self) -> list[BubbleConfig]:
        return [c for c in self.configs if c.dim >= 0]

    @property
    def expected(self) -> list[BubbleConfig]:
        return [c for c in self.configs if c.is_canonical_bare and c.dim >= 0]

    @property
    def bound_holds(self) -> bool:
        return all(c.dim <= c.bound for c in self.configs)

    @property
    def passed(self) -> bool:
        canon = [c for c in self.configs if c.is_canonical_bare]
        want_survivor = self.disc_dim >= 0
        return (self.bound_holds and len(canon) == 1
                and self.survivors == (canon if want_survivor else []))


def _vectors_below(v: tuple[int, ...]):
    if not v:
        yield ()
        return
    for x in range(v[0] + 1):
        for tail in _vectors_below(v[1:]):
            yield (x,) + tail


def _vector_partitions(v: tuple[int, ...], floor: tuple | None = None):
    """Multisets of nonzero vectors summing to ``v``, as nondecreasing tuples."""
    if not any(v):
        yield ()
        return
    for part in _vectors_below(v):
        if not any(part) or (floor is not None and part < floor):
            continue
        rest = tuple(a - b for a, b in zip(v, part))
        for tail in _vector_partitions(rest, part):
            yield (part,) + tail


def _usage(gamma: CombinatorialType) -> dict[int, int]:
    out: dict[int, int] = {}
    for c in gamma.classes:
        if c is not None:
            out[c] = out.get(c, 0) + 1
    return out


def sphere_exclusion(geom: GeometrySpec, iA: int, k: int, target: Sequence[int] | None = None,
                     class_budget: Mapping | None = None, max_vertices: int = 2) -> ExclusionReport:
    """Every disc configuration of total index ``iA`` with its dimension.

    A configuration is a multiset of (single-marked bubble tree, tangency)
    pairs plus a multiset of nonzero tangency vectors at bare points, all
    vectors summing to ``target`` (default zero).  A point with zero tangency
    must carry a bubble.  Bubble classes are limited by ``class_budget``;
    the disc keeps index ``iA - 2Σ c1(bubbles)``.  The attaching divisor
    set of a bubble is the support of its tangency vector.
    """
    if disc_dim(iA, k) > 1:
        raise InvariantError(f"sphere exclusion needs disc dimension ≤ 1, got {disc_dim(iA, k)}")
    target = tuple(int(x) for x in (target if target is not None else (0,) * geom.q_count))
    if len(target) != geom.q_count or any(x < 0 for x in target):
        raise InvariantError("target needs one nonnegative entry per divisor")
    budget = normalize_budget(geom, class_budget)
    trees = [g for g in enumerate_types(geom, 1, budget, max_vertices)
             if any(c is not None for c in g.classes)]
    classes = sorted(budget)
    usage = [tuple(_usage(g).get(c, 0) for c in classes) for g in trees]
    options = [(gi, t) for gi in range(len(trees)) for t in _vectors_below(target)]
    report = ExclusionReport(iA, k, target)

    def emit(chosen):
        remaining = target
        for _, t in chosen:
            remaining = tuple(a - b for a, b in zip(remaining, t))
        for rest in _vector_partitions(remaining):
            rows = [t for _, t in chosen] + list(rest)
            tang = TangencyData(tuple(rows), target)
            bubbles = [Bubble(i, trees[gi], tang.support(i)) for i, (gi, _) in enumerate(chosen)]
            iA0 = iA - 2 * sum(bubble_class_c1(b, geom) for b in bubbles)
            report.configs.append(BubbleConfig(
                tuple((trees[gi], t) for gi, t in chosen), tuple(rest),
                bubble_config_dim(iA0, k, tang, bubbles, geom),
                bubble_config_bound(iA0, k, tang, bubbles, geom)))

    def fits(oi, room, remaining):
        gi, t = options[oi]
        return all(a <= b for a, b in zip(usage[gi], room)) and all(a <= b for a, b in zip(t, remaining))

    def grow(feasible, chosen, room, remaining):
        # ``feasible`` holds the option indices that still fit, in increasing order
        emit(chosen)
        for pos, oi in enumerate(feasible):
            gi, t = options[oi]
            room2 = tuple(a - b for a, b in zip(room, usage[gi]))
            rem2 = tuple(a - b for a, b in zip(remaining, t))
            grow([o for o in feasible[pos:] if fits(o, room2, rem2)], chosen + [(gi, t)], room2, rem2)

    room0 = tuple(budget[c] for c in classes)
    grow([oi for oi in range(len(options)) if fits(oi, room0, target)], [], room0, target)
    return report


def forgetful_dim_diff(ell_for: int, t: TangencyData, geom: GeometrySpec) -> int:
    """``dim M(t) - dim M(f(t))`` when the last ``ell_for`` points are forgotten.

    The points past ``ℓ - ell_for`` must be tangent only to divisors outside Q0.
    """
    if geom.q0 is None:
        raise InvariantError("forgetful map needs Q0 in the geometry")
    if not 0 <= ell_for <= t.ell:
        raise InvariantError(f"cannot forget {ell_for} of {t.ell} points")
    kept = t.ell - ell_for
    q0 = geom.q0
    outside = [q for q in range(geom.q_count) if q not in q0]
    for i in range(kept, t.ell):
        if any(t.rows[i][q] for q in q0):
            raise InvariantError(f"point {i + 1} is tangent to a divisor in Q0; not forgettable")
    direct = 2 * ell_for - 2 * sum(r[q] for r in t.rows for q in outside)
    # difference of the two expected dimensions; iA and k cancel
    full = 2 * t.ell - 2 * sum(sum(r) for r in t.rows)
    forgotten = 2 * kept - 2 * sum(t.rows[i][q] for i in range(kept) for q in q0)
    if full - forgotten != direct:
        raise InvariantError("forgetful dimension routes disagree")
    return direct
