"""Strata of the compactified moduli of discs with boundary and interior points.

A stratum is a planar tree of disc components rooted at the outgoing
boundary point, with trees of sphere components hanging off interior points.
Boundary inputs are numbered left to right by the planar order, so they are
not stored; interior labels are.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from ..errors import InvariantError

LEAF = "*"


@dataclass(frozen=True, order=True)
class SphereNode:
    labels: tuple[int, ...]
    children: tuple["SphereNode", ...]

    def code(self) -> str:
        inner = [str(x) for x in self.labels] + [c.code() for c in self.children]
        return "S(" + ",".join(inner) + ")"


@dataclass(frozen=True)
class DiscNode:
    """``items`` are boundary inputs (``LEAF``) or child discs, in planar order."""

    items: tuple
    labels: tuple[int, ...]
    spheres: tuple[SphereNode, ...]

    def code(self) -> str:
        inner = [LEAF if x == LEAF else x.code() for x in self.items]
        tail = [str(x) for x in self.labels] + [s.code() for s in self.spheres]
        return "D(" + ",".join(inner) + (";" + ",".join(tail) if tail else "") + ")"


def _sphere_vertices(s: SphereNode):
    yield s
    for c in s.children:
        yield from _sphere_vertices(c)


def _disc_vertices(d: DiscNode):
    yield d
    for x in d.items:
        if x != LEAF:
            yield from _disc_vertices(x)


@dataclass(frozen=True)
class DMStratumTree:
    root: DiscNode

    @property
    def discs(self) -> list[DiscNode]:
        return list(_disc_vertices(self.root))

    @property
    def spheres(self) -> list[SphereNode]:
        return [v for d in self.discs for s in d.spheres for v in _sphere_vertices(s)]

    @property
    def disc_edges(self) -> int:
        return len(self.discs) - 1

    @property
    def sphere_edges(self) -> int:
        return len(self.spheres)

    @property
    def codimension(self) -> int:
        return self.disc_edges + self.sphere_edges

    @property
    def vertex_count(self) -> int:
        return len(self.discs) + len(self.spheres)

    @property
    def k(self) -> int:
        return sum(1 for d in self.discs for x in d.items if x == LEAF)

    @property
    def ell(self) -> int:
        return sum(len(d.labels) for d in self.discs) + sum(len(s.labels) for s in self.spheres)

    def disc_counts(self) -> list[tuple[int, int]]:
        """``(k_α, ℓ_α)`` per disc component."""
        return [(len(d.items), len(d.labels) + len(d.spheres)) for d in self.discs]

    def real_dimension(self) -> int:
        disc = sum(ka - 2 + 2 * la for ka, la in self.disc_counts())
        sph = sum(2 * (1 + len(s.labels) + len(s.children) - 3) for s in self.spheres)
        return disc + sph

    def is_stable(self) -> bool:
        return all(ka + 2 * la >= 2 for ka, la in self.disc_counts()) and \
            all(1 + len(s.labels) + len(s.children) >= 3 for s in self.spheres)

    def code(self) -> str:
        return self.root.code()


def _set_partitions(items: tuple):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield tuple(sorted(part[:i] + (tuple(sorted((first,) + part[i])),) + part[i + 1:]))
        yield tuple(sorted(((first,),) + part))


def _subsets(items: tuple):
    for r in range(len(items) + 1):
        yield from combinations(items, r)


@lru_cache(maxsize=None)
def _sphere_trees(labels: tuple[int, ...], budget: int) -> tuple[tuple[SphereNode, int], ...]:
    """Stable sphere trees carrying exactly ``labels``, with their vertex counts."""
    if budget < 1:
        return ()
    out = []
    for direct in _subsets(labels):
        rest = tuple(x for x in labels if x not in direct)
        for blocks in _set_partitions(rest):
            if 1 + len(direct) + len(blocks) < 3:
                continue
            choices = [_sphere_trees(b, budget - 1) for b in blocks]
            for combo in product(*choices):
                size = 1 + sum(sz for _, sz in combo)
                if size <= budget:
                    kids = tuple(sorted(s for s, _ in combo))
                    out.append((SphereNode(direct, kids), size))
    return tuple(out)


def _item_shapes(m: int, slots: int):
    """Sequences of ``LEAF`` or child leaf-counts summing to ``m`` with ≤ ``slots`` children."""
    if m == 0:
        yield ()
    if m > 0:
        for tail in _item_shapes(m - 1, slots):
            yield (LEAF,) + tail
    if slots > 0:
        for mj in range(m + 1):
            for tail in _item_shapes(m - mj, slots - 1):
                yield (mj,) + tail


@lru_cache(maxsize=None)
def _disc_trees(m: int, labels: tuple[int, ...], budget: int) -> tuple[tuple[DiscNode, int], ...]:
    if budget < 1:
        return ()
    out = []
    # a child disc needs a leaf or a label, so there are at most m + |labels| of them
    for shape in _item_shapes(m, min(budget - 1, m + len(labels))):
        child_slots = [i for i, x in enumerate(shape) if x != LEAF]
        # each label goes to this disc (-1), a child disc (its slot), or the sphere pool (-2)
        for where in product([-1, -2] + child_slots, repeat=len(labels)):
            direct = tuple(x for x, w in zip(labels, where) if w == -1)
            pool = tuple(x for x, w in zip(labels, where) if w == -2)
            for blocks in _set_partitions(pool):
                if len(shape) + 2 * (len(direct) + len(blocks)) < 2:
                    continue
                if 1 + len(child_slots) + len(blocks) > budget:
                    continue
                child_choices = [
                    _disc_trees(shape[i], tuple(x for x, w in zip(labels, where) if w == i), budget - 1)
                    for i in child_slots]
                sphere_choices = [_sphere_trees(b, budget - 1) for b in blocks]
                for kids in product(*child_choices):
                    for sph in product(*sphere_choices):
                        size = 1 + sum(s for _, s in kids) + sum(s for _, s in sph)
                        if size > budget:
                            continue
                        items = list(shape)
                        for i, (node, _) in zip(child_slots, kids):
                            items[i] = node
                        out.append((DiscNode(tuple(items), direct,
                                             tuple(sorted(s for s, _ in sph))), size))
    return tuple(out)


def enumerate_dm_strata(k: int, ell: int, max_vertices: int | None = None) -> list[DMStratumTree]:
    """All strata with at most ``max_vertices`` components, by codimension then code."""
    if k < 0 or ell < 0 or k + 2 * ell < 2:
        raise InvariantError(f"(k, ℓ) = ({k}, {ell}) is unstable: need k + 2ℓ ≥ 2")
    # a stable tree has fewer components than k + 2ℓ
    cap = max(1, k + 2 * ell)
    budget = cap if max_vertices is None else min(max_vertices, cap)
    trees = [DMStratumTree(node) for node, _ in _disc_trees(k, tuple(range(1, ell + 1)), budget)]
    seen = {}
    for t in trees:
        seen.setdefault(t.code(), t)
    return sorted(seen.values(), key=lambda t: (t.codimension, t.code()))


def top_dimension(k: int, ell: int) -> int:
    return k - 2 + 2 * ell
