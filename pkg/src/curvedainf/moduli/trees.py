"""Combinatorial types of stable sphere bubble trees and their dimensions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Mapping

from ..errors import InvariantError
from .geometry import GeometrySpec, c1_subvariety


@dataclass(frozen=True)
class CombinatorialType:
    """A tree with markings, divisor sets and classes on its vertices.

    ``markings[j]`` is the vertex carrying marked point ``j + 1``;
    ``classes[v]`` is a class index or ``None`` for the zero class.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    markings: tuple[int, ...]
    K: tuple[frozenset, ...]
    classes: tuple[int | None, ...]

    def __post_init__(self):
        v = self.vertex_count
        edges = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "K", tuple(frozenset(k) for k in self.K))
        if v < 1:
            raise InvariantError("a type needs at least one vertex")
        if len(self.K) != v or len(self.classes) != v:
            raise InvariantError("one divisor set and one class per vertex")
        if len(edges) != v - 1 or len(set(edges)) != len(edges):
            raise InvariantError("a tree on v vertices has v - 1 distinct edges")
        if any(not 0 <= a < v or not 0 <= b < v or a == b for a, b in edges):
            raise InvariantError("edge endpoints out of range")
        if any(not 0 <= m < v for m in self.markings):
            raise InvariantError("marking on a nonexistent vertex")
        # connectivity
        seen, stack = {0}, [0]
        adj = self.adjacency()
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != v:
            raise InvariantError("the underlying graph is not connected")

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.vertex_count)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def special_points(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e) + sum(1 for m in self.markings if m == v)

    def is_stable(self) -> bool:
        return all(c is not None or self.special_points(v) >= 3
                   for v, c in enumerate(self.classes))

    def describe(self, geom: GeometrySpec | None = None) -> str:
        parts = []
        for v in range(self.vertex_count):
            c = self.classes[v]
            cname = "0" if c is None else (geom.classes[c].name if geom else str(c))
            ks = ",".join((geom.divisors[q] if geom else str(q)) for q in sorted(self.K[v]))
            marks = [str(j + 1) for j, m in enumerate(self.markings) if m == v]
            label = f"{cname};K={{{ks}}}" + (f";m={','.join(marks)}" if marks else "")
            parts.append(f"v{v}[{label}]")
        edges = " ".join(f"{a}-{b}" for a, b in self.edges)
        return " ".join(parts) + (f" E: {edges}" if edges else "")


def dim_gamma_terms(gamma: CombinatorialType, geom: GeometrySpec) -> tuple[int, int]:
    """The per-vertex/per-edge sum and the Euler-characteristic form, both doubled."""
    n, k = geom.n, len(gamma.markings)
    c1v = [c1_subvariety(gamma.classes[v], gamma.K[v], geom) for v in range(gamma.vertex_count)]
    meet = [len(gamma.K[a] & gamma.K[b]) for a, b in gamma.edges]
    by_parts = k + sum(n - len(gamma.K[v]) - 3 + c1v[v] for v in range(gamma.vertex_count)) \
        + sum(m - n + 2 for m in meet)
    euler = k + n - 2 + sum(c1v[v] - len(gamma.K[v]) - 1 for v in range(gamma.vertex_count)) \
        + sum(meet)
    return 2 * by_parts, 2 * euler


def dim_gamma(gamma: CombinatorialType, geom: GeometrySpec) -> int:
    a, b = dim_gamma_terms(gamma, geom)
    if a != b:
        raise InvariantError(f"dimension formulas disagree ({a} vs {b}); the tree data are inconsistent")
    return a


def dim_upper_bound(gamma: CombinatorialType, geom: GeometrySpec) -> int:
    """``2(k + n + c1(TX)(A) - 3 - |E| - max |K_α|)`` with A the total class."""
    k = len(gamma.markings)
    c1 = sum(geom.sphere_class(c).c1 for c in gamma.classes)
    return 2 * (k + geom.n + c1 - 3 - len(gamma.edges) - max(len(x) for x in gamma.K))


def bound_slack(gamma: CombinatorialType, geom: GeometrySpec) -> tuple[int, int]:
    """``(Chern loss, divisor overlap)`` whose sum is half of bound minus dimension.

    Chern loss is ``Σ_α Σ_{q∈K_α} A_α·V_q``.  Divisor overlap is
    ``Σ_α |K_α| - Σ_{αβ∈E} |K_α ∩ K_β| - max_α |K_α|``, which counts for each
    divisor the components of the subforest of vertices containing it, minus
    the largest K.  Both are nonnegative.
    """
    loss = sum(geom.sphere_class(c).c1 - c1_subvariety(c, gamma.K[v], geom)
               for v, c in enumerate(gamma.classes))
    overlap = sum(len(x) for x in gamma.K) - sum(len(gamma.K[a] & gamma.K[b]) for a, b in gamma.edges) \
        - max(len(x) for x in gamma.K)
    return loss, overlap


# -- enumeration ----------------------------------------------------------------


def _prufer_trees(v: int):
    if v == 1:
        yield ()
        return
    if v == 2:
        yield ((0, 1),)
        return
    for seq in product(range(v), repeat=v - 2):
        degree = [1] * v
        for x in seq:
            degree[x] += 1
        edges = []
        seq = list(seq)
        for x in seq:
            leaf = min(i for i in range(v) if degree[i] == 1)
            edges.append(tuple(sorted((leaf, x))))
            degree[leaf] -= 1
            degree[x] -= 1
        rest = [i for i in range(v) if degree[i] == 1]
        edges.append(tuple(sorted(rest)))
        yield tuple(sorted(edges))


def _tree_code(edges, v: int) -> str:
    """Canonical string of an unrooted tree (rooted at its center)."""
    adj = [[] for _ in range(v)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)

    def rooted(node, parent):
        return "(" + "".join(sorted(rooted(c, node) for c in adj[node] if c != parent)) + ")"

    return min(rooted(r, -1) for r in range(v))


@lru_cache(maxsize=None)
def unlabeled_trees(v: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """One edge list per isomorphism class of trees on ``v`` vertices."""
    seen: dict[str, tuple] = {}
    for edges in _prufer_trees(v):
        code = _tree_code(edges, v)
        if code not in seen:
            seen[code] = edges
    return tuple(seen[c] for c in sorted(seen))


@lru_cache(maxsize=None)
def tree_automorphisms(edges: tuple, v: int) -> tuple[tuple[int, ...], ...]:
    es = {frozenset(e) for e in edges}
    out = []
    for perm in permutations(range(v)):
        if all(frozenset((perm[a], perm[b])) in es for a, b in edges):
            out.append(perm)
    return tuple(out)


def _act(perm, decor, markings):
    new = [None] * len(decor)
    for i, d in enumerate(decor):
        new[perm[i]] = d
    return tuple(new), tuple(perm[m] for m in markings)


def _class_options(geom: GeometrySpec, budget: Mapping[int, int]):
    return [None] + sorted(i for i, c in budget.items() if c > 0)


def normalize_budget(geom: GeometrySpec, budget: Mapping | None) -> dict[int, int]:
    if budget is None:
        return {i: 1 for i in range(len(geom.classes))}
    return {geom.class_index(k): int(v) for k, v in budget.items()}


def enumerate_types(geom: GeometrySpec, k: int, class_budget: Mapping | None = None,
                    max_vertices: int = 1) -> list[CombinatorialType]:
    """Stable types with at most ``max_vertices`` vertices, one per isomorphism class.

    Isomorphisms are tree isomorphisms preserving marking labels, divisor
    sets and classes.  Classes are drawn from ``class_budget`` (class → max
    multiplicity); the zero class is unlimited and allowed with every K.
    Output order is by vertex count, then tree shape, then decorations.
    """
    budget = normalize_budget(geom, class_budget)
    subsets = geom.subsets()
    opts = _class_options(geom, budget)
    out: list[CombinatorialType] = []
    for v in range(1, max_vertices + 1):
        for edges in unlabeled_trees(v):
            auts = tree_automorphisms(edges, v)
            deg = [sum(1 for e in edges if i in e) for i in range(v)]
            for classes in product(opts, repeat=v):
                used: dict[int, int] = {}
                for c in classes:
                    if c is not None:
                        used[c] = used.get(c, 0) + 1
                if any(used[c] > budget.get(c, 0) for c in used):
                    continue
                need = sum(max(0, 3 - deg[i]) for i, c in enumerate(classes) if c is None)
                if need > k:
                    continue
                for markings in product(range(v), repeat=k):
                    counts = [deg[i] + markings.count(i) for i in range(v)]
                    if any(c is None and counts[i] < 3 for i, c in enumerate(classes)):
                        continue
                    key = (tuple(-1 if c is None else c for c in classes), markings)
                    stab = []
                    minimal = True
                    for p in auts:
                        img = _act(p, key[0], markings)
                        if img < key:
                            minimal = False
                            break
                        if img == key:
                            stab.append(p)
                    if not minimal:
                        continue
                    per_vertex = [[K for K in subsets if geom.sphere_class(c).allows(K)] if c is not None
                                  else subsets for c in classes]
                    for Ks in product(*per_vertex):
                        kcode = tuple(tuple(sorted(K)) for K in Ks)
                        if any(_act(p, kcode, ())[0] < kcode for p in stab):
                            continue
                        out.append(CombinatorialType(v, edges, markings, Ks, classes))
    return out
