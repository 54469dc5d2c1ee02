from collections import Counter
from functools import lru_cache
from itertools import combinations, product

import pytest

from curvedainf.errors import InvariantError
from curvedainf.moduli import enumerate_dm_strata, top_dimension


def subsets(items):
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def weak_compositions(n, parts):
    if parts == 0:
        if n == 0:
            yield ()
        return
    for x in range(n + 1):
        for rest in weak_compositions(n - x, parts - 1):
            yield (x,) + rest


def interleavings(a, b):
    """Binary words with ``a`` zeros and ``b`` ones."""
    for pos in combinations(range(a + b), b):
        yield tuple(int(i in pos) for i in range(a + b))


@lru_cache(maxsize=None)
def spheres(labels, budget):
    """Sphere trees on ``labels`` with at most ``budget`` vertices, as (code, size, stable)."""
    out = set()
    if budget < 1:
        return frozenset()
    for own in subsets(labels):
        rest = tuple(x for x in labels if x not in own)
        for s in range(0, budget):
            for assign in product(range(s), repeat=len(rest)):
                groups = [tuple(x for x, g in zip(rest, assign) if g == i) for i in range(s)]
                for kids in product(*[spheres(gr, budget - 1) for gr in groups]):
                    size = 1 + sum(k[1] for k in kids)
                    if size > budget:
                        continue
                    stable = 1 + len(own) + s >= 3 and all(k[2] for k in kids)
                    code = "S" + repr((own, tuple(sorted(k[0] for k in kids))))
                    out.add((code, size, stable))
    return frozenset(out)


@lru_cache(maxsize=None)
def discs(leaves, labels, budget):
    out = set()
    if budget < 1:
        return frozenset()
    for own in subsets(labels):
        rest = tuple(x for x in labels if x not in own)
        for d in range(0, budget):
            for s in range(0, budget - d):
                for assign in product(range(d + s), repeat=len(rest)):
                    groups = [tuple(x for x, g in zip(rest, assign) if g == i) for i in range(d + s)]
                    for own_leaves in range(leaves + 1):
                        for split in weak_compositions(leaves - own_leaves, d):
                            kid_d = [discs(split[i], groups[i], budget - 1) for i in range(d)]
                            kid_s = [spheres(groups[d + i], budget - 1) for i in range(s)]
                            for dk in product(*kid_d):
                                for sk in product(*kid_s):
                                    size = 1 + sum(x[1] for x in dk) + sum(x[1] for x in sk)
                                    if size > budget:
                                        continue
                                    stable = (own_leaves + d + 2 * (len(own) + s) >= 2
                                              and all(x[2] for x in dk + sk))
                                    for word in interleavings(own_leaves, d):
                                        it = iter(dk)
                                        items = tuple("*" if w == 0 else next(it)[0] for w in word)
                                        code = "D" + repr((items, own, tuple(sorted(x[0] for x in sk))))
                                        out.add((code, size, stable))
    return frozenset(out)


def oracle_strata(k, ell, budget):
    found = discs(k, tuple(range(1, ell + 1)), budget)
    return Counter(size - 1 for code, size, stable in found if stable)


def little_schroeder(leaves):
    """Planar rooted trees with ``leaves`` leaves, every internal vertex with ≥ 2 children."""
    @lru_cache(maxsize=None)
    def f(n):
        return int(n == 1) + forests(n, 2)

    @lru_cache(maxsize=None)
    def forests(n, at_least):
        # ordered sequences of ≥ at_least trees with n leaves in total
        if n == 0:
            return int(at_least == 0)
        top = n - 1 if at_least >= 2 else n
        return sum(f(first) * forests(n - first, max(at_least - 1, 0)) for first in range(1, top + 1))

    return f(leaves)


def test_frozen_counts():
    want = {(2, 0): 1, (3, 0): 3, (0, 1): 1, (4, 0): 11, (5, 0): 45,
            (1, 1): 3, (0, 2): 6, (2, 1): 13, (1, 2): 42, (0, 3): 80}
    for (k, ell), n in want.items():
        assert len(enumerate_dm_strata(k, ell)) == n, (k, ell)


@pytest.mark.parametrize("k", range(2, 7))
def test_boundary_only_counts_are_schroeder(k):
    # k inputs and the output make k + 1 boundary points; the root disc is a tree with k leaves
    assert len(enumerate_dm_strata(k, 0)) == little_schroeder(k)


@pytest.mark.parametrize("k,ell", [(2, 0), (3, 0), (4, 0), (0, 1), (1, 1), (2, 1), (0, 2), (1, 2)])
def test_codimension_profile_matches_oracle(k, ell):
    ours = Counter(s.codimension for s in enumerate_dm_strata(k, ell, 4))
    assert ours == oracle_strata(k, ell, 4)


def test_codimension_is_edge_count():
    for k, ell in [(2, 0), (3, 0), (4, 0), (5, 0), (0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (0, 3)]:
        top = top_dimension(k, ell)
        for s in enumerate_dm_strata(k, ell, 4):
            assert s.is_stable()
            assert s.k == k and s.ell == ell
            assert s.codimension == s.vertex_count - 1
            assert top - s.real_dimension() == s.disc_edges + 2 * s.sphere_edges


def test_top_stratum_first():
    strata = enumerate_dm_strata(3, 1)
    assert strata[0].codimension == 0 and strata[0].code() == "D(*,*,*;1)"


def test_unstable_input():
    with pytest.raises(InvariantError):
        enumerate_dm_strata(1, 0)
