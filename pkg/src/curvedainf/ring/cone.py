"""Rational polyhedral cones, their dual monoids and the 𝔪-adic order."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from ..errors import InvariantError
from ..homalg import integer_kernel, rank


def _clear_denominators(vec: Sequence) -> tuple[int, ...]:
    fr = [Fraction(x) for x in vec]
    scale = math.lcm(*(f.denominator for f in fr)) if fr else 1
    return tuple(int(f * scale) for f in fr)


@dataclass(frozen=True)
class EffectiveClass:
    """A lattice point of the dual monoid, with its generator pairings cached."""

    coords: tuple[int, ...]
    pairings: tuple[int, ...] = field(compare=False, repr=False)

    def __add__(self, other: "EffectiveClass") -> "EffectiveClass":
        return EffectiveClass(tuple(a + b for a, b in zip(self.coords, other.coords)),
                              tuple(a + b for a, b in zip(self.pairings, other.pairings)))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __lt__(self, other: "EffectiveClass") -> bool:
        return self.coords < other.coords


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """The cone spanned by integer generator vectors in ℤ^P.

    Its dual monoid ``NE`` is the set of lattice vectors pairing nonnegatively
    with every generator.  Equality is structural: same ``p_count`` and the
    same generators in the same order.
    """

    p_count: int
    generators: tuple[tuple[int, ...], ...]
    ample: tuple | None = None
    anticanonical: tuple | None = None
    _ord_cache: dict = field(default_factory=dict, repr=False)
    _sub_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        gens = tuple(_clear_denominators(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if self.p_count < 1:
            raise InvariantError("p_count must be at least 1")
        if not gens:
            raise InvariantError("a cone needs at least one generator")
        for g in gens:
            if len(g) != self.p_count:
                raise InvariantError(f"generator {g} does not have length p_count={self.p_count}")
            if not any(g):
                raise InvariantError("generators must be nonzero vectors")
        if rank(gens) != self.p_count:
            raise InvariantError(
                "rank condition violated: the generator matrix must have rank p_count, "
                "otherwise pairings do not determine classes")
        # a left inverse of the pairing map, used to bound coordinates
        m = [[Fraction(x) for x in g] for g in gens]
        gram = [[sum(m[k][i] * m[k][j] for k in range(len(m))) for j in range(self.p_count)]
                for i in range(self.p_count)]
        inv = _invert(gram)
        left = [[sum(inv[i][j] * m[k][j] for j in range(self.p_count)) for k in range(len(m))]
                for i in range(self.p_count)]
        object.__setattr__(self, "_left_inverse", left)

    @classmethod
    def orthant(cls, p: int) -> "ConeSpec":
        """The cone whose dual monoid is ℤ^p≥0."""
        return cls(p, tuple(tuple(int(i == j) for j in range(p)) for i in range(p)))

    def __eq__(self, other):
        if not isinstance(other, ConeSpec):
            return NotImplemented
        return self.p_count == other.p_count and self.generators == other.generators

    def __hash__(self):
        return hash((self.p_count, self.generators))

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_ord_cache"] = {}
        state["_sub_cache"] = {}
        return state

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)

    # -- membership -------------------------------------------------------

    def pairings(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.p_count:
            raise InvariantError(f"vector of length {len(v)} in a cone with p_count={self.p_count}")
        return tuple(sum(a * b for a, b in zip(g, v)) for g in self.generators)

    def is_member(self, v: Sequence[int]) -> bool:
        return all(p >= 0 for p in self.pairings(v))

    def effective(self, v: Sequence[int]) -> EffectiveClass:
        v = tuple(int(x) for x in v)
        pr = self.pairings(v)
        if any(p < 0 for p in pr):
            raise InvariantError(f"{v} is not in the dual monoid (pairings {pr})")
        return EffectiveClass(v, pr)

    def zero(self) -> EffectiveClass:
        return EffectiveClass((0,) * self.p_count, (0,) * len(self.generators))

    # -- bounded enumeration -------------------------------------------------

    def points_with_pairings_at_most(self, bounds: Sequence[int]) -> list[tuple[int, ...]]:
        """All lattice v with ``0 ≤ ⟨v,δ_i⟩ ≤ bounds[i]``, sorted."""
        ranges = []
        for row in self._left_inverse:
            lo = sum(min(Fraction(0), w) * b for w, b in zip(row, bounds))
            hi = sum(max(Fraction(0), w) * b for w, b in zip(row, bounds))
            ranges.append(range(math.ceil(lo), math.floor(hi) + 1))
        out = []
        for v in product(*ranges):
            pr = self.pairings(v)
            if all(0 <= p <= b for p, b in zip(pr, bounds)):
                out.append(v)
        return out

    def sub_elements(self, alpha: Sequence[int]) -> list[tuple[int, ...]]:
        """The finite set ``{γ ∈ NE : α − γ ∈ NE}``, lexicographically sorted."""
        alpha = tuple(alpha)
        hit = self._sub_cache.get(alpha)
        if hit is None:
            pr = self.pairings(alpha)
            if any(p < 0 for p in pr):
                raise InvariantError(f"{alpha} is not in the dual monoid")
            hit = self.points_with_pairings_at_most(pr)
            self._sub_cache[alpha] = hit
        return hit

    def decompositions(self, alpha, parts: int) -> list[tuple[EffectiveClass, ...]]:
        """Ordered tuples of ``parts`` monoid elements summing to ``alpha``."""
        if parts < 1:
            raise InvariantError("parts must be at least 1")
        alpha = tuple(alpha.coords if isinstance(alpha, EffectiveClass) else alpha)
        if parts == 1:
            return [(self.effective(alpha),)]
        out = []
        for g in self.sub_elements(alpha):
            rest = tuple(a - b for a, b in zip(alpha, g))
            for tail in self.decompositions(rest, parts - 1):
                out.append((self.effective(g),) + tail)
        return out

    # -- order -------------------------------------------------------------

    def ord(self, alpha) -> int:
        """Largest k with T^α ∈ 𝔪^k: the most nonzero summands α splits into."""
        alpha = tuple(alpha.coords if isinstance(alpha, EffectiveClass) else alpha)
        hit = self._ord_cache.get(alpha)
        if hit is not None:
            return hit
        if not any(alpha):
            self._ord_cache[alpha] = 0
            return 0
        best = 0
        for g in self.sub_elements(alpha):
            if any(g):
                rest = tuple(a - b for a, b in zip(alpha, g))
                best = max(best, 1 + self.ord(rest))
        self._ord_cache[alpha] = best
        return best

    def classes_below_order(self, n: int, box: int) -> list[tuple[int, ...]]:
        """Monoid elements with |coords| ≤ box and ord < n (test helper)."""
        out = []
        for v in product(range(-box, box + 1), repeat=self.p_count):
            if self.is_member(v) and self.ord(v) < n:
                out.append(v)
        return out

    # -- real dual cone ----------------------------------------------------

    def dual_rays(self) -> list[tuple[int, ...]]:
        """Primitive integer generators of the extreme rays of NE ⊗ ℝ."""
        p = self.p_count
        rays = set()
        for rows in combinations(self.generators, p - 1):
            if p > 1 and rank(rows) != p - 1:
                continue
            basis = integer_kernel(rows) if p > 1 else [[1]]
            if len(basis) != 1:
                continue
            v = basis[0]
            for cand in (v, [-x for x in v]):
                if all(x >= 0 for x in self.pairings(cand)):
                    g = math.gcd(*cand)
                    rays.add(tuple(x // g for x in cand))
        return sorted(rays)


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def cone_from_generators(generators: Iterable[Sequence], **meta) -> ConeSpec:
    gens = tuple(tuple(g) for g in generators)
    if not gens:
        raise InvariantError("a cone needs at least one generator")
    return ConeSpec(len(gens[0]), gens, **meta)
