"""Truncated elements of the completed monoid ring ℤ⟦NE⟧.

A :class:`PowerSeries` stands for a coset modulo 𝔪^N.  Terms are stored in a
dict keyed by coordinate tuples; :meth:`PowerSeries.terms` exposes them keyed
by :class:`EffectiveClass`.
"""

from __future__ import annotations

import math
from typing import Iterator, Mapping

from ..errors import InvariantError
from .cone import ConeSpec, EffectiveClass


class PowerSeries:
    __slots__ = ("cone", "trunc_order", "_terms")

    def __init__(self, cone: ConeSpec, trunc_order: int, terms: Mapping | None = None):
        if trunc_order < 0:
            raise InvariantError("trunc_order must be nonnegative")
        self.cone = cone
        self.trunc_order = trunc_order
        clean = {}
        for key, c in (terms or {}).items():
            coords = tuple(key.coords if isinstance(key, EffectiveClass) else key)
            cone.effective(coords)
            c = int(c)
            if c and cone.ord(coords) < trunc_order:
                clean[coords] = clean.get(coords, 0) + c
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _raw(cls, cone, n, terms: dict) -> "PowerSeries":
        s = cls.__new__(cls)
        s.cone, s.trunc_order, s._terms = cone, n, terms
        return s

    @classmethod
    def zero(cls, cone: ConeSpec, n: int) -> "PowerSeries":
        return cls._raw(cone, n, {})

    @classmethod
    def constant(cls, cone: ConeSpec, n: int, c: int = 1) -> "PowerSeries":
        return cls(cone, n, {cone.zero().coords: c})

    @classmethod
    def monomial(cls, cone: ConeSpec, n: int, alpha, c: int = 1) -> "PowerSeries":
        return cls(cone, n, {tuple(alpha): c})

    # -- inspection ----------------------------------------------------------

    def terms(self) -> dict[EffectiveClass, int]:
        return {self.cone.effective(k): v for k, v in sorted(self._terms.items())}

    def items(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self._terms.items())

    def coeff(self, alpha) -> int:
        return self._terms.get(tuple(alpha.coords if isinstance(alpha, EffectiveClass) else alpha), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(sorted(self._terms))

    def valuation(self):
        """Minimum order over the support; ``math.inf`` for zero."""
        if not self._terms:
            return math.inf
        return min(self.cone.ord(k) for k in self._terms)

    def constant_term(self) -> int:
        return self._terms.get(self.cone.zero().coords, 0)

    def part_of_order(self, k: int) -> "PowerSeries":
        return PowerSeries._raw(self.cone, self.trunc_order,
                                {a: c for a, c in self._terms.items() if self.cone.ord(a) == k})

    def truncate(self, n: int) -> "PowerSeries":
        n = min(n, self.trunc_order)
        if n == self.trunc_order:
            return self
        return PowerSeries._raw(self.cone, n,
                                {a: c for a, c in self._terms.items() if self.cone.ord(a) < n})

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "PowerSeries") -> int:
        if self.cone != other.cone:
            raise InvariantError("series over different cones cannot be combined")
        return min(self.trunc_order, other.trunc_order)

    def __add__(self, other):
        if isinstance(other, int):
            other = PowerSeries.constant(self.cone, self.trunc_order, other)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = self._check(other)
        a, b = self.truncate(n)._terms, other.truncate(n)._terms
        out = dict(a)
        for k, v in b.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return PowerSeries._raw(self.cone, n, out)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries._raw(self.cone, self.trunc_order, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = PowerSeries.constant(self.cone, self.trunc_order, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return PowerSeries._raw(self.cone, self.trunc_order, {})
            return PowerSeries._raw(self.cone, self.trunc_order,
                                    {k: v * other for k, v in self._terms.items()})
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = self._check(other)
        ordf = self.cone.ord
        out: dict = {}
        right = [(b, cb, ordf(b)) for b, cb in other._terms.items()]
        for a, ca in self._terms.items():
            oa = ordf(a)
            if oa >= n:
                continue
            for b, cb, ob in right:
                if oa + ob >= n:
                    continue
                g = tuple(x + y for x, y in zip(a, b))
                if ordf(g) >= n:
                    continue
                out[g] = out.get(g, 0) + ca * cb
        return PowerSeries._raw(self.cone, n, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return self == PowerSeries.constant(self.cone, self.trunc_order, other)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return (self.cone == other.cone and self.trunc_order == other.trunc_order
                and self._terms == other._terms)

    __hash__ = None

    def __repr__(self):
        if not self._terms:
            return f"PowerSeries(0, N={self.trunc_order})"
        body = " + ".join(f"{c}*T^{k}" for k, c in self.items())
        return f"PowerSeries({body}, N={self.trunc_order})"
