"""Specialization of monoid-ring series to one-variable Novikov series."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import InvariantError
from .cone import ConeSpec
from .series import PowerSeries


@dataclass(frozen=True)
class NovikovSeries:
    """Finite sum of ``coeff * t^λ`` with every exponent below ``trunc_level``."""

    exponents: tuple[tuple[Fraction, int], ...]
    trunc_level: Fraction

    @classmethod
    def build(cls, terms: Mapping, trunc_level) -> "NovikovSeries":
        level = Fraction(trunc_level)
        acc: dict[Fraction, int] = {}
        for lam, c in terms.items():
            lam = Fraction(lam)
            if lam < 0:
                raise InvariantError("Novikov exponents must be nonnegative")
            if lam < level:
                acc[lam] = acc.get(lam, 0) + int(c)
        return cls(tuple(sorted((k, v) for k, v in acc.items() if v)), level)

    def as_dict(self) -> dict[Fraction, int]:
        return dict(self.exponents)

    def valuation(self):
        return self.exponents[0][0] if self.exponents else math.inf

    def __add__(self, other: "NovikovSeries") -> "NovikovSeries":
        level = min(self.trunc_level, other.trunc_level)
        acc = self.as_dict()
        for k, v in other.exponents:
            acc[k] = acc.get(k, 0) + v
        return NovikovSeries.build(acc, level)

    def __mul__(self, other: "NovikovSeries") -> "NovikovSeries":
        level = min(self.trunc_level, other.trunc_level)
        acc: dict[Fraction, int] = {}
        for a, ca in self.exponents:
            for b, cb in other.exponents:
                if a + b < level:
                    acc[a + b] = acc.get(a + b, 0) + ca * cb
        return NovikovSeries.build(acc, level)

    def truncate(self, level) -> "NovikovSeries":
        return NovikovSeries.build(self.as_dict(), min(Fraction(level), self.trunc_level))


class Specialization:
    """The ring map ``T^β ↦ t^{κ(β)}`` for κ in the interior of the cone.

    ``scale`` is the least value of κ on a nonzero monoid element; every
    element of 𝔪^k lands in exponents ≥ scale·k.
    """

    def __init__(self, cone: ConeSpec, kappa: Sequence, scale=None):
        self.cone = cone
        self.kappa = tuple(Fraction(x) for x in kappa)
        if len(self.kappa) != cone.p_count:
            raise InvariantError("κ has the wrong length")
        self.rays = cone.dual_rays()
        for r in self.rays:
            if self.value(r) <= 0:
                raise InvariantError(
                    f"κ is not interior: the nonzero monoid direction {r} maps to exponent {self.value(r)}")
        best = self._min_value()
        if scale is not None:
            scale = Fraction(scale)
            if not 0 < scale <= best:
                raise InvariantError(f"scale must lie in (0, {best}]")
            best = scale
        self.scale = best

    def value(self, beta: Sequence[int]) -> Fraction:
        return sum((k * b for k, b in zip(self.kappa, beta)), Fraction(0))

    def _min_value(self) -> Fraction:
        if not self.rays:
            return Fraction(1)
        v0 = min(self.value(r) for r in self.rays)
        bounds = []
        for g in self.cone.generators:
            ratios = [self.value(r) / sum(a * b for a, b in zip(g, r)) for r in self.rays
                      if sum(a * b for a, b in zip(g, r)) > 0]
            eps = min(ratios) if ratios else None
            bounds.append(math.floor(v0 / eps) if eps else 0)
        pts = [p for p in self.cone.points_with_pairings_at_most(bounds) if any(p)]
        return min(self.value(p) for p in pts)

    def __call__(self, a: PowerSeries) -> NovikovSeries:
        if a.cone != self.cone:
            raise InvariantError("series over a different cone")
        terms: dict[Fraction, int] = {}
        for alpha, c in a.items():
            lam = self.value(alpha)
            terms[lam] = terms.get(lam, 0) + c
        return NovikovSeries.build(terms, self.scale * a.trunc_order)


def novikov_specialize(a: PowerSeries, kappa: Sequence, scale=None) -> NovikovSeries:
    return Specialization(a.cone, kappa, scale)(a)
