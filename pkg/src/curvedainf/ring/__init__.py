"""Cone arithmetic, the truncated monoid ring and Novikov specialization."""

from .cone import ConeSpec, EffectiveClass, cone_from_generators
from .novikov import NovikovSeries, Specialization, novikov_specialize
from .series import PowerSeries

__all__ = [
    "ConeSpec", "EffectiveClass", "cone_from_generators",
    "PowerSeries", "NovikovSeries", "Specialization", "novikov_specialize",
]
