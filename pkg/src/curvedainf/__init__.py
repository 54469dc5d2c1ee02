"""Exact computer algebra for curved filtered A∞ structures over ℤ⟦NE⟧.

Subpackages:

* ``ring``      cones, the truncated monoid ring, Novikov specialization
* ``homalg``    Smith normal form and integer homology
* ``ainfty``    curved algebras, categories, bimodules, functors
* ``transfer``  triangle algebras and Maurer–Cartan transfer
* ``moduli``    combinatorics of bubble trees, discs and strata
"""

__version__ = "0.1.0"
