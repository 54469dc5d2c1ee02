"""Seeded randomized checks of ring, Novikov and Smith-normal-form identities.

Each check returns a list of counterexample descriptions; empty means pass.
"""

from __future__ import annotations

import random
from typing import Sequence

from .homalg import IntComplex, IntMatrix, diagonal, is_acyclic, mapping_cone, smith_normal_form
from .ring import ConeSpec, PowerSeries, Specialization


def standard_cones() -> list[ConeSpec]:
    """ℤ²≥0, a two-generator cone whose monoid is not free, and a rank-3 cone.

    The dual monoid of the second has Hilbert basis (1,0), (0,1), (2,-1);
    the third has four generators, so its dual monoid is not simplicial.
    """
    return [
        ConeSpec.orthant(2),
        ConeSpec(2, ((1, 0), (1, 2))),
        ConeSpec(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1))),
    ]


def random_series(rng: random.Random, cone: ConeSpec, n: int, terms: int = 3,
                  pool: Sequence | None = None, coeff: int = 5) -> PowerSeries:
    """A sparse series with up to ``terms`` monomials drawn from ``pool``.

    The default pool is every class of order below ``n`` with coordinates
    at most ``n`` in absolute value.
    """
    if pool is None:
        pool = cone.classes_below_order(n, n)
    out = {}
    for _ in range(rng.randint(0, terms)):
        alpha = rng.choice(pool)
        out[alpha] = out.get(alpha, 0) + rng.randint(-coeff, coeff)
    return PowerSeries(cone, n, out)


def check_ring_laws(cone: ConeSpec, n: int = 6, pairs: int = 1000, seed: int = 0) -> list[str]:
    rng = random.Random(seed)
    pool = cone.classes_below_order(n, n)
    bad = []
    for i in range(pairs):
        x, y, z = (random_series(rng, cone, n, pool=pool) for _ in range(3))
        laws = {
            "add-assoc": (x + y) + z == x + (y + z),
            "add-comm": x + y == y + x,
            "mul-assoc": (x * y) * z == x * (y * z),
            "mul-comm": x * y == y * x,
            "distrib": x * (y + z) == x * y + x * z,
            "add-inverse": (x - x).is_zero(),
            "unit": x * PowerSeries.constant(cone, n, 1) == x,
        }
        bad += [f"case {i}: {law} fails for {x!r}, {y!r}, {z!r}" for law, ok in laws.items() if not ok]
    return bad


def check_novikov(cone: ConeSpec, kappa: Sequence, n: int = 6, pairs: int = 500,
                  seed: int = 0) -> list[str]:
    """Multiplicativity of specialization and ``F_{≥k} → exponents ≥ scale·k``."""
    rng = random.Random(seed)
    spec = Specialization(cone, kappa)
    pool = cone.classes_below_order(n, n)
    bad = []
    for i in range(pairs):
        x, y = random_series(rng, cone, n, pool=pool), random_series(rng, cone, n, pool=pool)
        if spec(x * y) != spec(x) * spec(y):
            bad.append(f"case {i}: specialization is not multiplicative on {x!r}, {y!r}")
        for s in (x, y):
            v = s.valuation()
            if s and spec(s).valuation() < spec.scale * v:
                bad.append(f"case {i}: order {v} series lands below level {spec.scale * v}")
    return bad


def random_matrix(rng: random.Random, max_size: int = 8, bound: int = 20) -> IntMatrix:
    r, c = rng.randint(1, max_size), rng.randint(1, max_size)
    return IntMatrix([[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)])


def random_unimodular(rng: random.Random, n: int, steps: int = 12) -> tuple[IntMatrix, IntMatrix]:
    """A product of elementary matrices and its inverse."""
    m = IntMatrix.identity(n).tolist()
    inv = IntMatrix.identity(n).tolist()
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-3, 3)
        for row in m:                 # column op: col_j += q col_i
            row[j] += q * row[i]
        inv[i] = [a - q * b for a, b in zip(inv[i], inv[j])]   # row op on the inverse
    if n and rng.random() < 0.5:
        k = rng.randrange(n)
        for row in m:
            row[k] = -row[k]
        inv[k] = [-a for a in inv[k]]
    return IntMatrix(m, n, n), IntMatrix(inv, n, n)


def _is_snf(d: IntMatrix) -> bool:
    diag = diagonal(d)
    r = len(diag)
    off = any(d[i, j] for i in range(d.rows) for j in range(d.cols) if i != j or i >= r)
    divides = all(diag[i + 1] % diag[i] == 0 for i in range(r - 1))
    return not off and all(x > 0 for x in diag) and divides


def check_snf(count: int = 1000, seed: int = 0, max_size: int = 8, bound: int = 20) -> list[str]:
    rng = random.Random(seed)
    bad = []
    for i in range(count):
        m = random_matrix(rng, max_size, bound)
        U, D, V = smith_normal_form(m)
        if U @ m @ V != D:
            bad.append(f"case {i}: U·m·V ≠ D for {m.tolist()}")
        elif abs(U.det()) != 1 or abs(V.det()) != 1:
            bad.append(f"case {i}: transform is not unimodular for {m.tolist()}")
        elif not _is_snf(D):
            bad.append(f"case {i}: D is not in Smith form for {m.tolist()}")
    return bad


def random_complex(rng: random.Random, even: int, odd: int) -> IntComplex:
    """Multiplication-by-c pairs in both directions, written in a random basis."""
    de = [[0] * even for _ in range(odd)]
    do = [[0] * odd for _ in range(even)]
    up = rng.randint(0, min(even, odd))
    for i in range(up):
        de[i][i] = rng.choice([1, 1, 2, 3])
    for i in range(rng.randint(0, min(even, odd) - up)):
        do[up + i][up + i] = rng.choice([1, 2])
    pe, pe_inv = random_unimodular(rng, even)
    po, po_inv = random_unimodular(rng, odd)
    return IntComplex(even, odd, po @ IntMatrix(de, odd, even) @ pe_inv,
                      pe @ IntMatrix(do, even, odd) @ po_inv)


def check_cone_acyclicity(count: int = 200, seed: int = 0, max_rank: int = 5) -> list[str]:
    """The cone of a chain isomorphism is acyclic, for transported complexes."""
    rng = random.Random(seed)
    bad = []
    for i in range(count):
        c = random_complex(rng, rng.randint(0, max_rank), rng.randint(0, max_rank))
        fe, fe_inv = random_unimodular(rng, c.even_rank)
        fo, fo_inv = random_unimodular(rng, c.odd_rank)
        target = IntComplex(c.even_rank, c.odd_rank, fo @ c.d_even @ fe_inv, fe @ c.d_odd @ fo_inv)
        if not is_acyclic(mapping_cone(c, target, fe, fo)):
            bad.append(f"case {i}: cone of an isomorphism has homology")
    return bad
