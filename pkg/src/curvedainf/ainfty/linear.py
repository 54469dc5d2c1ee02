"""Sparse vectors and multilinear tensors with series coefficients.

A vector is a ``dict`` from basis index to nonzero :class:`PowerSeries`.
An operation table maps an input index tuple to an output vector.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

from ..ring import PowerSeries

Vector = dict  # int -> PowerSeries
OpTable = dict  # tuple[int, ...] -> Vector


def add_into(acc: Vector, vec: Mapping, scale: PowerSeries | int | None = None) -> Vector:
    """``acc += scale * vec`` in place, dropping cancelled entries."""
    for i, s in vec.items():
        term = s if scale is None else s * scale
        if not term:
            continue
        cur = acc.get(i)
        new = term if cur is None else cur + term
        if new:
            acc[i] = new
        elif cur is not None:
            del acc[i]
    return acc


def scaled(vec: Mapping, scale) -> Vector:
    return add_into({}, vec, scale)


def negated(vec: Mapping) -> Vector:
    return {i: -s for i, s in vec.items()}


def truncated(vec: Mapping, n: int) -> Vector:
    out = {}
    for i, s in vec.items():
        t = s.truncate(n)
        if t:
            out[i] = t
    return out


def valuation(vec: Mapping):
    return min((s.valuation() for s in vec.values()), default=float("inf"))


def apply_op(table: Mapping, args: list[Mapping]) -> Vector:
    """Evaluate a multilinear operation on sparse argument vectors."""
    out: Vector = {}
    for key, vec in table.items():
        coeff = None
        for p, j in enumerate(key):
            c = args[p].get(j)
            if c is None:
                break
            coeff = c if coeff is None else coeff * c
            if not coeff:
                break
        else:
            add_into(out, vec, coeff)
    return out


def insert_everywhere(ops: Mapping[int, Mapping], x: Mapping, max_arity: int | None = None,
                      only_full: bool = False) -> dict[int, OpTable]:
    """Fill any subset of input slots of each stored operation with ``x``.

    Returns the operation tables of ``μ_x^k(y_1..y_k) = Σ μ(x^{i_0}, y_1, x^{i_1}, ...)``.
    ``x`` must have even reduced degree so no Koszul signs arise.
    With ``only_full`` only the fully filled slots (the Maurer–Cartan sum) are kept.
    """
    out: dict[int, OpTable] = {}
    for n, table in ops.items():
        for key, vec in table.items():
            fillable = [p for p, j in enumerate(key) if j in x]
            sizes = [len(fillable)] if only_full else range(len(fillable) + 1)
            for size in sizes:
                for chosen in combinations(fillable, size):
                    k = n - size
                    if max_arity is not None and k > max_arity:
                        continue
                    coeff = None
                    for p in chosen:
                        c = x[key[p]]
                        coeff = c if coeff is None else coeff * c
                    if coeff is not None and not coeff:
                        continue
                    chosen_set = set(chosen)
                    newkey = tuple(j for p, j in enumerate(key) if p not in chosen_set)
                    table_k = out.setdefault(k, {})
                    target = table_k.setdefault(newkey, {})
                    add_into(target, vec, coeff)
                    if not target:
                        del table_k[newkey]
    return {k: t for k, t in out.items() if t}


def by_output(table: Mapping) -> dict[int, list[tuple[tuple, PowerSeries]]]:
    """Index an operation table by output basis element."""
    idx: dict[int, list] = {}
    for key, vec in table.items():
        for o, c in vec.items():
            idx.setdefault(o, []).append((key, c))
    return idx


def clean_table(table: Mapping, n: int) -> OpTable:
    out = {}
    for key, vec in table.items():
        v = truncated(vec, n)
        if v:
            out[tuple(key)] = v
    return out


def iter_vectors(tables: Iterable[Mapping]):
    for t in tables:
        yield from t.values()
