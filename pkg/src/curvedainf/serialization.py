"""JSON documents for cones, series, algebras, bimodules and transfer data.

Readers raise :class:`ParseError` for malformed documents and let domain
constructors raise :class:`InvariantError` for well-formed but invalid data.
Writers sort every collection, so equal values give byte-identical text.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from .ainfty import Bimodule, CurvedAlgebra, Element
from .constructions import TransferProblem
from .errors import InvariantError, ParseError
from .moduli import GeometrySpec, geometry_from_mapping, geometry_to_mapping
from .ring import ConeSpec, NovikovSeries, PowerSeries
from .transfer import TransferResult


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def require_field(doc: Mapping, key: str, kind=None, where: str = "document"):
    if not isinstance(doc, Mapping):
        raise ParseError(f"{where} must be a JSON object")
    if key not in doc:
        raise ParseError(f"{where} is missing the field {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(f"field {key!r} of {where} has the wrong type")
    return value


def as_int(x, what: str) -> int:
    if isinstance(x, bool):
        raise ParseError(f"{what} must be an integer")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise ParseError(f"{what} must be an integer, got {x!r}")


def _int_list(x, what: str) -> list[int]:
    if not isinstance(x, list):
        raise ParseError(f"{what} must be an array of integers")
    return [as_int(v, what) for v in x]


# -- cones and series ------------------------------------------------------------


def cone_to_doc(cone: ConeSpec) -> dict:
    doc: dict = {"p_count": cone.p_count, "generators": [list(g) for g in cone.generators]}
    if cone.ample is not None:
        doc["ample"] = [str(Fraction(x)) for x in cone.ample]
    if cone.anticanonical is not None:
        doc["anticanonical"] = [str(Fraction(x)) for x in cone.anticanonical]
    return doc


def cone_from_doc(doc: Mapping) -> ConeSpec:
    p = as_int(require_field(doc, "p_count", where="cone"), "p_count")
    gens = require_field(doc, "generators", list, "cone")
    generators = tuple(tuple(_int_list(g, "generator")) for g in gens)

    def fractions(key):
        if doc.get(key) is None:
            return None
        try:
            return tuple(Fraction(str(x)) for x in doc[key])
        except (ValueError, ZeroDivisionError, TypeError):
            raise ParseError(f"{key} must be an array of rationals") from None

    return ConeSpec(p, generators, fractions("ample"), fractions("anticanonical"))


def terms_to_doc(s: PowerSeries) -> list[dict]:
    return [{"class": list(alpha), "coeff": str(c)} for alpha, c in s.items()]


def terms_from_doc(terms, cone: ConeSpec, n: int) -> PowerSeries:
    if isinstance(terms, (int, str)) and not isinstance(terms, bool):
        return PowerSeries.constant(cone, n, as_int(terms, "coefficient"))
    if not isinstance(terms, list):
        raise ParseError("series terms must be an array of {class, coeff}")
    out: dict[tuple, int] = {}
    for t in terms:
        alpha = tuple(_int_list(require_field(t, "class", where="series term"), "class"))
        c = as_int(require_field(t, "coeff", where="series term"), "coeff")
        out[alpha] = out.get(alpha, 0) + c
    return PowerSeries(cone, n, out)


def series_to_doc(s: PowerSeries) -> dict:
    return {"trunc_order": s.trunc_order, "terms": terms_to_doc(s)}


def series_from_doc(doc: Mapping, cone: ConeSpec) -> PowerSeries:
    n = as_int(require_field(doc, "trunc_order", where="series"), "trunc_order")
    return terms_from_doc(require_field(doc, "terms", where="series"), cone, n)


def novikov_to_doc(x: NovikovSeries) -> dict:
    return {"trunc_level": str(x.trunc_level),
            "terms": [{"exponent": str(e), "coeff": str(c)} for e, c in sorted(x.as_dict().items())]}


# -- algebras, bimodules, elements -----------------------------------------------


def _vector_to_doc(vec: Mapping[int, PowerSeries], names: Sequence[str]) -> dict:
    return {names[o]: terms_to_doc(s) for o, s in sorted(vec.items())}


def _vector_from_doc(doc, index: Mapping[str, int], cone, n, what: str) -> dict:
    if not isinstance(doc, Mapping):
        raise ParseError(f"{what} must map basis names to series")
    out = {}
    for name, terms in doc.items():
        if name not in index:
            raise ParseError(f"{what} refers to unknown basis element {name!r}")
        s = terms_from_doc(terms, cone, n)
        if s:
            out[index[name]] = s
    return out


def _basis_to_doc(names, parities) -> list[dict]:
    return [{"name": x, "parity": p} for x, p in zip(names, parities)]


def _basis_from_doc(doc, what: str) -> tuple[list[str], list[int]]:
    if not isinstance(doc, list):
        raise ParseError(f"{what} basis must be an array of {{name, parity}}")
    names, pars = [], []
    for b in doc:
        name = require_field(b, "name", str, f"{what} basis entry")
        names.append(name)
        pars.append(as_int(require_field(b, "parity", where=f"{what} basis entry"), "parity"))
    return names, pars


def algebra_to_doc(alg: CurvedAlgebra, with_ring: bool = True) -> dict:
    ops = []
    for k in sorted(alg.ops):
        for key, vec in sorted(alg.ops[k].items()):
            ops.append({"arity": k, "inputs": [alg.names[j] for j in key],
                        "output": _vector_to_doc(vec, alg.names)})
    doc = {"basis": _basis_to_doc(alg.names, alg.parities), "operations": ops}
    if with_ring:
        doc["cone"] = cone_to_doc(alg.cone)
        doc["trunc_order"] = alg.trunc_order
    return doc


def algebra_from_doc(doc: Mapping, cone: ConeSpec | None = None, n: int | None = None) -> CurvedAlgebra:
    if cone is None:
        cone = cone_from_doc(require_field(doc, "cone", where="algebra"))
    if n is None:
        n = as_int(require_field(doc, "trunc_order", where="algebra"), "trunc_order")
    names, pars = _basis_from_doc(require_field(doc, "basis", where="algebra"), "algebra")
    index = {x: i for i, x in enumerate(names)}
    ops: dict[int, dict] = {}
    for op in require_field(doc, "operations", list, "algebra"):
        k = as_int(require_field(op, "arity", where="operation"), "arity")
        inputs = require_field(op, "inputs", list, "operation")
        if len(inputs) != k:
            raise ParseError(f"operation with arity {k} lists {len(inputs)} inputs")
        try:
            key = tuple(index[x] for x in inputs)
        except (KeyError, TypeError):
            raise ParseError(f"operation inputs {inputs} name unknown basis elements") from None
        vec = _vector_from_doc(require_field(op, "output", where="operation"), index, cone, n, "operation output")
        table = ops.setdefault(k, {})
        if key in table:
            raise ParseError(f"operation μ^{k}{tuple(inputs)} listed twice")
        table[key] = vec
    return CurvedAlgebra(cone, n, names, pars, ops)


def bimodule_to_doc(M: Bimodule) -> dict:
    ops = []
    for (a, m, b), vec in sorted(M.ops.items()):
        ops.append({"left": [M.left.names[x] for x in a], "module": M.names[m],
                    "right": [M.right.names[x] for x in b], "output": _vector_to_doc(vec, M.names)})
    return {"basis": _basis_to_doc(M.names, M.parities), "operations": ops}


def bimodule_from_doc(doc: Mapping, left: CurvedAlgebra, right: CurvedAlgebra) -> Bimodule:
    names, pars = _basis_from_doc(require_field(doc, "basis", where="bimodule"), "bimodule")
    index = {x: i for i, x in enumerate(names)}
    lidx = {x: i for i, x in enumerate(left.names)}
    ridx = {x: i for i, x in enumerate(right.names)}
    ops: dict[tuple, dict] = {}
    for op in require_field(doc, "operations", list, "bimodule"):
        try:
            a = tuple(lidx[x] for x in require_field(op, "left", list, "bimodule operation"))
            m = index[require_field(op, "module", str, "bimodule operation")]
            b = tuple(ridx[x] for x in require_field(op, "right", list, "bimodule operation"))
        except KeyError as exc:
            raise ParseError(f"bimodule operation names unknown element {exc.args[0]!r}") from None
        if (a, m, b) in ops:
            raise ParseError("bimodule operation listed twice")
        ops[(a, m, b)] = _vector_from_doc(require_field(op, "output", where="bimodule operation"), index,
                                          left.cone, left.trunc_order, "bimodule output")
    return Bimodule(left, right, names, pars, ops)


def element_to_doc(x: Element, names: Sequence[str]) -> dict:
    return {"parity": x.parity, "coeffs": _vector_to_doc(x.coeffs, names)}


def element_from_doc(doc: Mapping, names: Sequence[str], parities: Sequence[int], cone, n) -> Element:
    index = {x: i for i, x in enumerate(names)}
    vec = _vector_from_doc(require_field(doc, "coeffs", where="element"), index, cone, n, "element")
    parity = as_int(require_field(doc, "parity", where="element"), "parity") % 2
    if any(parities[i] != parity for i in vec):
        raise ParseError("element has a component of the wrong parity")
    return Element(vec, parity)


# -- transfer problems and results ----------------------------------------------


def problem_to_doc(p: TransferProblem) -> dict:
    doc = {
        "cone": cone_to_doc(p.A.cone),
        "trunc_order": p.trunc_order,
        "algebra_trunc_order": p.A.trunc_order,
        "A": algebra_to_doc(p.A, with_ring=False),
        "B": algebra_to_doc(p.B, with_ring=False),
        "M": bimodule_to_doc(p.M),
        "m0": element_to_doc(p.m0, p.M.names),
        "b": element_to_doc(p.b, p.B.names),
        "label": p.label,
    }
    if p.unit_b is not None:
        doc["unit_b"] = element_to_doc(p.unit_b, p.B.names)
    return doc


def problem_from_doc(doc: Mapping) -> TransferProblem:
    cone = cone_from_doc(require_field(doc, "cone", where="problem"))
    n = as_int(require_field(doc, "trunc_order", where="problem"), "trunc_order")
    alg_n = as_int(doc.get("algebra_trunc_order", n), "algebra_trunc_order")
    A = algebra_from_doc(require_field(doc, "A", where="problem"), cone, alg_n)
    B = algebra_from_doc(require_field(doc, "B", where="problem"), cone, alg_n)
    M = bimodule_from_doc(require_field(doc, "M", where="problem"), A, B)
    m0 = element_from_doc(require_field(doc, "m0", where="problem"), M.names, M.parities, cone, alg_n)
    b = element_from_doc(require_field(doc, "b", where="problem"), B.names, B.parities, cone, alg_n)
    unit = doc.get("unit_b")
    unit_b = None if unit is None else element_from_doc(unit, B.names, B.parities, cone, alg_n)
    return TransferProblem(A, B, M, m0, b, n, str(doc.get("label", "")), unit_b)


def _jsonable(x):
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def result_to_doc(r: TransferResult, A: CurvedAlgebra, M: Bimodule) -> dict:
    return {
        "cone": cone_to_doc(A.cone),
        "trunc_order": A.trunc_order,
        "order_achieved": r.order_achieved,
        "a": element_to_doc(r.a, A.names),
        "m": element_to_doc(r.m, M.names),
        "log": _jsonable(r.log),
    }


def result_from_doc(doc: Mapping, A: CurvedAlgebra, M: Bimodule) -> TransferResult:
    cone, n = A.cone, A.trunc_order
    a = element_from_doc(require_field(doc, "a", where="result"), A.names, A.parities, cone, n)
    m = element_from_doc(require_field(doc, "m", where="result"), M.names, M.parities, cone, n)
    return TransferResult(a, m, as_int(require_field(doc, "order_achieved", where="result"), "order_achieved"),
                          list(doc.get("log", [])))


# -- geometry ---------------------------------------------------------------------


def geometry_from_doc(doc: Mapping) -> GeometrySpec:
    try:
        return geometry_from_mapping(doc)
    except InvariantError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed geometry document: {exc!r}") from None


def geometry_to_doc(geom: GeometrySpec) -> dict:
    return geometry_to_mapping(geom)
