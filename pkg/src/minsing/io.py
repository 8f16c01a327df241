"""Problem files: JSON documents describing a bundle over a torus.

Scalars are written as JSON integers, as ``"p/q"`` strings for exact
rationals, as JSON floats for approximate data, and as strings such as
``"1+2j"`` for complex hermitian entries. Parsing keeps each kind, so the
canonical form re-parses to an identical problem.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .bundle import BundleProblem, Fan
from .errors import ProblemParseError
from .torus import EXE, NSClass, TorusBase


def _scalar(value: Any, where: str):
    if isinstance(value, bool):
        raise ProblemParseError(f"{where}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str):
        text = value.strip()
        try:
            if "j" in text:
                return complex(text)
            frac = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ProblemParseError(f"{where}: cannot read {value!r} as a number") from exc
        return int(frac) if frac.denominator == 1 else frac
    raise ProblemParseError(f"{where}: expected a number, got {type(value).__name__}")


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise ProblemParseError(f"{where}: expected a list")
    return value


def _integer(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemParseError(f"{where}: expected an integer")
    return value


def _class(value: Any, where: str, rank: int) -> NSClass:
    items = _list(value, where)
    if len(items) != rank:
        raise ProblemParseError(f"{where}: expected {rank} coordinates, got {len(items)}")
    coeffs = [_scalar(x, f"{where}[{i}]") for i in range(len(items)) for x in [items[i]]]
    if any(isinstance(c, complex) for c in coeffs):
        raise ProblemParseError(f"{where}: class coordinates must be real")
    return NSClass(tuple(coeffs))


def _base(value: Any) -> TorusBase:
    if not isinstance(value, dict) or "kind" not in value:
        raise ProblemParseError('base: expected an object with a "kind" field')
    kind = value["kind"]
    if kind == "ExE":
        return EXE
    if kind != "hermitian":
        raise ProblemParseError(f"base.kind: unknown kind {kind!r}")
    forms_raw = _list(value.get("forms"), "base.forms")
    forms = []
    for k, f in enumerate(forms_raw):
        rows = _list(f, f"base.forms[{k}]")
        forms.append(tuple(
            tuple(_scalar(x, f"base.forms[{k}][{i}][{j}]") for j, x in enumerate(_list(r, f"base.forms[{k}][{i}]")))
            for i, r in enumerate(rows)
        ))
    if not forms:
        raise ProblemParseError("base.forms: at least one form is required")
    d = value.get("d", len(forms[0]))
    try:
        return TorusBase("hermitian", _integer(d, "base.d"), tuple(forms))
    except ValueError as exc:
        raise ProblemParseError(f"base.forms: {exc}") from exc


def problem_from_dict(data: Any) -> BundleProblem:
    """Build a problem from decoded JSON, naming the offending field on failure."""
    if not isinstance(data, dict):
        raise ProblemParseError("top level: expected a JSON object")
    for key in ("base", "fan", "L_hom", "L0", "h"):
        if key not in data:
            raise ProblemParseError(f"{key}: missing field")
    base = _base(data["base"])
    fan_raw = data["fan"]
    if not isinstance(fan_raw, dict):
        raise ProblemParseError("fan: expected an object")
    rays = [
        tuple(_integer(x, f"fan.rays[{i}][{j}]") for j, x in enumerate(_list(r, f"fan.rays[{i}]")))
        for i, r in enumerate(_list(fan_raw.get("rays"), "fan.rays"))
    ]
    if not rays:
        raise ProblemParseError("fan.rays: at least one ray is required")
    n = len(rays[0])
    if any(len(r) != n for r in rays):
        raise ProblemParseError("fan.rays: rays have different lengths")
    if "fiber_rank" in data and _integer(data["fiber_rank"], "fiber_rank") != n:
        raise ProblemParseError(f"fiber_rank: {data['fiber_rank']} does not match ray length {n}")
    cones = []
    for i, c in enumerate(_list(fan_raw.get("max_cones"), "fan.max_cones")):
        idx = tuple(_integer(x, f"fan.max_cones[{i}][{j}]") for j, x in enumerate(_list(c, f"fan.max_cones[{i}]")))
        if any(not 0 <= k < len(rays) for k in idx):
            raise ProblemParseError(f"fan.max_cones[{i}]: ray index out of range")
        cones.append(idx)
    labels = fan_raw.get("labels")
    if labels is not None:
        labels = _list(labels, "fan.labels")
        if len(labels) != len(cones) or not all(isinstance(s, str) for s in labels):
            raise ProblemParseError("fan.labels: expected one string per maximal cone")
    rank = base.ns_rank
    L_hom = tuple(_class(c, f"L_hom[{j}]", rank) for j, c in enumerate(_list(data["L_hom"], "L_hom")))
    if len(L_hom) != n:
        raise ProblemParseError(f"L_hom: expected {n} classes, one per basis vector of M")
    L0 = _class(data["L0"], "L0", rank)
    h = tuple(_integer(x, f"h[{i}]") for i, x in enumerate(_list(data["h"], "h")))
    if len(h) != len(rays):
        raise ProblemParseError(f"h: expected {len(rays)} values, one per ray")
    fan = Fan(tuple(rays), tuple(cones), tuple(labels) if labels else None)
    return BundleProblem(base, fan, L_hom, L0, h)


def loads(text: str) -> BundleProblem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return problem_from_dict(data)


def load(path) -> BundleProblem:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def _emit(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, complex):
        return str(x)
    return x


def problem_to_dict(problem: BundleProblem) -> dict:
    base = problem.base
    if base.kind == "ExE":
        base_doc = {"kind": "ExE"}
    else:
        base_doc = {
            "kind": "hermitian",
            "d": base.d,
            "forms": [[[_emit(x) for x in row] for row in f] for f in base.forms],
        }
    fan = problem.fan
    fan_doc = {"rays": [list(r) for r in fan.rays], "max_cones": [list(c) for c in fan.max_cones]}
    if fan.labels:
        fan_doc["labels"] = list(fan.labels)
    return {
        "base": base_doc,
        "fiber_rank": problem.n,
        "fan": fan_doc,
        "L_hom": [[_emit(x) for x in c] for c in problem.L_hom],
        "L0": [_emit(x) for x in problem.L0],
        "h": list(problem.h),
    }


def dumps(problem: BundleProblem) -> str:
    """Canonical JSON text of a problem."""
    return json.dumps(problem_to_dict(problem), indent=2)
