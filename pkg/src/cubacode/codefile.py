"""JSON code-definition files.

Schema::

    {
      "name": "my-code",
      "modes": 1,
      "shells": [1.0, 2.0],
      "claimed_degree": 7,            # optional, may be null
      "logicals": [
        [ {"point": [[re, im], ...],  # one [re, im] pair per mode
           "weight": 0.25}, ... ],
        ...
      ]
    }

The reader validates every type invariant and reports the first violation
with the JSON path of the offending field.
"""

from __future__ import annotations

import json
from typing import Union

import numpy as np

from .constellation import CodeSpec, WeightedConstellation
from .errors import ValidationError


class CodeFileError(ValidationError):
    """Malformed code-definition file; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _require(cond: bool, path: str, message: str):
    if not cond:
        raise CodeFileError(path, message)


def _as_number(value, path: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), path, "expected a number")
    return float(value)


def loads_code(text: str) -> CodeSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodeFileError("$", f"invalid JSON ({exc})") from exc
    _require(isinstance(doc, dict), "$", "top level must be an object")

    _require("name" in doc, "$.name", "missing")
    _require(isinstance(doc["name"], str) and doc["name"], "$.name", "expected a nonempty string")

    _require("modes" in doc, "$.modes", "missing")
    _require(isinstance(doc["modes"], int) and doc["modes"] >= 1, "$.modes", "expected an integer >= 1")
    n = doc["modes"]

    shells = doc.get("shells", [])
    _require(isinstance(shells, list), "$.shells", "expected a list")
    shell_vals = []
    for i, r in enumerate(shells):
        val = _as_number(r, f"$.shells[{i}]")
        _require(val >= 0, f"$.shells[{i}]", "shell radius must be nonnegative")
        shell_vals.append(val)

    degree = doc.get("claimed_degree")
    if degree is not None:
        _require(isinstance(degree, int) and degree >= 0, "$.claimed_degree", "expected an integer >= 0 or null")

    _require("logicals" in doc, "$.logicals", "missing")
    _require(isinstance(doc["logicals"], list) and doc["logicals"], "$.logicals", "expected a nonempty list")

    logicals = []
    for k, entries in enumerate(doc["logicals"]):
        path_k = f"$.logicals[{k}]"
        _require(isinstance(entries, list) and entries, path_k, "expected a nonempty list of points")
        points = []
        weights = []
        for i, entry in enumerate(entries):
            path_i = f"{path_k}[{i}]"
            _require(isinstance(entry, dict), path_i, "expected an object with point and weight")
            _require("point" in entry, f"{path_i}.point", "missing")
            _require("weight" in entry, f"{path_i}.weight", "missing")
            pt = entry["point"]
            _require(isinstance(pt, list) and len(pt) == n, f"{path_i}.point", f"expected {n} [re, im] pairs")
            coords = []
            for j, pair in enumerate(pt):
                pth = f"{path_i}.point[{j}]"
                _require(isinstance(pair, list) and len(pair) == 2, pth, "expected an [re, im] pair")
                coords.append(complex(_as_number(pair[0], pth), _as_number(pair[1], pth)))
            w = _as_number(entry["weight"], f"{path_i}.weight")
            _require(w > 0, f"{path_i}.weight", "weight must be positive")
            points.append(coords)
            weights.append(w)
        try:
            logicals.append(WeightedConstellation(np.array(points), np.array(weights)))
        except ValidationError as exc:
            raise CodeFileError(path_k, str(exc)) from exc

    try:
        return CodeSpec(
            name=doc["name"],
            logicals=tuple(logicals),
            shells=tuple(shell_vals),
            claimed_degree=degree,
        )
    except ValidationError as exc:
        raise CodeFileError("$", str(exc)) from exc


def load_code(path) -> CodeSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_code(fh.read())


def dumps_code(code: CodeSpec, indent: int = 2) -> str:
    doc = {
        "name": code.name,
        "modes": code.modes,
        "shells": list(code.shells),
        "claimed_degree": code.claimed_degree,
        "logicals": [
            [
                {
                    "point": [[float(z.real), float(z.imag)] for z in pt],
                    "weight": float(w),
                }
                for pt, w in zip(c.points, c.weights)
            ]
            for c in code.logicals
        ],
    }
    return json.dumps(doc, indent=indent)


def save_code(code: CodeSpec, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_code(code))
        fh.write("\n")
