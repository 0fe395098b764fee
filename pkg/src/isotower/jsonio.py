"""JSON encodings for matrices, tower points and group representations."""
from __future__ import annotations

import numpy as np

from .errors import InvalidInput
from .ktheory import GroupSpec, Representation
from .tower import ThomPoint, TowerPoint, make_tower_point


def matrix_to_json(M) -> dict:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in M.ravel()]}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed matrix JSON: {exc}") from exc
    if len(data) != rows * cols:
        raise InvalidInput(f"matrix JSON has {len(data)} entries, expected {rows * cols}")
    vals = np.array([complex(re, im) for re, im in data], dtype=complex)
    return vals.reshape(rows, cols)


def tower_point_to_json(x: TowerPoint) -> dict:
    out = {"type": "tower", "k": x.k, "alpha": matrix_to_json(x.alpha), "beta": matrix_to_json(x.beta)}
    if x.theta is not None:
        out["theta"] = matrix_to_json(x.theta)
    return out


def tower_point_from_json(obj) -> TowerPoint:
    k = int(obj["k"])
    alpha = matrix_from_json(obj["alpha"])
    if "theta" in obj:
        return make_tower_point(k, alpha, matrix_from_json(obj["theta"]))
    return TowerPoint(k, alpha, matrix_from_json(obj["beta"]))


def thom_point_to_json(z: ThomPoint) -> dict:
    return {"type": "thom", "k": z.k, "W": matrix_to_json(z.W), "gamma": matrix_to_json(z.gamma),
            "psi": matrix_to_json(z.psi)}


def thom_point_from_json(obj) -> ThomPoint:
    return ThomPoint(int(obj["k"]), matrix_from_json(obj["W"]), matrix_from_json(obj["gamma"]),
                     matrix_from_json(obj["psi"]))


def group_from_json(obj) -> GroupSpec:
    return GroupSpec(tuple(int(n) for n in obj["orders"]))


def representation_from_json(obj) -> Representation:
    G = group_from_json(obj)
    return Representation(G, tuple(tuple(int(c) for c in ch) for ch in obj.get("chars", [])))


def representation_to_json(V: Representation) -> dict:
    return {"orders": list(V.group.orders), "chars": [list(c) for c in V.chars]}
