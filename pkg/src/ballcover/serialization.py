"""JSON wire format for spaces, motions, shapes, and coverings.

Every serializable object maps to a dict with a ``kind`` discriminator;
floats round-trip exactly through ``json`` (shortest-repr encoding).
Composed and scaled linear maps are in-memory constructions only and are
rejected on save.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .coverings import Covering
from .motions import (
    ComposedLinear,
    Identity,
    LinearIsometry,
    Motion,
    PlanarRotation,
    ScaledLinear,
    SignedPermutation,
)
from .shapes import (
    ClosedBall,
    FiniteUnion,
    Image,
    Ommatidium,
    OpenBall,
    Shape,
    SlabCap,
    Sphere,
)
from .spaces import Space

__all__ = [
    "SerializationError",
    "covering_from_dict",
    "covering_to_dict",
    "load_covering",
    "motion_from_dict",
    "motion_to_dict",
    "save_covering",
    "shape_from_dict",
    "shape_to_dict",
    "space_from_dict",
    "space_to_dict",
]


class SerializationError(ValueError):
    """Raised for unknown kinds and for objects with no wire form."""


def _floats(x) -> list[float]:
    return [float(v) for v in np.asarray(x).ravel()]


def space_to_dict(space: Space) -> dict:
    if math.isinf(space.p):
        norm = {"kind": "linf"}
    else:
        norm = {"kind": "lp", "p": float(space.p)}
    return {"dim": int(space.dim), "norm": norm}


def space_from_dict(d: dict) -> Space:
    norm = d["norm"]
    kind = norm["kind"]
    if kind == "linf":
        return Space(int(d["dim"]), math.inf)
    if kind == "lp":
        return Space(int(d["dim"]), float(norm["p"]))
    raise SerializationError(f"unknown norm kind {kind!r}")


def _linear_to_dict(lin: LinearIsometry) -> dict:
    if isinstance(lin, Identity):
        return {"kind": "identity"}
    if isinstance(lin, PlanarRotation):
        return {
            "kind": "planar_rotation",
            "e1u": _floats(lin.e1u),
            "u": _floats(lin.u),
            "alpha": float(lin.alpha),
        }
    if isinstance(lin, SignedPermutation):
        return {
            "kind": "signed_permutation",
            "perm": [int(i) for i in lin.perm],
            "signs": [int(s) for s in lin.signs],
        }
    if isinstance(lin, (ComposedLinear, ScaledLinear)):
        raise SerializationError(
            f"{type(lin).__name__} is an in-memory construction with no wire form"
        )
    raise SerializationError(f"cannot serialize linear map {type(lin).__name__}")


def _linear_from_dict(d: dict, dim: int) -> LinearIsometry:
    kind = d["kind"]
    if kind == "identity":
        return Identity(dim)
    if kind == "planar_rotation":
        return PlanarRotation(np.asarray(d["e1u"], dtype=float), np.asarray(d["u"], dtype=float), float(d["alpha"]))
    if kind == "signed_permutation":
        return SignedPermutation(tuple(int(i) for i in d["perm"]), tuple(int(s) for s in d["signs"]))
    raise SerializationError(f"unknown linear kind {kind!r}")


def motion_to_dict(m: Motion) -> dict:
    return {"linear": _linear_to_dict(m.linear), "shift": _floats(m.shift)}


def motion_from_dict(d: dict) -> Motion:
    shift = np.asarray(d["shift"], dtype=float)
    return Motion(_linear_from_dict(d["linear"], shift.shape[0]), shift)


def shape_to_dict(shape: Shape) -> dict:
    if isinstance(shape, ClosedBall):
        return {"kind": "closed_ball", "center": _floats(shape.center), "radius": float(shape.radius)}
    if isinstance(shape, OpenBall):
        return {"kind": "open_ball", "center": _floats(shape.center), "radius": float(shape.radius)}
    if isinstance(shape, Sphere):
        return {"kind": "sphere", "center": _floats(shape.center), "radius": float(shape.radius)}
    if isinstance(shape, Ommatidium):
        return {
            "kind": "ommatidium",
            "origin": _floats(shape.origin),
            "endpoint": _floats(shape.endpoint),
            "gamma": float(shape.gamma),
        }
    if isinstance(shape, SlabCap):
        return {
            "kind": "slab_cap",
            "ball": shape_to_dict(shape.ball),
            "axis": int(shape.axis),
            "lo": float(shape.lo),
            "hi": float(shape.hi),
        }
    if isinstance(shape, Image):
        return {"kind": "image", "inner": shape_to_dict(shape.inner), "motion": motion_to_dict(shape.motion)}
    if isinstance(shape, FiniteUnion):
        return {"kind": "finite_union", "parts": [shape_to_dict(p) for p in shape.parts]}
    raise SerializationError(f"cannot serialize shape {type(shape).__name__}")


def shape_from_dict(d: dict) -> Shape:
    kind = d["kind"]
    if kind == "closed_ball":
        return ClosedBall(np.asarray(d["center"], dtype=float), float(d["radius"]))
    if kind == "open_ball":
        return OpenBall(np.asarray(d["center"], dtype=float), float(d["radius"]))
    if kind == "sphere":
        return Sphere(np.asarray(d["center"], dtype=float), float(d["radius"]))
    if kind == "ommatidium":
        return Ommatidium(
            np.asarray(d["origin"], dtype=float),
            np.asarray(d["endpoint"], dtype=float),
            float(d["gamma"]),
        )
    if kind == "slab_cap":
        ball = shape_from_dict(d["ball"])
        if not isinstance(ball, ClosedBall):
            raise SerializationError("slab_cap requires a closed_ball body")
        return SlabCap(ball, int(d["axis"]), float(d["lo"]), float(d["hi"]))
    if kind == "image":
        return Image(shape_from_dict(d["inner"]), motion_from_dict(d["motion"]))
    if kind == "finite_union":
        return FiniteUnion(tuple(shape_from_dict(p) for p in d["parts"]))
    raise SerializationError(f"unknown shape kind {kind!r}")


def _jsonable_meta(meta: dict) -> dict:
    out = {}
    for key, value in meta.items():
        if isinstance(value, (np.floating, float)):
            out[key] = float(value)
        elif isinstance(value, (np.integer, int)):
            out[key] = int(value)
        elif isinstance(value, (tuple, list, np.ndarray)):
            out[key] = [
                float(v) if isinstance(v, (np.floating, float)) else v
                for v in np.asarray(value).tolist()
            ] if isinstance(value, np.ndarray) else [
                float(v) if isinstance(v, (np.floating, float)) else v for v in value
            ]
        else:
            out[key] = value
    return out


def covering_to_dict(cov: Covering) -> dict:
    ball = shape_to_dict(cov.ball)
    witnesses = None
    if cov.witnesses is not None:
        witnesses = [motion_to_dict(w) for w in cov.witnesses]
    return {
        "space": space_to_dict(cov.space),
        "ball": ball,
        "sets": [shape_to_dict(s) for s in cov.sets],
        "witnesses": witnesses,
        "meta": _jsonable_meta(dict(cov.meta)),
    }


def covering_from_dict(d: dict) -> Covering:
    space = space_from_dict(d["space"])
    ball = shape_from_dict(d["ball"])
    if not isinstance(ball, ClosedBall):
        raise SerializationError("covering ball must be a closed_ball")
    witnesses = d.get("witnesses")
    motions = None if witnesses is None else tuple(motion_from_dict(w) for w in witnesses)
    return Covering(
        space=space,
        ball=ball,
        sets=tuple(shape_from_dict(s) for s in d["sets"]),
        witnesses=motions,
        meta=dict(d.get("meta") or {}),
    )


def save_covering(cov: Covering, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(covering_to_dict(cov), fh, indent=2)
        fh.write("\n")


def load_covering(path) -> Covering:
    with open(path, "r", encoding="utf-8") as fh:
        return covering_from_dict(json.load(fh))
