"""JSON encoding for reports.

Every non-integer number is written as ``{"value": <grammar string>,
"exact": bool, "approx": float}`` so that exact values survive a round
trip and floats are always tagged.
"""
from __future__ import annotations

import json

import numpy as np
from gmpy2 import mpq

from .algebra import Scalar

__all__ = ["dumps", "reencode", "scalar_from_json", "scalar_to_json", "to_jsonable"]


def scalar_to_json(x: Scalar) -> dict:
    return {"value": str(x), "exact": x.is_exact, "approx": float(x)}


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, dict):
        return Scalar.parse(obj["value"])
    if isinstance(obj, int):
        return Scalar(obj)
    if isinstance(obj, str):
        return Scalar.parse(obj)
    raise TypeError(f"cannot decode a scalar from {obj!r}")


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Scalar):
        return scalar_to_json(obj)
    if isinstance(obj, (float, np.floating, type(mpq(0)))):
        return scalar_to_json(Scalar.coerce(obj))
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(obj, *, indent: int | None = None) -> str:
    return json.dumps(to_jsonable(obj), indent=indent, allow_nan=False)


def reencode(text: str, *, indent: int | None = None) -> str:
    """Parse a report and write it back; identical bytes for our own output."""
    return json.dumps(json.loads(text), indent=indent, allow_nan=False)
