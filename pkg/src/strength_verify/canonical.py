"""Canonical JSON: exact numbers as decimal strings, sorted keys, no padding."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any


def normalize(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    if isinstance(obj, float):
        # Only decimal approximations that are labelled as such reach here.
        return repr(obj)
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return normalize(obj.as_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(normalize(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
