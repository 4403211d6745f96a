from __future__ import annotations

import enum
import math
from fractions import Fraction

import numpy as np


def jsonable(obj):
    """Convert reports to plain JSON types.

    Exact rationals become ``"p/q"`` strings, floats are rounded through
    ``repr`` (so output is reproducible byte for byte), non-finite floats
    become strings.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, int) and not isinstance(obj, bool):
        return obj
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if not math.isfinite(f):
            return str(f)
        return f
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"not serializable: {type(obj).__name__}")
