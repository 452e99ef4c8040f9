"""Deterministic JSON rendering of run reports.

Every float is written with 17 significant digits so a report round-trips to
the same doubles; key order is whatever order the caller built the mapping in.
Only ``elapsed_ms`` depends on the machine.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from importlib import resources
from typing import Any

import numpy as np

from .g2 import ALTERNATION_CONVENTION
from .holonomy import CROSS_CONVENTION
from .hyperkahler import QUATERNION_CONVENTION
from .hypersurface import SIGN_CONVENTION

FRAME_CONVENTION = "frame (xi_1..xi_7) = (J1 n, J2 n, J3 n, xi_4, J1 xi_4, J2 xi_4, J3 xi_4); indices 0-based in data"


def conventions() -> dict[str, str]:
    return {
        "quaternion": QUATERNION_CONVENTION,
        "sign": SIGN_CONVENTION,
        "alternation": ALTERNATION_CONVENTION,
        "cross_product": CROSS_CONVENTION,
        "frame": FRAME_CONVENTION,
    }


def _render_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be written to JSON")
    text = format(x, ".17g")
    # keep integral values recognizably floating point
    return text if any(ch in text for ch in ".en") else text + ".0"


def to_plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays and Fractions into JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        return float(obj)
    return obj


def dumps(obj: Any, indent: int = 2) -> str:
    """Serialize with fixed float formatting; keys keep insertion order."""
    out: list[str] = []

    def emit(value, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(value, dict):
            if not value:
                out.append("{}")
                return
            out.append("{\n")
            for n, (k, v) in enumerate(value.items()):
                out.append(pad + json.dumps(str(k)) + ": ")
                emit(v, level + 1)
                out.append(",\n" if n < len(value) - 1 else "\n")
            out.append(end + "}")
        elif isinstance(value, list):
            if not value:
                out.append("[]")
                return
            if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
                out.append("[" + ", ".join(_scalar(v) for v in value) + "]")
                return
            out.append("[\n")
            for n, v in enumerate(value):
                out.append(pad)
                emit(v, level + 1)
                out.append(",\n" if n < len(value) - 1 else "\n")
            out.append(end + "]")
        else:
            out.append(_scalar(value))

    emit(to_plain(obj), 0)
    return "".join(out) + "\n"


def _scalar(v) -> str:
    if v is None or isinstance(v, (bool, str)):
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _render_float(v)
    raise TypeError(f"cannot serialize {type(v).__name__}")


def load_schema(kind: str = "report") -> dict:
    """The JSON schema shipped with the package (``report`` or ``axioms``)."""
    text = resources.files("g2check").joinpath("schemas", f"{kind}.schema.json").read_text()
    return json.loads(text)


def validate(report: dict, kind: str = "report") -> None:
    """Raise ``jsonschema.ValidationError`` when the report does not match."""
    import jsonschema

    jsonschema.validate(json.loads(dumps(report)), load_schema(kind))


def strip_timing(text: str) -> str:
    """Report text with the timing field blanked, for comparisons between runs."""
    data = json.loads(text)
    data["elapsed_ms"] = 0
    return json.dumps(data)


__all__ = ["conventions", "dumps", "to_plain", "load_schema", "validate", "strip_timing"]
