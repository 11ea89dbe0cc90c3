"""Deterministic JSON and CSV emission.

Floats print as the shortest string that round-trips the double exactly (up
to 17 significant digits) and dict key order is preserved, so identical inputs
produce byte-identical reports regardless of thread count, and a value like
57.6 prints as "57.6".  Non-finite floats map to null.
"""

from __future__ import annotations

import math
from typing import Any, Iterable


def fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return repr(float(x))


def dumps(obj: Any, indent: int = 0) -> str:
    out: list[str] = []
    _write(obj, out)
    return "".join(out)


def _write(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(fmt_float(obj))
    elif isinstance(obj, complex):
        _write({"re": obj.real, "im": obj.imag}, out)
    elif isinstance(obj, str):
        out.append(_escape(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(_escape(str(k)))
            out.append(":")
            _write(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _write(v, out)
        out.append("]")
    elif hasattr(obj, "to_jsonable"):
        _write(obj.to_jsonable(), out)
    elif hasattr(obj, "item"):  # numpy scalar
        _write(obj.item(), out)
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def _escape(s: str) -> str:
    body = (s.replace("\\", "\\\\").replace('"', '\\"')
             .replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r"))
    return f'"{body}"'


def ladder_csv(rows: Iterable[tuple[int, float, float, float]]) -> str:
    lines = ["k,r,logI,abscissa"]
    for k, r, logI, absc in rows:
        lines.append(f"{k},{fmt_float(r)},{fmt_float(logI)},{fmt_float(absc)}")
    return "\n".join(lines) + "\n"
