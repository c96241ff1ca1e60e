"""Canonical JSON-lines and CSV serialization of output records.

Floats are written with 17 significant digits (always with a decimal point
or exponent) and keys are sorted, so parse + re-serialize is byte-identical.
Big integers that are path counts are passed in as decimal strings.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable


def fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} cannot be serialized")
    s = "%.17g" % x
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj: Any) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(json.dumps(str(k)) + ":" + dumps(v) for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def record(command: str, params: dict, result: dict, seed: int | None = None) -> dict:
    rec = {"command": command, "params": params, "result": result}
    if seed is not None:
        rec["seed"] = seed
    return rec


def flatten(rec: dict, prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, v in sorted(rec.items()):
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = dumps(list(v))
        else:
            out[key] = v
    return out


def _cell(v: Any) -> str:
    if isinstance(v, str):
        return v
    return dumps(v)


def to_csv(records: Iterable[dict]) -> str:
    rows = [flatten(r) for r in records]
    if not rows:
        return ""
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(_cell(row[k]) if k in row else "" for k in header)
    return buf.getvalue()


def to_jsonl(records: Iterable[dict]) -> str:
    return "".join(dumps(r) + "\n" for r in records)
