"""Reports with a JSON rendering and an aligned text rendering."""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .algebra import ValidationReport, Violation


def jsonable(obj, fld=None):
    """Convert library objects into plain JSON data (coefficients become strings)."""
    fmt = fld.format if fld is not None else str
    if isinstance(obj, ValidationReport):
        return {
            "name": obj.name,
            "verdict": "pass" if obj.verdict else "fail",
            "checked": obj.checked,
            "violations": [jsonable(v, fld) for v in obj.violations],
        }
    if isinstance(obj, Violation):
        return {
            "axiom": obj.axiom,
            "indices": list(obj.indices),
            "basis": [int(b) for b in obj.basis],
            "lhs": [fmt(v) for v in obj.lhs],
            "rhs": [fmt(v) for v in obj.rhs],
        }
    if isinstance(obj, dict):
        return {str(k): jsonable(v, fld) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v, fld) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v, fld) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return fmt(obj)
    if obj is None or isinstance(obj, (str, float)):
        return obj
    return str(obj)


class Report:
    def __init__(self, command: list, verdict: bool, body: dict, fld=None):
        self.command = list(command)
        self.verdict = bool(verdict)
        self.body = jsonable(body, fld)

    def as_dict(self) -> dict:
        return {"command": self.command, "verdict": "pass" if self.verdict else "fail", **self.body}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"command: {' '.join(self.command)}", f"verdict: {'pass' if self.verdict else 'fail'}"]
        for key in sorted(self.body):
            _render(key, self.body[key], 0, lines)
        return "\n".join(lines) + "\n"


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _is_table(v) -> bool:
    if not (isinstance(v, list) and v and all(isinstance(r, dict) for r in v)):
        return False
    keys = list(v[0])
    return all(list(r) == keys for r in v) and all(
        not isinstance(x, (dict, list)) or (isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x))
        for r in v for x in r.values()
    )


def _render(key, value, depth, lines):
    pad = "  " * depth
    if _is_table(value):
        cols = list(value[0])
        cells = [[_scalar(r[c]) for c in cols] for r in value]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append(f"{pad}{key}:")
        lines.append(pad + "  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for row in cells:
            lines.append(pad + "  " + "  ".join(x.ljust(w) for x, w in zip(row, widths)))
    elif isinstance(value, dict):
        lines.append(f"{pad}{key}:")
        for k in sorted(value):
            _render(k, value[k], depth + 1, lines)
    elif isinstance(value, list) and any(isinstance(x, (dict, list)) for x in value):
        lines.append(f"{pad}{key}:")
        for i, x in enumerate(value):
            _render(f"[{i}]", x, depth + 1, lines)
    else:
        lines.append(f"{pad}{key}: {_scalar(value)}")
