"""Residual reports and their JSON/CSV serialization.

Files written from a report contain no timings, so two runs with the same
configuration and seed produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

CSV_HEADER = ("check", "equation", "residual", "tolerance", "pass")


@dataclass(frozen=True)
class ResidualRow:
    check: str
    equation: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tolerance)


@dataclass
class ResidualReport:
    rows: list[ResidualRow] = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    windows: dict = field(default_factory=dict)
    seconds: dict = field(default_factory=dict)

    def add(self, check, equation, residual, tolerance):
        self.rows.append(ResidualRow(check, equation, float(residual), float(tolerance)))

    def extend(self, other: "ResidualReport"):
        self.rows.extend(other.rows)
        self.parameters.update(other.parameters)
        self.windows.update(other.windows)
        self.seconds.update(other.seconds)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[ResidualRow]:
        return [r for r in self.rows if not r.passed]

    def to_dict(self) -> dict:
        return {
            "parameters": jsonable(self.parameters),
            "windows": jsonable(self.windows),
            "passed": self.passed,
            "rows": [
                {
                    "check": r.check,
                    "equation": r.equation,
                    "residual": _finite_or_text(r.residual),
                    "tolerance": r.tolerance,
                    "pass": r.passed,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow([r.check, r.equation, repr(float(r.residual)), repr(float(r.tolerance)), str(r.passed).lower()])
        return buf.getvalue()


def rel_residual(diff, ref) -> float:
    """``||diff|| / ||ref||``, or ``||diff||`` when the reference is zero."""
    scale = np.linalg.norm(ref)
    return float(np.linalg.norm(diff) / scale) if scale > 0 else float(np.linalg.norm(diff))


def _finite_or_text(x: float):
    return x if np.isfinite(x) else str(x)


def jsonable(obj):
    """Convert numpy arrays, complex numbers and tuples to plain JSON values.

    Complex numbers become ``[re, im]`` pairs.
    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"
