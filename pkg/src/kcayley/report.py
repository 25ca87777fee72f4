"""Machine-readable run reports.

A report carries the echoed inputs (with the seed for provenance), integer
invariants (each annotated with the methods used and their agreement),
residual diagnostics, a pass/fail status and the toolkit version.  JSON
serialization is deterministic: identical inputs give byte-identical output.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from . import __version__

__all__ = ["Report", "Invariant"]


def _clean(value):
    """Make values JSON-serializable with stable formatting."""
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


@dataclasses.dataclass
class Invariant:
    value: int
    methods: dict
    agree: bool

    def to_dict(self):
        return {"value": int(self.value),
                "methods": {k: int(v) for k, v in self.methods.items()},
                "agree": bool(self.agree)}


@dataclasses.dataclass
class Report:
    inputs: dict
    invariants: dict = dataclasses.field(default_factory=dict)
    residuals: dict = dataclasses.field(default_factory=dict)
    status: str = "pass"
    error: str | None = None

    def add_invariant(self, name: str, value: int, methods: dict | None = None):
        methods = methods or {"direct": value}
        agree = len(set(methods.values())) == 1
        self.invariants[name] = Invariant(value=value, methods=methods, agree=agree)
        if not agree:
            self.status = "fail"

    def add_residual(self, name: str, value: float):
        self.residuals[name] = float(value)

    def to_dict(self) -> dict:
        out = {
            "inputs": _clean(self.inputs),
            "invariants": {k: v.to_dict() for k, v in self.invariants.items()},
            "residuals": _clean(self.residuals),
            "status": self.status,
            "version": __version__,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"
