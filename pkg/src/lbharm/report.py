"""Inequality reports and their canonical JSON/CSV serialization.

Every verified inequality produces one report carrying both sides, the two
constant variants ('paper' = the literal closed form, 'oracle' = the
quadrature re-derived value), the ratios, a strictness flag and grid
metadata.  Serialization is deterministic: keys sorted, floats rendered by
repr, no timestamps inside the data section.  ``runtime_ms`` lives next to
the data and is excluded from determinism comparisons.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


@dataclass
class InequalityReport:
    """One verified inequality.

    ``ratio_* = lhs / rhs_*``.  For upper bounds, ``strict`` means the ratio
    stays below 1 by more than the grid error estimate (checked against the
    more demanding of the two right-hand sides when they differ).  For lower
    bounds (``direction="lower"``), ``strict`` means the ratio exceeds the
    grid error estimate.
    """

    name: str
    lhs: float
    rhs_paper: float
    rhs_oracle: float | None = None
    params: dict = field(default_factory=dict)
    grid_error_estimate: float = 0.0
    grid: dict = field(default_factory=dict)
    direction: str = "upper"
    runtime_ms: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ratio_paper(self) -> float:
        return self.lhs / self.rhs_paper

    @property
    def ratio_oracle(self) -> float | None:
        if self.rhs_oracle is None:
            return None
        return self.lhs / self.rhs_oracle

    @property
    def strict(self) -> bool:
        ratios = [self.ratio_paper]
        if self.rhs_oracle is not None:
            ratios.append(self.ratio_oracle)
        if self.direction == "upper":
            return max(ratios) < 1.0 - self.grid_error_estimate
        return min(ratios) > self.grid_error_estimate

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "params": _jsonable(self.params),
            "lhs": self.lhs,
            "rhs_paper": self.rhs_paper,
            "rhs_oracle": self.rhs_oracle,
            "ratio_paper": self.ratio_paper,
            "ratio_oracle": self.ratio_oracle,
            "strict": self.strict,
            "grid_error_estimate": self.grid_error_estimate,
            "grid": _jsonable(self.grid),
        }
        if self.extra:
            out["extra"] = _jsonable(self.extra)
        if self.runtime_ms is not None:
            out["runtime_ms"] = self.runtime_ms
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if hasattr(obj, "item"):  # numpy scalars
        return _jsonable(obj.item())
    return obj


class _ReprFloatEncoder(json.JSONEncoder):
    """JSON encoder rendering floats via repr (shortest round-trip form)."""

    def iterencode(self, o, _one_shot=False):
        return super().iterencode(_wrap(o), _one_shot)


class _R(float):
    def __repr__(self):
        return float.__repr__(float(self))


def _wrap(o):
    if isinstance(o, float):
        return _R(o)
    if isinstance(o, dict):
        return {k: _wrap(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_wrap(v) for v in o]
    return o


def reports_to_json(reports: list, config: dict | None = None) -> str:
    """Canonical JSON document for a list of reports.

    The resolved configuration is embedded for provenance; everything except
    ``runtime_ms`` fields is deterministic across identical runs.
    """
    doc = {"reports": [r.to_dict() if isinstance(r, InequalityReport) else r for r in reports]}
    if config is not None:
        doc["config"] = _jsonable(config)
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2, cls=_ReprFloatEncoder) + "\n"


_CSV_FIELDS = ["name", "lhs", "rhs_paper", "rhs_oracle", "ratio_paper",
               "ratio_oracle", "strict", "grid_error_estimate", "params",
               "runtime_ms"]


def reports_to_csv(reports: list) -> str:
    """Flattened one-row-per-report rendering; JSON stays canonical."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        d = r.to_dict() if isinstance(r, InequalityReport) else dict(r)
        row = {k: d.get(k) for k in _CSV_FIELDS}
        row["params"] = json.dumps(_jsonable(d.get("params", {})), sort_keys=True)
        writer.writerow(row)
    return buf.getvalue()


def strip_runtime(doc: dict) -> dict:
    """Copy of a report document with every runtime_ms removed (for
    determinism comparisons)."""
    out = json.loads(json.dumps(doc))
    for r in out.get("reports", []):
        r.pop("runtime_ms", None)
    return out
