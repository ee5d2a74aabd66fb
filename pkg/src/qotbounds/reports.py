"""Structured bound reports and their JSON/CSV emission."""

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import numpy as np

from . import __version__


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [_plain(float(np.real(x))), _plain(float(np.imag(x)))]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class BoundReport:
    """One computed bound, optionally paired with a measured quantity.

    ``values`` maps names to numbers; ``vacuous`` is set when a probability
    bound is at least 1 or a time/depth bound has no content.
    """

    bound_id: str
    equation: str
    inputs: Dict[str, Any]
    values: Dict[str, Any]
    log_base: str = "n/a"
    passed: Optional[bool] = None
    vacuous: bool = False
    notes: List[str] = field(default_factory=list)
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def to_dict(self, with_timestamp: bool = True) -> dict:
        d = {
            "bound_id": self.bound_id,
            "equation": self.equation,
            "inputs": _plain(self.inputs),
            "values": _plain(self.values),
            "log_base": self.log_base,
            "passed": self.passed,
            "vacuous": bool(self.vacuous),
            "notes": list(self.notes),
            "version": self.version,
        }
        if with_timestamp:
            d["timestamp"] = self.timestamp
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def digest(self) -> str:
        """Hash of the report without its timestamp."""
        body = json.dumps(self.to_dict(with_timestamp=False), sort_keys=True)
        return hashlib.sha256(body.encode()).hexdigest()


def rows_to_csv(rows: List[Dict[str, Any]]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _plain(v) for k, v in r.items()})
    return buf.getvalue()


def report_to_csv(report: BoundReport) -> str:
    rows = [{"key": k, "value": json.dumps(_plain(v))} for k, v in report.values.items()]
    return rows_to_csv(rows)
