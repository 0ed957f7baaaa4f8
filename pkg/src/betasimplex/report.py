"""Run reports: what the CLI prints, writes as JSON, or writes as CSV."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

# fixed column order of --format csv
CSV_COLUMNS = ("name", "value", "error", "target", "tolerance", "passed", "note")


@dataclass
class ResultRow:
    name: str
    value: Optional[float] = None
    error: Optional[float] = None  # quadrature error estimate or Monte Carlo SE
    target: Optional[float] = None
    tolerance: Optional[float] = None
    passed: Optional[bool] = None
    note: str = ""
    seconds: Optional[float] = None  # wall clock; only serialised with timings on


@dataclass
class RunReport:
    command: str
    parameters: dict[str, Any]
    results: list[ResultRow] = field(default_factory=list)
    seed: Optional[int] = None
    duration_s: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(r.passed is not False for r in self.results)

    @property
    def failures(self) -> list[ResultRow]:
        return [r for r in self.results if r.passed is False]

    def without_timings(self) -> "RunReport":
        rows = [ResultRow(**{**asdict(r), "seconds": None}) for r in self.results]
        return RunReport(self.command, dict(self.parameters), rows, self.seed, None)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "passed": self.passed,
            "results": [],
        }
        for r in self.results:
            row = asdict(r)
            if row["seconds"] is None:
                del row["seconds"]
            out["results"].append(row)
        if self.duration_s is not None:
            out["duration_s"] = self.duration_s
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        rows = [ResultRow(**r) for r in data["results"]]
        return cls(data["command"], data["parameters"], rows, data.get("seed"),
                   data.get("duration_s"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.results:
            writer.writerow([_cell(getattr(r, c)) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"$ {self.command}"]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        width = max([len(r.name) for r in self.results] + [4])
        for r in self.results:
            status = {True: "PASS", False: "FAIL", None: "    "}[r.passed]
            parts = [f"{status}  {r.name:<{width}}"]
            if r.value is not None:
                parts.append(f"{_fmt(r.value)}")
            if r.error is not None:
                parts.append(f"+/- {r.error:.3g}")
            if r.target is not None:
                parts.append(f"target {_fmt(r.target)}")
            if r.tolerance is not None:
                parts.append(f"tol {r.tolerance:.3g}")
            if r.seconds is not None:
                parts.append(f"[{r.seconds:.2f} s]")
            if r.note:
                parts.append(f"({r.note})")
            lines.append("  ".join(parts))
        checked = [r for r in self.results if r.passed is not None]
        if checked:
            n_fail = len(self.failures)
            lines.append(f"{len(checked) - n_fail}/{len(checked)} checks passed")
        if self.duration_s is not None:
            lines.append(f"duration: {self.duration_s:.2f} s")
        return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isfinite(x) and x == int(x) and abs(x) < 1e15:
        return f"{x:.1f}"
    return f"{x:.12g}"
