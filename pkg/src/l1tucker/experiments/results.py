"""Aggregated experiment results and their CSV emission."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

CSV_HEADER = "solver,param_name,param_value,metric,stderr,trials"


@dataclass(frozen=True)
class ResultRow:
    solver: str
    param_name: str
    param_value: float
    metric: float
    stderr: float
    trials: int


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)
    # (solver, param_value) -> number of trials whose solve raised
    failures: dict[tuple[str, float], int] = field(default_factory=dict)

    def sorted_rows(self) -> list[ResultRow]:
        return sorted(self.rows, key=lambda r: (r.solver, r.param_value))

    def row(self, solver: str, param_value: float) -> ResultRow:
        for r in self.rows:
            if r.solver == solver and r.param_value == param_value:
                return r
        raise KeyError((solver, param_value))


def aggregate(values: Sequence[float]) -> tuple[float, float]:
    """Mean and standard error of per-trial values (order-invariant)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot aggregate zero trials")
    mean = float(arr.mean())
    if arr.size == 1:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / np.sqrt(arr.size))


def _fmt(value: float) -> str:
    return repr(float(value))


def emit_results(table: ResultTable, path, comments: Sequence[str] = ()) -> None:
    """Write the table as CSV: ``#`` comment lines, header, then sorted rows.

    Row order (solver name, then parameter value ascending) and full-precision
    ``repr`` float formatting make re-emission byte-identical.
    """
    lines = [f"# {c}" for c in comments]
    lines.append(CSV_HEADER)
    for r in table.sorted_rows():
        lines.append(
            f"{r.solver},{r.param_name},{_fmt(r.param_value)},"
            f"{_fmt(r.metric)},{_fmt(r.stderr)},{r.trials}"
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
