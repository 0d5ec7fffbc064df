"""Sweep rows and their CSV/JSON serialisation.

Output is byte-deterministic for fixed inputs: numbers are written with 12
significant digits, '.' decimal separator and '\\n' line endings.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .rates import (
    VALIDITY_LIMIT,
    QuadratureError,
    avg_rate_coefficient_1p1_massless,
    decrease_rate,
    rate_coefficient,
    schwinger_exact_coefficient,
)
from .units import CONSTANTS

__all__ = [
    "COLUMNS",
    "SweepRow",
    "evaluate_row",
    "sweep_grid",
    "sweep_rows",
    "metadata",
    "format_csv",
    "format_json",
    "normalised_deltas",
]

COLUMNS = (
    "dim",
    "sqrtA",
    "A",
    "coeff_model",
    "coeff_exact",
    "delta_model",
    "delta_exact",
    "quad_error",
    "validity_flag",
)

OK = "ok"
BEYOND_VALIDITY = "beyond_model_validity"
QUADRATURE_FAILED = "quadrature_failed"


@dataclass(frozen=True)
class SweepRow:
    dim: int
    sqrtA: float
    A: float
    coeff_model: float
    coeff_exact: float
    delta_model: float
    delta_exact: float
    quad_error: float
    validity_flag: str

    @property
    def failed(self) -> bool:
        return self.validity_flag == QUADRATURE_FAILED


def evaluate_row(dim: int, sqrt_a: float, tol: float, A: float | None = None) -> SweepRow:
    """Model and exact rate figures at one field strength.

    In 1+1 the model coefficient is the averaged massless value reduced by
    the finite massless-minus-massive difference.  Pass ``A`` when it is the
    primary input so it is not rebuilt from a rounded square root.
    """
    if A is None:
        A = sqrt_a * sqrt_a
    exact = schwinger_exact_coefficient(dim, A)
    flag = OK if A <= VALIDITY_LIMIT else BEYOND_VALIDITY
    try:
        dec = decrease_rate(dim, A, tol)
        if dim == 1:
            coeff = avg_rate_coefficient_1p1_massless() * (1.0 - dec.delta_model)
            err = 0.0
        else:
            res = rate_coefficient(dim, A, tol)
            coeff = res.coefficient
            err = max(res.abs_error_estimate, dec.abs_error_estimate)
    except QuadratureError as exc:
        nan = float("nan")
        return SweepRow(dim, sqrt_a, A, nan, exact, nan, -math.expm1(-math.pi * A), exc.achieved_error, QUADRATURE_FAILED)
    return SweepRow(dim, sqrt_a, A, coeff, exact, dec.delta_model, dec.delta_exact, err, flag)


def sweep_grid(sqrt_a_min: float, sqrt_a_max: float, points: int, spacing: str = "log") -> list[float]:
    if not 0.0 < sqrt_a_min < sqrt_a_max:
        raise ValueError("need 0 < sqrtA-min < sqrtA-max")
    if points < 2:
        raise ValueError("need at least 2 points")
    if spacing == "log":
        grid = np.geomspace(sqrt_a_min, sqrt_a_max, points)
    elif spacing == "linear":
        grid = np.linspace(sqrt_a_min, sqrt_a_max, points)
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    return [float(x) for x in grid]


def _evaluate(args: tuple[int, float, float]) -> SweepRow:
    return evaluate_row(*args)


def sweep_rows(dims: Sequence[int], grid: Sequence[float], tol: float, jobs: int = 1) -> list[SweepRow]:
    """Rows ordered by ``(dim, sqrtA)`` whatever the execution order."""
    tasks = [(d, x, tol) for d in sorted(dims) for x in sorted(grid)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_evaluate, tasks))
    return [_evaluate(t) for t in tasks]


def normalised_deltas(rows: Iterable[SweepRow]) -> dict[int, list[tuple[float, float, float]]]:
    """Per dimension, ``(sqrtA, model, exact)`` divided by their values at the smallest sqrtA.

    Puts the model and exact decrease on a common scale for plotting.
    """
    by_dim: dict[int, list[SweepRow]] = {}
    for row in rows:
        by_dim.setdefault(row.dim, []).append(row)
    out = {}
    for dim, group in sorted(by_dim.items()):
        group.sort(key=lambda r: r.sqrtA)
        m0, e0 = group[0].delta_model, group[0].delta_exact
        if not (m0 > 0.0 and e0 > 0.0):
            raise ValueError(f"dim {dim}: cannot normalise at sqrtA={group[0].sqrtA}, delta is zero")
        out[dim] = [(r.sqrtA, r.delta_model / m0, r.delta_exact / e0) for r in group]
    return out


def metadata(tol: float, command: str, extra: dict | None = None) -> dict:
    meta = {
        "program": "weakpair",
        "version": __version__,
        "command": command,
        "tolerance": float(_round(tol)),
        "constants": dict(CONSTANTS),
        "columns": list(COLUMNS),
    }
    if extra:
        meta.update(extra)
    return meta


def _round(x: float) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return float(format(x, ".12g"))


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".12g")


def format_csv(rows: Iterable[SweepRow], meta: dict | None = None) -> str:
    lines = []
    if meta is not None:
        lines.append("# " + json.dumps(_rounded(meta), sort_keys=True, separators=(",", ":")))
    lines.append(",".join(COLUMNS))
    for row in rows:
        d = asdict(row)
        lines.append(",".join(_cell(d[c]) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def _rounded(obj):
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if isinstance(obj, float):
        return _round(obj)
    return obj


def format_json(rows: Iterable[SweepRow], meta: dict) -> str:
    payload = {"metadata": meta, "rows": [asdict(r) for r in rows]}
    return json.dumps(_rounded(payload), indent=2, sort_keys=False) + "\n"
