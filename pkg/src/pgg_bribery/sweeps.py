"""Parameter sweeps and regime grids over the pool and punishment multipliers.

Grid points are independent, so evaluation order never matters and the
results are deterministic.  A point that lands on a classification knife
edge is carried in the output as a report instead of aborting the sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .analysis import KnifeEdgeError, Regime, RegimeKind, classify_regime
from .dynamics import basin_of_cooperation
from .games import BriberyParams, Model

__all__ = [
    "SweepPoint",
    "SweepResult",
    "GridCell",
    "RegimeGrid",
    "SWEEP_DEFAULTS",
    "with_parameter",
    "sweep_root",
    "regime_grid",
]

# default sweep windows, recorded in emitted metadata
SWEEP_DEFAULTS = {"f": (1.05, 8.0), "r_p": (0.1, 6.0)}
DEFAULT_STEPS = 200


@dataclass(frozen=True)
class SweepPoint:
    value: float
    regime: Regime | None
    x_star: float | None
    basin: float | None
    note: str = ""


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    points: tuple[SweepPoint, ...]

    def bistable_points(self) -> list[SweepPoint]:
        return [
            pt
            for pt in self.points
            if pt.regime is not None and pt.regime.kind is RegimeKind.BISTABLE
        ]


@dataclass(frozen=True)
class GridCell:
    f: float
    r_p: float
    regime: Regime | None
    basin: float | None
    note: str = ""


@dataclass(frozen=True)
class RegimeGrid:
    f_values: tuple[float, ...]
    rp_values: tuple[float, ...]
    cells: tuple[tuple[GridCell, ...], ...]  # indexed [f][r_p]


def with_parameter(model: Model, name: str, value: float) -> Model:
    """Copy of the model with the swept parameter replaced."""
    if name not in ("f", "r_p"):
        raise ValueError(f"swept parameter must be 'f' or 'r_p', got {name!r}")
    if isinstance(model, BriberyParams):
        return replace(model, core=replace(model.core, **{name: value}))
    return replace(model, **{name: value})


def _evaluate(model: Model) -> tuple[Regime | None, float | None, float | None, str]:
    try:
        regime = classify_regime(model)
    except KnifeEdgeError as err:
        return None, None, None, str(err)
    if regime.kind is RegimeKind.BISTABLE:
        return regime, regime.x_star, 1.0 - regime.x_star, ""
    return regime, None, basin_of_cooperation(model), ""


def _axis(lo: float, hi: float, steps: int, name: str) -> np.ndarray:
    if not lo < hi:
        raise ValueError(f"{name} bounds must satisfy lo < hi, got [{lo}, {hi}]")
    if steps < 2:
        raise ValueError(f"{name} needs at least 2 steps, got {steps}")
    return np.linspace(lo, hi, steps)


def sweep_root(
    model: Model, parameter: str, lo: float, hi: float, steps: int = DEFAULT_STEPS
) -> SweepResult:
    """Classify the model and locate x* along a 1-D parameter grid."""
    values = _axis(lo, hi, steps, parameter)
    with_parameter(model, parameter, float(values[0]))  # validates the range start
    points = []
    for value in values:
        regime, x_star, basin, note = _evaluate(with_parameter(model, parameter, float(value)))
        points.append(SweepPoint(float(value), regime, x_star, basin, note))
    return SweepResult(parameter, tuple(points))


def regime_grid(
    model: Model,
    f_lo: float,
    f_hi: float,
    rp_lo: float,
    rp_hi: float,
    f_steps: int = DEFAULT_STEPS,
    rp_steps: int = DEFAULT_STEPS,
) -> RegimeGrid:
    """Basin of full cooperation over an (f, r_p) grid."""
    f_values = _axis(f_lo, f_hi, f_steps, "f")
    rp_values = _axis(rp_lo, rp_hi, rp_steps, "r_p")
    rows = []
    for f in f_values:
        swept_f = with_parameter(model, "f", float(f))
        row = []
        for rp in rp_values:
            regime, _, basin, note = _evaluate(with_parameter(swept_f, "r_p", float(rp)))
            row.append(GridCell(float(f), float(rp), regime, basin, note))
        rows.append(tuple(row))
    return RegimeGrid(tuple(map(float, f_values)), tuple(map(float, rp_values)), tuple(rows))
