"""Unique information over a parameter grid of one of the AND families, written as CSV."""

import csv
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Iterable, List, Optional, TextIO, Tuple

from ..core.exceptions import ScenarioDomainError
from ..core.models import FrozenModel, Observer
from ..decomposition.unique_information import unique_information
from ..scenarios.families import GRID_A_RANGE, GRID_B_RANGE
from ..scenarios.registry import FAMILIES
from ..utils.logger import get_logger

logger = get_logger(__name__)

COLUMNS = (
    "a",
    "b",
    "ui_x1_minus_x2",
    "ui_x2_minus_x1",
    "gap_x1",
    "gap_x2",
    "converged_x1",
    "converged_x2",
)

FAMILY_RANGES = {
    "and-grid": (GRID_A_RANGE, GRID_B_RANGE),
    "and-det": ((Fraction(0), Fraction(1)), (Fraction(0), Fraction(1))),
}

Job = Tuple[str, Fraction, Fraction, float, int, str]


class HeatmapCell(FrozenModel):
    a: Fraction
    b: Fraction
    ui_x1: float
    ui_x2: float
    gap_x1: float
    gap_x2: float
    converged_x1: bool
    converged_x2: bool

    def row(self) -> List[str]:
        return [
            repr(float(self.a)),
            repr(float(self.b)),
            repr(self.ui_x1),
            repr(self.ui_x2),
            repr(self.gap_x1),
            repr(self.gap_x2),
            str(self.converged_x1).lower(),
            str(self.converged_x2).lower(),
        ]


def axis_values(bounds: Tuple[Fraction, Fraction], resolution: int) -> List[Fraction]:
    """``resolution`` equally spaced exact points from the lower to the upper bound."""
    if resolution < 2:
        raise ValueError("heatmap resolution must be at least 2")
    low, high = bounds
    step = (high - low) / (resolution - 1)
    return [low + i * step for i in range(resolution)]


def grid_points(family: str, resolution: int) -> List[Tuple[Fraction, Fraction]]:
    """Row-major (a outer, b inner) grid points of ``family``, all of them, valid or not."""
    if family not in FAMILY_RANGES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILY_RANGES)}")
    a_bounds, b_bounds = FAMILY_RANGES[family]
    return [(a, b) for a in axis_values(a_bounds, resolution) for b in axis_values(b_bounds, resolution)]


def evaluate_cell(job: Job) -> Optional[HeatmapCell]:
    """UI in both directions at one grid point; None when the point is outside the family's domain."""
    family, a, b, tolerance, max_iterations, method = job
    try:
        bundle = FAMILIES[family](a, b)
    except ScenarioDomainError as e:
        logger.debug(f"skipping ({a}, {b}): {e}")
        return None
    joint = bundle.joint
    forward = unique_information(joint, Observer.X1, tolerance, max_iterations, method)
    backward = unique_information(joint, Observer.X2, tolerance, max_iterations, method)
    return HeatmapCell(
        a=a,
        b=b,
        ui_x1=forward.value,
        ui_x2=backward.value,
        gap_x1=forward.duality_gap,
        gap_x2=backward.duality_gap,
        converged_x1=forward.converged,
        converged_x2=backward.converged,
    )


def compute_heatmap(
    family: str,
    resolution: int,
    tolerance: float = 1e-5,
    max_iterations: int = 10000,
    method: str = "pairwise",
    workers: int = 1,
) -> List[HeatmapCell]:
    """Evaluate every valid grid point; the result keeps row-major order regardless of ``workers``."""
    if workers < 1:
        raise ValueError("workers must be at least 1")
    jobs: List[Job] = [(family, a, b, tolerance, max_iterations, method) for a, b in grid_points(family, resolution)]
    logger.info(f"heatmap {family}: {len(jobs)} grid points, {workers} worker(s)")

    results: Iterable[Optional[HeatmapCell]]
    if workers == 1:
        results = [evaluate_cell(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate_cell, jobs))

    cells = [cell for cell in results if cell is not None]
    stalled = sum(1 for cell in cells if not (cell.converged_x1 and cell.converged_x2))
    if stalled:
        logger.warning(f"{stalled} heatmap cell(s) did not reach tolerance {tolerance:g}")
    return cells


def write_heatmap_csv(cells: List[HeatmapCell], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COLUMNS)
    for cell in cells:
        writer.writerow(cell.row())
