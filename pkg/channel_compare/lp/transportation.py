"""Transportation simplex (north-west corner start, MODI pricing, Bland's rule)."""

from collections import deque
from itertools import combinations
from typing import Any, Dict, List, Optional, Set, Tuple

import numpy as np
from pydantic import field_validator, model_validator

from ..core.exceptions import DimensionError, IllConditionedError, InvalidDistributionError
from ..core.models import FrozenModel, ProbVector
from ..utils.logger import get_logger

logger = get_logger(__name__)

REDUCED_COST_TOLERANCE = 1e-12
MASS_TOLERANCE = 1e-9

Cell = Tuple[int, int]


class TransportationProblem(FrozenModel):
    """Minimize <cost, Q> over couplings Q of two marginals."""

    row_marginal: ProbVector
    col_marginal: ProbVector
    cost: np.ndarray

    @field_validator("cost", mode="before")
    @classmethod
    def _coerce_cost(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=float)
        if array.ndim != 2 or not np.all(np.isfinite(array)):
            raise ValueError("cost must be a finite two-dimensional matrix")
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_shape(self) -> "TransportationProblem":
        expected = (self.row_marginal.alphabet.size, self.col_marginal.alphabet.size)
        if self.cost.shape != expected:
            raise DimensionError(f"cost has shape {self.cost.shape}, expected {expected}")
        return self


class TransportationSolution(FrozenModel):
    plan: np.ndarray
    cost: float


def _northwest_corner(row: np.ndarray, col: np.ndarray) -> Tuple[np.ndarray, List[Cell]]:
    m, n = row.size, col.size
    plan = np.zeros((m, n))
    remaining_row, remaining_col = row.copy(), col.copy()
    basis: List[Cell] = []
    i = j = 0
    while True:
        amount = min(remaining_row[i], remaining_col[j])
        if i == m - 1 and j == n - 1:
            # absorb round-off in the last cell
            amount = max(remaining_row[i], remaining_col[j], 0.0)
        plan[i, j] = max(amount, 0.0)
        remaining_row[i] -= amount
        remaining_col[j] -= amount
        basis.append((i, j))
        if i == m - 1 and j == n - 1:
            break
        if i == m - 1:
            j += 1
        elif j == n - 1 or remaining_row[i] <= remaining_col[j]:
            i += 1
        else:
            j += 1
    return plan, basis


def _potentials(basis: List[Cell], cost: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    m, n = cost.shape
    u = np.full(m, np.nan)
    v = np.full(n, np.nan)
    u[0] = 0.0
    by_row: Dict[int, List[int]] = {}
    by_col: Dict[int, List[int]] = {}
    for i, j in basis:
        by_row.setdefault(i, []).append(j)
        by_col.setdefault(j, []).append(i)
    queue = deque([("r", 0)])
    while queue:
        kind, index = queue.popleft()
        if kind == "r":
            for j in by_row.get(index, []):
                if np.isnan(v[j]):
                    v[j] = cost[index, j] - u[index]
                    queue.append(("c", j))
        else:
            for i in by_col.get(index, []):
                if np.isnan(u[i]):
                    u[i] = cost[i, index] - v[index]
                    queue.append(("r", i))
    return u, v


def _tree_path(basis: Set[Cell], start_col: int, end_row: int) -> List[Cell]:
    """Basis cells on the tree path from column node ``start_col`` to row node ``end_row``."""
    parent: Dict[Tuple[str, int], Tuple[Tuple[str, int], Cell]] = {}
    start = ("c", start_col)
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == ("r", end_row):
            break
        kind, index = node
        for i, j in basis:
            if kind == "c" and j == index:
                neighbour = ("r", i)
            elif kind == "r" and i == index:
                neighbour = ("c", j)
            else:
                continue
            if neighbour not in seen:
                seen.add(neighbour)
                parent[neighbour] = (node, (i, j))
                queue.append(neighbour)
    path: List[Cell] = []
    node = ("r", end_row)
    while node != start:
        node, cell = parent[node]
        path.append(cell)
    path.reverse()
    return path


def transportation_vertex(
    row: np.ndarray, col: np.ndarray, cost: np.ndarray, max_iterations: Optional[int] = None
) -> np.ndarray:
    """Optimal vertex of the transportation polytope with marginals ``row`` and ``col``.

    The marginals need only share their total mass; zero rows and columns are
    dropped before pivoting and restored as zeros.
    """
    row = np.asarray(row, dtype=float)
    col = np.asarray(col, dtype=float)
    cost = np.asarray(cost, dtype=float)
    if abs(row.sum() - col.sum()) > MASS_TOLERANCE:
        raise InvalidDistributionError(f"marginal totals differ: {row.sum()!r} vs {col.sum()!r}")

    plan = np.zeros((row.size, col.size))
    rows = np.nonzero(row > 0)[0]
    cols = np.nonzero(col > 0)[0]
    if not rows.size or not cols.size:
        return plan

    sub_cost = cost[np.ix_(rows, cols)]
    sub_plan, basis_list = _northwest_corner(row[rows], col[cols])
    m, n = sub_cost.shape
    basis = set(basis_list)
    limit = max_iterations if max_iterations is not None else 100 * (m + n) * m * n + 100

    for iteration in range(limit):
        u, v = _potentials(sorted(basis), sub_cost)
        reduced = sub_cost - u[:, None] - v[None, :]
        entering: Optional[Cell] = None
        for i in range(m):
            for j in range(n):
                if (i, j) not in basis and reduced[i, j] < -REDUCED_COST_TOLERANCE:
                    entering = (i, j)
                    break
            if entering is not None:
                break
        if entering is None:
            break

        path = _tree_path(basis, entering[1], entering[0])
        minus = path[0::2]
        plus = path[1::2]
        theta = min(sub_plan[cell] for cell in minus)
        leaving = min(
            (cell for cell in minus if sub_plan[cell] <= theta + REDUCED_COST_TOLERANCE),
            key=lambda cell: cell[0] * n + cell[1],
        )
        sub_plan[entering] += theta
        for cell in plus:
            sub_plan[cell] += theta
        for cell in minus:
            sub_plan[cell] -= theta
        sub_plan[leaving] = 0.0
        basis.remove(leaving)
        basis.add(entering)
    else:
        raise IllConditionedError(f"transportation simplex did not terminate in {limit} iterations")

    plan[np.ix_(rows, cols)] = np.clip(sub_plan, 0.0, None)
    return plan


def solve_transportation(problem: TransportationProblem) -> TransportationSolution:
    """Minimal-cost vertex coupling of the two marginals."""
    plan = transportation_vertex(problem.row_marginal.mass, problem.col_marginal.mass, problem.cost)
    return TransportationSolution(plan=plan, cost=float(np.sum(plan * problem.cost)))


def transportation_vertices(row: np.ndarray, col: np.ndarray, tolerance: float = 1e-12) -> np.ndarray:
    """All vertices of the transportation polytope, by basic-solution enumeration.

    Returns an array of shape [k, len(row), len(col)].
    """
    row = np.asarray(row, dtype=float)
    col = np.asarray(col, dtype=float)
    rows = np.nonzero(row > 0)[0]
    cols = np.nonzero(col > 0)[0]
    m, n = rows.size, cols.size
    if m == 0 or n == 0:
        return np.zeros((1, row.size, col.size))

    cells = [(i, j) for i in range(m) for j in range(n)]
    constraints = np.zeros((m + n, m * n))
    for k, (i, j) in enumerate(cells):
        constraints[i, k] = 1.0
        constraints[m + j, k] = 1.0
    target = np.concatenate([row[rows], col[cols]])

    found: Dict[bytes, np.ndarray] = {}
    for chosen in combinations(range(m * n), m + n - 1):
        columns = constraints[:, chosen]
        if np.linalg.matrix_rank(columns) < m + n - 1:
            continue
        values, *_ = np.linalg.lstsq(columns, target, rcond=None)
        if np.any(values < -tolerance) or np.max(np.abs(columns @ values - target)) > 1e-10:
            continue
        sub_plan = np.zeros(m * n)
        sub_plan[list(chosen)] = np.clip(values, 0.0, None)
        key = np.round(sub_plan, 12).tobytes()
        if key not in found:
            vertex = np.zeros((row.size, col.size))
            vertex[np.ix_(rows, cols)] = sub_plan.reshape(m, n)
            found[key] = vertex
    logger.debug(f"enumerated {len(found)} vertices of a {m}x{n} transportation polytope")
    return np.array(list(found.values()))
