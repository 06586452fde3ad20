"""Phase-one simplex for equality systems Ax = b, x >= 0, with Farkas certificates."""

from enum import Enum
from typing import Any, Optional, Sequence, Tuple

import numpy as np
from pydantic import field_validator, model_validator

from ..core.exceptions import IllConditionedError
from ..core.models import FrozenModel
from ..utils.logger import get_logger

logger = get_logger(__name__)

FEASIBILITY_TOLERANCE = 1e-8
MARGINAL_TOLERANCE = 1e-10
NONNEGATIVITY_TOLERANCE = 1e-10
PIVOT_TOLERANCE = 1e-12


class FeasibilityStatus(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


class FeasibilityProblem(FrozenModel):
    """Equality system with implied nonnegativity of every variable."""

    coefficients: np.ndarray
    rhs: np.ndarray

    @field_validator("coefficients", "rhs", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=float)
        if not np.all(np.isfinite(array)):
            raise ValueError("coefficients and right-hand sides must be finite")
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_shapes(self) -> "FeasibilityProblem":
        if self.coefficients.ndim != 2:
            raise ValueError("coefficient matrix must be two-dimensional")
        if self.rhs.shape != (self.coefficients.shape[0],):
            raise ValueError(
                f"{self.rhs.size} right-hand sides for {self.coefficients.shape[0]} equalities"
            )
        return self

    @classmethod
    def from_equalities(
        cls, n_variables: int, equalities: Sequence[Tuple[Sequence[float], float]]
    ) -> "FeasibilityProblem":
        rows = [list(row) for row, _ in equalities]
        for row in rows:
            if len(row) != n_variables:
                raise ValueError(f"coefficient row of length {len(row)}, expected {n_variables}")
        coefficients = np.array(rows, dtype=float).reshape(len(rows), n_variables)
        return cls(coefficients=coefficients, rhs=[rhs for _, rhs in equalities])

    @property
    def n_variables(self) -> int:
        return self.coefficients.shape[1]

    @property
    def n_equalities(self) -> int:
        return self.coefficients.shape[0]

    def with_equality(self, row: Sequence[float], rhs: float) -> "FeasibilityProblem":
        return FeasibilityProblem(
            coefficients=np.vstack([self.coefficients, np.asarray(row, dtype=float)[None, :]]),
            rhs=np.append(self.rhs, rhs),
        )


class FeasibilityOutcome(FrozenModel):
    """Verdict of the phase-one simplex; exactly one of witness / certificate is set."""

    status: FeasibilityStatus
    witness: Optional[np.ndarray] = None
    certificate: Optional[np.ndarray] = None
    residual: float = 0.0
    pivots: int = 0
    marginal: bool = False

    @property
    def feasible(self) -> bool:
        return self.status is FeasibilityStatus.FEASIBLE


def witness_holds(problem: FeasibilityProblem, x: np.ndarray) -> bool:
    """True if x >= 0 (within 1e-10) and Ax = b within 1e-8."""
    if x.shape != (problem.n_variables,) or np.any(x < -NONNEGATIVITY_TOLERANCE):
        return False
    error = problem.coefficients @ x - problem.rhs
    return bool(np.max(np.abs(error), initial=0.0) <= FEASIBILITY_TOLERANCE)


def certificate_holds(problem: FeasibilityProblem, y: np.ndarray) -> bool:
    """True if y^T A <= 0 (within 1e-8) and y^T b > 0."""
    if y.shape != (problem.n_equalities,):
        return False
    reduced = y @ problem.coefficients
    return bool(np.all(reduced <= FEASIBILITY_TOLERANCE) and y @ problem.rhs > 0)


def outcome_holds(problem: FeasibilityProblem, outcome: FeasibilityOutcome) -> bool:
    """Re-check an outcome against the raw problem."""
    if outcome.feasible:
        return outcome.certificate is None and outcome.witness is not None and witness_holds(
            problem, outcome.witness
        )
    return outcome.witness is None and outcome.certificate is not None and certificate_holds(
        problem, outcome.certificate
    )


class _Tableau:
    """Dense phase-one tableau [A | I | b] with the artificial-sum objective in the last row."""

    def __init__(self, coefficients: np.ndarray, rhs: np.ndarray):
        m, n = coefficients.shape
        self.m, self.n = m, n
        self.table = np.zeros((m + 1, n + m + 1))
        self.table[:m, :n] = coefficients
        self.table[:m, n : n + m] = np.eye(m)
        self.table[:m, -1] = rhs
        self.table[m, :n] = -coefficients.sum(axis=0)
        self.table[m, -1] = -rhs.sum()
        self.basis = list(range(n, n + m))

    def entering(self) -> Optional[int]:
        candidates = np.nonzero(self.table[self.m, :-1] < -PIVOT_TOLERANCE)[0]
        return int(candidates[0]) if candidates.size else None

    def leaving(self, column: int) -> Optional[int]:
        entries = self.table[: self.m, column]
        rows = np.nonzero(entries > PIVOT_TOLERANCE)[0]
        if not rows.size:
            return None
        ratios = self.table[rows, -1] / entries[rows]
        best = ratios.min()
        tied = rows[ratios <= best + PIVOT_TOLERANCE]
        return int(min(tied, key=lambda r: self.basis[r]))

    def pivot(self, row: int, column: int) -> None:
        self.table[row] /= self.table[row, column]
        factors = self.table[:, column].copy()
        factors[row] = 0.0
        self.table -= np.outer(factors, self.table[row])
        self.basis[row] = column

    @property
    def objective(self) -> float:
        return float(-self.table[self.m, -1])


def solve_feasibility(problem: FeasibilityProblem, max_pivots: Optional[int] = None) -> FeasibilityOutcome:
    """Decide feasibility of Ax = b, x >= 0 with Bland's rule.

    Returns a verified witness when feasible, otherwise a verified Farkas
    certificate y with y^T A <= 0 and y^T b > 0.

    Raises:
        IllConditionedError: the pivot guard tripped or the verdict failed its re-check.
    """
    m, n = problem.coefficients.shape
    if m == 0:
        return FeasibilityOutcome(status=FeasibilityStatus.FEASIBLE, witness=np.zeros(n))

    signs = np.where(problem.rhs < 0, -1.0, 1.0)
    tableau = _Tableau(problem.coefficients * signs[:, None], problem.rhs * signs)
    limit = max_pivots if max_pivots is not None else 50 * (m + n) + 1000

    pivots = 0
    while True:
        column = tableau.entering()
        if column is None:
            break
        row = tableau.leaving(column)
        if row is None:
            # phase one is bounded below by zero
            raise IllConditionedError(f"unbounded phase-one ray at column {column}")
        tableau.pivot(row, column)
        pivots += 1
        if pivots > limit:
            raise IllConditionedError(f"no verdict after {limit} pivots")

    residual = max(tableau.objective, 0.0)
    logger.debug(f"phase one finished: {m}x{n} system, {pivots} pivots, residual {residual:.3e}")

    if residual <= FEASIBILITY_TOLERANCE:
        x = np.zeros(n + m)
        x[tableau.basis] = tableau.table[:m, -1]
        witness = np.clip(x[:n], 0.0, None)
        if not witness_holds(problem, witness):
            raise IllConditionedError(f"feasible verdict with residual {residual:.3e} failed re-check")
        return FeasibilityOutcome(
            status=FeasibilityStatus.FEASIBLE,
            witness=witness,
            residual=residual,
            pivots=pivots,
            marginal=residual > MARGINAL_TOLERANCE,
        )

    duals = 1.0 - tableau.table[m, n : n + m]
    certificate = signs * duals
    if not certificate_holds(problem, certificate):
        raise IllConditionedError(f"infeasibility certificate with residual {residual:.3e} failed re-check")
    return FeasibilityOutcome(
        status=FeasibilityStatus.INFEASIBLE,
        certificate=certificate,
        residual=residual,
        pivots=pivots,
    )
