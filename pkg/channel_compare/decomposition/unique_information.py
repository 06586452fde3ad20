"""Unique information UI(S; X1 \\ X2) by conditional gradient over the marginal polytope.

The polytope of joints Q with Q(s, x1) = P(s, x1) and Q(s, x2) = P(s, x2) is a
product over s of transportation polytopes, so every linear subproblem splits
into one transportation problem per input symbol.
"""

from typing import List, Optional, Tuple

import numpy as np

from ..core.models import Alphabet, Channel, FrozenModel, JointDistribution, Observer
from ..core.probability import channel_from_joint, conditional_mutual_information_array
from ..lp.transportation import transportation_vertex
from ..orders.blackwell import test_garbling
from ..utils.logger import get_logger

logger = get_logger(__name__)

GRADIENT_FLOOR = 1e-12
LINE_SEARCH_RESOLUTION = 1e-12
ATOM_WEIGHT_FLOOR = 1e-10
OBJECTIVE_ROUNDOFF = 1e-14
METHODS = ("pairwise", "vanilla")


class MarginalPolytopePoint(FrozenModel):
    """Per-symbol couplings Q(x1, x2 | s) for every s with positive probability."""

    s: Alphabet
    x1: Alphabet
    x2: Alphabet
    weights: np.ndarray
    couplings: np.ndarray

    def coupling(self, label: str) -> np.ndarray:
        return self.couplings[self.s.index(label)]

    def to_joint(self) -> JointDistribution:
        mass = self.couplings * self.weights[:, None, None]
        return JointDistribution(s=self.s, x1=self.x1, x2=self.x2, mass=mass / mass.sum())


class UIResult(FrozenModel):
    value: float
    optimizer: MarginalPolytopePoint
    duality_gap: float
    iterations: int
    converged: bool
    direction: Observer = Observer.X1
    method: str = "pairwise"
    trace: Tuple[float, ...] = ()


class EquivalenceReport(FrozenModel):
    """UI and the garbling LP run side by side on the same pair of channels."""

    ui: UIResult
    witness: Optional[Channel] = None
    tolerance: float

    @property
    def ui_vanishes(self) -> bool:
        return self.ui.value <= self.tolerance

    @property
    def garbling_exists(self) -> bool:
        return self.witness is not None

    @property
    def agree(self) -> bool:
        return self.ui_vanishes == self.garbling_exists


def _gradient(q: np.ndarray) -> np.ndarray:
    """d I_Q(S;X1|X2) / dQ = log2 Q(s,x1,x2) - log2 Q(x1,x2), entries clamped at 1e-12."""
    q12 = q.sum(axis=0)
    return np.log2(np.maximum(q, GRADIENT_FLOOR)) - np.log2(np.maximum(q12, GRADIENT_FLOOR))[None]


def _slope(q: np.ndarray, direction: np.ndarray, step: float) -> float:
    point = np.clip(q + step * direction, 0.0, None)
    joint12 = np.broadcast_to(point.sum(axis=0), point.shape)
    positive = point > 0
    logs = np.zeros_like(point)
    logs[positive] = np.log2(point[positive]) - np.log2(joint12[positive])
    return float(np.sum(direction * logs))


def _line_search(q: np.ndarray, direction: np.ndarray, max_step: float = 1.0) -> float:
    """Exact line search on [0, max_step]; returns 0 when no step lowers the objective.

    A full step along a descent direction is taken even when the objective only
    moves within round-off, so that atoms can still be dropped.
    """

    def objective(step: float) -> float:
        return conditional_mutual_information_array(np.clip(q + step * direction, 0.0, None))

    # the slope is only trusted strictly inside the segment
    lo, hi = 0.0, max_step
    while hi - lo > LINE_SEARCH_RESOLUTION * max_step:
        mid = 0.5 * (lo + hi)
        if _slope(q, direction, mid) < 0:
            lo = mid
        else:
            hi = mid
    candidates = [0.5 * (lo + hi), max_step]

    start = objective(0.0)
    values = [objective(step) for step in candidates]
    best = int(np.argmin(values))
    if candidates[best] > 0 and values[best] < start:
        return candidates[best]
    if _slope(q, direction, 0.0) < 0 and values[1] <= start + OBJECTIVE_ROUNDOFF * max(1.0, abs(start)):
        return max_step
    return 0.0


def _prepare(j: JointDistribution, direction: Observer) -> Tuple[JointDistribution, np.ndarray]:
    oriented = j.swapped() if direction is Observer.X2 else j
    restricted = oriented.restricted_to_support()
    return restricted, np.array(restricted.mass)


def unique_information(
    j: JointDistribution,
    direction: Observer = Observer.X1,
    tolerance_bits: float = 1e-7,
    max_iterations: int = 10000,
    method: str = "pairwise",
) -> UIResult:
    """Minimize I_Q(S; X1 | X2) over joints sharing the (S, X1) and (S, X2) marginals of ``j``.

    ``direction`` X2 computes UI(S; X2 \\ X1). ``method`` selects pairwise
    Frank-Wolfe (away atoms per input symbol) or the classic variant. Returns the
    final iterate even when ``max_iterations`` is reached; ``converged`` tells
    whether the Frank-Wolfe gap fell below ``tolerance_bits``.
    """
    if tolerance_bits <= 0:
        raise ValueError("tolerance must be positive")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")

    oriented, p = _prepare(j, direction)
    rows = p.sum(axis=2)
    cols = p.sum(axis=1)
    n_s = p.shape[0]

    q = p.copy()
    atoms: List[List[np.ndarray]] = [[p[s].copy()] for s in range(n_s)]
    atom_weights: List[List[float]] = [[1.0] for _ in range(n_s)]

    trace = [conditional_mutual_information_array(q)]
    gap = float("inf")
    converged = False
    iteration = 0
    for iteration in range(max_iterations + 1):
        grad = _gradient(q)
        vertices = np.stack([transportation_vertex(rows[s], cols[s], grad[s]) for s in range(n_s)])
        gap = max(float(np.sum(grad * (q - vertices))), 0.0)
        if gap <= tolerance_bits:
            converged = True
            break
        if iteration == max_iterations:
            break

        away: Optional[List[Tuple[int, int, float]]] = None
        step = 0.0
        if method == "pairwise":
            direction_step, away = _pairwise_direction(grad, vertices, atoms, atom_weights)
            if away:
                step = _line_search(q, direction_step)
        if step <= 0:
            # plain Frank-Wolfe step, also the fallback when the pairwise step stalls
            direction_step, away = vertices - q, None
            step = _line_search(q, direction_step)
        if step <= 0:
            logger.warning(f"line search stalled at iteration {iteration} with gap {gap:.3e}")
            break

        if away is None:
            q = q + step * direction_step
            if method == "pairwise":
                for s in range(n_s):
                    atom_weights[s] = [w * (1.0 - step) for w in atom_weights[s]]
                    _add_atom(atoms[s], atom_weights[s], vertices[s], step)
                    atoms[s], atom_weights[s] = _prune(atoms[s], atom_weights[s])
                    q[s] = sum(w * a for a, w in zip(atoms[s], atom_weights[s]))
        else:
            for s, k, cap in away:
                moved = step * cap
                atom_weights[s][k] -= moved
                _add_atom(atoms[s], atom_weights[s], vertices[s], moved)
                atoms[s], atom_weights[s] = _prune(atoms[s], atom_weights[s])
                q[s] = sum(w * a for a, w in zip(atoms[s], atom_weights[s]))
        q = np.clip(q, 0.0, None)
        trace.append(conditional_mutual_information_array(q))
        if iteration % 500 == 0:
            logger.debug(f"iteration {iteration}: objective {trace[-1]:.10f}, gap {gap:.3e}")

    value = max(conditional_mutual_information_array(q), 0.0)
    if not converged:
        logger.warning(f"unique information not converged after {iteration} iterations (gap {gap:.3e})")
    else:
        logger.info(f"unique information {value:.9f} bits after {iteration} iterations")

    weights = p.sum(axis=(1, 2))
    couplings = q / weights[:, None, None]
    x1, x2 = oriented.x1, oriented.x2
    if direction is Observer.X2:
        couplings = couplings.transpose(0, 2, 1)
        x1, x2 = x2, x1
    optimizer = MarginalPolytopePoint(s=oriented.s, x1=x1, x2=x2, weights=weights, couplings=couplings)
    return UIResult(
        value=value,
        optimizer=optimizer,
        duality_gap=gap,
        iterations=iteration,
        converged=converged,
        direction=direction,
        method=method,
        trace=tuple(trace),
    )


def _pairwise_direction(
    grad: np.ndarray, vertices: np.ndarray, atoms: List[List[np.ndarray]], atom_weights: List[List[float]]
) -> Tuple[np.ndarray, List[Tuple[int, int, float]]]:
    """Per-symbol pairwise directions, each scaled by the weight of its away atom.

    A step of 1 along the result moves the whole away weight of every slice onto
    its Frank-Wolfe vertex, so one small atom does not hold back the other slices.
    """
    direction = np.zeros_like(vertices)
    away = []
    for s in range(len(atoms)):
        products = [float(np.sum(grad[s] * atom)) for atom in atoms[s]]
        k = int(np.argmax(products))
        candidate = vertices[s] - atoms[s][k]
        if np.sum(grad[s] * candidate) < 0:
            cap = atom_weights[s][k]
            direction[s] = cap * candidate
            away.append((s, k, cap))
    return direction, away


def _prune(atoms: List[np.ndarray], weights: List[float]) -> Tuple[List[np.ndarray], List[float]]:
    kept = [(a, w) for a, w in zip(atoms, weights) if w > ATOM_WEIGHT_FLOOR]
    total = sum(w for _, w in kept)
    return [a for a, _ in kept], [w / total for _, w in kept]


def _add_atom(atoms: List[np.ndarray], weights: List[float], vertex: np.ndarray, step: float) -> None:
    for index, atom in enumerate(atoms):
        if np.allclose(atom, vertex, rtol=0.0, atol=1e-15):
            weights[index] += step
            return
    atoms.append(vertex.copy())
    weights.append(step)


def ui_blackwell_equivalence_check(
    j: JointDistribution, direction: Observer = Observer.X1, tolerance: float = 1e-6
) -> EquivalenceReport:
    """Run UI and the garbling LP on the channels X <- S induced by ``j``.

    UI(S; X1 \\ X2) vanishes exactly when X1 <- S is a garbling of X2 <- S. The two
    raw results are reported side by side; disagreement is not resolved here.
    """
    restricted = j.restricted_to_support()
    kappa = channel_from_joint(restricted, direction)
    other = channel_from_joint(restricted, direction.other)
    ui = unique_information(restricted, direction, tolerance_bits=tolerance / 10)
    witness = test_garbling(kappa, other)
    report = EquivalenceReport(ui=ui, witness=witness, tolerance=tolerance)
    if not report.agree:
        logger.warning(
            f"UI {ui.value:.3e} (gap {ui.duality_gap:.1e}) and garbling witness "
            f"{'present' if witness is not None else 'absent'} disagree"
        )
    return report
