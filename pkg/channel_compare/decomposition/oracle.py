"""Brute-force unique information for small problems (vertices plus a barycentric grid)."""

from math import comb, prod

import numpy as np

from ..core.exceptions import OracleDimensionError
from ..core.models import JointDistribution, Observer
from ..core.probability import entropy_bits
from ..lp.transportation import transportation_vertices
from ..orders.capability import simplex_grid
from ..utils.logger import get_logger

logger = get_logger(__name__)

MAX_DIMENSION = 6
MAX_CANDIDATES = 2_000_000
CHUNK = 50_000


def polytope_dimension(j: JointDistribution) -> int:
    """Total dimension of the per-symbol transportation polytopes of ``j``."""
    total = 0
    for slice_ in j.mass:
        if slice_.sum() <= 0:
            continue
        r = int(np.count_nonzero(slice_.sum(axis=1) > 0))
        c = int(np.count_nonzero(slice_.sum(axis=0) > 0))
        total += (r - 1) * (c - 1)
    return total


def _candidates(vertices: np.ndarray, density: int) -> np.ndarray:
    if len(vertices) == 1:
        return vertices
    weights = simplex_grid(len(vertices), density)
    return np.einsum("kv,vab->kab", weights, vertices)


def unique_information_oracle(
    j: JointDistribution, direction: Observer = Observer.X1, grid_density: int = 100
) -> float:
    """Smallest I_Q(S;X1|X2) over a dense finite subset of the marginal polytope.

    The value is an upper bound of the true minimum that tightens as
    ``grid_density`` grows.

    Raises:
        OracleDimensionError: the polytopes have total dimension above 6.
    """
    oriented = (j.swapped() if direction is Observer.X2 else j).restricted_to_support()
    dimension = polytope_dimension(oriented)
    if dimension > MAX_DIMENSION:
        raise OracleDimensionError(
            f"marginal polytope has dimension {dimension}; the oracle handles at most {MAX_DIMENSION}"
        )

    p = oriented.mass
    vertex_sets = [transportation_vertices(slice_.sum(axis=1), slice_.sum(axis=0)) for slice_ in p]

    density = grid_density
    while density > 1 and prod(
        comb(density + len(v) - 1, len(v) - 1) if len(v) > 1 else 1 for v in vertex_sets
    ) > MAX_CANDIDATES:
        density -= 1
    if density != grid_density:
        logger.warning(f"oracle grid density reduced from {grid_density} to {density}")

    candidates = [_candidates(v, density) for v in vertex_sets]
    # sum_q q log q separates over s; only the (x1, x2) marginal couples the slices
    self_terms = [-entropy_bits(c.reshape(len(c), -1), axis=1) for c in candidates]
    baseline = float(entropy_bits(p.sum(axis=1)) - entropy_bits(p.sum(axis=(0, 1))))

    shape = tuple(len(c) for c in candidates)
    total = prod(shape)
    best = np.inf
    for start in range(0, total, CHUNK):
        flat = np.arange(start, min(start + CHUNK, total))
        index = np.unravel_index(flat, shape)
        joint12 = sum(c[i] for c, i in zip(candidates, index))
        values = sum(t[i] for t, i in zip(self_terms, index))
        values = values + entropy_bits(joint12.reshape(len(flat), -1), axis=1)
        best = min(best, float(values.min()))
    logger.debug(f"oracle evaluated {total} points of a {dimension}-dimensional polytope")
    return max(best + baseline, 0.0)
