"""The more-capable order, channel capacity and the coarse-graining information chain."""

from enum import Enum
from math import comb
from typing import Optional

import numpy as np

from ..core.models import Channel, CoarseGraining, FrozenModel, JointDistribution, Observer, ProbVector, require_same
from ..core.probability import (
    channel_from_joint,
    kl_divergence,
    mutual_information,
    mutual_information_batch,
    mutual_information_from_pair,
)
from ..utils.logger import get_logger

logger = get_logger(__name__)

REFUTATION_MARGIN = 1e-9
MAX_GRID_POINTS = 20000
CAPACITY_MAX_ITERATIONS = 100000
LEMMA_TOLERANCE = 1e-9


class CapabilityStatus(str, Enum):
    """Refuted is a proof; unrefuted is only evidence."""
    REFUTED = "refuted"
    UNREFUTED = "unrefuted"


class CapabilityVerdict(FrozenModel):
    """Result of searching for a prior where kappa1 carries more information than kappa2."""

    status: CapabilityStatus
    counterexample: Optional[ProbVector] = None
    margin: float
    priors_tested: int

    @property
    def refuted(self) -> bool:
        return self.status is CapabilityStatus.REFUTED


class CapacityResult(FrozenModel):
    capacity: float
    optimal_prior: ProbVector
    gap_bound: float
    iterations: int = 0


class LemmaReport(FrozenModel):
    """Largest violation of I(S;X') = I(f(S);X') = I(f(S);X) <= I(S;X) over sampled priors."""

    trials: int
    max_violation: float
    worst_prior: Optional[ProbVector] = None

    @property
    def holds(self) -> bool:
        return self.max_violation <= LEMMA_TOLERANCE


def simplex_grid(n: int, resolution: int) -> np.ndarray:
    """All points of the probability simplex with coordinates k / resolution.

    Rows are listed in lexicographic order of their integer compositions.
    """
    if n < 1 or resolution < 1:
        raise ValueError("grid needs at least one coordinate and resolution >= 1")

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    return np.array(list(compositions(resolution, n)), dtype=float) / resolution


def grid_size(n: int, resolution: int) -> int:
    return comb(resolution + n - 1, n - 1)


def sample_priors(n: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` uniform samples from the simplex (Dirichlet(1, ..., 1)), reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    if count <= 0:
        return np.zeros((0, n))
    return rng.dirichlet(np.ones(n), size=count)


def more_capable_refute(
    kappa1: Channel,
    kappa2: Channel,
    grid_resolution: int = 50,
    sample_count: int = 2000,
    seed: int = 0,
) -> CapabilityVerdict:
    """Search for a prior with I(S;X2) < I(S;X1) - 1e-9.

    Grid points are tested first, then seeded Dirichlet samples; the reported
    counterexample is the prior with the largest gap, earliest in that order on ties.
    """
    require_same(kappa1.input, kappa2.input, "more-capable search: input alphabets")
    n = kappa1.input.size

    resolution = grid_resolution
    while resolution > 1 and grid_size(n, resolution) > MAX_GRID_POINTS:
        resolution -= 1
    if resolution != grid_resolution:
        logger.warning(f"grid resolution reduced from {grid_resolution} to {resolution} for {n} inputs")

    priors = np.vstack([simplex_grid(n, resolution), sample_priors(n, sample_count, seed)])
    gaps = mutual_information_batch(priors, kappa1.matrix) - mutual_information_batch(priors, kappa2.matrix)
    best = int(np.argmax(gaps))
    margin = float(gaps[best])
    logger.info(f"more-capable search over {len(priors)} priors: largest I1 - I2 = {margin:.3e}")

    if margin > REFUTATION_MARGIN:
        counterexample = ProbVector(alphabet=kappa1.input, mass=priors[best])
        return CapabilityVerdict(
            status=CapabilityStatus.REFUTED,
            counterexample=counterexample,
            margin=margin,
            priors_tested=len(priors),
        )
    return CapabilityVerdict(status=CapabilityStatus.UNREFUTED, margin=margin, priors_tested=len(priors))


def capacity(kappa: Channel, tolerance_bits: float = 1e-9, max_iterations: int = CAPACITY_MAX_ITERATIONS) -> CapacityResult:
    """Blahut-Arimoto from the uniform prior.

    Stops when max_s D(kappa_s || q) minus I(p) is at most ``tolerance_bits``;
    the capacity lies between those two numbers.
    """
    if tolerance_bits <= 0:
        raise ValueError("tolerance must be positive")

    matrix = kappa.matrix
    p = np.full(kappa.input.size, 1.0 / kappa.input.size)
    lower = upper = 0.0
    for iteration in range(1, max_iterations + 1):
        q = matrix @ p
        divergences = np.array([kl_divergence(matrix[:, s], q) for s in range(kappa.input.size)])
        lower = float(np.dot(p, divergences))
        upper = float(divergences.max())
        if upper - lower <= tolerance_bits:
            break
        weights = p * np.exp2(divergences)
        p = weights / weights.sum()
    else:
        logger.warning(f"Blahut-Arimoto stopped after {max_iterations} iterations, gap {upper - lower:.3e}")

    logger.debug(f"capacity {lower:.9f} bits after {iteration} iterations")
    return CapacityResult(
        capacity=lower,
        optimal_prior=ProbVector(alphabet=kappa.input, mass=p),
        gap_bound=max(upper - lower, 0.0),
        iterations=iteration,
    )


def verify_less_capable_lemma(
    j: JointDistribution,
    which: Observer,
    f: CoarseGraining,
    trials: int = 1000,
    seed: int = 0,
) -> LemmaReport:
    """Check I(S;X') = I(f(S);X') = I(f(S);X) <= I(S;X) at random priors.

    For each prior p the pair (S, X) is reweighted to p(s) P(x|s) and X' is the
    Markov approximation (X <- f(S)) . (f(S) <- S) built from that reweighted pair.
    """
    kappa = channel_from_joint(j, which)
    indicator = f.indicator
    worst = 0.0
    worst_prior = None
    for p in sample_priors(j.s.size, trials, seed):
        pair = p[:, None] * kappa.matrix.T
        class_pair = indicator @ pair
        given_class = class_pair / class_pair.sum(axis=1, keepdims=True)
        approximation = given_class[list(f.assignment)]
        class_approx_pair = indicator @ (p[:, None] * approximation)

        prior = ProbVector(alphabet=j.s, mass=p)
        s_xprime = mutual_information(
            prior, Channel(input=j.s, output=kappa.output, matrix=approximation.T)
        )
        f_xprime = mutual_information_from_pair(class_approx_pair)
        f_x = mutual_information_from_pair(class_pair)
        s_x = mutual_information(prior, kappa)

        violation = max(abs(s_xprime - f_xprime), abs(f_xprime - f_x), f_x - s_x)
        if violation > worst:
            worst, worst_prior = violation, prior
    return LemmaReport(trials=trials, max_violation=worst, worst_prior=worst_prior)
