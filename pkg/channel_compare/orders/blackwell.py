"""The Blackwell order: garbling tests, separating decision problems, coarse-graining."""

from enum import Enum
from itertools import product
from typing import Optional, Tuple, Union

import numpy as np

from ..core.exceptions import IntegrityError, PreconditionError, UndefinedColumnError
from ..core.models import (
    Alphabet,
    Channel,
    CoarseGraining,
    FrozenModel,
    JointDistribution,
    Observer,
    ProbVector,
    UtilityTable,
    require_same,
)
from ..core.probability import channel_from_joint, compose
from ..lp.feasibility import FeasibilityOutcome, FeasibilityProblem, certificate_holds, solve_feasibility
from ..utils.logger import get_logger
from .decision import solve_decision

logger = get_logger(__name__)

WITNESS_TOLERANCE = 1e-8
GAP_TOLERANCE = 1e-9
SEARCH_PAYOFFS = (-1.0, 0.0, 1.0, 2.0)
SEARCH_MAX_CELLS = 8
SEARCH_MAX_STATES = 3


class Relation(str, Enum):
    """Position of the first channel relative to the second."""
    INFERIOR = "inferior"
    SUPERIOR = "superior"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"

    @property
    def comparable(self) -> bool:
        return self is not Relation.INCOMPARABLE


class SeparatingProblem(FrozenModel):
    """A decision problem in which ``favored`` strictly beats ``other``."""

    utility: UtilityTable
    prior: ProbVector
    favored_utility: float
    other_utility: float

    @property
    def gap(self) -> float:
        return self.favored_utility - self.other_utility


class GarblingVerdict(FrozenModel):
    """Outcome of comparing kappa1 with kappa2 in the Blackwell order.

    ``witness_forward`` satisfies kappa1 = witness . kappa2 and
    ``witness_backward`` satisfies kappa2 = witness . kappa1.
    """

    relation: Relation
    witness_forward: Optional[Channel] = None
    witness_backward: Optional[Channel] = None
    problem_favoring_first: Optional[SeparatingProblem] = None
    problem_favoring_second: Optional[SeparatingProblem] = None

    @property
    def separating_problem(self) -> Optional[SeparatingProblem]:
        return self.problem_favoring_first or self.problem_favoring_second


def garbling_problem(kappa1: Channel, kappa2: Channel) -> FeasibilityProblem:
    """LP system for kappa1 = lambda . kappa2 with lambda column-stochastic.

    Variables are lambda[x1, x2] in row-major order. The first |X1||S| equalities
    match kappa1 entry by entry (row x1 * |S| + s), the last |X2| fix column sums.
    """
    require_same(kappa1.input, kappa2.input, "garbling test: input alphabets")
    n1, n2 = kappa1.output.size, kappa2.output.size
    reproduce = np.kron(np.eye(n1), kappa2.matrix.T)
    stochastic = np.kron(np.ones((1, n1)), np.eye(n2))
    return FeasibilityProblem(
        coefficients=np.vstack([reproduce, stochastic]),
        rhs=np.concatenate([kappa1.matrix.reshape(-1), np.ones(n2)]),
    )


def _witness_channel(kappa1: Channel, kappa2: Channel, outcome: FeasibilityOutcome) -> Channel:
    matrix = outcome.witness.reshape(kappa1.output.size, kappa2.output.size)
    matrix = np.clip(matrix, 0.0, None)
    matrix = matrix / matrix.sum(axis=0, keepdims=True)
    witness = Channel(input=kappa2.output, output=kappa1.output, matrix=matrix)
    error = np.max(np.abs(kappa1.matrix - witness.matrix @ kappa2.matrix))
    if error > WITNESS_TOLERANCE:
        raise IntegrityError(f"garbling witness reproduces kappa1 only to {error:.3e}")
    return witness


def _garbling_outcome(kappa1: Channel, kappa2: Channel) -> Tuple[FeasibilityProblem, FeasibilityOutcome]:
    problem = garbling_problem(kappa1, kappa2)
    return problem, solve_feasibility(problem)


def test_garbling(kappa1: Channel, kappa2: Channel) -> Optional[Channel]:
    """Return lambda with kappa1 = lambda . kappa2, or None if kappa1 is not a garbling of kappa2."""
    _, outcome = _garbling_outcome(kappa1, kappa2)
    if not outcome.feasible:
        return None
    if outcome.marginal:
        logger.warning(f"garbling verdict is marginal (phase-one residual {outcome.residual:.2e})")
    return _witness_channel(kappa1, kappa2, outcome)


test_garbling.__test__ = False  # type: ignore[attr-defined]


def separation_gap(favored: Channel, other: Channel, prior: ProbVector, u: UtilityTable) -> SeparatingProblem:
    """Evaluate ``u`` on both channels."""
    return SeparatingProblem(
        utility=u,
        prior=prior,
        favored_utility=solve_decision(favored, prior, u).expected_utility,
        other_utility=solve_decision(other, prior, u).expected_utility,
    )


def _search_vertex_utility(
    favored: Channel, other: Channel, prior: ProbVector, strongest: bool = False
) -> Optional[SeparatingProblem]:
    """Search tables with payoffs in {-1, 0, 1, 2} for one separating the two channels.

    Tables are scaled to max |u| = 1. By default the first hit in product order is
    returned; with ``strongest`` the hit with the largest gap (first on ties).
    """
    n_states = favored.input.size
    if n_states > SEARCH_MAX_STATES:
        return None
    n_actions = max(2, min(favored.output.size, SEARCH_MAX_CELLS // n_states))
    tables = np.array(list(product(SEARCH_PAYOFFS, repeat=n_states * n_actions)))
    scales = np.abs(tables).max(axis=1)
    scales[scales == 0] = 1.0
    tables = (tables / scales[:, None]).reshape(-1, n_states, n_actions)
    favored_values = np.einsum("xs,s,nsa->nxa", favored.matrix, prior.mass, tables).max(axis=2).sum(axis=1)
    other_values = np.einsum("xs,s,nsa->nxa", other.matrix, prior.mass, tables).max(axis=2).sum(axis=1)
    gaps = favored_values - other_values
    hits = np.nonzero(gaps > GAP_TOLERANCE)[0]
    if not hits.size:
        return None
    chosen = int(np.argmax(gaps)) if strongest else int(hits[0])
    u = UtilityTable(states=favored.input, actions=Alphabet.range(n_actions), payoff=tables[chosen])
    return separation_gap(favored, other, prior, u)


def _strongest_problem(
    found: SeparatingProblem, favored: Channel, other: Channel, prior: ProbVector
) -> SeparatingProblem:
    """Swap a certificate-derived problem for a searched table when the table separates more."""
    searched = _search_vertex_utility(favored, other, prior, strongest=True)
    if searched is not None and searched.gap > found.gap + GAP_TOLERANCE:
        return searched
    return found


def separating_utility_from_certificate(
    certificate: np.ndarray,
    favored: Channel,
    other: Channel,
    prior: Optional[ProbVector] = None,
) -> SeparatingProblem:
    """Turn a Farkas certificate for "favored is a garbling of other" into a decision problem.

    The certificate block over (x1, s) pairs, divided by the prior, is a payoff
    table with one action per output of ``favored``; under it the identity rule on
    ``favored`` beats every rule on ``other``.

    Raises:
        IntegrityError: the certificate does not verify, or no separating table was found.
    """
    if prior is None:
        prior = ProbVector.uniform(favored.input)
    problem = garbling_problem(favored, other)
    certificate = np.asarray(certificate, dtype=float)
    if not certificate_holds(problem, certificate):
        raise IntegrityError("certificate fails the Farkas conditions for this garbling system")

    n_states = favored.input.size
    block = certificate[: favored.output.size * n_states].reshape(favored.output.size, n_states)
    payoff = block.T / prior.mass[:, None]
    scale = np.max(np.abs(payoff))
    if scale > 0:
        payoff = payoff / scale
    u = UtilityTable(states=favored.input, actions=favored.output, payoff=payoff)
    separation = separation_gap(favored, other, prior, u)
    if separation.gap > GAP_TOLERANCE:
        return separation

    logger.info(f"certificate utility gap {separation.gap:.3e} too small; searching vertex tables")
    found = _search_vertex_utility(favored, other, prior)
    if found is None:
        raise IntegrityError("no separating decision problem could be verified")
    return found


def compare(kappa1: Channel, kappa2: Channel, prior: Optional[ProbVector] = None) -> GarblingVerdict:
    """Compare two channels in both directions, with verified separating problems.

    Raises:
        PreconditionError: the prior does not have full support.
    """
    require_same(kappa1.input, kappa2.input, "compare: input alphabets")
    if prior is None:
        prior = ProbVector.uniform(kappa1.input)
    require_same(kappa1.input, prior.alphabet, "compare: prior alphabet")
    if not prior.has_full_support:
        raise PreconditionError("comparison for a fixed prior requires the prior to have full support")

    _, forward = _garbling_outcome(kappa1, kappa2)
    _, backward = _garbling_outcome(kappa2, kappa1)

    witness_forward = _witness_channel(kappa1, kappa2, forward) if forward.feasible else None
    witness_backward = _witness_channel(kappa2, kappa1, backward) if backward.feasible else None
    favoring_first = None
    favoring_second = None
    if not forward.feasible:
        favoring_first = _strongest_problem(
            separating_utility_from_certificate(forward.certificate, kappa1, kappa2, prior), kappa1, kappa2, prior
        )
    if not backward.feasible:
        favoring_second = _strongest_problem(
            separating_utility_from_certificate(backward.certificate, kappa2, kappa1, prior), kappa2, kappa1, prior
        )

    if forward.feasible and backward.feasible:
        relation = Relation.EQUIVALENT
    elif forward.feasible:
        relation = Relation.INFERIOR
    elif backward.feasible:
        relation = Relation.SUPERIOR
    else:
        relation = Relation.INCOMPARABLE
    logger.info(f"compare: kappa1 is {relation.value} to kappa2")

    return GarblingVerdict(
        relation=relation,
        witness_forward=witness_forward,
        witness_backward=witness_backward,
        problem_favoring_first=favoring_first,
        problem_favoring_second=favoring_second,
    )


def markov_approximation(j: JointDistribution, which: Observer, f: CoarseGraining) -> Channel:
    """The channel (X <- f(S)) . (f(S) <- S)."""
    return compose(channel_from_joint(j, which, condition_on=f), f.as_channel())


def coarse_graining_pregarbler(
    source: Union[JointDistribution, ProbVector], f: CoarseGraining
) -> Channel:
    """lambda^f with column s equal to P(S | f(S) = f(s)).

    Raises:
        UndefinedColumnError: a coarse class has zero probability.
    """
    prior = source.marginal_s() if isinstance(source, JointDistribution) else source
    require_same(f.domain, prior.alphabet, "coarse-graining domain vs S alphabet")
    class_mass = f.indicator @ prior.mass
    for t, mass in enumerate(class_mass):
        if mass <= 0:
            raise UndefinedColumnError(f.codomain.labels[t])
    # posterior[s', t] = P(S = s' | f(S) = t)
    posterior = f.indicator.T * prior.mass[:, None] / class_mass[None, :]
    matrix = posterior[:, list(f.assignment)]
    return Channel(input=prior.alphabet, output=prior.alphabet, matrix=matrix)


def symmetric_channel(alphabet: Alphabet, epsilon: float) -> Channel:
    """q-ary symmetric channel: keep the symbol with 1 - epsilon, spread epsilon uniformly."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"noise level must lie in [0, 1], got {epsilon}")
    n = alphabet.size
    if n == 1:
        return Channel.identity(alphabet)
    matrix = np.full((n, n), epsilon / (n - 1))
    np.fill_diagonal(matrix, 1.0 - epsilon)
    return Channel(input=alphabet, output=alphabet, matrix=matrix)


def add_symmetric_noise(kappa: Channel, epsilon: float = 0.01) -> Channel:
    """Garble the output of ``kappa`` with a symmetric channel."""
    return compose(symmetric_channel(kappa.output, epsilon), kappa)
