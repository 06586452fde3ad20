"""Probability functionals on finite alphabets: composition, marginals, entropies."""

from typing import Dict, Optional

import numpy as np

from .exceptions import UndefinedColumnError
from .models import (
    PROB_TOLERANCE,
    Alphabet,
    Channel,
    CoarseGraining,
    JointDistribution,
    Observer,
    ProbVector,
    require_same,
)


def _plogp(values: np.ndarray) -> np.ndarray:
    """Elementwise p * log2(p) with 0 log 0 = 0."""
    values = np.asarray(values, dtype=float)
    out = np.zeros_like(values)
    positive = values > 0
    out[positive] = values[positive] * np.log2(values[positive])
    return out


def entropy_bits(values: np.ndarray, axis: Optional[int] = None) -> np.ndarray:
    """Shannon entropy in bits of nonnegative mass arrays along ``axis``."""
    return -_plogp(values).sum(axis=axis)


def compose(lhs: Channel, rhs: Channel) -> Channel:
    """Return the product lhs . rhs (apply rhs first).

    Columns of the product sum to 1 up to the round-off already allowed in the
    factors (``PROB_TOLERANCE`` each). They are rescaled to sum to 1 so that
    chains of compositions do not accumulate that drift; no other
    renormalization happens here.
    """
    require_same(lhs.input, rhs.output, "compose: lhs input vs rhs output")
    matrix = lhs.matrix @ rhs.matrix
    matrix = matrix / matrix.sum(axis=0, keepdims=True)
    return Channel(input=rhs.input, output=lhs.output, matrix=matrix)


def push_prior(kappa: Channel, prior: ProbVector) -> ProbVector:
    """Output marginal of ``kappa`` under ``prior``."""
    require_same(kappa.input, prior.alphabet, "push_prior: channel input vs prior")
    mass = np.clip(kappa.matrix @ prior.mass, 0.0, None)
    return ProbVector(alphabet=kappa.output, mass=mass / mass.sum())


def _conditional_columns(pair: np.ndarray, conditioning: Alphabet) -> np.ndarray:
    """Normalize ``pair[c, x]`` along x; returns matrix [x, c]."""
    totals = pair.sum(axis=1)
    for index, total in enumerate(totals):
        if total <= 0:
            raise UndefinedColumnError(conditioning.labels[index])
    return (pair / totals[:, None]).T


def channel_from_joint(
    j: JointDistribution,
    which: Observer,
    condition_on: Optional[CoarseGraining] = None,
) -> Channel:
    """The channel X <- S (or X <- f(S) when ``condition_on`` is given).

    Raises:
        UndefinedColumnError: a conditioning symbol has zero probability.
    """
    pair = j.pair(which)
    conditioning = j.s
    if condition_on is not None:
        require_same(condition_on.domain, j.s, "coarse-graining domain vs S alphabet")
        pair = condition_on.indicator @ pair
        conditioning = condition_on.codomain
    matrix = _conditional_columns(pair, conditioning)
    return Channel(input=conditioning, output=j.observer_alphabet(which), matrix=matrix)


def posterior_channel(j: JointDistribution, which: Observer) -> Channel:
    """The channel S <- X; column x is P(s | x)."""
    pair = j.pair(which).T
    alphabet = j.observer_alphabet(which)
    return Channel(input=alphabet, output=j.s, matrix=_conditional_columns(pair, alphabet))


def entropy(p: ProbVector) -> float:
    """H(p) in bits."""
    return float(entropy_bits(p.mass))


def kl_divergence(p: np.ndarray, q: np.ndarray) -> float:
    """D(p || q) in bits; infinite when p is not absolutely continuous w.r.t. q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    support = p > 0
    if np.any(q[support] <= 0):
        return float("inf")
    return float(np.sum(p[support] * np.log2(p[support] / q[support])))


def mutual_information(prior: ProbVector, kappa: Channel) -> float:
    """I(S;X) in bits for S ~ prior and X <- S given by ``kappa``."""
    require_same(kappa.input, prior.alphabet, "mutual_information: channel input vs prior")
    return float(mutual_information_batch(prior.mass[None, :], kappa.matrix)[0])


def mutual_information_batch(priors: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """I(S;X) for every row of ``priors`` (shape [N, |S|]) and one channel matrix [x, s]."""
    priors = np.atleast_2d(np.asarray(priors, dtype=float))
    column_entropies = entropy_bits(matrix, axis=0)
    outputs = priors @ matrix.T
    values = entropy_bits(outputs, axis=1) - priors @ column_entropies
    return np.maximum(values, 0.0)


def mutual_information_from_pair(pair: np.ndarray) -> float:
    """I(A;B) in bits from a joint mass matrix [a, b]."""
    pair = np.asarray(pair, dtype=float)
    value = entropy_bits(pair.sum(axis=1)) + entropy_bits(pair.sum(axis=0)) - entropy_bits(pair)
    return max(float(value), 0.0)


def conditional_mutual_information(j: JointDistribution) -> float:
    """I(S;X1 | X2) in bits."""
    return float(conditional_mutual_information_array(j.mass))


def conditional_mutual_information_array(mass: np.ndarray) -> float:
    """I(S;X1|X2) for a raw mass array [s, x1, x2]."""
    h_s_x2 = entropy_bits(mass.sum(axis=1))
    h_x1_x2 = entropy_bits(mass.sum(axis=0))
    h_all = entropy_bits(mass)
    h_x2 = entropy_bits(mass.sum(axis=(0, 1)))
    return max(float(h_s_x2 + h_x1_x2 - h_all - h_x2), 0.0)


def conditional_entropy_profile(j: JointDistribution, which: Observer) -> Dict[str, float]:
    """H(S | X = x) in bits for every observation symbol x with positive probability."""
    pair = j.pair(which)
    alphabet = j.observer_alphabet(which)
    profile: Dict[str, float] = {}
    for index, label in enumerate(alphabet.labels):
        column = pair[:, index]
        total = column.sum()
        if total > PROB_TOLERANCE:
            profile[label] = float(entropy_bits(column / total))
    return profile


def joint_with_coarse_variable(
    j: JointDistribution, which: Observer, f: CoarseGraining
) -> JointDistribution:
    """Joint of (S, X, f(S)); its conditional mutual information is I(S;X | f(S))."""
    require_same(f.domain, j.s, "coarse-graining domain vs S alphabet")
    pair = j.pair(which)
    mass = pair[:, :, None] * f.indicator.T[:, None, :]
    return JointDistribution(s=j.s, x1=j.observer_alphabet(which), x2=f.codomain, mass=mass)
