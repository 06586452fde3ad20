"""Decision problems: optimal deterministic rules and their expected utility."""

from typing import Dict, Mapping, Tuple

import numpy as np

from ..core.exceptions import DimensionError
from ..core.models import Channel, FrozenModel, ProbVector, UtilityTable, require_same

TIE_TOLERANCE = 1e-12


class DecisionSolution(FrozenModel):
    """Optimal observation-to-action rule and its expected utility."""

    rule: Dict[str, str]
    expected_utility: float
    ties: Tuple[str, ...] = ()

    def describe_rule(self) -> str:
        return ", ".join(f"{x}→{a}" for x, a in self.rule.items())


def aligned_utility(kappa: Channel, u: UtilityTable) -> UtilityTable:
    """Return ``u`` with its states in the order of the channel input.

    Raises:
        DimensionError: naming the first symbol present on one side only.
    """
    if u.states.labels == kappa.input.labels:
        return u
    extra = [s for s in u.states.labels if s not in kappa.input.labels]
    missing = [s for s in kappa.input.labels if s not in u.states.labels]
    if extra or missing:
        symbol = (extra or missing)[0]
        raise DimensionError(f"state '{symbol}' is not shared by the utility table and the channel input")
    return u.reordered(kappa.input)


def _scores(kappa: Channel, prior: ProbVector, u: UtilityTable) -> np.ndarray:
    """score[x, a] = sum_s P(s) kappa(x|s) u(s, a)."""
    require_same(kappa.input, prior.alphabet, "channel input vs prior")
    u = aligned_utility(kappa, u)
    return (kappa.matrix * prior.mass[None, :]) @ u.payoff


def solve_decision(kappa: Channel, prior: ProbVector, u: UtilityTable) -> DecisionSolution:
    """Maximize expected utility over deterministic rules x -> a.

    Ties are broken by action order. Observations with zero probability map to
    the first action and contribute nothing.
    """
    scores = _scores(kappa, prior, u)
    observed = kappa.matrix @ prior.mass > 0
    best = scores.argmax(axis=1)
    ties = []
    for x, label in enumerate(kappa.output.labels):
        if not observed[x]:
            best[x] = 0
            continue
        top = scores[x, best[x]]
        if np.sum(scores[x] >= top - TIE_TOLERANCE * max(1.0, abs(top))) > 1:
            ties.append(label)
    rule = {label: u.actions.labels[best[x]] for x, label in enumerate(kappa.output.labels)}
    value = float(scores[np.arange(kappa.output.size), best].sum())
    return DecisionSolution(rule=rule, expected_utility=value, ties=tuple(ties))


def optimal_values(matrices: np.ndarray, prior: np.ndarray, payoff: np.ndarray) -> np.ndarray:
    """Optimal expected utility for a stack of channel matrices [k, x, s] at once."""
    scores = np.einsum("kxs,s,sa->kxa", matrices, prior, payoff)
    return scores.max(axis=2).sum(axis=1)


def evaluate_rule(
    kappa: Channel, prior: ProbVector, u: UtilityTable, rule: Mapping[str, str]
) -> float:
    """Expected utility of a fixed rule."""
    scores = _scores(kappa, prior, u)
    total = 0.0
    for x, label in enumerate(kappa.output.labels):
        if label not in rule:
            raise DimensionError(f"rule does not cover observation '{label}'")
        total += scores[x, u.actions.index(rule[label])]
    return float(total)
