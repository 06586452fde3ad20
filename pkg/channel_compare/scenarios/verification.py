"""Recompute the expected values stored in scenario bundles."""

from typing import Callable, Dict, List, Union

import numpy as np

from ..core.models import CoarseGraining, FrozenModel, JointDistribution, Observer
from ..core.probability import (
    channel_from_joint,
    compose,
    conditional_entropy_profile,
    conditional_mutual_information,
    entropy_bits,
    joint_with_coarse_variable,
    mutual_information_from_pair,
)
from ..orders.blackwell import coarse_graining_pregarbler, compare, markov_approximation, test_garbling
from ..orders.decision import solve_decision
from ..utils.logger import get_logger
from .bundle import ExpectedValue, ScenarioBundle

logger = get_logger(__name__)

CHECK_TOLERANCE = 1e-9

Value = Union[float, str]


class CheckResult(FrozenModel):
    expected: ExpectedValue
    actual: Value
    passed: bool


def outputs_information(j: JointDistribution) -> float:
    """I(X1; X2)."""
    return mutual_information_from_pair(j.outputs_pair())


def and_gate_violation(j: JointDistribution, f: CoarseGraining) -> float:
    """Total mass on rows where f(s) differs from AND(x1, x2)."""
    violation = 0.0
    for s, x1, x2, mass in j.rows():
        gate = "1" if (x1 == "1" and x2 == "1") else "0"
        if f.image(s) != gate:
            violation += mass
    return violation


def conditional_independence_given_class(j: JointDistribution, which: Observer, f: CoarseGraining) -> float:
    """I(S; X | f(S))."""
    return conditional_mutual_information(joint_with_coarse_variable(j, which, f))


def output_determinism(j: JointDistribution, which: Observer) -> float:
    """H(X | S); zero iff X is a function of S on the support."""
    pair = j.pair(which)
    return max(float(entropy_bits(pair) - entropy_bits(pair.sum(axis=1))), 0.0)


def coarse_channel_difference(j: JointDistribution, f: CoarseGraining) -> float:
    """Largest entry of |P(f(S), X1) - P(f(S), X2)|; zero iff X1 <- f(S) equals X2 <- f(S)."""
    if j.x1.labels != j.x2.labels:
        return float("inf")
    first = f.indicator @ j.pair(Observer.X1)
    second = f.indicator @ j.pair(Observer.X2)
    return float(np.max(np.abs(first - second)))


def pregarbler_difference(j: JointDistribution, which: Observer, f: CoarseGraining) -> float:
    """max |(X <- S) . lambda^f - (X <- f(S)) . (f(S) <- S)|."""
    lhs = compose(channel_from_joint(j, which), coarse_graining_pregarbler(j, f))
    rhs = markov_approximation(j, which, f)
    return float(np.max(np.abs(lhs.matrix - rhs.matrix)))


def _observer(label: str) -> Observer:
    return Observer(label)


def _require_joint(bundle: ScenarioBundle) -> JointDistribution:
    if bundle.joint is None:
        raise ValueError(f"scenario '{bundle.name}' has no joint distribution")
    return bundle.joint


def _require_f(bundle: ScenarioBundle) -> CoarseGraining:
    if bundle.coarse_graining is None:
        raise ValueError(f"scenario '{bundle.name}' has no coarse-graining")
    return bundle.coarse_graining


QUANTITIES: Dict[str, Callable[..., Value]] = {
    "expected_utility": lambda b, c, u: solve_decision(b.channel(c), b.prior, b.utility(u)).expected_utility,
    "decision_rule": lambda b, c, u: solve_decision(b.channel(c), b.prior, b.utility(u)).describe_rule(),
    "relation": lambda b, c1, c2: compare(b.channel(c1), b.channel(c2), b.prior).relation.value,
    "garbling": lambda b, c1, c2: "present" if test_garbling(b.channel(c1), b.channel(c2)) else "absent",
    "outputs_information": lambda b: outputs_information(_require_joint(b)),
    "and_gate": lambda b: and_gate_violation(_require_joint(b), _require_f(b)),
    "coarse_channels_equal": lambda b: str(
        coarse_channel_difference(_require_joint(b), _require_f(b)) <= 1e-12
    ).lower(),
    "conditional_independence": lambda b, x: conditional_independence_given_class(
        _require_joint(b), _observer(x), _require_f(b)
    ),
    "output_determinism": lambda b, x: output_determinism(_require_joint(b), _observer(x)),
    "conditional_entropy": lambda b, x, symbol: conditional_entropy_profile(_require_joint(b), _observer(x))[symbol],
    "pregarbler_identity": lambda b, x: pregarbler_difference(_require_joint(b), _observer(x), _require_f(b)),
}


def recompute(bundle: ScenarioBundle, expected: ExpectedValue) -> Value:
    try:
        quantity = QUANTITIES[expected.quantity]
    except KeyError:
        raise ValueError(f"unknown quantity '{expected.quantity}'") from None
    return quantity(bundle, *expected.arguments)


def check(bundle: ScenarioBundle, expected: ExpectedValue) -> CheckResult:
    actual = recompute(bundle, expected)
    if isinstance(expected.value, str):
        passed = actual == expected.value
    else:
        passed = isinstance(actual, float) and abs(actual - expected.value) <= CHECK_TOLERANCE
    return CheckResult(expected=expected, actual=actual, passed=passed)


def verify_bundle(bundle: ScenarioBundle) -> List[CheckResult]:
    """Recompute every expected value of ``bundle``."""
    results = [check(bundle, expected) for expected in bundle.expected_values]
    failed = [r.expected.label for r in results if not r.passed]
    if failed:
        logger.warning(f"scenario '{bundle.name}': {len(failed)} check(s) failed: {', '.join(failed)}")
    return results
