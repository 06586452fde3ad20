"""The worked examples: pre-garbling, the AND construction and its deterministic variant."""

from fractions import Fraction
from math import log2
from typing import Dict

from ..core.models import Alphabet, Channel, CoarseGraining, JointDistribution, Observer, ProbVector, UtilityTable
from ..core.probability import channel_from_joint
from .bundle import ExpectedValue, Provenance, ScenarioBundle

BINARY = Alphabet.of("0", "1")
TERNARY = Alphabet.of("0", "1", "2")


def and_coarse_graining() -> CoarseGraining:
    """f(0) = f(1) = 0, f(2) = 1."""
    return CoarseGraining.from_mapping(TERNARY, {"0": "0", "1": "0", "2": "1"}, BINARY)


def _channels_of(joint: JointDistribution, f: CoarseGraining) -> Dict[str, Channel]:
    return {
        "x1<-s": channel_from_joint(joint, Observer.X1),
        "x2<-s": channel_from_joint(joint, Observer.X2),
        "x1<-f(s)": channel_from_joint(joint, Observer.X1, condition_on=f),
        "x2<-f(s)": channel_from_joint(joint, Observer.X2, condition_on=f),
    }


def example_pregarbling() -> ScenarioBundle:
    """Two binary channels with equal information, one better for a given decision problem."""
    kappa1 = Channel(input=BINARY, output=BINARY, matrix=[[0.9, 0.0], [0.1, 1.0]])
    swap = Channel(input=BINARY, output=BINARY, matrix=[[0.0, 1.0], [1.0, 0.0]])
    kappa2 = Channel(input=BINARY, output=BINARY, matrix=[[0.0, 0.9], [1.0, 0.1]])
    u = UtilityTable.from_entries(
        BINARY, BINARY, {("0", "0"): 2, ("0", "1"): 0, ("1", "0"): 0, ("1", "1"): 1}
    )
    return ScenarioBundle(
        name="pregarbling",
        description="kappa2 = kappa1 . swap; neither channel is a garbling of the other",
        channels={"kappa1": kappa1, "kappa2": kappa2, "swap": swap},
        utilities={"u": u},
        prior=ProbVector.uniform(BINARY),
        expected_values=(
            ExpectedValue(quantity="expected_utility", arguments=("kappa1", "u"), value=1.4),
            ExpectedValue(quantity="expected_utility", arguments=("kappa2", "u"), value=1.45),
            ExpectedValue(quantity="relation", arguments=("kappa1", "kappa2"), value="incomparable"),
        ),
    )


def and_joint() -> JointDistribution:
    q, e = Fraction(1, 4), Fraction(1, 8)
    rows = [
        ("0", "0", "0", q),
        ("1", "0", "1", q),
        ("0", "1", "0", e),
        ("1", "1", "0", e),
        ("2", "1", "1", q),
    ]
    return JointDistribution.from_rows(TERNARY, BINARY, BINARY, rows)


def example_and() -> ScenarioBundle:
    """X1, X2 independent uniform bits, f(S) = AND(X1, X2), and X1 independent of S given f(S)."""
    joint = and_joint()
    f = and_coarse_graining()
    u = UtilityTable.from_entries(
        TERNARY,
        BINARY,
        {("0", "0"): 0, ("0", "1"): 0, ("1", "0"): 1, ("1", "1"): 0, ("2", "0"): 0, ("2", "1"): 1},
    )
    h_s_given_x2_0 = 2 - 0.75 * log2(3)
    return ScenarioBundle(
        name="and",
        description="coarse-graining paradox: X1 <- S is not a garbling of X2 <- S, yet X1 does better",
        joint=joint,
        channels=_channels_of(joint, f),
        utilities={"u": u},
        prior=joint.marginal_s(),
        coarse_graining=f,
        expected_values=(
            ExpectedValue(quantity="expected_utility", arguments=("x1<-s", "u"), value=0.5),
            ExpectedValue(quantity="expected_utility", arguments=("x2<-s", "u"), value=0.375),
            ExpectedValue(quantity="decision_rule", arguments=("x1<-s", "u"), value="0→0, 1→1"),
            ExpectedValue(quantity="outputs_information", value=0.0),
            ExpectedValue(quantity="and_gate", value=0.0),
            ExpectedValue(quantity="coarse_channels_equal", value="true"),
            ExpectedValue(quantity="conditional_independence", arguments=("x1",), value=0.0),
            ExpectedValue(quantity="garbling", arguments=("x1<-s", "x2<-s"), value="absent"),
            ExpectedValue(quantity="pregarbler_identity", arguments=("x2",), value=0.0),
            ExpectedValue(
                quantity="conditional_entropy",
                arguments=("x2", "0"),
                value=h_s_given_x2_0,
                provenance=Provenance.DERIVED,
                note="entropy of the printed table P(S | X2 = 0) = (3/4, 1/4, 0)",
            ),
            ExpectedValue(
                quantity="relation",
                arguments=("x1<-s", "x2<-s"),
                value="incomparable",
                provenance=Provenance.DERIVED,
            ),
        ),
    )


def and_deterministic_joint() -> JointDistribution:
    sixth, third = Fraction(1, 6), Fraction(1, 3)
    rows = [
        ("0", "0", "0", sixth),
        ("0", "1", "0", sixth),
        ("1", "0", "1", sixth),
        ("1", "1", "1", sixth),
        ("2", "1", "1", third),
    ]
    return JointDistribution.from_rows(TERNARY, BINARY, BINARY, rows)


def example_and_deterministic() -> ScenarioBundle:
    """Variant of the AND construction in which X2 is a function of S."""
    joint = and_deterministic_joint()
    f = and_coarse_graining()
    u = UtilityTable.from_entries(
        TERNARY,
        BINARY,
        {("0", "0"): 0, ("0", "1"): 0, ("1", "0"): 0, ("1", "1"): 1, ("2", "0"): 0, ("2", "1"): -1},
    )
    return ScenarioBundle(
        name="and-deterministic",
        description="X2 is a deterministic function of S; relying on X2 brings no reward",
        joint=joint,
        channels=_channels_of(joint, f),
        utilities={"u": u},
        prior=joint.marginal_s(),
        coarse_graining=f,
        expected_values=(
            ExpectedValue(quantity="expected_utility", arguments=("x2<-s", "u"), value=0.0),
            ExpectedValue(quantity="decision_rule", arguments=("x2<-s", "u"), value="0→0, 1→0"),
            ExpectedValue(quantity="output_determinism", arguments=("x2",), value=0.0),
            ExpectedValue(quantity="coarse_channels_equal", value="true"),
            ExpectedValue(quantity="conditional_independence", arguments=("x1",), value=0.0),
            ExpectedValue(quantity="pregarbler_identity", arguments=("x2",), value=0.0),
            ExpectedValue(
                quantity="expected_utility",
                arguments=("x1<-s", "u"),
                value=1 / 6,
                provenance=Provenance.DERIVED,
            ),
        ),
    )
