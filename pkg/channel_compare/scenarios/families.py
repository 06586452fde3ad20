"""Two-parameter families around the AND examples, used for the unique-information heatmaps."""

from fractions import Fraction
from typing import List, Tuple, Union

from ..core.exceptions import ScenarioDomainError
from ..core.models import JointDistribution, Observer
from ..utils.logger import get_logger
from .bundle import ExpectedValue, ScenarioBundle
from .library import BINARY, TERNARY, and_coarse_graining
from .verification import (
    and_gate_violation,
    coarse_channel_difference,
    conditional_independence_given_class,
    output_determinism,
    outputs_information,
)

logger = get_logger(__name__)

STRUCTURE_TOLERANCE = 1e-12

Rational = Union[Fraction, int, float, str]

GRID_A_RANGE = (Fraction(-1, 8), Fraction(1, 8))
GRID_B_RANGE = (Fraction(-1, 16), Fraction(1, 16))


def _rational(value: Rational) -> Fraction:
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def _format(value: Fraction) -> str:
    return str(value)


def _check_masses(rows: List[Tuple[str, str, str, Fraction, str]], name: str) -> None:
    for *_, mass, formula in rows:
        if mass < 0:
            raise ScenarioDomainError(f"{name}: mass {formula} = {mass} is negative", mass=formula)


def _check_structure(name: str, violations: List[Tuple[str, float]]) -> None:
    for what, amount in violations:
        if amount > STRUCTURE_TOLERANCE:
            raise ScenarioDomainError(f"{name}: {what} violated by {amount:.3e}")


def family_and_grid(a: Rational, b: Rational) -> ScenarioBundle:
    """Seven-row family with X1, X2 independent, f(S) = AND(X1, X2), X1 independent of S given f(S).

    (a, b) = (-1/8, 1/16) gives the AND example; the secondary diagonal b = a/2
    makes the two channels X <- S equivalent.

    Raises:
        ScenarioDomainError: a or b outside [-1/8, 1/8] x [-1/16, 1/16].
    """
    a, b = _rational(a), _rational(b)
    name = f"and-grid({_format(a)},{_format(b)})"
    if not GRID_A_RANGE[0] <= a <= GRID_A_RANGE[1]:
        raise ScenarioDomainError(f"{name}: a must lie in [-1/8, 1/8]", mass="1/8 - a")
    if not GRID_B_RANGE[0] <= b <= GRID_B_RANGE[1]:
        raise ScenarioDomainError(f"{name}: b must lie in [-1/16, 1/16]", mass="1/8 - 2b")

    e = Fraction(1, 8)
    rows = [
        ("0", "0", "0", e + 2 * b, "1/8 + 2b"),
        ("1", "0", "0", e - 2 * b, "1/8 - 2b"),
        ("0", "0", "1", e + a, "1/8 + a"),
        ("1", "0", "1", e - a, "1/8 - a"),
        ("0", "1", "0", e + a / 2 + b, "1/8 + a/2 + b"),
        ("1", "1", "0", e - a / 2 - b, "1/8 - a/2 - b"),
        ("2", "1", "1", Fraction(1, 4), "1/4"),
    ]
    _check_masses(rows, name)
    joint = JointDistribution.from_rows(TERNARY, BINARY, BINARY, [row[:4] for row in rows])
    f = and_coarse_graining()
    _check_structure(
        name,
        [
            ("independence of X1 and X2", outputs_information(joint)),
            ("f(S) = AND(X1, X2)", and_gate_violation(joint, f)),
            ("independence of S and X1 given f(S)", conditional_independence_given_class(joint, Observer.X1, f)),
        ],
    )
    return ScenarioBundle(
        name=name,
        description="AND family; the secondary diagonal b = a/2 makes both channels equivalent",
        joint=joint,
        coarse_graining=f,
        expected_values=(
            ExpectedValue(quantity="outputs_information", value=0.0),
            ExpectedValue(quantity="and_gate", value=0.0),
            ExpectedValue(quantity="conditional_independence", arguments=("x1",), value=0.0),
        ),
    )


def family_and_deterministic(a: Rational, b: Rational) -> ScenarioBundle:
    """Five-row family with X2 a function of S; a = b = 1/3 gives the deterministic AND example.

    Raises:
        ScenarioDomainError: a or b negative, a + b > 1, or a + b = 0.
    """
    a, b = _rational(a), _rational(b)
    name = f"and-det({_format(a)},{_format(b)})"
    if a < 0 or b < 0:
        raise ScenarioDomainError(f"{name}: a and b must be nonnegative", mass="a^2/(a+b)")
    if a + b == 0:
        raise ScenarioDomainError(f"{name}: a + b must be positive", mass="a^2/(a+b)")
    total = a + b
    rows = [
        ("0", "0", "0", a * a / total, "a^2/(a+b)"),
        ("0", "1", "0", a * b / total, "ab/(a+b)"),
        ("1", "0", "1", a * b / total, "ab/(a+b)"),
        ("1", "1", "1", b * b / total, "b^2/(a+b)"),
        ("2", "1", "1", 1 - a - b, "1 - a - b"),
    ]
    _check_masses(rows, name)
    joint = JointDistribution.from_rows(TERNARY, BINARY, BINARY, [row[:4] for row in rows])
    f = and_coarse_graining()
    _check_structure(
        name,
        [
            ("X2 a function of S", output_determinism(joint, Observer.X2)),
            ("independence of S and X1 given f(S)", conditional_independence_given_class(joint, Observer.X1, f)),
            ("equality of X1 <- f(S) and X2 <- f(S)", coarse_channel_difference(joint, f)),
        ],
    )
    return ScenarioBundle(
        name=name,
        description="deterministic-X2 family; a = b = 1/3 gives the deterministic AND example",
        joint=joint,
        coarse_graining=f,
        expected_values=(
            ExpectedValue(quantity="output_determinism", arguments=("x2",), value=0.0),
            ExpectedValue(quantity="conditional_independence", arguments=("x1",), value=0.0),
            ExpectedValue(quantity="coarse_channels_equal", value="true"),
        ),
    )
