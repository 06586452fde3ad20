"""Scenario names understood by the command line."""

import re
from fractions import Fraction
from typing import Callable, Dict, List

from ..core.exceptions import ScenarioDomainError
from .bundle import ScenarioBundle
from .families import family_and_deterministic, family_and_grid
from .library import example_and, example_and_deterministic, example_pregarbling

NAMED_SCENARIOS: Dict[str, Callable[[], ScenarioBundle]] = {
    "pregarbling": example_pregarbling,
    "and": example_and,
    "and-deterministic": example_and_deterministic,
}

FAMILIES: Dict[str, Callable[[Fraction, Fraction], ScenarioBundle]] = {
    "and-grid": family_and_grid,
    "and-det": family_and_deterministic,
}

_FAMILY_PATTERN = re.compile(r"^(and-grid|and-det)\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)$")


def available_scenarios() -> List[str]:
    return list(NAMED_SCENARIOS) + [f"{family}(a,b)" for family in FAMILIES]


def parse_rational(text: str) -> Fraction:
    """Read ``-1/8``, ``0.25`` or ``3`` exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ScenarioDomainError(f"cannot read '{text}' as a rational number") from None


def scenario_by_name(name: str) -> ScenarioBundle:
    """Look up a named example or build a family member such as ``and-grid(-1/8,1/16)``.

    Raises:
        ScenarioDomainError: unknown name or parameters outside the family's domain.
    """
    if name in NAMED_SCENARIOS:
        return NAMED_SCENARIOS[name]()
    match = _FAMILY_PATTERN.match(name.strip())
    if match:
        family, a, b = match.groups()
        return FAMILIES[family](parse_rational(a), parse_rational(b))
    raise ScenarioDomainError(f"unknown scenario '{name}'; available: {', '.join(available_scenarios())}")
