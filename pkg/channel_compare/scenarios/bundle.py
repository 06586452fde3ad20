"""Scenario bundles: named distributions, channels and decision problems with expected values."""

from enum import Enum
from typing import Dict, Optional, Tuple, Union

from ..core.models import Channel, CoarseGraining, FrozenModel, JointDistribution, ProbVector, UtilityTable


class Provenance(str, Enum):
    """Where an expected value comes from."""
    PUBLISHED = "PUBLISHED"
    DERIVED = "DERIVED"
    TRIVIAL = "TRIVIAL"


class ExpectedValue(FrozenModel):
    """A quantity to recompute, its arguments, and the value it should have."""

    quantity: str
    arguments: Tuple[str, ...] = ()
    value: Union[float, str]
    provenance: Provenance = Provenance.PUBLISHED
    note: str = ""

    @property
    def label(self) -> str:
        args = ", ".join(self.arguments)
        return f"{self.quantity}({args})" if args else self.quantity


class ScenarioBundle(FrozenModel):
    name: str
    description: str = ""
    joint: Optional[JointDistribution] = None
    channels: Dict[str, Channel] = {}
    utilities: Dict[str, UtilityTable] = {}
    prior: Optional[ProbVector] = None
    coarse_graining: Optional[CoarseGraining] = None
    expected_values: Tuple[ExpectedValue, ...] = ()

    def channel(self, name: str) -> Channel:
        try:
            return self.channels[name]
        except KeyError:
            raise KeyError(f"scenario '{self.name}' has no channel '{name}'") from None

    def utility(self, name: str) -> UtilityTable:
        try:
            return self.utilities[name]
        except KeyError:
            raise KeyError(f"scenario '{self.name}' has no utility table '{name}'") from None
