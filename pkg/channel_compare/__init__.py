"""
Channel comparison toolkit

Compares finite information channels under the Blackwell order and the
more-capable order, computes unique information, and reproduces the
coarse-graining examples in which a coarser view of the input is worth more.
"""

__version__ = "0.1.0"

from .core.models import Alphabet, Channel, CoarseGraining, JointDistribution, Observer, ProbVector, UtilityTable
from .decomposition.unique_information import unique_information
from .orders.blackwell import compare, test_garbling
from .orders.capability import capacity, more_capable_refute
from .orders.decision import solve_decision

__all__ = [
    "Alphabet",
    "Channel",
    "CoarseGraining",
    "JointDistribution",
    "Observer",
    "ProbVector",
    "UtilityTable",
    "compare",
    "test_garbling",
    "solve_decision",
    "more_capable_refute",
    "capacity",
    "unique_information",
]
