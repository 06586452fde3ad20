"""Data models for finite distributions, channels and decision problems."""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .exceptions import DimensionError, InvalidDistributionError

PROB_TOLERANCE = 1e-9

Number = Union[float, int, Fraction]


class Observer(str, Enum):
    """Which output variable of a joint distribution is meant."""
    X1 = "x1"
    X2 = "x2"

    @property
    def other(self) -> "Observer":
        return Observer.X2 if self is Observer.X1 else Observer.X1


class FrozenModel(BaseModel):
    """Immutable pydantic model that may hold read-only numpy arrays."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def __eq__(self, other: Any) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        for name in type(self).model_fields:
            mine, theirs = getattr(self, name), getattr(other, name)
            if isinstance(mine, np.ndarray) or isinstance(theirs, np.ndarray):
                if not np.array_equal(mine, theirs):
                    return False
            elif mine != theirs:
                return False
        return True

    __hash__ = None  # type: ignore[assignment]


def _readonly_array(value: Any, ndim: int, name: str) -> np.ndarray:
    array = np.array(value, dtype=float)
    if array.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contains non-finite entries")
    array.setflags(write=False)
    return array


class Alphabet(FrozenModel):
    """Ordered finite set of distinct symbol labels."""

    labels: Tuple[str, ...]

    @field_validator("labels", mode="before")
    @classmethod
    def _coerce_labels(cls, value: Any) -> Tuple[str, ...]:
        return tuple(str(label) for label in value)

    @model_validator(mode="after")
    def _check_labels(self) -> "Alphabet":
        if not self.labels:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"alphabet labels must be unique: {self.labels}")
        for label in self.labels:
            if not label or any(ch.isspace() for ch in label):
                raise ValueError(f"invalid symbol label {label!r}")
        return self

    def __hash__(self) -> int:
        return hash(self.labels)

    @classmethod
    def of(cls, *labels: str) -> "Alphabet":
        return cls(labels=labels)

    @classmethod
    def range(cls, size: int) -> "Alphabet":
        """Alphabet with labels "0", "1", ..., "size-1"."""
        return cls(labels=[str(i) for i in range(size)])

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DimensionError(f"symbol '{label}' is not in alphabet {list(self.labels)}") from None

    def subset(self, mask: Sequence[bool]) -> "Alphabet":
        return Alphabet(labels=[label for label, keep in zip(self.labels, mask) if keep])


def require_same(first: Alphabet, second: Alphabet, what: str) -> None:
    """Raise DimensionError unless both alphabets are identical."""
    if first.labels != second.labels:
        raise DimensionError(f"{what}: {list(first.labels)} != {list(second.labels)}")


class ProbVector(FrozenModel):
    """Probability mass function on a finite alphabet."""

    alphabet: Alphabet
    mass: np.ndarray

    @field_validator("mass", mode="before")
    @classmethod
    def _coerce_mass(cls, value: Any) -> np.ndarray:
        return _readonly_array([float(v) for v in value], 1, "mass")

    @model_validator(mode="after")
    def _check_mass(self) -> "ProbVector":
        if self.mass.shape != (self.alphabet.size,):
            raise InvalidDistributionError(
                f"mass has {self.mass.size} entries for an alphabet of size {self.alphabet.size}"
            )
        if np.any(self.mass < 0):
            raise InvalidDistributionError("probabilities must be nonnegative")
        if abs(self.mass.sum() - 1.0) > PROB_TOLERANCE:
            raise InvalidDistributionError(f"probabilities sum to {self.mass.sum()!r}, not 1")
        return self

    @classmethod
    def uniform(cls, alphabet: Alphabet) -> "ProbVector":
        return cls(alphabet=alphabet, mass=np.full(alphabet.size, 1.0 / alphabet.size))

    @classmethod
    def point_mass(cls, alphabet: Alphabet, label: str) -> "ProbVector":
        mass = np.zeros(alphabet.size)
        mass[alphabet.index(label)] = 1.0
        return cls(alphabet=alphabet, mass=mass)

    @classmethod
    def from_weights(cls, alphabet: Alphabet, weights: Sequence[Number]) -> "ProbVector":
        """Explicit renormalization of nonnegative weights."""
        exact = [Fraction(w) if isinstance(w, (int, Fraction)) else w for w in weights]
        total = sum(exact)
        if total <= 0 or any(w < 0 for w in exact):
            raise InvalidDistributionError("weights must be nonnegative with positive total")
        return cls(alphabet=alphabet, mass=[float(w / total) for w in exact])

    @property
    def support(self) -> np.ndarray:
        return self.mass > 0

    @property
    def has_full_support(self) -> bool:
        return bool(np.all(self.support))

    def probability(self, label: str) -> float:
        return float(self.mass[self.alphabet.index(label)])


class Channel(FrozenModel):
    """Column-stochastic matrix; entry [x, s] is P(x | s)."""

    input: Alphabet
    output: Alphabet
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _coerce_matrix(cls, value: Any) -> np.ndarray:
        return _readonly_array(value, 2, "matrix")

    @model_validator(mode="after")
    def _check_matrix(self) -> "Channel":
        expected = (self.output.size, self.input.size)
        if self.matrix.shape != expected:
            raise DimensionError(f"channel matrix has shape {self.matrix.shape}, expected {expected}")
        if np.any(self.matrix < 0):
            raise InvalidDistributionError("channel entries must be nonnegative")
        sums = self.matrix.sum(axis=0)
        worst = int(np.argmax(np.abs(sums - 1.0)))
        if abs(sums[worst] - 1.0) > PROB_TOLERANCE:
            raise InvalidDistributionError(
                f"column '{self.input.labels[worst]}' sums to {sums[worst]!r}, not 1"
            )
        return self

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "Channel":
        return cls(input=alphabet, output=alphabet, matrix=np.eye(alphabet.size))

    @classmethod
    def constant(cls, input: Alphabet, distribution: ProbVector) -> "Channel":
        matrix = np.repeat(distribution.mass[:, None], input.size, axis=1)
        return cls(input=input, output=distribution.alphabet, matrix=matrix)

    def column(self, label: str) -> np.ndarray:
        return self.matrix[:, self.input.index(label)]

    def allclose(self, other: "Channel", atol: float = 1e-12) -> bool:
        return (
            self.input == other.input
            and self.output == other.output
            and bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))
        )


class CoarseGraining(FrozenModel):
    """Deterministic surjective map f from the S alphabet onto a smaller alphabet."""

    domain: Alphabet
    codomain: Alphabet
    assignment: Tuple[int, ...] = Field(..., description="codomain index of every domain symbol")

    @model_validator(mode="after")
    def _check_assignment(self) -> "CoarseGraining":
        if len(self.assignment) != self.domain.size:
            raise ValueError("every domain symbol needs exactly one image")
        if any(t < 0 or t >= self.codomain.size for t in self.assignment):
            raise ValueError("assignment refers to a symbol outside the codomain")
        missing = set(range(self.codomain.size)) - set(self.assignment)
        if missing:
            names = [self.codomain.labels[t] for t in sorted(missing)]
            raise ValueError(f"codomain symbols without preimage: {names}")
        return self

    @classmethod
    def from_mapping(
        cls, domain: Alphabet, mapping: Mapping[str, str], codomain: Optional[Alphabet] = None
    ) -> "CoarseGraining":
        images = [str(mapping[label]) for label in domain.labels]
        if codomain is None:
            codomain = Alphabet(labels=list(dict.fromkeys(images)))
        return cls(domain=domain, codomain=codomain, assignment=[codomain.index(t) for t in images])

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "CoarseGraining":
        return cls(domain=alphabet, codomain=alphabet, assignment=tuple(range(alphabet.size)))

    def image(self, label: str) -> str:
        return self.codomain.labels[self.assignment[self.domain.index(label)]]

    def preimage(self, label: str) -> List[str]:
        t = self.codomain.index(label)
        return [s for s, image in zip(self.domain.labels, self.assignment) if image == t]

    @property
    def indicator(self) -> np.ndarray:
        """0/1 matrix [t, s] equal to 1 iff f(s) = t."""
        matrix = np.zeros((self.codomain.size, self.domain.size))
        matrix[list(self.assignment), range(self.domain.size)] = 1.0
        return matrix

    def as_channel(self) -> Channel:
        """The deterministic channel f(S) <- S."""
        return Channel(input=self.domain, output=self.codomain, matrix=self.indicator)


class JointDistribution(FrozenModel):
    """Joint mass function of (S, X1, X2); mass[s, x1, x2]."""

    s: Alphabet
    x1: Alphabet
    x2: Alphabet
    mass: np.ndarray

    @field_validator("mass", mode="before")
    @classmethod
    def _coerce_mass(cls, value: Any) -> np.ndarray:
        return _readonly_array(value, 3, "mass")

    @model_validator(mode="after")
    def _check_mass(self) -> "JointDistribution":
        expected = (self.s.size, self.x1.size, self.x2.size)
        if self.mass.shape != expected:
            raise DimensionError(f"joint mass has shape {self.mass.shape}, expected {expected}")
        if np.any(self.mass < 0):
            raise InvalidDistributionError("joint masses must be nonnegative")
        if abs(self.mass.sum() - 1.0) > PROB_TOLERANCE:
            raise InvalidDistributionError(f"joint masses sum to {self.mass.sum()!r}, not 1")
        return self

    @classmethod
    def from_rows(
        cls,
        s: Alphabet,
        x1: Alphabet,
        x2: Alphabet,
        rows: Sequence[Tuple[str, str, str, Number]],
    ) -> "JointDistribution":
        """Build from (s, x1, x2, mass) rows; exact rationals are converted once."""
        exact: Dict[Tuple[int, int, int], Any] = {}
        for s_label, x1_label, x2_label, value in rows:
            key = (s.index(s_label), x1.index(x1_label), x2.index(x2_label))
            if key in exact:
                raise InvalidDistributionError(f"duplicate row for {(s_label, x1_label, x2_label)}")
            exact[key] = value
        mass = np.zeros((s.size, x1.size, x2.size))
        for key, value in exact.items():
            mass[key] = float(value)
        return cls(s=s, x1=x1, x2=x2, mass=mass)

    @classmethod
    def from_channels(cls, prior: ProbVector, first: Channel, second: Channel) -> "JointDistribution":
        """Conditionally independent lift P(s) first(x1|s) second(x2|s)."""
        require_same(prior.alphabet, first.input, "prior and first channel input")
        require_same(prior.alphabet, second.input, "prior and second channel input")
        mass = np.einsum("s,as,bs->sab", prior.mass, first.matrix, second.matrix)
        return cls(s=prior.alphabet, x1=first.output, x2=second.output, mass=mass)

    def observer_alphabet(self, which: Observer) -> Alphabet:
        return self.x1 if which is Observer.X1 else self.x2

    def marginal_s(self) -> ProbVector:
        return ProbVector(alphabet=self.s, mass=self.mass.sum(axis=(1, 2)))

    def marginal(self, which: Observer) -> ProbVector:
        axis = (0, 2) if which is Observer.X1 else (0, 1)
        return ProbVector(alphabet=self.observer_alphabet(which), mass=self.mass.sum(axis=axis))

    def pair(self, which: Observer) -> np.ndarray:
        """Matrix [s, x] of the (S, X) pair marginal."""
        return self.mass.sum(axis=2) if which is Observer.X1 else self.mass.sum(axis=1)

    def outputs_pair(self) -> np.ndarray:
        """Matrix [x1, x2] of the (X1, X2) marginal."""
        return self.mass.sum(axis=0)

    def swapped(self) -> "JointDistribution":
        return JointDistribution(s=self.s, x1=self.x2, x2=self.x1, mass=self.mass.transpose(0, 2, 1))

    def restricted_to_support(self) -> "JointDistribution":
        keep = self.mass.sum(axis=(1, 2)) > 0
        return JointDistribution(s=self.s.subset(keep), x1=self.x1, x2=self.x2, mass=self.mass[keep])

    def coarse_grained(self, f: "CoarseGraining") -> "JointDistribution":
        """Joint of (f(S), X1, X2)."""
        require_same(f.domain, self.s, "coarse-graining domain and S alphabet")
        mass = np.einsum("ts,sab->tab", f.indicator, self.mass)
        return JointDistribution(s=f.codomain, x1=self.x1, x2=self.x2, mass=mass)

    def rows(self) -> Iterator[Tuple[str, str, str, float]]:
        """Nonzero (s, x1, x2, mass) rows in alphabet order."""
        for i, j, k in zip(*np.nonzero(self.mass)):
            yield self.s.labels[i], self.x1.labels[j], self.x2.labels[k], float(self.mass[i, j, k])


class UtilityTable(FrozenModel):
    """Payoff u(s, a) of a decision problem; payoff[s, a]."""

    states: Alphabet
    actions: Alphabet
    payoff: np.ndarray

    @field_validator("payoff", mode="before")
    @classmethod
    def _coerce_payoff(cls, value: Any) -> np.ndarray:
        return _readonly_array(value, 2, "payoff")

    @model_validator(mode="after")
    def _check_payoff(self) -> "UtilityTable":
        expected = (self.states.size, self.actions.size)
        if self.payoff.shape != expected:
            raise DimensionError(f"payoff has shape {self.payoff.shape}, expected {expected}")
        return self

    @classmethod
    def from_entries(
        cls, states: Alphabet, actions: Alphabet, entries: Mapping[Tuple[str, str], Number]
    ) -> "UtilityTable":
        """Build from a total {(s, a): u} map."""
        payoff = np.zeros((states.size, actions.size))
        seen = set()
        for (s_label, a_label), value in entries.items():
            key = (states.index(s_label), actions.index(a_label))
            payoff[key] = float(value)
            seen.add(key)
        if len(seen) != states.size * actions.size:
            missing = [
                (s_label, a_label)
                for i, s_label in enumerate(states.labels)
                for j, a_label in enumerate(actions.labels)
                if (i, j) not in seen
            ]
            raise InvalidDistributionError(f"utility table is not total; missing {missing}")
        return cls(states=states, actions=actions, payoff=payoff)

    def value(self, state: str, action: str) -> float:
        return float(self.payoff[self.states.index(state), self.actions.index(action)])

    def reordered(self, states: Alphabet) -> "UtilityTable":
        """Same table with its state rows listed in the order of ``states``."""
        if sorted(states.labels) != sorted(self.states.labels):
            raise DimensionError(
                f"utility states {list(self.states.labels)} do not match {list(states.labels)}"
            )
        order = [self.states.index(label) for label in states.labels]
        return UtilityTable(states=states, actions=self.actions, payoff=self.payoff[order])
