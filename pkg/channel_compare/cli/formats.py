"""Plain-text file formats for channels, priors, joint distributions and utility tables.

Every format starts with a keyword line; ``#`` lines and blank lines are ignored.
Numbers are written in shortest round-trip form and may be read as decimals or
as fractions such as ``1/8``.
"""

import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from ..core.exceptions import ChannelCompareError, FormatError
from ..core.models import Alphabet, Channel, JointDistribution, ProbVector, UtilityTable
from ..scenarios.bundle import ScenarioBundle
from ..utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]
Line = Tuple[int, List[str]]

AXES = ("s", "x1", "x2")


def format_number(value: float) -> str:
    return repr(float(value))


def _number(token: str, line: int, path: Optional[str]) -> float:
    try:
        if "/" in token:
            return float(Fraction(token))
        return float(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"'{token}' is not a number", line=line, path=path) from None


def _data_lines(text: str) -> List[Line]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((number, stripped.split()))
    return lines


class _Reader:
    """Cursor over the data lines of one file."""

    def __init__(self, text: str, path: Optional[str]):
        self.lines = _data_lines(text)
        self.position = 0
        self.path = path

    def error(self, message: str, line: Optional[int] = None) -> FormatError:
        if line is None:
            line = self.lines[min(self.position, len(self.lines) - 1)][0] if self.lines else None
        return FormatError(message, line=line, path=self.path)

    def next(self, what: str) -> Line:
        if self.position >= len(self.lines):
            raise self.error(f"unexpected end of file, expected {what}")
        line = self.lines[self.position]
        self.position += 1
        return line

    def peek(self) -> Optional[Line]:
        return self.lines[self.position] if self.position < len(self.lines) else None

    def keyword(self, expected: str, arity: int) -> Tuple[int, List[str]]:
        number, tokens = self.next(f"'{expected}' header")
        if tokens[0] != expected:
            raise self.error(f"expected '{expected}', found '{tokens[0]}'", number)
        if len(tokens) != arity + 1:
            raise self.error(f"'{expected}' takes {arity} argument(s)", number)
        return number, tokens[1:]

    def count(self, token: str, number: int) -> int:
        if not re.fullmatch(r"[1-9][0-9]*", token):
            raise self.error(f"'{token}' is not a positive count", number)
        return int(token)

    def labels(self, size: int, what: str) -> Alphabet:
        number, tokens = self.next(f"{what} labels")
        if len(tokens) != size:
            raise self.error(f"expected {size} {what} labels, found {len(tokens)}", number)
        if len(set(tokens)) != size:
            raise self.error(f"duplicate {what} labels", number)
        return Alphabet(labels=tokens)

    def numbers(self, size: int, what: str) -> np.ndarray:
        number, tokens = self.next(what)
        if len(tokens) != size:
            raise self.error(f"expected {size} numbers in {what}, found {len(tokens)}", number)
        return np.array([_number(t, number, self.path) for t in tokens])

    def finish(self) -> None:
        if self.position < len(self.lines):
            number, tokens = self.lines[self.position]
            raise self.error(f"unexpected trailing content '{' '.join(tokens)}'", number)


def _build(reader: _Reader, factory, line: int):
    try:
        return factory()
    except ValidationError as e:
        raise reader.error(e.errors()[0]["msg"], line) from e
    except ChannelCompareError as e:
        raise reader.error(str(e), line) from e


def parse_channel(text: str, path: Optional[str] = None) -> Channel:
    reader = _Reader(text, path)
    number, args = reader.keyword("channel", 2)
    n_inputs, n_outputs = reader.count(args[0], number), reader.count(args[1], number)
    inputs = reader.labels(n_inputs, "input")
    outputs = reader.labels(n_outputs, "output")
    rows = [reader.numbers(n_inputs, f"row for output '{label}'") for label in outputs.labels]
    reader.finish()
    return _build(reader, lambda: Channel(input=inputs, output=outputs, matrix=np.vstack(rows)), number)


def format_channel(kappa: Channel) -> str:
    lines = [
        f"channel {kappa.input.size} {kappa.output.size}",
        " ".join(kappa.input.labels),
        " ".join(kappa.output.labels),
    ]
    lines += [" ".join(format_number(v) for v in row) for row in kappa.matrix]
    return "\n".join(lines) + "\n"


def parse_prior(text: str, path: Optional[str] = None) -> ProbVector:
    reader = _Reader(text, path)
    number, args = reader.keyword("prior", 1)
    size = reader.count(args[0], number)
    alphabet = reader.labels(size, "symbol")
    mass = reader.numbers(size, "probabilities")
    reader.finish()
    return _build(reader, lambda: ProbVector(alphabet=alphabet, mass=mass), number)


def format_prior(prior: ProbVector) -> str:
    lines = [
        f"prior {prior.alphabet.size}",
        " ".join(prior.alphabet.labels),
        " ".join(format_number(v) for v in prior.mass),
    ]
    return "\n".join(lines) + "\n"


def parse_joint(text: str, path: Optional[str] = None) -> JointDistribution:
    reader = _Reader(text, path)
    number, _ = reader.keyword("joint", 0)
    declared: Dict[str, Alphabet] = {}
    while True:
        peeked = reader.peek()
        if peeked is None or peeked[1][0] != "alphabet":
            break
        line, tokens = reader.next("alphabet")
        if len(tokens) < 3 or tokens[1] not in AXES:
            raise reader.error("alphabet lines read 'alphabet <s|x1|x2> <labels...>'", line)
        if tokens[1] in declared:
            raise reader.error(f"alphabet for {tokens[1]} declared twice", line)
        if len(set(tokens[2:])) != len(tokens) - 2:
            raise reader.error(f"duplicate labels in alphabet for {tokens[1]}", line)
        declared[tokens[1]] = Alphabet(labels=tokens[2:])

    line, header = reader.next("header 's x1 x2 p'")
    if header != ["s", "x1", "x2", "p"]:
        raise reader.error("header must read 's x1 x2 p'", line)

    rows = []
    seen: Dict[str, List[str]] = {axis: [] for axis in AXES}
    while reader.peek() is not None:
        line, tokens = reader.next("row")
        if len(tokens) != 4:
            raise reader.error(f"rows have 4 fields, found {len(tokens)}", line)
        labels = tokens[:3]
        for axis, label in zip(AXES, labels):
            if axis in declared and label not in declared[axis].labels:
                raise reader.error(f"symbol '{label}' is not in the declared {axis} alphabet", line)
            if label not in seen[axis]:
                seen[axis].append(label)
        rows.append((*labels, _number(tokens[3], line, path)))
    if not rows:
        raise reader.error("joint distribution has no rows", number)

    alphabets = {axis: declared.get(axis) or Alphabet(labels=seen[axis]) for axis in AXES}
    return _build(
        reader,
        lambda: JointDistribution.from_rows(alphabets["s"], alphabets["x1"], alphabets["x2"], rows),
        number,
    )


def format_joint(j: JointDistribution) -> str:
    lines = ["joint"]
    for axis, alphabet in zip(AXES, (j.s, j.x1, j.x2)):
        lines.append(f"alphabet {axis} " + " ".join(alphabet.labels))
    lines.append("s x1 x2 p")
    lines += [f"{s} {x1} {x2} {format_number(p)}" for s, x1, x2, p in j.rows()]
    return "\n".join(lines) + "\n"


def parse_utility(text: str, path: Optional[str] = None) -> UtilityTable:
    reader = _Reader(text, path)
    number, _ = reader.keyword("utility", 0)
    line, header = reader.next("header 's a u'")
    if header != ["s", "a", "u"]:
        raise reader.error("header must read 's a u'", line)

    states: List[str] = []
    actions: List[str] = []
    entries: Dict[Tuple[str, str], float] = {}
    while reader.peek() is not None:
        line, tokens = reader.next("row")
        if len(tokens) != 3:
            raise reader.error(f"rows have 3 fields, found {len(tokens)}", line)
        state, action = tokens[0], tokens[1]
        if (state, action) in entries:
            raise reader.error(f"duplicate entry for state '{state}', action '{action}'", line)
        entries[(state, action)] = _number(tokens[2], line, path)
        if state not in states:
            states.append(state)
        if action not in actions:
            actions.append(action)
    if not entries:
        raise reader.error("utility table has no rows", number)

    return _build(
        reader,
        lambda: UtilityTable.from_entries(Alphabet(labels=states), Alphabet(labels=actions), entries),
        number,
    )


def format_utility(u: UtilityTable) -> str:
    lines = ["utility", "s a u"]
    for i, state in enumerate(u.states.labels):
        for k, action in enumerate(u.actions.labels):
            lines.append(f"{state} {action} {format_number(u.payoff[i, k])}")
    return "\n".join(lines) + "\n"


def _read(path: PathLike) -> Tuple[str, str]:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8"), str(path)
    except OSError as e:
        raise FormatError(f"cannot read file: {e.strerror}", path=str(path)) from e


def read_channel(path: PathLike) -> Channel:
    return parse_channel(*_read(path))


def read_prior(path: PathLike) -> ProbVector:
    return parse_prior(*_read(path))


def read_joint(path: PathLike) -> JointDistribution:
    return parse_joint(*_read(path))


def read_utility(path: PathLike) -> UtilityTable:
    return parse_utility(*_read(path))


def file_stem(name: str) -> str:
    """File-system friendly version of a bundle entry name such as ``x1<-f(s)``."""
    stem = name.replace("<-", "_from_")
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", stem).strip("_")


def write_bundle(bundle: ScenarioBundle, directory: PathLike) -> List[Path]:
    """Write every table of ``bundle`` into ``directory``; returns the written paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    outputs: List[Tuple[str, str]] = []
    if bundle.joint is not None:
        outputs.append(("joint.joint", format_joint(bundle.joint)))
    if bundle.prior is not None:
        outputs.append(("prior.prior", format_prior(bundle.prior)))
    outputs += [(f"{file_stem(name)}.channel", format_channel(k)) for name, k in bundle.channels.items()]
    outputs += [(f"{file_stem(name)}.utility", format_utility(u)) for name, u in bundle.utilities.items()]

    written = []
    for filename, content in outputs:
        target = directory / filename
        target.write_text(content, encoding="utf-8")
        written.append(target)
    logger.info(f"wrote {len(written)} file(s) for scenario '{bundle.name}' to {directory}")
    return written
