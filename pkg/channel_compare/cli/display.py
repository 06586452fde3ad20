"""Rich renderings of channels, verdicts and solver results."""

from typing import List, Optional

import numpy as np
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from ..core.models import Channel, Observer, ProbVector, UtilityTable
from ..decomposition.unique_information import UIResult
from ..orders.blackwell import GarblingVerdict, Relation, SeparatingProblem
from ..orders.capability import CapabilityVerdict, CapacityResult
from ..orders.decision import DecisionSolution
from ..scenarios.bundle import ScenarioBundle
from ..scenarios.verification import CheckResult

RELATION_STYLES = {
    Relation.INFERIOR: "yellow",
    Relation.SUPERIOR: "green",
    Relation.EQUIVALENT: "cyan",
    Relation.INCOMPARABLE: "magenta",
}


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def channel_table(kappa: Channel, title: Optional[str] = None) -> Table:
    """Rows are outputs, columns inputs, as in the file format."""
    table = Table(title=escape(title) if title else None, show_header=True, header_style="bold cyan")
    table.add_column("out \\ in", style="dim")
    for label in kappa.input.labels:
        table.add_column(escape(label), justify="right")
    for label, row in zip(kappa.output.labels, kappa.matrix):
        table.add_row(escape(label), *(_fmt(v) for v in row))
    return table


def utility_table(u: UtilityTable, title: Optional[str] = None) -> Table:
    table = Table(title=escape(title) if title else None, show_header=True, header_style="bold cyan")
    table.add_column("s \\ a", style="dim")
    for label in u.actions.labels:
        table.add_column(escape(label), justify="right")
    for label, row in zip(u.states.labels, u.payoff):
        table.add_row(escape(label), *(_fmt(v) for v in row))
    return table


def prior_line(prior: ProbVector) -> str:
    pairs = ", ".join(f"{label}: {_fmt(p)}" for label, p in zip(prior.alphabet.labels, prior.mass))
    return escape(f"prior ({pairs})")


def show_separating_problem(console: Console, problem: SeparatingProblem, heading: str) -> None:
    console.print(f"[bold]{escape(heading)}[/bold] {prior_line(problem.prior)}")
    console.print(utility_table(problem.utility))
    console.print(
        f"  favored channel: {problem.favored_utility:.12g}   "
        f"other channel: {problem.other_utility:.12g}   gap: {problem.gap:.12g}"
    )


def show_verdict(console: Console, verdict: GarblingVerdict) -> None:
    style = RELATION_STYLES[verdict.relation]
    console.print(f"relation: [bold {style}]{verdict.relation.value}[/bold {style}]")
    if verdict.witness_forward is not None:
        console.print("[bold]witness: A = W . B[/bold]")
        console.print(channel_table(verdict.witness_forward))
    if verdict.witness_backward is not None:
        console.print("[bold]witness: B = W . A[/bold]")
        console.print(channel_table(verdict.witness_backward))
    if verdict.problem_favoring_first is not None:
        show_separating_problem(console, verdict.problem_favoring_first, "utility favoring A")
    if verdict.problem_favoring_second is not None:
        show_separating_problem(console, verdict.problem_favoring_second, "utility favoring B")


def show_decision(console: Console, solution: DecisionSolution) -> None:
    table = Table(title="optimal decision rule", show_header=True, header_style="bold cyan")
    table.add_column("observation")
    table.add_column("action")
    for observation, action in solution.rule.items():
        table.add_row(escape(observation), escape(action))
    console.print(table)
    console.print(f"expected utility: {solution.expected_utility:.12g}")
    for observation in solution.ties:
        console.print(escape(f"note: tie at observation {observation}; the first maximizing action was chosen"))


def ui_line(result: UIResult) -> str:
    first, second = ("X1", "X2") if result.direction.value == "x1" else ("X2", "X1")
    status = "converged" if result.converged else "NOT converged"
    return (
        f"UI(S;{first}\\{second}) = {result.value:.6f}  gap {result.duality_gap:.1e}  "
        f"iterations {result.iterations}  {status}"
    )


def show_ui(console: Console, results: List[UIResult]) -> None:
    for result in results:
        style = "green" if result.converged else "yellow"
        console.print(escape(ui_line(result)), style=style)


def show_oracle(console: Console, direction: Observer, value: float) -> None:
    first, second = ("X1", "X2") if direction is Observer.X1 else ("X2", "X1")
    console.print(escape(f"oracle UI(S;{first}\\{second}) <= {value:.6f}"), style="dim")


def show_capacity(console: Console, result: CapacityResult) -> None:
    console.print(f"capacity: {result.capacity:.6f} ± {result.gap_bound:.1e} bits  ({result.iterations} iterations)")
    console.print(prior_line(result.optimal_prior))


def show_capability(console: Console, verdict: CapabilityVerdict) -> None:
    if verdict.refuted:
        console.print(
            f"[bold magenta]refuted[/bold magenta]: I(S;X2) < I(S;X1) by {verdict.margin:.6g} bits "
            f"({verdict.priors_tested} priors tested)"
        )
        if verdict.counterexample is not None:
            console.print(prior_line(verdict.counterexample))
    else:
        console.print(
            f"[bold green]unrefuted[/bold green]: no prior among {verdict.priors_tested} tested gives "
            f"I(S;X1) > I(S;X2); largest I1 - I2 = {verdict.margin:.3g}"
        )


def show_bundle(console: Console, bundle: ScenarioBundle, results: Optional[List[CheckResult]] = None) -> None:
    console.print(Panel.fit(f"[bold]{escape(bundle.name)}[/bold]\n[dim]{escape(bundle.description)}[/dim]"))
    if bundle.prior is not None:
        console.print(prior_line(bundle.prior))
    for name, kappa in bundle.channels.items():
        console.print(channel_table(kappa, name))
    for name, u in bundle.utilities.items():
        console.print(utility_table(u, f"utility {name}"))
    if bundle.joint is not None:
        table = Table(title="joint distribution", show_header=True, header_style="bold cyan")
        for column in ("s", "x1", "x2", "p"):
            table.add_column(column, justify="right")
        for s, x1, x2, p in bundle.joint.rows():
            table.add_row(escape(s), escape(x1), escape(x2), _fmt(p))
        console.print(table)
    for result in results or []:
        console.print(escape(check_line(result)), style="green" if result.passed else "red")


def check_line(result: CheckResult) -> str:
    expected = result.expected
    verdict = "PASS" if result.passed else "FAIL"
    if isinstance(result.actual, str):
        actual = result.actual
    else:
        actual = f"{result.actual:.12g}" if np.isfinite(result.actual) else str(result.actual)
    return f"{verdict} {expected.label} = {actual} (expected {expected.value}, {expected.provenance.value})"
