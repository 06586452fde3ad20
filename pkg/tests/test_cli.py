"""Tests for the channel-compare command line."""

import csv

import numpy as np
import pytest
from click.testing import CliRunner

from channel_compare.cli.formats import format_channel, format_joint, format_prior, format_utility
from channel_compare.cli.interface import EXIT_INCOMPARABLE, EXIT_INPUT_ERROR, EXIT_OK, cli
from channel_compare.core.models import Alphabet, JointDistribution
from channel_compare.scenarios.library import BINARY

from .conftest import bsc


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def files(tmp_path, pregarbling):
    """The pre-garbling scenario and two binary symmetric channels written to disk."""
    paths = {
        "kappa1": tmp_path / "kappa1.channel",
        "kappa2": tmp_path / "kappa2.channel",
        "prior": tmp_path / "uniform.prior",
        "u": tmp_path / "u.utility",
        "bsc1": tmp_path / "bsc1.channel",
        "bsc2": tmp_path / "bsc2.channel",
    }
    paths["kappa1"].write_text(format_channel(pregarbling.channel("kappa1")))
    paths["kappa2"].write_text(format_channel(pregarbling.channel("kappa2")))
    paths["prior"].write_text(format_prior(pregarbling.prior))
    paths["u"].write_text(format_utility(pregarbling.utility("u")))
    paths["bsc1"].write_text(format_channel(bsc(0.1)))
    paths["bsc2"].write_text(format_channel(bsc(0.2)))
    return {name: str(path) for name, path in paths.items()}


@pytest.fixture
def mixed_joint(tmp_path):
    """Joint whose unique information is not reached in a single Frank-Wolfe step."""
    rows = [("0", "0", "0", 0.4), ("0", "1", "1", 0.1), ("1", "0", "1", 0.3), ("1", "1", "0", 0.2)]
    path = tmp_path / "mixed.joint"
    path.write_text(format_joint(JointDistribution.from_rows(BINARY, BINARY, BINARY, rows)))
    return str(path)


class TestCompareCommand:
    def test_incomparable_pair(self, runner, files):
        # Act
        result = runner.invoke(cli, ["compare", files["kappa1"], files["kappa2"], "--prior", files["prior"]])

        # Assert
        assert result.exit_code == EXIT_INCOMPARABLE
        assert "relation: incomparable" in result.output
        assert "utility favoring A" in result.output
        assert "utility favoring B" in result.output

    def test_garbling_pair(self, runner, files):
        result = runner.invoke(cli, ["compare", files["bsc2"], files["bsc1"]])
        assert result.exit_code == EXIT_OK
        assert "relation: inferior" in result.output
        assert "witness: A = W . B" in result.output

    def test_prior_and_uniform_exclude_each_other(self, runner, files):
        result = runner.invoke(cli, ["compare", files["bsc1"], files["bsc2"], "--prior", files["prior"], "--uniform"])
        assert result.exit_code == 2

    def test_missing_file(self, runner, files, tmp_path):
        result = runner.invoke(cli, ["compare", files["bsc1"], str(tmp_path / "nowhere.channel")])
        assert result.exit_code == 2

    def test_noise_makes_the_copy_strictly_worse(self, runner, files):
        # Act
        result = runner.invoke(cli, ["compare", files["bsc1"], files["bsc1"], "--noise"])

        # Assert
        assert result.exit_code == EXIT_OK
        assert "symmetric noise 0.01" in result.output
        assert "relation: superior" in result.output
        assert "witness: B = W . A" in result.output

    def test_noise_level_from_settings(self, runner, files, tmp_path):
        config = tmp_path / "settings.yaml"
        config.write_text("noise_epsilon: 0.25\n")
        result = runner.invoke(cli, ["--config", str(config), "compare", files["bsc1"], files["bsc1"], "--noise"])
        assert result.exit_code == EXIT_OK
        assert "symmetric noise 0.25" in result.output

    def test_epsilon_flag_overrides_settings(self, runner, files):
        result = runner.invoke(cli, ["compare", files["bsc1"], files["bsc1"], "--noise", "--epsilon", "0.1"])
        assert "symmetric noise 0.1" in result.output


class TestDecideCommand:
    def test_pregarbling(self, runner, files):
        # Act
        result = runner.invoke(cli, ["decide", files["kappa1"], files["prior"], files["u"]])

        # Assert
        assert result.exit_code == EXIT_OK
        assert "expected utility: 1.4" in result.output

    def test_malformed_channel(self, runner, files, tmp_path):
        # Arrange
        broken = tmp_path / "broken.channel"
        broken.write_text("channel 2 2\n0 1\n0 1\n0.9 oops\n0.1 1\n")

        # Act
        result = runner.invoke(cli, ["decide", str(broken), files["prior"], files["u"]])

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "Error" in result.output

    def test_alphabet_mismatch(self, runner, files, tmp_path):
        ternary_prior = tmp_path / "ternary.prior"
        ternary_prior.write_text("prior 3\na b c\n0.2 0.3 0.5\n")
        result = runner.invoke(cli, ["decide", files["kappa1"], str(ternary_prior), files["u"]])
        assert result.exit_code == EXIT_INPUT_ERROR


class TestUICommand:
    def test_independent_observers(self, runner, tmp_path):
        # Arrange
        mass = np.einsum("i,j,k->ijk", [0.5, 0.5], [0.25, 0.75], [0.5, 0.5])
        joint = JointDistribution(s=Alphabet.range(2), x1=Alphabet.range(2), x2=Alphabet.range(2), mass=mass)
        path = tmp_path / "product.joint"
        path.write_text(format_joint(joint))

        # Act
        result = runner.invoke(cli, ["ui", str(path)])

        # Assert
        assert result.exit_code == EXIT_OK
        assert "UI(S;X1\\X2) = 0.000000" in result.output
        assert "UI(S;X2\\X1) = 0.000000" in result.output

    def test_single_direction(self, runner, tmp_path, and_example):
        path = tmp_path / "and.joint"
        path.write_text(format_joint(and_example.joint))
        result = runner.invoke(cli, ["ui", str(path), "--direction", "x1", "--method", "vanilla"])
        assert result.exit_code == EXIT_OK
        assert "UI(S;X1\\X2) = 0.197" in result.output
        assert "X2\\X1" not in result.output

    def test_iteration_cap_exit_code(self, runner, mixed_joint):
        result = runner.invoke(cli, ["ui", mixed_joint, "--tolerance", "1e-15", "--max-iterations", "1"])
        assert result.exit_code == 11
        assert "NOT converged" in result.output

    def test_oracle_value(self, runner, mixed_joint):
        # Act
        result = runner.invoke(cli, ["ui", mixed_joint, "--oracle", "--oracle-density", "40"])

        # Assert
        assert result.exit_code == EXIT_OK
        assert "oracle UI(S;X1\\X2) <=" in result.output
        assert "oracle UI(S;X2\\X1) <=" in result.output

    def test_oracle_density_from_settings(self, runner, tmp_path, mixed_joint):
        config = tmp_path / "settings.yaml"
        config.write_text("oracle_density: 20\n")
        result = runner.invoke(cli, ["--config", str(config), "ui", mixed_joint, "--direction", "x1", "--oracle"])
        assert result.exit_code == EXIT_OK
        assert "oracle UI(S;X1\\X2) <=" in result.output

    def test_oracle_skips_large_polytopes(self, runner, tmp_path):
        # Arrange
        ternary = Alphabet.range(3)
        joint = JointDistribution(s=ternary, x1=ternary, x2=ternary, mass=np.full((3, 3, 3), 1 / 27))
        path = tmp_path / "uniform.joint"
        path.write_text(format_joint(joint))

        # Act
        result = runner.invoke(cli, ["ui", str(path), "--direction", "x1", "--oracle"])

        # Assert
        assert result.exit_code == EXIT_OK
        assert "oracle skipped" in result.output


class TestCapacityCommands:
    def test_capacity(self, runner, files):
        result = runner.invoke(cli, ["capacity", files["bsc1"]])
        assert result.exit_code == EXIT_OK
        assert "capacity: 0.531004" in result.output

    def test_more_capable_refuted(self, runner, files):
        result = runner.invoke(cli, ["more-capable", files["bsc1"], files["bsc2"], "--grid", "10", "--samples", "0"])
        assert result.exit_code == EXIT_OK
        assert "refuted" in result.output

    def test_more_capable_unrefuted(self, runner, files):
        result = runner.invoke(cli, ["more-capable", files["bsc2"], files["bsc1"], "--grid", "10", "--samples", "20"])
        assert "unrefuted" in result.output


class TestExampleCommand:
    def test_pregarbling_passes(self, runner):
        # Act
        result = runner.invoke(cli, ["example", "--name", "pregarbling"])

        # Assert
        assert result.exit_code == EXIT_OK
        assert "PASS expected_utility(kappa1, u) = 1.4" in result.output
        assert "PUBLISHED" in result.output
        assert "FAIL" not in result.output

    def test_family_member(self, runner):
        result = runner.invoke(cli, ["example", "--name", "and-det(1/3,1/3)"])
        assert result.exit_code == EXIT_OK

    def test_write_tables(self, runner, tmp_path):
        result = runner.invoke(cli, ["example", "--name", "and", "--write", str(tmp_path / "out")])
        assert result.exit_code == EXIT_OK
        assert (tmp_path / "out" / "x1_from_f_s.channel").exists()

    def test_unknown_name(self, runner):
        result = runner.invoke(cli, ["example", "--name", "xor"])
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_family_out_of_domain(self, runner):
        result = runner.invoke(cli, ["example", "--name", "and-grid(1,0)"])
        assert result.exit_code == EXIT_INPUT_ERROR


class TestHeatmapCommand:
    def test_csv_file(self, runner, tmp_path):
        # Arrange
        out = tmp_path / "grid.csv"

        # Act
        result = runner.invoke(cli, ["heatmap", "--family", "and-det", "--resolution", "3", "--out", str(out)])

        # Assert
        assert result.exit_code == EXIT_OK
        with open(out, newline="") as stream:
            rows = list(csv.reader(stream))
        assert rows[0] == [
            "a",
            "b",
            "ui_x1_minus_x2",
            "ui_x2_minus_x1",
            "gap_x1",
            "gap_x2",
            "converged_x1",
            "converged_x2",
        ]
        assert [row[:2] for row in rows[1:]] == [
            ["0.0", "0.5"],
            ["0.0", "1.0"],
            ["0.5", "0.0"],
            ["0.5", "0.5"],
            ["1.0", "0.0"],
        ]

    def test_resolution_must_be_at_least_two(self, runner):
        result = runner.invoke(cli, ["heatmap", "--family", "and-grid", "--resolution", "1"])
        assert result.exit_code == 2


class TestSettings:
    def test_bad_yaml(self, runner, tmp_path):
        # Arrange
        config = tmp_path / "settings.yaml"
        config.write_text("ui_tolerance: [1e-7\n")

        # Act
        result = runner.invoke(cli, ["--config", str(config), "example", "--name", "pregarbling"])

        # Assert
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_unknown_key(self, runner, tmp_path):
        config = tmp_path / "settings.yaml"
        config.write_text("colour: red\n")
        result = runner.invoke(cli, ["--config", str(config), "example", "--name", "pregarbling"])
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_settings_supply_defaults(self, runner, tmp_path, mixed_joint):
        config = tmp_path / "settings.yaml"
        config.write_text("ui_max_iterations: 1\nui_tolerance: 1.0e-15\n")
        result = runner.invoke(cli, ["--config", str(config), "ui", mixed_joint, "--direction", "x1"])
        assert result.exit_code == 11
        assert "iterations 1" in result.output

    def test_log_level_choice(self, runner):
        result = runner.invoke(cli, ["--log-level", "loud", "example", "--name", "pregarbling"])
        assert result.exit_code == 2
