"""Tests for the built-in scenarios, the AND families and the scenario registry."""

from fractions import Fraction
from math import log2

import numpy as np
import pytest

from channel_compare.core.exceptions import ScenarioDomainError
from channel_compare.core.models import Observer
from channel_compare.core.probability import conditional_entropy_profile
from channel_compare.scenarios.bundle import ExpectedValue, Provenance, ScenarioBundle
from channel_compare.scenarios.families import family_and_deterministic, family_and_grid
from channel_compare.scenarios.library import and_deterministic_joint, and_joint
from channel_compare.scenarios.registry import available_scenarios, parse_rational, scenario_by_name
from channel_compare.scenarios.verification import (
    check,
    coarse_channel_difference,
    conditional_independence_given_class,
    outputs_information,
    recompute,
    verify_bundle,
)


class TestNamedScenarios:
    @pytest.mark.parametrize("name", ["pregarbling", "and", "and-deterministic"])
    def test_every_expected_value_is_reproduced(self, name):
        # Arrange
        bundle = scenario_by_name(name)

        # Act
        results = verify_bundle(bundle)

        # Assert
        assert results
        assert [r.expected.label for r in results if not r.passed] == []

    def test_pregarbling_second_channel_is_first_after_swap(self, pregarbling):
        swapped = pregarbling.channel("kappa1").matrix @ pregarbling.channel("swap").matrix
        assert np.allclose(swapped, pregarbling.channel("kappa2").matrix)

    def test_and_coarse_channel_column(self, and_example):
        assert np.allclose(and_example.channel("x1<-f(s)").column("0"), [2 / 3, 1 / 3])

    def test_and_posteriors(self, and_example):
        # Act
        profile = conditional_entropy_profile(and_example.joint, Observer.X2)

        # Assert
        assert profile["0"] == pytest.approx(2 - 0.75 * log2(3), abs=1e-12)
        assert profile["1"] == pytest.approx(1.0, abs=1e-12)

    def test_bundle_lookup_errors_name_the_entry(self, pregarbling):
        with pytest.raises(KeyError, match="kappa9"):
            pregarbling.channel("kappa9")
        with pytest.raises(KeyError, match="v"):
            pregarbling.utility("v")


class TestChecks:
    def test_failed_check_is_reported(self, pregarbling):
        # Arrange
        wrong = ExpectedValue(quantity="expected_utility", arguments=("kappa1", "u"), value=2.0)

        # Act
        result = check(pregarbling, wrong)

        # Assert
        assert not result.passed
        assert result.actual == pytest.approx(1.4)

    def test_string_quantities(self, pregarbling):
        expected = ExpectedValue(quantity="relation", arguments=("kappa1", "kappa2"), value="incomparable")
        assert check(pregarbling, expected).passed

    def test_unknown_quantity(self, pregarbling):
        with pytest.raises(ValueError, match="unknown quantity"):
            recompute(pregarbling, ExpectedValue(quantity="volume", value=0.0))

    def test_quantities_needing_a_joint(self, pregarbling):
        with pytest.raises(ValueError, match="no joint distribution"):
            recompute(pregarbling, ExpectedValue(quantity="outputs_information", value=0.0))

    def test_label(self):
        expected = ExpectedValue(quantity="garbling", arguments=("a", "b"), value="absent")
        assert expected.label == "garbling(a, b)"
        assert expected.provenance is Provenance.PUBLISHED

    def test_empty_bundle_verifies_trivially(self):
        assert verify_bundle(ScenarioBundle(name="empty")) == []


class TestAndGridFamily:
    def test_corner_is_the_and_example(self):
        assert family_and_grid(Fraction(-1, 8), Fraction(1, 16)).joint == and_joint()

    def test_string_parameters(self):
        assert family_and_grid("-1/8", "1/16").joint == and_joint()

    def test_corner_masses_are_exactly_zero(self):
        joint = family_and_grid(Fraction(1, 8), Fraction(-1, 16)).joint
        assert np.count_nonzero(joint.mass) == 5

    def test_structure_holds_inside(self):
        # Act
        bundle = family_and_grid(Fraction(1, 17), Fraction(-1, 40))

        # Assert
        assert outputs_information(bundle.joint) == pytest.approx(0.0, abs=1e-12)
        assert conditional_independence_given_class(
            bundle.joint, Observer.X1, bundle.coarse_graining
        ) == pytest.approx(0.0, abs=1e-12)
        assert all(r.passed for r in verify_bundle(bundle))

    def test_diagonal_makes_channels_equal(self):
        bundle = family_and_grid(Fraction(1, 16), Fraction(1, 32))
        assert np.allclose(bundle.joint.pair(Observer.X1), bundle.joint.pair(Observer.X2))

    @pytest.mark.parametrize("a, b", [(Fraction(1, 4), 0), (0, Fraction(1, 8)), (Fraction(-3, 16), 0)])
    def test_out_of_range(self, a, b):
        with pytest.raises(ScenarioDomainError) as caught:
            family_and_grid(a, b)
        assert caught.value.mass is not None


class TestAndDeterministicFamily:
    def test_third_third_is_the_deterministic_example(self):
        assert family_and_deterministic(Fraction(1, 3), Fraction(1, 3)).joint == and_deterministic_joint()

    def test_coarse_channels_agree_everywhere(self):
        for a, b in [(Fraction(1, 5), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 10)), (1, 0)]:
            bundle = family_and_deterministic(a, b)
            assert coarse_channel_difference(bundle.joint, bundle.coarse_graining) <= 1e-12

    def test_negative_last_mass(self):
        with pytest.raises(ScenarioDomainError, match="1 - a - b"):
            family_and_deterministic(Fraction(2, 3), Fraction(2, 3))

    @pytest.mark.parametrize("a, b", [(-1, Fraction(1, 2)), (0, 0)])
    def test_invalid_parameters(self, a, b):
        with pytest.raises(ScenarioDomainError):
            family_and_deterministic(a, b)


class TestRegistry:
    def test_family_names_are_parsed(self):
        # Act
        bundle = scenario_by_name("and-grid( -1/8 , 1/16 )")

        # Assert
        assert bundle.joint == and_joint()
        assert bundle.name == "and-grid(-1/8,1/16)"

    def test_decimal_parameters(self):
        assert scenario_by_name("and-det(0.25,0.5)").joint == family_and_deterministic("1/4", "1/2").joint

    def test_unknown_name_lists_alternatives(self):
        with pytest.raises(ScenarioDomainError, match="pregarbling"):
            scenario_by_name("xor")

    def test_bad_number(self):
        with pytest.raises(ScenarioDomainError, match="rational"):
            scenario_by_name("and-det(a,1/3)")

    def test_available(self):
        names = available_scenarios()
        assert names[:3] == ["pregarbling", "and", "and-deterministic"]
        assert "and-grid(a,b)" in names

    def test_parse_rational(self):
        assert parse_rational(" -1/8 ") == Fraction(-1, 8)
        assert parse_rational("0.25") == Fraction(1, 4)
        with pytest.raises(ScenarioDomainError):
            parse_rational("1/0")
