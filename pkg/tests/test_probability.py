"""Tests for entropies, mutual information and channel algebra."""

from math import log2

import numpy as np
import pytest

from channel_compare.core.exceptions import DimensionError, UndefinedColumnError
from channel_compare.core.models import Alphabet, Channel, JointDistribution, Observer, ProbVector
from channel_compare.core.probability import (
    channel_from_joint,
    compose,
    conditional_entropy_profile,
    conditional_mutual_information,
    entropy,
    joint_with_coarse_variable,
    kl_divergence,
    mutual_information,
    mutual_information_batch,
    mutual_information_from_pair,
    posterior_channel,
    push_prior,
)

from .conftest import bsc, random_channel


def h2(p: float) -> float:
    return -p * log2(p) - (1 - p) * log2(1 - p)


class TestEntropy:
    def test_uniform_entropy(self, ternary):
        assert entropy(ProbVector.uniform(ternary)) == pytest.approx(log2(3))

    def test_point_mass_has_zero_entropy(self, ternary):
        assert entropy(ProbVector.point_mass(ternary, "2")) == 0.0

    def test_kl_divergence_infinite_without_absolute_continuity(self):
        assert kl_divergence(np.array([0.5, 0.5]), np.array([1.0, 0.0])) == float("inf")

    def test_kl_divergence_of_equal_distributions(self):
        p = np.array([0.2, 0.3, 0.5])
        assert kl_divergence(p, p) == pytest.approx(0.0)

    def test_entropy_is_concave(self, rng, ternary):
        for _ in range(200):
            # Arrange
            p = ProbVector(alphabet=ternary, mass=rng.dirichlet(np.ones(3)))
            q = ProbVector(alphabet=ternary, mass=rng.dirichlet(np.ones(3)))
            t = rng.random()
            mixed = ProbVector(alphabet=ternary, mass=t * p.mass + (1 - t) * q.mass)

            # Act
            lhs = entropy(mixed)

            # Assert
            assert lhs >= t * entropy(p) + (1 - t) * entropy(q) - 1e-9


class TestMutualInformation:
    def test_bsc_uniform_input(self, binary):
        # Arrange
        kappa = bsc(0.1)

        # Act
        value = mutual_information(ProbVector.uniform(binary), kappa)

        # Assert
        assert value == pytest.approx(1 - h2(0.1), abs=1e-12)

    def test_constant_channel_carries_nothing(self, ternary, binary):
        kappa = Channel.constant(ternary, ProbVector(alphabet=binary, mass=[0.3, 0.7]))
        assert mutual_information(ProbVector.uniform(ternary), kappa) == pytest.approx(0.0, abs=1e-12)

    def test_batch_matches_single_evaluations(self, rng):
        # Arrange
        kappa = random_channel(rng, 3, 4)
        priors = rng.dirichlet(np.ones(3), size=20)

        # Act
        batch = mutual_information_batch(priors, kappa.matrix)

        # Assert
        for prior, value in zip(priors, batch):
            single = mutual_information(ProbVector(alphabet=kappa.input, mass=prior), kappa)
            assert value == pytest.approx(single, abs=1e-12)

    def test_pair_form_of_independent_variables(self):
        pair = np.outer([0.25, 0.75], [0.5, 0.5])
        assert mutual_information_from_pair(pair) == pytest.approx(0.0, abs=1e-12)

    def test_and_example_outputs_independent(self, and_example):
        assert mutual_information_from_pair(and_example.joint.outputs_pair()) == pytest.approx(0.0, abs=1e-12)

    def test_data_processing_inequality(self, rng):
        for _ in range(200):
            # Arrange
            kappa = random_channel(rng, 3, 3)
            lam = random_channel(rng, 3, 2)
            prior = ProbVector(alphabet=kappa.input, mass=rng.dirichlet(np.ones(3)))

            # Act
            processed = mutual_information(prior, compose(lam, kappa))

            # Assert
            assert processed <= mutual_information(prior, kappa) + 1e-9


class TestChannelAlgebra:
    def test_compose_bsc(self):
        # Act
        composed = compose(bsc(0.1), bsc(0.2))

        # Assert
        flip = 0.1 * 0.8 + 0.9 * 0.2
        assert composed.allclose(bsc(flip))

    def test_compose_absorbs_round_off_only(self, binary):
        # Arrange: columns of the first factor sum to 1 + 4e-10
        lhs = Channel(input=binary, output=binary, matrix=[[0.5 + 2e-10, 0.3 + 2e-10], [0.5 + 2e-10, 0.7 + 2e-10]])
        rhs = bsc(0.1)

        # Act
        composed = compose(lhs, rhs)

        # Assert
        assert np.allclose(composed.matrix.sum(axis=0), 1.0, rtol=0.0, atol=1e-15)
        assert np.max(np.abs(composed.matrix - lhs.matrix @ rhs.matrix)) <= 1e-9

    def test_compose_requires_matching_alphabets(self, binary, ternary):
        with pytest.raises(DimensionError):
            compose(Channel.identity(ternary), Channel.identity(binary))

    def test_push_prior(self, binary):
        pushed = push_prior(bsc(0.25), ProbVector(alphabet=binary, mass=[1.0, 0.0]))
        assert np.allclose(pushed.mass, [0.75, 0.25])

    def test_channel_from_joint_recovers_lift(self, rng):
        # Arrange
        first = random_channel(rng, 3, 2)
        second = random_channel(rng, 3, 3)
        prior = ProbVector(alphabet=first.input, mass=rng.dirichlet(np.ones(3)))
        joint = JointDistribution.from_channels(prior, first, second)

        # Act / Assert
        assert channel_from_joint(joint, Observer.X1).allclose(first, atol=1e-12)
        assert channel_from_joint(joint, Observer.X2).allclose(second, atol=1e-12)

    def test_zero_probability_state_is_undefined(self, ternary, binary):
        joint = JointDistribution.from_rows(ternary, binary, binary, [("0", "0", "0", 0.5), ("1", "1", "1", 0.5)])
        with pytest.raises(UndefinedColumnError) as info:
            channel_from_joint(joint, Observer.X1)
        assert info.value.symbol == "2"

    def test_coarse_conditioned_channels_of_and_example(self, and_example, and_f):
        # Act
        first = channel_from_joint(and_example.joint, Observer.X1, condition_on=and_f)
        second = channel_from_joint(and_example.joint, Observer.X2, condition_on=and_f)

        # Assert
        assert np.allclose(first.column("0"), [2 / 3, 1 / 3])
        assert np.allclose(first.column("1"), [0.0, 1.0])
        assert first.allclose(second)

    def test_posterior_of_and_example(self, and_example):
        posterior = posterior_channel(and_example.joint, Observer.X2)
        assert np.allclose(posterior.column("0"), [0.75, 0.25, 0.0])
        assert np.allclose(posterior.column("1"), [0.0, 0.5, 0.5])


class TestConditionalQuantities:
    def test_conditional_entropy_profile(self, and_example):
        # Act
        profile = conditional_entropy_profile(and_example.joint, Observer.X2)

        # Assert
        assert profile["0"] == pytest.approx(h2(0.25), abs=1e-12)
        assert profile["0"] == pytest.approx(0.811278, abs=1e-6)
        assert profile["1"] == pytest.approx(1.0, abs=1e-12)

    def test_x1_independent_of_s_given_class(self, and_example, and_f):
        joint = joint_with_coarse_variable(and_example.joint, Observer.X1, and_f)
        assert conditional_mutual_information(joint) == pytest.approx(0.0, abs=1e-12)

    def test_x2_not_independent_of_s_given_class(self, and_example, and_f):
        joint = joint_with_coarse_variable(and_example.joint, Observer.X2, and_f)
        assert conditional_mutual_information(joint) > 0.1

    def test_conditionally_independent_lift_has_no_synergy(self, rng):
        first = random_channel(rng, 2, 2)
        prior = ProbVector(alphabet=first.input, mass=[0.4, 0.6])
        joint = JointDistribution.from_channels(prior, first, first)
        # I(S; X1 | X2) is at most I(S; X1)
        assert conditional_mutual_information(joint) <= mutual_information(prior, first) + 1e-12

    def test_alphabet_mismatch_in_lift(self, binary, ternary):
        with pytest.raises(DimensionError):
            JointDistribution.from_channels(ProbVector.uniform(ternary), bsc(0.1), bsc(0.1))

    def test_labels_survive_channel_extraction(self):
        s = Alphabet.of("rain", "sun")
        kappa = Channel(input=s, output=Alphabet.of("wet", "dry"), matrix=[[0.9, 0.2], [0.1, 0.8]])
        joint = JointDistribution.from_channels(ProbVector.uniform(s), kappa, kappa)
        assert channel_from_joint(joint, Observer.X2).output.labels == ("wet", "dry")
