"""Oracle tests: frozen small optima plus dual-route agreement sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from layercloud.generate import gen_random_instance, random_layer_sizes
from layercloud.model import build_graph, contact_report, validate_graph, validate_representation
from layercloud.oracle import (
    GridSearchConfig,
    OracleCapError,
    brute_force_max_contacts,
    brute_force_min_gap,
    composition_min_gap,
    subset_max_contacts,
)


def fan_instance():
    return build_graph([[3], [1, 1, 1]], [[[0, 2]]])


def squeeze_instance():
    """Two unit rectangles below two width-3 rectangles; one contact must go."""
    return build_graph([[1, 1], [3, 3]], [[[0, 0], [0, 1]]])


class TestMaxContactsOracle:
    def test_fan_realizes_all_five(self):
        count, witness = brute_force_max_contacts(fan_instance())
        assert count == 5
        report = contact_report(fan_instance(), witness)
        assert len(report.realized) == 5

    def test_single_edge(self):
        g = build_graph([[1], [1]], [[[0, 0]]])
        count, _ = brute_force_max_contacts(g)
        assert count == 1

    def test_squeeze_loses_exactly_one(self):
        count, witness = brute_force_max_contacts(squeeze_instance())
        assert count == 4
        report = contact_report(squeeze_instance(), witness)
        assert len(report.realized) == 4
        assert not report.false_adjacencies

    def test_witness_is_valid_and_normalized(self):
        g = squeeze_instance()
        _, witness = brute_force_max_contacts(g)
        assert validate_representation(g, witness) == []
        assert min(witness.x.values()) == 0

    def test_unconstrained_variant_at_least_matches(self):
        g = squeeze_instance()
        valid_count, _ = brute_force_max_contacts(g)
        free_count, _ = brute_force_max_contacts(g, allow_false_adjacencies=True)
        assert free_count >= valid_count


class TestMinGapOracle:
    def test_fan_has_zero_gap_layout(self):
        gap, witness = brute_force_min_gap(fan_instance())
        assert gap == 0
        assert contact_report(fan_instance(), witness).gap_total == 0

    def test_single_vertex(self):
        gap, _ = brute_force_min_gap(build_graph([[1]]))
        assert gap == 0

    def test_witness_stays_valid(self):
        g = squeeze_instance()
        gap, witness = brute_force_min_gap(g)
        report = contact_report(g, witness)
        assert report.false_adjacencies == frozenset()
        assert report.gap_total == gap


class TestCaps:
    def test_too_many_rectangles_rejected(self):
        g = gen_random_instance(2, [6, 6], (1, 2), seed=1)
        with pytest.raises(OracleCapError) as err:
            brute_force_max_contacts(g, GridSearchConfig(max_rectangles=10))
        assert "12" in str(err.value)

    def test_fractional_widths_rejected(self):
        g = build_graph([["1/2"]])
        with pytest.raises(OracleCapError):
            brute_force_min_gap(g)


class TestGenerator:
    def test_seeded_instances_are_deterministic(self):
        a = gen_random_instance(3, [2, 3, 2], (1, 5), seed=7)
        b = gen_random_instance(3, [2, 3, 2], (1, 5), seed=7)
        assert a == b

    def test_generated_instances_validate(self):
        """1000 seeded instances across a size sweep, all structurally valid."""
        rng = random.Random(99)
        for seed in range(1000):
            layers = rng.randint(1, 6)
            sizes = random_layer_sizes(layers, 6 + seed % 30, rng)
            g = gen_random_instance(layers, sizes, (1, 5), seed=seed)
            assert validate_graph(g) == [], f"seed {seed} produced an invalid instance"

    def test_size_and_range_errors(self):
        with pytest.raises(ValueError):
            gen_random_instance(2, [1], (1, 5), seed=0)
        with pytest.raises(ValueError):
            gen_random_instance(1, [0], (1, 5), seed=0)
        with pytest.raises(ValueError):
            gen_random_instance(1, [1], (3, 2), seed=0)


class TestDualOracleAgreement:
    def test_max_contacts_routes_agree(self):
        rng = random.Random(5)
        for seed in range(40):
            layers = rng.randint(1, 3)
            sizes = random_layer_sizes(layers, 7, rng)
            g = gen_random_instance(layers, sizes, (1, 4), seed=seed)
            grid_count, _ = brute_force_max_contacts(g)
            subset_count, subset_witness = subset_max_contacts(g)
            assert grid_count == subset_count, f"seed {seed}: {grid_count} != {subset_count}"
            report = contact_report(g, subset_witness)
            assert len(report.realized) >= subset_count
            assert not report.false_adjacencies

    def test_min_gap_routes_agree(self):
        rng = random.Random(6)
        for seed in range(40):
            layers = rng.randint(1, 3)
            sizes = random_layer_sizes(layers, 7, rng)
            g = gen_random_instance(layers, sizes, (1, 4), seed=seed)
            grid_gap, _ = brute_force_min_gap(g)
            assert grid_gap == composition_min_gap(g), f"seed {seed}"
