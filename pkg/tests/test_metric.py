import math

import numpy as np
import pytest

from discuniform.errors import InvalidInversiveDistanceError
from discuniform.fixtures import genus2_octagon, torus_one_vertex
from discuniform.metric import (
    apply_conformal_factor,
    edge_length,
    inversive_distance,
    lengths_at,
    validate_metric,
)


def test_inversive_distance_closed_form():
    assert inversive_distance(math.sqrt(6.0), 1.0, 1.0) == pytest.approx(2.0, abs=1e-12)
    # tangent circles sit exactly at the threshold
    assert inversive_distance(2.0, 1.0, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_inversive_distance_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(200):
        ri, rj = rng.uniform(0.1, 10.0, 2)
        inv = rng.uniform(1.0 + 1e-6, 10.0)
        length = edge_length(ri, rj, inv)
        assert inversive_distance(length, ri, rj) == pytest.approx(inv, rel=1e-12)


def test_edge_length_values():
    assert edge_length(1.0, 1.0, 2.0) == pytest.approx(math.sqrt(6.0), rel=1e-15)
    # degree-one homogeneity in the radii
    rng = np.random.default_rng(1)
    for _ in range(50):
        ri, rj = rng.uniform(0.1, 5.0, 2)
        inv = rng.uniform(1.1, 8.0)
        c = rng.uniform(-2.0, 2.0)
        scaled = edge_length(math.exp(c) * ri, math.exp(c) * rj, inv)
        assert scaled == pytest.approx(math.exp(c) * edge_length(ri, rj, inv), rel=1e-12)


def test_edge_length_rejects_tangent_circles():
    with pytest.raises(InvalidInversiveDistanceError):
        edge_length(1.0, 1.0, 1.0)


def test_lengths_at_equilateral():
    mesh, dm = genus2_octagon()
    np.testing.assert_allclose(lengths_at(mesh, dm), math.sqrt(6.0), rtol=1e-15)


def test_lengths_scale_with_common_factor():
    mesh, dm = genus2_octagon()
    base = lengths_at(mesh, dm)
    for c in (-1.0, 0.3, 2.0):
        scaled = apply_conformal_factor(dm, np.full(mesh.vertex_count, c))
        np.testing.assert_allclose(
            lengths_at(mesh, scaled), math.exp(c) * base, rtol=1e-12
        )


def test_lengths_agree_with_direct_transform():
    # derived radii route vs the direct length-transformation formula
    mesh, dm = genus2_octagon()
    rng = np.random.default_rng(2)
    base_lengths = lengths_at(mesh, dm)
    for _ in range(25):
        u = rng.uniform(-1.0, 1.0, mesh.vertex_count)
        moved = apply_conformal_factor(dm, u)
        derived = lengths_at(mesh, moved)
        for e in range(mesh.edge_count):
            i, j = mesh.edge_endpoints(e)
            ri, rj = dm.radii0[i], dm.radii0[j]
            direct_sq = (
                (math.exp(2 * u[i]) - math.exp(u[i] + u[j])) * ri * ri
                + (math.exp(2 * u[j]) - math.exp(u[i] + u[j])) * rj * rj
                + math.exp(u[i] + u[j]) * base_lengths[e] ** 2
            )
            assert derived[e] == pytest.approx(math.sqrt(direct_sq), rel=1e-12)


def test_apply_conformal_factor_round_trip():
    mesh, dm = genus2_octagon()
    du = np.array([0.75, -1.25])
    back = apply_conformal_factor(apply_conformal_factor(dm, du), -du)
    np.testing.assert_array_equal(back.u, dm.u)
    np.testing.assert_array_equal(back.radii0, dm.radii0)
    np.testing.assert_array_equal(back.inv, dm.inv)


def test_conformal_invariance_of_inv():
    # recomputing the separation invariant from moved lengths returns inv
    mesh, dm = torus_one_vertex()
    rng = np.random.default_rng(3)
    for _ in range(20):
        moved = apply_conformal_factor(dm, rng.uniform(-1.5, 1.5, mesh.vertex_count))
        lengths = lengths_at(mesh, moved)
        radii = moved.radii
        for e in range(mesh.edge_count):
            i, j = mesh.edge_endpoints(e)
            value = inversive_distance(lengths[e], radii[i], radii[j])
            assert value == pytest.approx(moved.inv[e], rel=1e-12)


def test_validate_metric_flags_bad_edges_and_faces():
    mesh, dm = genus2_octagon()
    assert validate_metric(mesh, dm).ok

    bad = dm.copy()
    bad.inv[3] = 0.5
    report = validate_metric(mesh, bad)
    assert not report.ok
    assert [e for e, _ in report.unseparated_edges] == [3]

    # inflate one edge far beyond the other two sides of its faces
    thin = dm.copy()
    thin.inv[0] = 1e6
    report = validate_metric(mesh, thin)
    assert not report.ok
    assert report.degenerate_faces
