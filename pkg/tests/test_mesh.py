import numpy as np
import pytest

from discuniform.errors import (
    DisconnectedError,
    FlipIllegalError,
    NonManifoldError,
    OpenBoundaryError,
)
from discuniform.fixtures import (
    genus2_octagon,
    icosahedron,
    sphere_football,
    sphere_quad_pillow,
    torus_one_vertex,
    torus_two_vertex,
)
from discuniform.mesh import build_mesh, euler_characteristic, flip_edge, vertex_star


def test_one_vertex_torus_counts():
    mesh, _ = torus_one_vertex()
    assert (mesh.vertex_count, mesh.edge_count, mesh.face_count) == (1, 3, 2)
    assert euler_characteristic(mesh) == 0


def test_genus2_counts():
    mesh, _ = genus2_octagon()
    assert (mesh.vertex_count, mesh.edge_count, mesh.face_count) == (2, 12, 8)
    assert euler_characteristic(mesh) == -2


def test_icosahedron_chi():
    mesh, _ = icosahedron()
    assert euler_characteristic(mesh) == 2


def test_two_vertex_torus_chi():
    mesh, _ = torus_two_vertex()
    assert euler_characteristic(mesh) == 0


def test_open_boundary_rejected():
    with pytest.raises(OpenBoundaryError):
        build_mesh([(0, 1, 2)], 3)


def test_duplicate_directed_edge_rejected():
    # two faces inducing the directed edge (0, 1) twice: not orientable as given
    with pytest.raises(NonManifoldError):
        build_mesh([(0, 1, 2), (0, 1, 3), (2, 1, 3), (0, 3, 2)], 4)


def test_disconnected_rejected():
    pillow = [(0, 1, 2), (2, 1, 0)]
    shifted = [(v + 3 for v in f) for f in pillow]
    faces = pillow + [tuple(f) for f in shifted]
    with pytest.raises(DisconnectedError):
        build_mesh(faces, 6)


def test_pinched_vertex_rejected():
    # two triangle pillows sharing only the vertex label 0
    faces = [(0, 1, 2), (2, 1, 0), (0, 3, 4), (4, 3, 0)]
    with pytest.raises((NonManifoldError, DisconnectedError)):
        build_mesh(faces, 5)


def test_vertex_star_multiplicities():
    mesh, _ = torus_one_vertex()
    assert len(vertex_star(mesh, 0)) == 6  # 2 faces x 3 corners

    mesh, _ = genus2_octagon()
    assert len(vertex_star(mesh, 0)) == 8
    assert len(vertex_star(mesh, 1)) == 16
    # corner counts over all vertices sum to 3|F|
    total = sum(len(vertex_star(mesh, v)) for v in range(mesh.vertex_count))
    assert total == 3 * mesh.face_count


def test_flip_square_diagonal():
    mesh, _ = sphere_quad_pillow()
    # the top diagonal {1, 2} sits between faces 0 and 1
    diag = next(
        e for e in range(mesh.edge_count) if sorted(mesh.edge_endpoints(e)) == [1, 2]
    )
    faces_before = set(mesh.edge_faces(diag))
    flip_edge(mesh, diag)
    mesh.check_invariants()
    assert sorted(mesh.edge_endpoints(diag)) == [0, 3]
    assert set(mesh.edge_faces(diag)) == faces_before
    assert euler_characteristic(mesh) == 2


def test_flip_preserves_counts_on_genus2():
    mesh, _ = genus2_octagon()
    spoke = 0  # edge 0 is a spoke (center-rim)
    assert sorted(mesh.edge_endpoints(spoke)) == [0, 1]
    flip_edge(mesh, spoke)
    mesh.check_invariants()
    assert euler_characteristic(mesh) == -2
    assert 3 * mesh.face_count == 2 * mesh.edge_count
    # flipped spoke now joins the two rim corners opposite it (a rim loop)
    assert sorted(mesh.edge_endpoints(spoke)) == [1, 1]


def test_flip_self_glued_edge_rejected():
    mesh, _ = sphere_football()
    bad = next(
        e
        for e in range(mesh.edge_count)
        if mesh.edge_faces(e)[0] == mesh.edge_faces(e)[1]
    )
    with pytest.raises(FlipIllegalError):
        flip_edge(mesh, bad)


def _canonical_combinatorics(mesh):
    """Edge endpoint pairs plus faces up to cyclic rotation.

    A double flip restores the surface but may reverse the flipped edge's
    half-edge directions, so bitwise array comparison is too strict.
    """
    edges = [tuple(sorted(mesh.edge_endpoints(e))) for e in range(mesh.edge_count)]
    faces = []
    for f in mesh.face_list():
        rotations = [f[i:] + f[:i] for i in range(3)]
        faces.append(min(rotations))
    return edges, sorted(faces)


def test_flip_involution_combinatorial():
    rng = np.random.default_rng(7)
    for builder in (torus_one_vertex, genus2_octagon):
        mesh, _ = builder()
        before = _canonical_combinatorics(mesh)
        for edge in list(range(mesh.edge_count)) + [
            int(e) for e in rng.integers(0, mesh.edge_count, 20)
        ]:
            flip_edge(mesh, edge)
            flip_edge(mesh, edge)
            mesh.check_invariants()
            assert _canonical_combinatorics(mesh) == before


def test_flips_keep_axioms_along_random_walk():
    rng = np.random.default_rng(11)
    mesh, _ = genus2_octagon()
    for edge in rng.integers(0, mesh.edge_count, 50):
        try:
            flip_edge(mesh, int(edge))
        except FlipIllegalError:
            continue
        mesh.check_invariants()
        assert euler_characteristic(mesh) == -2
