"""Half-edge representation of a closed oriented triangulated surface.

Loops and parallel edges are first class: twins are paired by half-edge
identity, never by endpoint lookup, so one- and two-vertex triangulations
(whose Delaunay triangulations are necessarily non-simple) round-trip
through edge flips without ambiguity.

Indexing conventions:
  * face ``f`` of the input list owns half-edges ``3f, 3f+1, 3f+2`` at build
    time, with half-edge ``3f+c`` running from corner ``c`` to corner
    ``(c+1) % 3``;
  * edge ids are assigned in ascending order of their smaller half-edge
    index ("canonical edge order");
  * flips rewire ``next``/``origin``/``face`` but never ``twin``, so an edge
    keeps its id (and its two half-edges) while its endpoints change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DisconnectedError,
    FlipIllegalError,
    NonManifoldError,
    OpenBoundaryError,
)


@dataclass
class Mesh:
    """Mutable half-edge mesh of a closed oriented triangulated surface."""

    vertex_count: int
    origin: np.ndarray      # (H,) origin vertex of each half-edge
    twin: np.ndarray        # (H,) opposite half-edge, involution
    nxt: np.ndarray         # (H,) next half-edge along the face cycle
    face_of: np.ndarray     # (H,) face owning each half-edge
    face_anchor: np.ndarray  # (F,) one half-edge per face
    edge_of: np.ndarray     # (H,) edge id of each half-edge
    edge_anchor: np.ndarray  # (E,) one half-edge per edge

    @property
    def halfedge_count(self) -> int:
        return len(self.twin)

    @property
    def face_count(self) -> int:
        return len(self.face_anchor)

    @property
    def edge_count(self) -> int:
        return len(self.edge_anchor)

    def head(self, h: int) -> int:
        """Vertex the half-edge points to."""
        return int(self.origin[self.nxt[h]])

    def face_halfedges(self, f: int) -> tuple[int, int, int]:
        """The 3-cycle of face ``f`` starting from its anchor."""
        h0 = int(self.face_anchor[f])
        h1 = int(self.nxt[h0])
        return h0, h1, int(self.nxt[h1])

    def face_vertices(self, f: int) -> tuple[int, int, int]:
        h0, h1, h2 = self.face_halfedges(f)
        return int(self.origin[h0]), int(self.origin[h1]), int(self.origin[h2])

    def face_list(self) -> list[tuple[int, int, int]]:
        return [self.face_vertices(f) for f in range(self.face_count)]

    def edge_halfedges(self, e: int) -> tuple[int, int]:
        h = int(self.edge_anchor[e])
        return h, int(self.twin[h])

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        h, t = self.edge_halfedges(e)
        return int(self.origin[h]), int(self.origin[t])

    def edge_faces(self, e: int) -> tuple[int, int]:
        h, t = self.edge_halfedges(e)
        return int(self.face_of[h]), int(self.face_of[t])

    def copy(self) -> "Mesh":
        return Mesh(
            self.vertex_count,
            self.origin.copy(),
            self.twin.copy(),
            self.nxt.copy(),
            self.face_of.copy(),
            self.face_anchor.copy(),
            self.edge_of.copy(),
            self.edge_anchor.copy(),
        )

    def check_invariants(self) -> None:
        """Assert the half-edge axioms; cheap at the mesh sizes we target."""
        h_ids = np.arange(self.halfedge_count)
        assert (self.twin[self.twin] == h_ids).all(), "twin not an involution"
        assert (self.twin != h_ids).all(), "half-edge is its own twin"
        assert (self.nxt[self.nxt[self.nxt]] == h_ids).all(), "next^3 != id"
        assert (self.face_of[self.nxt] == self.face_of).all(), "face cycles broken"
        # a twin starts where this half-edge ends
        heads = self.origin[self.nxt]
        assert (self.origin[self.twin] == heads).all(), "twin origin mismatch"
        assert (self.edge_of[self.twin] == self.edge_of).all(), "edge ids differ across twins"
        assert 3 * self.face_count == 2 * self.edge_count
        assert self.face_count % 2 == 0


def _oriented_matching(tail: np.ndarray, head: np.ndarray) -> np.ndarray:
    """Pair half-edges so that (a->b) matches (b->a).

    Requires every directed edge to occur exactly once; duplicated directed
    edges mean the input is non-manifold or not consistently oriented, and
    in either case the pairing would be ambiguous.
    """
    directed: dict[tuple[int, int], int] = {}
    for h in range(len(tail)):
        key = (int(tail[h]), int(head[h]))
        if key in directed:
            raise NonManifoldError(
                f"directed edge {key} appears more than once; input is "
                "non-manifold or not consistently oriented (use explicit "
                "twin gluing for surfaces with repeated directed edges)"
            )
        directed[key] = h
    twin = np.full(len(tail), -1, dtype=np.int64)
    for (a, b), h in directed.items():
        opposite = directed.get((b, a))
        if opposite is None:
            raise OpenBoundaryError(f"edge {a}->{b} has no face on its other side")
        twin[h] = opposite
    return twin


def _validate_gluing(tail: np.ndarray, head: np.ndarray, twin: np.ndarray) -> None:
    n = len(tail)
    ids = np.arange(n)
    if twin.shape != (n,):
        raise NonManifoldError("twin table must pair every half-edge")
    if not ((twin >= 0) & (twin < n)).all():
        raise NonManifoldError("twin index out of range")
    if (twin == ids).any():
        raise NonManifoldError("a half-edge cannot be its own twin")
    if not (twin[twin] == ids).all():
        raise NonManifoldError("twin table is not an involution")
    if not ((tail[twin] == head) & (head[twin] == tail)).all():
        raise NonManifoldError("glued half-edges do not run in opposite directions")


def build_mesh(
    faces,
    vertex_count: int,
    twins=None,
) -> Mesh:
    """Build a closed oriented surface from a list of corner triples.

    ``twins`` optionally gives the gluing explicitly as a sequence of
    half-edge index pairs (half-edge ``3f+c`` runs from corner ``c`` of face
    ``f`` to the following corner).  Without it the gluing is recovered by
    oriented edge matching, which is only well defined when no directed
    vertex pair repeats.

    Raises NonManifoldError, OpenBoundaryError or DisconnectedError when the
    input is not a single closed oriented surface.
    """
    faces = [tuple(int(v) for v in f) for f in faces]
    if any(len(f) != 3 for f in faces):
        raise ValueError("faces must be triples of vertex ids")
    if not faces:
        raise ValueError("empty face list")
    n_faces = len(faces)
    n_half = 3 * n_faces

    tail = np.empty(n_half, dtype=np.int64)
    head = np.empty(n_half, dtype=np.int64)
    for f, (a, b, c) in enumerate(faces):
        tail[3 * f : 3 * f + 3] = (a, b, c)
        head[3 * f : 3 * f + 3] = (b, c, a)
    if tail.min() < 0 or tail.max() >= vertex_count:
        raise ValueError("vertex id out of range")

    if twins is None:
        twin = _oriented_matching(tail, head)
    else:
        twin = np.full(n_half, -1, dtype=np.int64)
        for h1, h2 in twins:
            twin[h1] = h2
            twin[h2] = h1
        if (twin < 0).any():
            raise OpenBoundaryError("twin gluing leaves unpaired half-edges")
        _validate_gluing(tail, head, twin)

    nxt = np.empty(n_half, dtype=np.int64)
    for f in range(n_faces):
        nxt[3 * f] = 3 * f + 1
        nxt[3 * f + 1] = 3 * f + 2
        nxt[3 * f + 2] = 3 * f

    # Vertex links: orbits of h -> nxt[twin[h]] sweep the out-going
    # half-edges around each vertex.  Every orbit must carry a single
    # vertex label and every label a single orbit.
    around = nxt[twin]
    seen = np.zeros(n_half, dtype=bool)
    label_of_orbit: dict[int, int] = {}
    for h0 in range(n_half):
        if seen[h0]:
            continue
        label = int(tail[h0])
        h = h0
        while not seen[h]:
            seen[h] = True
            if int(tail[h]) != label:
                raise NonManifoldError(
                    f"vertex labels {label} and {int(tail[h])} meet in one vertex link"
                )
            h = int(around[h])
        if label in label_of_orbit:
            raise NonManifoldError(f"vertex {label} has more than one link (pinched vertex)")
        label_of_orbit[label] = h0
    if set(label_of_orbit) != set(range(vertex_count)):
        raise ValueError("vertex ids must be exactly 0..vertex_count-1, each used once")

    # connectivity over the face adjacency graph
    face_seen = np.zeros(n_faces, dtype=bool)
    stack = [0]
    face_seen[0] = True
    while stack:
        f = stack.pop()
        for c in range(3):
            g = int(twin[3 * f + c]) // 3
            if not face_seen[g]:
                face_seen[g] = True
                stack.append(g)
    if not face_seen.all():
        raise DisconnectedError("face list is not connected")

    edge_of = np.full(n_half, -1, dtype=np.int64)
    edge_anchor = []
    for h in range(n_half):
        if edge_of[h] < 0:
            edge_of[h] = edge_of[twin[h]] = len(edge_anchor)
            edge_anchor.append(h)

    mesh = Mesh(
        vertex_count=vertex_count,
        origin=tail,
        twin=twin,
        nxt=nxt,
        face_of=np.repeat(np.arange(n_faces, dtype=np.int64), 3),
        face_anchor=np.arange(0, n_half, 3, dtype=np.int64),
        edge_of=edge_of,
        edge_anchor=np.asarray(edge_anchor, dtype=np.int64),
    )
    mesh.check_invariants()
    return mesh


def euler_characteristic(mesh: Mesh) -> int:
    chi = mesh.vertex_count - mesh.edge_count + mesh.face_count
    assert 2 * mesh.vertex_count - mesh.face_count == 2 * chi
    return chi


def flip_edge(mesh: Mesh, edge: int) -> None:
    """Replace ``edge`` by the opposite diagonal of its two-face quad.

    Combinatorial only; metric updates live in :mod:`discuniform.delaunay`.
    """
    h = int(mesh.edge_anchor[edge])
    t = int(mesh.twin[h])
    face_a = int(mesh.face_of[h])
    face_b = int(mesh.face_of[t])
    if face_a == face_b:
        raise FlipIllegalError(f"edge {edge} bounds face {face_a} on both sides")

    a1 = int(mesh.nxt[h])   # head(h) -> apex of face_a
    a2 = int(mesh.nxt[a1])  # apex of face_a -> origin(h)
    b1 = int(mesh.nxt[t])   # origin(h) -> apex of face_b
    b2 = int(mesh.nxt[b1])  # apex of face_b -> head(h)

    # new diagonal runs between the two apexes
    mesh.origin[h] = mesh.origin[b2]
    mesh.origin[t] = mesh.origin[a2]

    mesh.nxt[h] = a2
    mesh.nxt[a2] = b1
    mesh.nxt[b1] = h
    mesh.nxt[t] = b2
    mesh.nxt[b2] = a1
    mesh.nxt[a1] = t

    mesh.face_of[b1] = face_a
    mesh.face_of[a1] = face_b
    mesh.face_anchor[face_a] = h
    mesh.face_anchor[face_b] = t


def vertex_star(mesh: Mesh, vertex: int) -> list[tuple[int, int]]:
    """Corners incident to ``vertex``, with multiplicity.

    Returns ``(face, slot)`` pairs where ``slot`` indexes the corner within
    :meth:`Mesh.face_halfedges`; a face with a repeated vertex contributes
    that vertex once per occurrence.
    """
    corners = []
    for f in range(mesh.face_count):
        for slot, h in enumerate(mesh.face_halfedges(f)):
            if int(mesh.origin[h]) == vertex:
                corners.append((f, slot))
    return corners
