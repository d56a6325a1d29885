"""JSON surface and result documents.

A surface file carries vertices (id, radius), oriented faces, and one
metric datum per edge (a length or an inversive distance).  Edge records
address mesh edges either by their two half-edge indices (half-edge
``3*f + c`` runs from corner ``c`` of face ``f``), which doubles as an
explicit gluing for surfaces whose face list alone is ambiguous, or by
endpoint pair plus a ``side`` rank among parallel edges in canonical edge
order.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .energy import EnergyReport
from .mesh import Mesh, build_mesh, euler_characteristic
from .metric import DecoratedMetric, inversive_distance
from .uniformize import UniformizeResult


class SurfaceFormatError(ValueError):
    """The document does not follow the surface-file schema."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SurfaceFormatError(message)


def load_surface(source) -> tuple[Mesh, DecoratedMetric]:
    """Build mesh and metric from a path, file object or parsed dict."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    elif hasattr(source, "read"):
        doc = json.load(source)
    else:
        doc = source
    _require(isinstance(doc, dict), "surface file must be a JSON object")
    for key in ("vertices", "faces", "edges"):
        _require(key in doc, f"missing '{key}' section")

    vertex_records = doc["vertices"]
    _require(
        isinstance(vertex_records, list) and vertex_records, "'vertices' must be a non-empty list"
    )
    n = len(vertex_records)
    radii0 = np.zeros(n)
    seen_ids = set()
    for record in vertex_records:
        _require(
            isinstance(record, dict) and "id" in record and "radius" in record,
            "vertex records need 'id' and 'radius'",
        )
        vid = record["id"]
        _require(isinstance(vid, int) and 0 <= vid < n, f"vertex id {vid} out of range")
        _require(vid not in seen_ids, f"duplicate vertex id {vid}")
        seen_ids.add(vid)
        radius = float(record["radius"])
        _require(radius > 0.0, f"vertex {vid}: radius must be positive")
        radii0[vid] = radius

    faces = doc["faces"]
    _require(isinstance(faces, list) and faces, "'faces' must be a non-empty list")
    for f in faces:
        _require(
            isinstance(f, list) and len(f) == 3 and all(isinstance(v, int) for v in f),
            "faces must be triples of vertex ids",
        )

    edge_records = doc["edges"]
    _require(isinstance(edge_records, list), "'edges' must be a list")
    with_halfedges = [r for r in edge_records if "halfedges" in r]
    _require(
        not with_halfedges or len(with_halfedges) == len(edge_records),
        "either every edge record carries 'halfedges' or none does",
    )

    twins = None
    if with_halfedges:
        twins = []
        for record in edge_records:
            pair = record["halfedges"]
            _require(
                isinstance(pair, list) and len(pair) == 2 and all(isinstance(h, int) for h in pair),
                "'halfedges' must be a pair of half-edge indices",
            )
            twins.append(tuple(pair))
    try:
        mesh = build_mesh(faces, n, twins=twins)
    except (ValueError, AssertionError) as exc:
        raise SurfaceFormatError(f"face list does not build a closed surface: {exc}") from exc

    inv = np.full(mesh.edge_count, np.nan)
    halfedge_to_edge = {h: int(mesh.edge_of[h]) for h in range(mesh.halfedge_count)}
    by_endpoints: dict[tuple[int, int], list[int]] = {}
    for e in range(mesh.edge_count):
        key = tuple(sorted(mesh.edge_endpoints(e)))
        by_endpoints.setdefault(key, []).append(e)

    for record in edge_records:
        _require(isinstance(record, dict), "edge records must be objects")
        if "halfedges" in record:
            h1, h2 = record["halfedges"]
            edge = halfedge_to_edge[h1]
            _require(
                halfedge_to_edge[h2] == edge,
                f"half-edges {h1}, {h2} are not a twin pair",
            )
        else:
            _require("v" in record, "edge records need 'v' when 'halfedges' is absent")
            key = tuple(sorted(int(v) for v in record["v"]))
            candidates = by_endpoints.get(key, [])
            _require(bool(candidates), f"no mesh edge joins vertices {key}")
            side = record.get("side")
            if side is None:
                _require(
                    len(candidates) == 1,
                    f"vertices {key} are joined by {len(candidates)} edges; 'side' is required",
                )
                side = 0
            _require(
                isinstance(side, int) and 0 <= side < len(candidates),
                f"'side' {side} out of range for vertices {key}",
            )
            edge = candidates[side]
        _require(np.isnan(inv[edge]), f"edge {edge} has more than one metric datum")

        has_length = "length" in record
        has_inv = "inversive_distance" in record
        _require(
            has_length != has_inv,
            "edge records need exactly one of 'length' or 'inversive_distance'",
        )
        if has_inv:
            inv[edge] = float(record["inversive_distance"])
        else:
            i, j = mesh.edge_endpoints(edge)
            inv[edge] = inversive_distance(float(record["length"]), radii0[i], radii0[j])

    missing = [e for e in range(mesh.edge_count) if np.isnan(inv[e])]
    _require(not missing, f"edges {missing} have no metric datum")

    return mesh, DecoratedMetric(radii0, inv, np.zeros(n))


def surface_to_dict(mesh: Mesh, metric: DecoratedMetric) -> dict:
    """Document for the current surface; gluing written out explicitly."""
    edges = []
    for e in range(mesh.edge_count):
        h, t = mesh.edge_halfedges(e)
        i, j = mesh.edge_endpoints(e)
        edges.append(
            {
                "halfedges": [h, t],
                "v": [i, j],
                "inversive_distance": float(metric.inv[e]),
            }
        )
    return {
        "vertices": [
            {"id": v, "radius": float(metric.radii0[v])} for v in range(mesh.vertex_count)
        ],
        "faces": [list(f) for f in mesh.face_list()],
        "edges": edges,
    }


def load_factor(path, vertex_count: int) -> np.ndarray:
    """Conformal factor from a bare JSON array or any object with a 'u' field."""
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    values = doc["u"] if isinstance(doc, dict) else doc
    _require(
        isinstance(values, list) and len(values) == vertex_count,
        f"factor file must hold {vertex_count} numbers",
    )
    return np.asarray([float(x) for x in values])


def _float_list(values) -> list:
    return [None if not np.isfinite(x) else float(x) for x in values]


def report_to_dict(
    report: EnergyReport, mesh: Mesh, metric: DecoratedMetric
) -> dict:
    """Result document for a single curvature evaluation."""
    total = float(np.sum(report.cell_areas))
    target = float(np.sum(report.defects)) / total
    residual = float(np.max(np.abs(report.defects - target * report.cell_areas)))
    return {
        "u": _float_list(metric.u),
        "faces": [list(f) for f in report.faces],
        "K": _float_list(report.curvatures),
        "W": _float_list(report.defects),
        "A": _float_list(report.cell_areas),
        "K_bar": target,
        "A_tot": float(report.total_area),
        "iterations": 0,
        "residual": residual,
        "flips": int(report.flips),
        "chi": euler_characteristic(mesh),
    }


def result_to_dict(result: UniformizeResult) -> dict:
    return {
        "u": _float_list(result.u),
        "faces": [list(f) for f in result.faces],
        "K": _float_list(result.curvatures),
        "W": _float_list(result.defects),
        "A": _float_list(result.cell_areas),
        "K_bar": float(result.constant_curvature),
        "A_tot": float(result.total_area),
        "iterations": int(result.iterations),
        "residual": float(result.residual),
        "flips": int(sum(result.flip_history)),
        "chi": int(result.chi),
    }


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2)
