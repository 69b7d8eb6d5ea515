"""Point, edge and experiment file formats."""
from __future__ import annotations

import csv
import io
import json

import numpy as np

from rghyper.geometry import Box, PointSample


def points_csv(points) -> str:
    """One row per point, columns ``x0 .. x{d-1}``; floats in shortest
    round-trip form."""
    pts = np.asarray(getattr(points, "points", points), dtype=np.float64)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{k}" for k in range(pts.shape[1])])
    for row in pts.tolist():
        w.writerow([repr(v) for v in row])
    return buf.getvalue()


def read_points_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty points file")
    header, body = rows[0], rows[1:]
    if header != [f"x{k}" for k in range(len(header))]:
        raise ValueError("points header must be x0, x1, ...")
    return np.array([[float(v) for v in r] for r in body], dtype=np.float64).reshape(-1, len(header))


def sample_to_dict(s: PointSample) -> dict:
    return {"mode": s.mode, "n": s.n, "seed": s.seed, "domain": s.domain.to_dict(),
            "points": s.points.tolist()}


def sample_from_dict(data: dict) -> PointSample:
    domain = Box.from_dict(data["domain"])
    pts = np.asarray(data["points"], dtype=np.float64).reshape(-1, domain.dim)
    return PointSample(pts, data.get("mode", "given"), data.get("n", len(pts)),
                       data.get("seed"), domain)


def edges_csv(graph) -> str:
    nodes, centers = graph.edges()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node", "center"])
    w.writerows(zip(nodes.tolist(), centers.tolist()))
    return buf.getvalue()


def read_points_file(path) -> tuple[np.ndarray, np.ndarray]:
    """Explicit nodes and centres from JSON: ``{"nodes": [[..]], "centers": [[..]]}``."""
    with open(path) as fh:
        data = json.load(fh)
    nodes = np.asarray(data.get("nodes", []), dtype=np.float64)
    centers = np.asarray(data.get("centers", []), dtype=np.float64)
    d = nodes.shape[1] if nodes.ndim == 2 and nodes.size else (
        centers.shape[1] if centers.ndim == 2 and centers.size else None)
    if d is None:
        raise ValueError("points file has no coordinates")
    return nodes.reshape(-1, d), centers.reshape(-1, d)
