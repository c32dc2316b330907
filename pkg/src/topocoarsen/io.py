"""Edge-list / CSV ingestion and export of coarsening results."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .graph import AttributedData, WorkingGraph
from .pipeline import CoarseningResult

__all__ = [
    "IngestError",
    "Dataset",
    "read_edge_list",
    "ingest",
    "write_edge_list",
    "write_outputs",
    "report_schema",
]


class IngestError(Exception):
    def __init__(self, path, lineno: int | None, message: str):
        where = f"{path}:{lineno}" if lineno is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = path
        self.lineno = lineno


@dataclass
class Dataset:
    graph: WorkingGraph
    attributes: AttributedData | None
    ids: list[str]
    warnings: dict[str, int] = field(default_factory=dict)

    @property
    def index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.ids)}


class _IdMap:
    def __init__(self):
        self.ids: list[str] = []
        self.index: dict[str, int] = {}

    def get(self, ext: str) -> int:
        i = self.index.get(ext)
        if i is None:
            i = self.index[ext] = len(self.ids)
            self.ids.append(ext)
        return i


def read_edge_list(path, ids: _IdMap | None = None):
    """Parse ``u v`` lines into deduplicated internal edges.

    Returns ``(edges, ids, warnings)``; directed duplicates like ``1 0``
    after ``0 1`` are folded into one undirected edge.
    """
    ids = ids if ids is not None else _IdMap()
    warnings = {"self_loops": 0, "duplicate_edges": 0}
    seen: set[tuple[int, int]] = set()
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            parts = s.split()
            if len(parts) != 2:
                raise IngestError(path, lineno, f"expected 'u v', got {s!r}")
            x, y = ids.get(parts[0]), ids.get(parts[1])
            if x == y:
                warnings["self_loops"] += 1
                continue
            key = (x, y) if x < y else (y, x)
            if key in seen:
                warnings["duplicate_edges"] += 1
                continue
            seen.add(key)
            edges.append(key)
    return edges, ids, warnings


def _rows(path):
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                continue
            yield lineno, [c.strip() for c in row]


def _read_features(path, ids: _IdMap) -> dict[int, list[float]]:
    rows: dict[int, list[float]] = {}
    dim = None
    first = True
    for lineno, row in _rows(path):
        try:
            values = [float(c) for c in row[1:]]
        except ValueError:
            if first:
                first = False
                continue
            raise IngestError(path, lineno, "non-numeric feature value") from None
        first = False
        if dim is None:
            dim = len(values)
        if len(values) != dim or dim == 0:
            raise IngestError(path, lineno,
                              f"feature dimension {len(values)}, expected {dim}")
        rows[ids.get(row[0])] = values
    return rows


def _read_labels(path, ids: _IdMap) -> dict[int, int]:
    out: dict[int, int] = {}
    first = True
    for lineno, row in _rows(path):
        if len(row) != 2:
            raise IngestError(path, lineno, "expected 'external_id,label'")
        try:
            label = int(row[1])
        except ValueError:
            if first:
                first = False
                continue
            raise IngestError(path, lineno, f"bad label {row[1]!r}") from None
        first = False
        if label < 0:
            raise IngestError(path, lineno, f"negative label {label}")
        out[ids.get(row[0])] = label
    return out


def ingest(edge_path, features_path=None, labels_path=None) -> Dataset:
    """Load a graph and optional node attributes.

    Ids first seen in an attribute file become isolated nodes.  Every node
    needs a feature row when features are given; labels may be partial.
    """
    edges, ids, warnings = read_edge_list(edge_path)
    feats = _read_features(features_path, ids) if features_path else None
    labs = _read_labels(labels_path, ids) if labels_path else None
    n = len(ids.ids)
    g = WorkingGraph.from_edges(n, edges)
    attributed = None
    if feats is not None or labs is not None:
        features = labels = None
        if feats is not None:
            missing = [ids.ids[i] for i in range(n) if i not in feats]
            if missing:
                raise IngestError(features_path, None,
                                  f"no feature row for {len(missing)} node(s), "
                                  f"e.g. {missing[0]!r}")
            features = np.array([feats[i] for i in range(n)], dtype=float)
        if labs is not None:
            labels = np.array([labs.get(i, -1) for i in range(n)], dtype=np.int64)
        attributed = AttributedData(features, labels)
    return Dataset(g, attributed, ids.ids, warnings)


def write_edge_list(path, g: WorkingGraph, ids: list[str]) -> None:
    with open(path, "w") as fh:
        for x, y in g.edges():
            fh.write(f"{ids[x]} {ids[y]}\n")


def report_schema() -> dict:
    text = resources.files(__package__).joinpath("report.schema.json").read_text()
    return json.loads(text)


def write_outputs(result: CoarseningResult, ids: list[str], out_dir) -> dict[str, Path]:
    """Write edges, partition map, id map, attributes and the JSON report."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "edges": out / "coarsened_edges.txt",
        "partition": out / "partition.csv",
        "id_map": out / "id_map.csv",
        "report": out / "report.json",
    }
    write_edge_list(paths["edges"], result.graph, ids)
    with open(paths["partition"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["external_id", "supernode_external_id"])
        for x, s in enumerate(result.supernodes.assignment()):
            w.writerow([ids[x], ids[s]])
    with open(paths["id_map"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["internal_id", "external_id"])
        for i, x in enumerate(ids):
            w.writerow([i, x])
    attrs = result.attributes
    if attrs is not None and attrs.features is not None:
        paths["features"] = out / "features.csv"
        with open(paths["features"], "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["supernode_external_id"]
                       + [f"f{j}" for j in range(attrs.features.shape[1])])
            for s, row in zip(result.supernode_ids, attrs.features.tolist()):
                w.writerow([ids[s]] + [repr(v) for v in row])
    if attrs is not None and attrs.labels is not None:
        paths["labels"] = out / "labels.csv"
        with open(paths["labels"], "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["supernode_external_id", "label"])
            for s, lab in zip(result.supernode_ids, attrs.labels.tolist()):
                w.writerow([ids[s], lab])
    with open(paths["report"], "w") as fh:
        json.dump(result.report.to_dict(), fh, indent=2)
        fh.write("\n")
    return paths
