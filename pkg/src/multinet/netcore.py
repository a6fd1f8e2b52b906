"""Core graph containers and serialization.

All graphs are undirected with a fixed vertex set: adjacency matrices are
symmetric with zero diagonal. A multi-layer graph is an ordered list of
such matrices over one shared vertex set; a dynamic network is a sequence
of multi-layer snapshots with strictly increasing timestamps.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

WEIGHTED = "weighted"
BINARY = "binary"

_FORMATS = ("dense-csv", "edge-list-csv", "json")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


def _check_square_symmetric(entries: np.ndarray) -> None:
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {entries.shape}")
    if np.isnan(entries).any():
        raise ValueError("adjacency contains NaN")
    if not np.array_equal(entries, entries.T):
        raise ValueError("adjacency must be symmetric")
    if np.any(np.diagonal(entries) != 0.0):
        raise ValueError("adjacency diagonal must be zero")


@dataclass(frozen=True, eq=False)
class AdjacencyMatrix:
    """Symmetric zero-diagonal matrix, either real-weighted or 0/1."""

    entries: np.ndarray
    kind: str = WEIGHTED

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        _check_square_symmetric(entries)
        if self.kind not in (WEIGHTED, BINARY):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == BINARY and not np.isin(entries, (0.0, 1.0)).all():
            raise ValueError("binary adjacency entries must be 0 or 1")
        object.__setattr__(self, "entries", _freeze(entries))

    @property
    def num_vertices(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        if not isinstance(other, AdjacencyMatrix):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.entries, other.entries)


@dataclass(frozen=True, eq=False)
class MultiLayerGraph:
    """L adjacency layers over one shared vertex set."""

    layers: tuple
    vertex_labels: tuple | None = None

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise ValueError("graph needs at least one layer")
        if not all(isinstance(l, AdjacencyMatrix) for l in layers):
            raise TypeError("layers must be AdjacencyMatrix instances")
        p = layers[0].num_vertices
        if any(l.num_vertices != p for l in layers):
            raise ValueError("all layers must share the vertex set")
        labels = self.vertex_labels
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != p:
                raise ValueError(f"expected {p} vertex labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                raise ValueError("vertex labels must be unique")
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "vertex_labels", labels)

    @property
    def num_vertices(self) -> int:
        return self.layers[0].num_vertices

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    def __eq__(self, other):
        if not isinstance(other, MultiLayerGraph):
            return NotImplemented
        return (
            self.vertex_labels == other.vertex_labels
            and len(self.layers) == len(other.layers)
            and all(a == b for a, b in zip(self.layers, other.layers))
        )


@dataclass(frozen=True, eq=False)
class DynamicNetwork:
    """Time-indexed multi-layer snapshots with consistent shape."""

    snapshots: tuple
    timestamps: tuple

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        stamps = tuple(str(t) for t in self.timestamps)
        if len(snaps) != len(stamps):
            raise ValueError("snapshots and timestamps must align")
        if not snaps:
            raise ValueError("dynamic network needs at least one snapshot")
        if not all(isinstance(g, MultiLayerGraph) for g in snaps):
            raise TypeError("snapshots must be MultiLayerGraph instances")
        p, L = snaps[0].num_vertices, snaps[0].num_layers
        if any(g.num_vertices != p or g.num_layers != L for g in snaps):
            raise ValueError("snapshots must share vertex count and layer count")
        if any(a >= b for a, b in zip(stamps, stamps[1:])):
            raise ValueError("timestamps must be strictly increasing")
        object.__setattr__(self, "snapshots", snaps)
        object.__setattr__(self, "timestamps", stamps)

    def __len__(self) -> int:
        return len(self.snapshots)

    def __eq__(self, other):
        if not isinstance(other, DynamicNetwork):
            return NotImplemented
        return self.timestamps == other.timestamps and all(
            a == b for a, b in zip(self.snapshots, other.snapshots)
        )


@dataclass(frozen=True)
class Partition:
    """Assignment of each vertex to one of K classes."""

    assignment: tuple
    num_classes: int

    def __post_init__(self):
        assignment = tuple(int(a) for a in self.assignment)
        if self.num_classes < 1:
            raise ValueError("num_classes must be >= 1")
        if any(a < 0 or a >= self.num_classes for a in assignment):
            raise ValueError("class indices must lie in [0, num_classes)")
        object.__setattr__(self, "assignment", assignment)

    def __len__(self) -> int:
        return len(self.assignment)

    def class_members(self) -> list:
        members = [[] for _ in range(self.num_classes)]
        for v, c in enumerate(self.assignment):
            members[c].append(v)
        return members


def _infer_kind(entries: np.ndarray) -> str:
    return BINARY if np.isin(entries, (0.0, 1.0)).all() else WEIGHTED


def binarize(matrix: AdjacencyMatrix, threshold: float = 0.5) -> AdjacencyMatrix:
    """Threshold to a 0/1 matrix: entry becomes 1 iff weight is strictly
    greater than threshold. Accepts binary input, so binarize at 0.5 is
    idempotent on it.
    """
    out = np.where(matrix.entries > threshold, 1.0, 0.0)
    np.fill_diagonal(out, 0.0)
    return AdjacencyMatrix(out, kind=BINARY)


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path atomically (temp file in the same dir, then rename)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _graph_to_obj(graph: MultiLayerGraph) -> dict:
    return {
        "num_vertices": graph.num_vertices,
        "vertex_labels": list(graph.vertex_labels) if graph.vertex_labels else None,
        "layers": [
            {"kind": layer.kind, "entries": layer.entries.tolist()}
            for layer in graph.layers
        ],
    }


def _graph_from_obj(obj: dict) -> MultiLayerGraph:
    try:
        p = int(obj["num_vertices"])
        labels = obj.get("vertex_labels")
        layer_objs = obj["layers"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph JSON: {exc}") from exc
    layers = []
    for lo in layer_objs:
        entries = np.asarray(lo["entries"], dtype=float)
        if entries.shape != (p, p):
            raise ValueError(
                f"layer shape {entries.shape} does not match num_vertices {p}"
            )
        layers.append(AdjacencyMatrix(entries, kind=lo.get("kind", WEIGHTED)))
    return MultiLayerGraph(tuple(layers), vertex_labels=labels)


def _dense_csv_dumps(graph: MultiLayerGraph) -> str:
    if graph.num_layers != 1:
        raise ValueError("dense-csv holds a single layer; use json for multi-layer")
    rows = [",".join(repr(float(x)) for x in row) for row in graph.layers[0].entries]
    return "\n".join(rows) + "\n"


def _dense_csv_loads(text: str) -> MultiLayerGraph:
    rows = [r for r in csv.reader(text.splitlines()) if r]
    if not rows:
        raise ValueError("empty dense-csv input")
    try:
        entries = np.array([[float(x) for x in row] for row in rows])
    except ValueError as exc:
        raise ValueError(f"dense-csv parse error: {exc}") from exc
    matrix = AdjacencyMatrix(entries, kind=_infer_kind(entries))
    return MultiLayerGraph((matrix,))


def _edge_list_dumps(graph: MultiLayerGraph) -> str:
    if graph.num_layers != 1:
        raise ValueError("edge-list-csv holds a single layer; use json for multi-layer")
    labels = graph.vertex_labels or tuple(str(i) for i in range(graph.num_vertices))
    lines = ["src,dst,weight"]
    entries = graph.layers[0].entries
    for i in range(graph.num_vertices):
        for j in range(i + 1, graph.num_vertices):
            if entries[i, j] != 0.0:
                lines.append(f"{labels[i]},{labels[j]},{repr(float(entries[i, j]))}")
    return "\n".join(lines) + "\n"


def _edge_list_loads(text: str) -> MultiLayerGraph:
    rows = list(csv.reader(text.splitlines()))
    rows = [r for r in rows if r]
    if not rows or [c.strip() for c in rows[0]] != ["src", "dst", "weight"]:
        raise ValueError("edge-list-csv must start with header 'src,dst,weight'")
    order: list = []
    index: dict = {}
    edges = []
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ValueError(f"line {lineno}: expected 3 columns, got {len(row)}")
        src, dst, wtext = (c.strip() for c in row)
        if src == dst:
            raise ValueError(f"line {lineno}: self-loop {src!r} not allowed")
        try:
            weight = float(wtext)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad weight {wtext!r}") from exc
        key = (src, dst) if src <= dst else (dst, src)
        if key in seen:
            raise ValueError(f"line {lineno}: duplicate edge {src!r},{dst!r}")
        seen.add(key)
        for label in (src, dst):
            if label not in index:
                index[label] = len(order)
                order.append(label)
        edges.append((src, dst, weight))
    p = len(order)
    entries = np.zeros((p, p))
    for src, dst, weight in edges:
        i, j = index[src], index[dst]
        entries[i, j] = entries[j, i] = weight
    matrix = AdjacencyMatrix(entries, kind=_infer_kind(entries))
    return MultiLayerGraph((matrix,), vertex_labels=order)


def save_graph(graph: MultiLayerGraph, path: str, format: str = "json") -> None:
    if format not in _FORMATS:
        raise ValueError(f"unknown format {format!r}; choose from {_FORMATS}")
    if format == "json":
        text = json.dumps(_graph_to_obj(graph), indent=1) + "\n"
    elif format == "dense-csv":
        text = _dense_csv_dumps(graph)
    else:
        text = _edge_list_dumps(graph)
    atomic_write_text(path, text)


def load_graph(path: str, format: str = "json") -> MultiLayerGraph:
    if format not in _FORMATS:
        raise ValueError(f"unknown format {format!r}; choose from {_FORMATS}")
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if format == "json":
        return _graph_from_obj(json.loads(text))
    if format == "dense-csv":
        return _dense_csv_loads(text)
    return _edge_list_loads(text)


def save_dynamic_network(network: DynamicNetwork, path: str) -> None:
    obj = {
        "timestamps": list(network.timestamps),
        "snapshots": [_graph_to_obj(g) for g in network.snapshots],
    }
    atomic_write_text(path, json.dumps(obj, indent=1) + "\n")


def load_dynamic_network(path: str) -> DynamicNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    try:
        stamps = obj["timestamps"]
        snaps = [_graph_from_obj(go) for go in obj["snapshots"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed dynamic network JSON: {exc}") from exc
    return DynamicNetwork(tuple(snaps), tuple(stamps))
