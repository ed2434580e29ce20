"""Temporal k-path graphs: shifting with propagation, slack, and reachability.

A graph is a multiset union of base-paths. Each base-path is a simple vertex
sequence whose edges carry strictly increasing integer labels. Shifting one
edge's label propagates along its base-path: a delay pushes later edges
forward, an advance pulls earlier edges back, and slack between edges absorbs
the push. Only the shifted edge's |delta| is charged; propagation is free.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace

Vertex = str

NEG_INF = float("-inf")


class AddressingError(ValueError):
    """A path, edge, or vertex reference does not exist in the graph."""


class OrderingError(ValueError):
    """Vertices supplied in an order that contradicts their path order."""


class ValidityError(ValueError):
    """A switch structure violates its contract."""


class ParseError(ValueError):
    """Malformed instance text."""


class ParameterError(ValueError):
    """A parameter outside its documented domain."""


class InvalidInstanceError(ValueError):
    """The instance violates invariants required by the caller."""


class ResourceLimitError(RuntimeError):
    """A configured work limit was exceeded.

    The message names the bound that was hit.
    """


@dataclass(frozen=True)
class BasePath:
    """One base-path: vertices v0..vm and labels[i] for edge vi -> vi+1."""

    path_id: int
    vertices: tuple[Vertex, ...]
    labels: tuple[int, ...]

    def find(self, v: Vertex) -> int | None:
        """Position of v on this path, or None if absent."""
        try:
            return self.vertices.index(v)
        except ValueError:
            return None

    def edge_count(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class TemporalKPathGraph:
    k: int
    paths: tuple[BasePath, ...]
    source: Vertex
    source_path_id: int

    def path(self, path_id: int) -> BasePath:
        if not 0 <= path_id < len(self.paths):
            raise AddressingError(f"no path {path_id}")
        return self.paths[path_id]

    @property
    def source_path(self) -> BasePath:
        return self.path(self.source_path_id)

    def vertices(self) -> set[Vertex]:
        out: set[Vertex] = set()
        for p in self.paths:
            out.update(p.vertices)
        return out

    def total_edges(self) -> int:
        return sum(p.edge_count() for p in self.paths)


@dataclass(frozen=True)
class ShiftOperation:
    """Shift one edge's label by delta. delta > 0 delays, delta < 0 advances."""

    path_id: int
    edge_index: int
    delta: int

    @property
    def cost(self) -> int:
        return abs(self.delta)


class Mode(enum.Enum):
    DELAY = "delay"
    ADVANCE = "advance"
    SHIFT = "shift"

    def allows(self, delta: int) -> bool:
        if delta > 0:
            return self is not Mode.ADVANCE
        if delta < 0:
            return self is not Mode.DELAY
        return True


def validate(graph: TemporalKPathGraph) -> list[str]:
    """Check graph invariants. Returns a list of violations, empty if fine.

    Violations are data rather than exceptions; each names the path, index,
    and reason. The source is only required to lie on its declared path (a
    dedicated single-occurrence source path is a normalization property, not
    a structural one).
    """
    out: list[str] = []
    if graph.k != len(graph.paths):
        out.append(f"k is {graph.k} but there are {len(graph.paths)} paths")
    for pos, p in enumerate(graph.paths):
        tag = f"path {p.path_id}"
        if p.path_id != pos:
            out.append(f"{tag}: stored at index {pos}")
        if len(p.vertices) < 2:
            out.append(f"{tag}: fewer than two vertices")
        if len(p.labels) != len(p.vertices) - 1:
            out.append(
                f"{tag}: {len(p.labels)} labels for {len(p.vertices)} vertices"
            )
        seen: set[Vertex] = set()
        for i, v in enumerate(p.vertices):
            if v in seen:
                out.append(f"{tag}: vertex {v!r} repeated at index {i}")
            seen.add(v)
        for i in range(1, len(p.labels)):
            if p.labels[i] <= p.labels[i - 1]:
                out.append(f"{tag}: labels non-increasing at index {i}")
    if not 0 <= graph.source_path_id < len(graph.paths):
        out.append(f"source path id {graph.source_path_id} out of range")
    elif graph.paths[graph.source_path_id].find(graph.source) is None:
        out.append(f"source {graph.source!r} not on path {graph.source_path_id}")
    return out


def apply_shift(graph: TemporalKPathGraph, op: ShiftOperation) -> TemporalKPathGraph:
    """Shift one edge and propagate along its base-path.

    The targeted label becomes t + delta. The d-th edge after it is floored
    at t + delta + d, the d-th edge before it is capped at t + delta - d.
    Both clauses are always applied; the one on the wrong side of a given
    sign is a no-op because labels are at least one apart.
    """
    path = graph.path(op.path_id)
    m = path.edge_count()
    if not 0 <= op.edge_index < m:
        raise AddressingError(f"path {op.path_id} has no edge {op.edge_index}")
    base = path.labels[op.edge_index] + op.delta
    labels = list(path.labels)
    labels[op.edge_index] = base
    for j in range(op.edge_index + 1, m):
        labels[j] = max(labels[j], base + (j - op.edge_index))
    for j in range(op.edge_index - 1, -1, -1):
        labels[j] = min(labels[j], base - (op.edge_index - j))
    paths = list(graph.paths)
    paths[op.path_id] = replace(path, labels=tuple(labels))
    return replace(graph, paths=tuple(paths))


def apply_sequence(
    graph: TemporalKPathGraph, ops: tuple[ShiftOperation, ...] | list[ShiftOperation]
) -> tuple[TemporalKPathGraph, int]:
    """Fold apply_shift left to right. Returns (graph, total cost).

    Order-sensitive by design: a delay followed by an advance need not equal
    the reverse order.
    """
    cost = 0
    for op in ops:
        graph = apply_shift(graph, op)
        cost += op.cost
    return graph, cost


def slack(path: BasePath, u: Vertex, v: Vertex) -> int:
    """Cumulative waiting time strictly between u and v along the path.

    Sums label gaps minus one over consecutive edges from the edge leaving u
    through the edge entering v. slack(u, u) is 0.
    """
    i = path.find(u)
    j = path.find(v)
    if i is None:
        raise OrderingError(f"{u!r} not on path {path.path_id}")
    if j is None:
        raise OrderingError(f"{v!r} not on path {path.path_id}")
    if j < i:
        raise OrderingError(f"{v!r} precedes {u!r} on path {path.path_id}")
    return sum(path.labels[e + 1] - path.labels[e] - 1 for e in range(i, j - 1))


def edge_gap(path: BasePath, e1: int, e2: int) -> int:
    """Total slack between edges e1 and e2 (e1 <= e2) of one path."""
    return path.labels[e2] - path.labels[e1] - (e2 - e1)


def reach_set(graph: TemporalKPathGraph, source: Vertex) -> set[Vertex]:
    """All vertices reachable from source along strictly increasing labels."""
    if all(p.find(source) is None for p in graph.paths):
        raise AddressingError(f"unknown source {source!r}")
    edges = [
        (p.labels[i], p.vertices[i], p.vertices[i + 1])
        for p in graph.paths
        for i in range(p.edge_count())
    ]
    edges.sort(key=lambda e: e[0])
    # Single ascending pass is safe: same-label edges cannot chain, and later
    # edges never lower an arrival time.
    arrival: dict[Vertex, float] = {source: NEG_INF}
    for t, u, v in edges:
        at_u = arrival.get(u)
        if at_u is not None and at_u < t and v not in arrival:
            arrival[v] = t
    return set(arrival)


def is_normalized(graph: TemporalKPathGraph, s: Vertex | None = None) -> bool:
    """True iff s (default: graph.source) heads its path and occurs nowhere else."""
    if s is None:
        s = graph.source
    occurrences = [(p.path_id, pos) for p in graph.paths if (pos := p.find(s)) is not None]
    return (
        len(occurrences) == 1
        and occurrences[0][1] == 0
        and occurrences[0][0] == graph.source_path_id
        and graph.source == s
    )


def normalize_source(
    graph: TemporalKPathGraph, s: Vertex, budget_hint: int = 0
) -> TemporalKPathGraph:
    """Give s a dedicated two-vertex source path unless it already has one.

    When s occurs mid-path or on several paths it is renamed to a fresh
    primed name and a new path (s -> s') is appended. Its single label sits
    budget_hint + 1 below the smallest label in the graph, so no affordable
    advance can make anything run before it.
    """
    occurrences = [(p.path_id, pos) for p in graph.paths if (pos := p.find(s)) is not None]
    if not occurrences:
        raise AddressingError(f"unknown source {s!r}")
    if len(occurrences) == 1 and occurrences[0][1] == 0:
        pid = occurrences[0][0]
        if graph.source == s and graph.source_path_id == pid:
            return graph
        return replace(graph, source=s, source_path_id=pid)
    taken = graph.vertices()
    fresh = s + "'"
    while fresh in taken:
        fresh += "'"
    paths = [
        replace(p, vertices=tuple(fresh if v == s else v for v in p.vertices))
        for p in graph.paths
    ]
    floor = min(t for p in graph.paths for t in p.labels) - budget_hint - 1
    paths.append(BasePath(len(paths), (s, fresh), (floor,)))
    return TemporalKPathGraph(graph.k + 1, tuple(paths), s, graph.k)


_ARROW = re.compile(r"^-(-?\d+)->$")


def parse_instance(text: str) -> TemporalKPathGraph:
    """Parse the line-oriented instance format.

    Syntax errors raise ParseError. Semantic problems (label order, repeated
    vertices and so on) are left to validate().
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "kpathgraph v1":
        raise ParseError("missing 'kpathgraph v1' header")
    k: int | None = None
    source: Vertex | None = None
    source_path_id = 0
    paths: dict[int, BasePath] = {}
    for ln in lines[1:]:
        fields = ln.split()
        if fields[0] == "k" and len(fields) == 2:
            k = _parse_int(fields[1], "k")
        elif fields[0] == "source" and len(fields) == 2:
            source = fields[1]
        elif fields[0] == "sourcepath" and len(fields) == 2:
            source_path_id = _parse_int(fields[1], "sourcepath")
        elif fields[0] == "path":
            pid, path = _parse_path_line(fields)
            if pid in paths:
                raise ParseError(f"duplicate path {pid}")
            paths[pid] = path
        else:
            raise ParseError(f"unrecognized line: {ln!r}")
    if k is None:
        raise ParseError("missing k line")
    if source is None:
        raise ParseError("missing source line")
    if sorted(paths) != list(range(k)):
        raise ParseError(f"expected paths 0..{k - 1}, got {sorted(paths)}")
    return TemporalKPathGraph(
        k, tuple(paths[i] for i in range(k)), source, source_path_id
    )


def _parse_int(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"bad integer for {what}: {token!r}") from None


def _parse_path_line(fields: list[str]) -> tuple[int, BasePath]:
    if len(fields) < 4 or fields[2] != ":":
        raise ParseError(f"malformed path line: {' '.join(fields)!r}")
    pid = _parse_int(fields[1], "path id")
    tokens = fields[3:]
    if len(tokens) % 2 == 0:
        raise ParseError(f"path {pid}: tokens do not alternate vertex/arrow")
    vertices = [tokens[0]]
    labels = []
    for i in range(1, len(tokens), 2):
        m = _ARROW.match(tokens[i])
        if not m:
            raise ParseError(f"path {pid}: expected -<label>-> at {tokens[i]!r}")
        labels.append(int(m.group(1)))
        vertices.append(tokens[i + 1])
    return pid, BasePath(pid, tuple(vertices), tuple(labels))


def write_instance(graph: TemporalKPathGraph) -> str:
    """Serialize to the text format. parse_instance inverts this exactly."""
    for p in graph.paths:
        for v in p.vertices:
            if not v or any(c.isspace() for c in v) or _ARROW.match(v):
                raise ParameterError(f"vertex name {v!r} is not serializable")
    out = ["kpathgraph v1", f"k {graph.k}", f"source {graph.source}"]
    if graph.source_path_id != 0:
        out.append(f"sourcepath {graph.source_path_id}")
    for p in graph.paths:
        parts = [p.vertices[0]]
        for i, t in enumerate(p.labels):
            parts.append(f"-{t}->")
            parts.append(p.vertices[i + 1])
        out.append(f"path {p.path_id} : " + " ".join(parts))
    return "\n".join(out) + "\n"
