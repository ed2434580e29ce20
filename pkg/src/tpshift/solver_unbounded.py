"""Free relabeling: pick fresh labels for every edge to maximize reach.

With labels free, only the footprints matter. The best reach equals the
best structural suffix-union over all switch-vertex-sets, and that is found
by scanning switch-path-trees and greedily realizing each one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .graph_core import BasePath, InvalidInstanceError, TemporalKPathGraph, Vertex
from .switch_structures import (
    Switch,
    SwitchPathTree,
    SwitchVertexSet,
    enumerate_spts,
    make_svs,
    suffix_union,
    svs_reachability,
)


@dataclass(frozen=True)
class Temporalization:
    """A full labeling plus the switch structure that certifies its reach."""

    labels: tuple[tuple[int, ...], ...]
    reached: frozenset[Vertex]
    spt: SwitchPathTree
    svs: SwitchVertexSet


def best_svs_for_spt(
    graph: TemporalKPathGraph, s: Vertex, spt: SwitchPathTree
) -> SwitchVertexSet | None:
    """Best label-agnostic realization of a switch-path-tree, or None.

    Walks the tree outward from the source path. For each tree edge the
    switch goes on the earliest vertex of the child path that also sits
    strictly after the parent's own switch vertex, which maximizes the
    unlocked suffix and leaves descendants the widest choice. Absence means
    some tree edge admits no switch at all.
    """
    src = graph.source_path_id
    anchor = {src: graph.paths[src].find(s)}
    if anchor[src] is None:
        return None
    switches: list[Switch] = []
    queue = deque([src])
    while queue:
        parent = queue.popleft()
        parent_path = graph.paths[parent]
        for child in spt.children_of(parent):
            child_path = graph.paths[child]
            chosen = None
            for pos, v in enumerate(child_path.vertices[:-1]):
                pf = parent_path.find(v)
                if pf is not None and pf > anchor[parent]:
                    chosen = (pos, v)
                    break
            if chosen is None:
                return None
            anchor[child] = chosen[0]
            switches.append(Switch(chosen[1], parent, child))
            queue.append(child)
    return make_svs(switches)


def _spanning_then_partial(k: int, root: int) -> Iterator[SwitchPathTree]:
    yield from enumerate_spts(k, include_partial=False, root=root)
    for spt in enumerate_spts(k, include_partial=True, root=root):
        if len(spt.members(root)) < k:
            yield spt


def solve_mrpt(paths: Sequence[BasePath], s: Vertex) -> Temporalization:
    """Choose labels from scratch so that s reaches as much as possible.

    Input labels are ignored. s must head a dedicated path (normalize
    first). The winning tree assigns each member path a label block at
    depth * M so that every chosen switch is temporal by construction;
    paths outside the tree get negative labels nothing can switch onto.
    """
    heads = [p.path_id for p in paths if p.vertices and p.vertices[0] == s]
    occurrences = sum(1 for p in paths for v in p.vertices if v == s)
    if len(heads) != 1 or occurrences != 1:
        raise InvalidInstanceError(
            f"source {s!r} must head exactly one path and appear nowhere else"
        )
    src = heads[0]
    graph = TemporalKPathGraph(len(paths), tuple(paths), s, src)
    best: tuple[int, SwitchPathTree, SwitchVertexSet] | None = None
    for spt in _spanning_then_partial(len(paths), src):
        svs = best_svs_for_spt(graph, s, spt)
        if svs is None:
            continue
        size = len(suffix_union(graph, svs, s))
        if best is None or size > best[0]:
            best = (size, spt, svs)
    assert best is not None  # the root-only tree always realizes
    _, spt, svs = best

    total = graph.total_edges()
    block = total + 1
    depth = {src: 0}
    queue = deque([src])
    while queue:
        p = queue.popleft()
        for c in spt.children_of(p):
            depth[c] = depth[p] + 1
            queue.append(c)
    labels = []
    for p in graph.paths:
        m = p.edge_count()
        if p.path_id in depth:
            start = depth[p.path_id] * block
        else:
            start = -(block + m)
        labels.append(tuple(start + j for j in range(m)))
    relabeled = TemporalKPathGraph(
        graph.k,
        tuple(
            BasePath(p.path_id, p.vertices, labels[p.path_id]) for p in graph.paths
        ),
        s,
        src,
    )
    reached = frozenset(svs_reachability(relabeled, svs, s))
    return Temporalization(tuple(labels), reached, spt, svs)
