"""Switches between base-paths and the two structures built from them.

A switch (v, F, T) lets a journey arrive at v on path F and continue on
path T. A switch-vertex-set bundles switches so that the suffixes they
unlock are actually traversable: at most one switch onto each path, none
onto the source path, every switch off a path strictly after the switch
onto it, and the path-to-path transitions forming a tree rooted at the
source path. Abstracting switch vertices away leaves a switch-path-tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator

from .graph_core import (
    ParameterError,
    TemporalKPathGraph,
    ValidityError,
    Vertex,
)


@dataclass(frozen=True)
class Switch:
    vertex: Vertex
    from_path: int
    to_path: int


@dataclass(frozen=True)
class SwitchVertexSet:
    switches: frozenset[Switch]


def make_svs(switches: Iterable[Switch]) -> SwitchVertexSet:
    return SwitchVertexSet(frozenset(switches))


EMPTY_SVS = make_svs(())


@dataclass(frozen=True)
class SwitchPathTree:
    """Directed tree on path ids as sorted (child, parent) edges.

    The root never appears as a child and is implicit from context; paths
    absent from every edge are outside the tree. The empty edge tuple is the
    root-only tree.
    """

    parents: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(sorted(set(self.parents))))

    def parent_of(self, path_id: int) -> int | None:
        for child, parent in self.parents:
            if child == path_id:
                return parent
        return None

    def children_of(self, path_id: int) -> list[int]:
        return sorted(child for child, parent in self.parents if parent == path_id)

    def members(self, root: int) -> set[int]:
        out = {root}
        for child, parent in self.parents:
            out.add(child)
            out.add(parent)
        return out


def _switch_edge_positions(
    graph: TemporalKPathGraph, sw: Switch
) -> tuple[int, int] | None:
    """(position on from_path, position on to_path) or None if not structural."""
    if sw.from_path == sw.to_path:
        return None
    if not (0 <= sw.from_path < len(graph.paths) and 0 <= sw.to_path < len(graph.paths)):
        return None
    pf = graph.paths[sw.from_path].find(sw.vertex)
    pt = graph.paths[sw.to_path].find(sw.vertex)
    if pf is None or pf == 0:
        return None  # needs an edge into v on the from-path
    if pt is None or pt == len(graph.paths[sw.to_path].vertices) - 1:
        return None  # needs an edge out of v on the to-path
    return pf, pt


def is_temporal_switch(graph: TemporalKPathGraph, sw: Switch) -> bool:
    """True iff the label into v on from_path is below the label out on to_path."""
    pos = _switch_edge_positions(graph, sw)
    if pos is None:
        raise ValidityError(f"structurally invalid switch {sw}")
    pf, pt = pos
    return graph.paths[sw.from_path].labels[pf - 1] < graph.paths[sw.to_path].labels[pt]


def is_valid_svs(graph: TemporalKPathGraph, svs: SwitchVertexSet) -> bool:
    """Structural validity of a switch-vertex-set. Ignores labels entirely."""
    onto: dict[int, Switch] = {}
    positions: dict[Switch, tuple[int, int]] = {}
    for sw in svs.switches:
        pos = _switch_edge_positions(graph, sw)
        if pos is None:
            return False
        positions[sw] = pos
        if sw.to_path in onto:
            return False  # at most one switch onto each path
        if sw.to_path == graph.source_path_id:
            return False
        onto[sw.to_path] = sw
    src = graph.source_path_id
    for sw in svs.switches:
        if sw.from_path != src and sw.from_path not in onto:
            return False  # transitions must chain back to the source path
    for start in onto:
        seen: set[int] = set()
        cur = start
        while cur != src:
            if cur in seen or cur not in onto:
                return False  # cycle, or a chain that never reaches the root
            seen.add(cur)
            cur = onto[cur].from_path
    source_pos = graph.paths[src].find(graph.source)
    if source_pos is None:
        return False
    for sw in svs.switches:
        if sw.from_path == src:
            anchor = source_pos
        else:
            anchor = positions[onto[sw.from_path]][1]
        # off strictly after on: a journey must traverse the edge into v
        if positions[sw][0] <= anchor:
            return False
    return True


def suffix_union(
    graph: TemporalKPathGraph, svs: SwitchVertexSet, s: Vertex
) -> set[Vertex]:
    """Vertices covered by the source-path suffix plus each switched-onto suffix.

    This is the reach the switch set would deliver if every switch were
    temporal; no labels are consulted.
    """
    src_path = graph.source_path
    start = src_path.find(s)
    if start is None:
        raise ValidityError(f"{s!r} not on the source path")
    out = set(src_path.vertices[start:])
    for sw in svs.switches:
        to = graph.paths[sw.to_path]
        out.update(to.vertices[to.vertices.index(sw.vertex):])
    return out


def svs_reachability(
    graph: TemporalKPathGraph, svs: SwitchVertexSet, s: Vertex
) -> set[Vertex]:
    """suffix_union for a valid SVS whose switches are all temporal.

    Callers must establish temporality first; a non-temporal switch here is a
    contract violation and raises.
    """
    if not is_valid_svs(graph, svs):
        raise ValidityError("switch-vertex-set is not valid")
    for sw in svs.switches:
        if not is_temporal_switch(graph, sw):
            raise ValidityError(f"switch {sw} is not temporal")
    return suffix_union(graph, svs, s)


def implied_spt(svs: SwitchVertexSet) -> SwitchPathTree:
    """Forget switch vertices, keep the path transitions."""
    return SwitchPathTree(tuple((sw.to_path, sw.from_path) for sw in svs.switches))


def enumerate_spts(
    k: int, include_partial: bool = False, root: int = 0
) -> Iterator[SwitchPathTree]:
    """All directed trees on path ids rooted at root, edges pointing away.

    Spanning trees only by default; with include_partial, trees over every
    subset containing the root, smallest subsets first. Within a subset,
    parent choices run lexicographically by child id. Deterministic order.
    """
    if k < 1:
        raise ParameterError("k must be at least 1")
    if not 0 <= root < k:
        raise ParameterError(f"root {root} outside 0..{k - 1}")
    rest = [p for p in range(k) if p != root]
    if include_partial:
        subsets = (
            [root, *combo]
            for size in range(0, k)
            for combo in combinations(rest, size)
        )
    else:
        subsets = iter([[root, *rest]])
    for members in subsets:
        children = sorted(p for p in members if p != root)
        if not children:
            yield SwitchPathTree(())
            continue
        member_set = sorted(members)
        options = [[p for p in member_set if p != c] for c in children]
        for parents in product(*options):
            mapping = dict(zip(children, parents))
            if _all_reach_root(mapping, root):
                yield SwitchPathTree(tuple(mapping.items()))


def _all_reach_root(mapping: dict[int, int], root: int) -> bool:
    for start in mapping:
        cur = start
        hops = 0
        while cur != root:
            cur = mapping.get(cur, -1)
            hops += 1
            if cur == -1 or hops > len(mapping):
                return False
    return True


def enumerate_svss(graph: TemporalKPathGraph) -> Iterator[SwitchVertexSet]:
    """Every valid switch-vertex-set of the graph, the empty one first.

    Label-agnostic: validity never looks at labels, so the stream is the
    same for any labeling of the same footprints. Each set appears exactly
    once because distinct trees yield distinct transition sets.
    """
    for spt in enumerate_spts(graph.k, include_partial=True, root=graph.source_path_id):
        if not spt.parents:
            yield EMPTY_SVS
            continue
        per_edge: list[list[Switch]] = []
        for child, parent in spt.parents:
            to_path = graph.paths[child]
            from_path = graph.paths[parent]
            candidates = [
                Switch(v, parent, child)
                for v in to_path.vertices[:-1]
                if (pf := from_path.find(v)) is not None and pf >= 1
            ]
            per_edge.append(candidates)
        if any(not c for c in per_edge):
            continue
        for combo in product(*per_edge):
            svs = make_svs(combo)
            if is_valid_svs(graph, svs):
                yield svs
