"""Small edge cuts and the recursive treecut-width task splitting."""
from __future__ import annotations

from dataclasses import dataclass

from .graph import Multigraph, connected_components, induced_subgraph, is_connected

__all__ = [
    "CutSplit",
    "DecompositionTask",
    "find_small_cut",
    "split_treecut_tasks",
    "tiny_task_width",
]


@dataclass(frozen=True)
class CutSplit:
    """A minimal cut of size one or two with its side partition.

    ``parallel_pair`` is set when the cut consists of two edges between a
    single vertex on each side (i.e. a parallel pair).
    """

    cut: tuple[int, ...]
    side_a: frozenset[int]
    side_b: frozenset[int]
    parallel_pair: bool


@dataclass(frozen=True)
class DecompositionTask:
    """A 3-edge-connected (or <= 2 vertex) piece produced by splitting.

    ``vertex_map`` sends task vertex ``i`` (1-based) to ``vertex_map[i-1]``
    in the original graph; ``floor_width`` is the lower bound (0 or 2)
    accumulated from parallel-pair splits on this task's path.
    """

    graph: Multigraph
    vertex_map: tuple[int, ...]
    floor_width: int = 0


def _components_after_removal(g: Multigraph, removed: set[int]) -> list[set[int]]:
    adj: dict[int, list[int]] = {v: [] for v in g.vertices()}
    for eid, (u, v) in enumerate(g.edges, start=1):
        if eid in removed:
            continue
        adj[u].append(v)
        adj[v].append(u)
    seen: set[int] = set()
    comps = []
    for start in g.vertices():
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = {start}
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _split_sides(g: Multigraph, cut: tuple[int, ...]) -> tuple[frozenset[int], frozenset[int]] | None:
    comps = _components_after_removal(g, set(cut))
    if len(comps) != 2:
        return None
    # side A carries the smallest vertex
    a, b = sorted(comps, key=min)
    return frozenset(a), frozenset(b)


def find_small_cut(g: Multigraph) -> CutSplit | None:
    """Some minimal cut of size 1 or 2 of a connected graph, or None if 3-edge-connected.

    Brute force: every single edge is tested as a bridge first, then every
    edge pair; a 2-cut is minimal exactly when neither member alone is a
    bridge.  Ties break to the smallest (edge-id, edge-id) pair, so results
    are deterministic.
    """
    if g.n < 2:
        raise ValueError("cut search needs at least two vertices")
    if not is_connected(g):
        raise ValueError("cut search expects a connected graph")
    m = g.m
    for eid in range(1, m + 1):
        sides = _split_sides(g, (eid,))
        if sides is not None:
            return CutSplit((eid,), sides[0], sides[1], parallel_pair=False)
    # no bridges, so any disconnecting pair is a minimal cut
    for e1 in range(1, m + 1):
        for e2 in range(e1 + 1, m + 1):
            sides = _split_sides(g, (e1, e2))
            if sides is None:
                continue
            side_a, side_b = sides
            ends_a = {u for eid in (e1, e2) for u in g.edge(eid) if u in side_a}
            ends_b = {u for eid in (e1, e2) for u in g.edge(eid) if u in side_b}
            parallel = len(ends_a) == 1 and len(ends_b) == 1
            return CutSplit((e1, e2), side_a, side_b, parallel)
    return None


def _side_task_graph(g: Multigraph, side: frozenset[int], cut: tuple[int, ...], add_edge: bool) -> tuple[Multigraph, tuple[int, ...]]:
    sub, vmap = induced_subgraph(g, side)
    if add_edge:
        ends = sorted({u for eid in cut for u in g.edge(eid) if u in side})
        if len(ends) == 2:
            rev = {orig: new for new, orig in enumerate(vmap, start=1)}
            sub = Multigraph(sub.n, sub.edges + ((rev[ends[0]], rev[ends[1]]),))
    return sub, vmap


def split_treecut_tasks(g: Multigraph) -> tuple[list[DecompositionTask], int]:
    """Split ``g`` along minimal cuts of size <= 2 until every piece is
    3-edge-connected or has at most two vertices.

    Returns the terminal tasks plus the global floor: the overall treecut
    width is ``max(floor, max over tasks)``.  Disconnected graphs fall apart
    into their components first (a size-0 cut with no edge added).
    """
    tasks: list[DecompositionTask] = []
    floor = 0
    # (graph, map to original ids, floor accumulated on this path)
    work: list[tuple[Multigraph, tuple[int, ...], int]] = []
    for comp in connected_components(g):
        sub, vmap = induced_subgraph(g, comp)
        work.append((sub, vmap, 0))
    work.reverse()
    while work:
        sub, vmap, path_floor = work.pop()
        if sub.n <= 2:
            tasks.append(DecompositionTask(sub, vmap, path_floor))
            floor = max(floor, path_floor)
            continue
        cut = find_small_cut(sub)
        if cut is None:
            tasks.append(DecompositionTask(sub, vmap, path_floor))
            floor = max(floor, path_floor)
            continue
        if cut.parallel_pair:
            child_floor = max(path_floor, 2)
            add_edge = False
        else:
            child_floor = path_floor
            add_edge = True
        pieces = []
        for side in (cut.side_a, cut.side_b):
            piece, piece_map = _side_task_graph(sub, side, cut.cut, add_edge)
            pieces.append((piece, tuple(vmap[i - 1] for i in piece_map), child_floor))
        work.extend(reversed(pieces))
        floor = max(floor, child_floor)
    return tasks, floor


def tiny_task_width(task_graph: Multigraph) -> int:
    """Closed-form treecut width of a task with at most two vertices.

    A single vertex decomposes into one bag of size 1 (width 1); any
    two-vertex graph needs a set of torso size 2 at its top level, and a
    single bag achieves exactly that.
    """
    if task_graph.n == 1:
        return 1
    if task_graph.n == 2:
        return 2
    raise ValueError("closed form only applies to tasks with <= 2 vertices")
