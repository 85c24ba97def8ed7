"""Brute-force ground truth for treedepth and treecut width on small graphs."""
from __future__ import annotations

from itertools import combinations

from .cuts import split_treecut_tasks, tiny_task_width
from .graph import Multigraph, delta

__all__ = [
    "BudgetExceededError",
    "TD_BUDGET",
    "TCW_BUDGET",
    "oracle_tcw",
    "oracle_tcw_general",
    "oracle_td",
]

TD_BUDGET = 10
TCW_BUDGET = 5


class BudgetExceededError(ValueError):
    """Input too large for exhaustive search; raise the budget explicitly."""


def oracle_td(g: Multigraph, max_vertices: int = TD_BUDGET) -> int:
    """Exact treedepth by the removal recursion, memoized on vertex subsets.

    td = 0 for the empty graph, 1 for a single vertex, the maximum over
    components when disconnected, and otherwise 1 plus the best treedepth
    over all single-vertex deletions.
    """
    if g.n > max_vertices:
        raise BudgetExceededError(f"treedepth oracle limited to {max_vertices} vertices, got {g.n}")
    adj = g.adjacency()
    memo: dict[frozenset[int], int] = {}

    def components_in(sub: frozenset[int]) -> list[frozenset[int]]:
        seen: set[int] = set()
        comps = []
        for start in sorted(sub):
            if start in seen:
                continue
            stack = [start]
            seen.add(start)
            comp = {start}
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in sub and y not in seen:
                        seen.add(y)
                        comp.add(y)
                        stack.append(y)
            comps.append(frozenset(comp))
        return comps

    def td(sub: frozenset[int]) -> int:
        if not sub:
            return 0
        if sub in memo:
            return memo[sub]
        comps = components_in(sub)
        if len(comps) > 1:
            val = max(td(c) for c in comps)
        elif len(sub) == 1:
            val = 1
        else:
            val = 1 + min(td(sub - {v}) for v in sorted(sub))
        memo[sub] = val
        return val

    return td(frozenset(g.vertices()))


def _set_partitions(items: list[int]):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield ((first,),) + part
        for i in range(len(part)):
            yield part[:i] + ((first,) + part[i],) + part[i + 1 :]


def _weak_partitions(vertices: list[int]) -> list[tuple[frozenset[int], ...]]:
    out = []
    for size in range(len(vertices) + 1):
        for subset in combinations(vertices, size):
            for part in _set_partitions(list(subset)):
                out.append(tuple(sorted((frozenset(b) for b in part), key=min)))
    return out


def oracle_tcw(g: Multigraph, max_vertices: int = TCW_BUDGET) -> int:
    """Exact treecut width by exhaustive search over derivations.

    Meaningful as treecut width for 3-edge-connected graphs and graphs with
    at most two vertices; split general inputs into tasks first (see
    :func:`oracle_tcw_general`).  Runs a minimax dynamic program over weak
    partitions ordered by strict refinement: the cost of reaching a level
    from the level below is the worst adhesion or torso size it creates, and
    the top level is exempt from the parent-edge +1.
    """
    if g.n > max_vertices:
        raise BudgetExceededError(f"treecut oracle limited to {max_vertices} vertices, got {g.n}")
    n = g.n
    if n == 0:
        return 0
    vertices = list(range(1, n + 1))
    weak = _weak_partitions(vertices)
    covered = {wp: frozenset().union(*wp) if wp else frozenset() for wp in weak}
    cut_size = {}

    def adhesion(part: frozenset[int]) -> int:
        if part not in cut_size:
            cut_size[part] = len(delta(g, part))
        return cut_size[part]

    def refines(q, p) -> bool:
        return all(any(b <= block for block in p) for b in q)

    def step_cost(q, p, top: bool) -> int:
        worst = 0
        for block in p:
            children = [b for b in q if b <= block]
            bag = block - (frozenset().union(*children) if children else frozenset())
            tor = len(bag) + len(children) + (0 if top else 1)
            worst = max(worst, tor, adhesion(block))
        return worst

    # linear extension of strict refinement: coverage grows, block count shrinks
    order = sorted((wp for wp in weak), key=lambda wp: (len(covered[wp]), -len(wp)))
    top_level = tuple([frozenset(vertices)])
    best: dict[tuple, int] = {(): 0}
    for p in order:
        if not p or p == top_level:
            continue
        val = None
        for q in order:
            if q == p:
                break
            if q in best and covered[q] <= covered[p] and refines(q, p):
                cand = max(best[q], step_cost(q, p, top=False))
                if val is None or cand < val:
                    val = cand
        if val is not None:
            best[p] = val
    answer = None
    for q in order:
        if q == top_level or q not in best:
            continue
        if refines(q, top_level):
            cand = max(best[q], step_cost(q, top_level, top=True))
            if answer is None or cand < answer:
                answer = cand
    assert answer is not None
    return answer


def oracle_tcw_general(g: Multigraph, max_vertices: int = TCW_BUDGET) -> int:
    """Treecut width of an arbitrary graph: split into tasks, then bound each.

    Tasks with at most two vertices use the closed form, larger ones the
    exhaustive derivation search; the result is the max over tasks and the
    splitting floor.
    """
    tasks, floor = split_treecut_tasks(g)
    width = floor
    for task in tasks:
        if task.graph.n <= 2:
            width = max(width, tiny_task_width(task.graph))
        else:
            width = max(width, oracle_tcw(task.graph, max_vertices))
    return width
