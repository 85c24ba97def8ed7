"""Treedepth: partition and tree-structure encodings, preprocessing, verification.

The partition encoding reuses the derivation levels of the treecut encoding:
a connected graph has treedepth at most w - 1 exactly when it has a
derivation of length at most w in which every set introduces at most one new
vertex (D3) and every edge is covered by a set at the level where one of its
endpoints is introduced (D4).  The tree-structure encoding instead guesses
roots and a parent relation outright and bounds each vertex's ancestor count.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .cnf import CnfFormula, VarRegistry, add_at_most_k
from .graph import Multigraph, is_connected
from .tcw import DecodeError, decode_derivation, svar

__all__ = [
    "PreprocessEvent",
    "TdPreprocessResult",
    "TdVerdict",
    "TreedepthForest",
    "add_td_symmetry",
    "decode_td",
    "encode_td_partition",
    "encode_td_treestructure",
    "forest_from_json",
    "forest_to_json",
    "preprocess_td",
    "rebuild_forest",
    "verify_td",
]


@dataclass(frozen=True)
class TreedepthForest:
    """Rooted forest given by a parent map; roots map to None."""

    parents: dict[int, int | None]

    def roots(self) -> list[int]:
        return sorted(v for v, p in self.parents.items() if p is None)

    def height(self, v: int) -> int:
        """Root has height 1; children one more than their parent."""
        h = 1
        x = self.parents[v]
        while x is not None:
            h += 1
            x = self.parents[x]
        return h

    def depth(self) -> int:
        if not self.parents:
            return 0
        return max(self.height(v) for v in self.parents)


@dataclass(frozen=True)
class TdVerdict:
    valid: bool
    depth: int | None = None
    reason: str | None = None


def verify_td(forest: TreedepthForest, g: Multigraph, omega: int | None = None) -> TdVerdict:
    """Check coverage, acyclicity, and edge closure; report the forest depth.

    Every edge of the graph must join an ancestor-descendant pair of the
    forest.  Violations come back as verdicts, never exceptions.
    """
    try:
        parents = forest.parents
        if set(parents) != set(g.vertices()):
            missing = sorted(set(g.vertices()) - set(parents))
            extra = sorted(set(parents) - set(g.vertices()))
            return TdVerdict(False, reason=f"vertex coverage off: missing {missing}, unknown {extra}")
        heights: dict[int, int] = {}

        def height(v: int) -> int | None:
            trail = []
            x: int | None = v
            while x is not None and x not in heights:
                if x in trail:
                    return None
                trail.append(x)
                x = parents[x]
            base = 0 if x is None else heights[x]
            for y in reversed(trail):
                base += 1
                heights[y] = base
            return heights[v]

        for v in parents:
            if height(v) is None:
                return TdVerdict(False, reason=f"parent cycle through vertex {v}")

        def is_ancestor(a: int, b: int) -> bool:
            x = parents[b]
            while x is not None:
                if x == a:
                    return True
                x = parents[x]
            return False

        for u, v in g.edges:
            if not (is_ancestor(u, v) or is_ancestor(v, u)):
                return TdVerdict(False, reason=f"edge ({u},{v}) not covered by the forest closure")
        depth = max(heights.values()) if heights else 0
        if omega is not None and depth > omega:
            return TdVerdict(False, depth=depth, reason=f"depth {depth} exceeds bound {omega}")
        return TdVerdict(True, depth=depth)
    except Exception as exc:  # pragma: no cover - verifier must not raise
        return TdVerdict(False, reason=f"verification error: {exc}")


# ---------------------------------------------------------------------------
# preprocessing


@dataclass(frozen=True)
class PreprocessEvent:
    """One reduction step: apex removal or removal of a redundant twin leaf."""

    kind: str  # "apex" or "leaf"
    vertex: int
    anchor: int | None = None  # leaf only: the vertex the leaf hung from
    kept: int | None = None  # leaf only: the sibling leaf that stayed


@dataclass(frozen=True)
class TdPreprocessResult:
    reduced: Multigraph
    vertex_map: tuple[int, ...]  # reduced id -> input id
    apex_offset: int
    events: tuple[PreprocessEvent, ...]  # in application order, input ids

    @property
    def removed_leaves(self) -> list[tuple[int, int]]:
        return [(e.vertex, e.anchor) for e in self.events if e.kind == "leaf"]


def preprocess_td(g: Multigraph) -> TdPreprocessResult:
    """Shrink a graph without changing its treedepth (up to the apex offset).

    To fixpoint: whenever a vertex has two or more degree-one neighbours all
    but the smallest are deleted (treedepth unchanged), and whenever an apex
    vertex exists it is deleted for a +1 offset.  The recorded events carry
    enough context to rebuild an optimal forest of the input from one of the
    reduced graph: ``td(input) = apex_offset + td(reduced)``.
    """
    verts = set(g.vertices())
    edges = list(g.edges)
    events: list[PreprocessEvent] = []
    offset = 0
    while verts:
        deg: dict[int, int] = {v: 0 for v in verts}
        adj: dict[int, set[int]] = {v: set() for v in verts}
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
            adj[u].add(v)
            adj[v].add(u)
        applied = False
        for v in sorted(verts):
            leaves = sorted(w for w in adj[v] if deg[w] == 1)
            if len(leaves) >= 2:
                for gone in leaves[1:]:
                    events.append(PreprocessEvent("leaf", gone, anchor=v, kept=leaves[0]))
                    verts.remove(gone)
                edges = [e for e in edges if e[0] in verts and e[1] in verts]
                applied = True
                break
        if applied:
            continue
        for v in sorted(verts):
            if len(adj[v]) == len(verts) - 1:
                events.append(PreprocessEvent("apex", v))
                offset += 1
                verts.remove(v)
                edges = [e for e in edges if v not in e]
                applied = True
                break
        if not applied:
            break
    vmap = tuple(sorted(verts))
    rev = {orig: new for new, orig in enumerate(vmap, start=1)}
    reduced = Multigraph(len(vmap), tuple((rev[u], rev[v]) for u, v in edges))
    return TdPreprocessResult(reduced, vmap, offset, tuple(events))


def _is_ancestor(parents: Mapping[int, int | None], a: int, b: int) -> bool:
    x = parents[b]
    while x is not None:
        if x == a:
            return True
        x = parents[x]
    return False


def _swap_positions(parents: dict[int, int | None], a: int, b: int) -> None:
    """Exchange the tree positions of vertices a and b in place."""
    pa, pb = parents[a], parents[b]
    for x, p in parents.items():
        if x in (a, b):
            continue
        if p == a:
            parents[x] = b
        elif p == b:
            parents[x] = a
    if pb == a:
        parents[a], parents[b] = b, pa
    elif pa == b:
        parents[b], parents[a] = a, pb
    else:
        parents[a], parents[b] = pb, pa


def rebuild_forest(
    base: Mapping[int, int | None], events: tuple[PreprocessEvent, ...]
) -> dict[int, int | None]:
    """Undo preprocessing events (last first) on a forest of the reduced graph.

    An apex becomes the new single root above all current roots.  A removed
    twin leaf re-attaches below its anchor; if the forest happens to place
    the anchor below its kept sibling leaf, the two are swapped first (the
    sibling has degree one, so the swap preserves validity) which guarantees
    the re-attachment never increases the depth.
    """
    parents: dict[int, int | None] = dict(base)
    for ev in reversed(events):
        if ev.kind == "apex":
            for r in [v for v, p in parents.items() if p is None]:
                parents[r] = ev.vertex
            parents[ev.vertex] = None
        else:
            anchor, kept = ev.anchor, ev.kept
            assert anchor is not None and kept is not None
            if not _is_ancestor(parents, anchor, kept):
                _swap_positions(parents, anchor, kept)
            parents[ev.vertex] = anchor
    return parents


# ---------------------------------------------------------------------------
# partition encoding


def encode_td_partition(g: Multigraph, omega: int, reg: VarRegistry, formula: CnfFormula) -> None:
    """Formula satisfiable iff the connected graph has a derivation of length
    at most ``omega``, i.e. treedepth at most ``omega - 1``.

    Shares the derivation skeleton with the treecut encoding minus all leader
    machinery, then adds: at most one vertex per set is new at each level
    (D3), and an edge's endpoints may only coexist at a level if they share a
    set or both appeared earlier (D4).
    """
    n = g.n
    if omega < 2:
        raise ValueError(f"need a length bound of at least 2, got {omega}")
    if not is_connected(g):
        raise ValueError("partition encoding requires a connected graph")
    d = omega
    for u in range(1, n + 1):
        for v in range(u, n + 1):
            for i in range(1, d + 1):
                reg.new(("s", u, v, i))
    s = lambda u, v, i: svar(reg, u, v, i)

    for u in range(1, n + 1):
        for v in range(u, n + 1):
            formula.add(-s(u, v, 1))
            formula.add(s(u, v, d))
    for u in range(1, n + 1):
        for v in range(u, n + 1):
            for i in range(1, d):
                formula.add(-s(u, v, i), s(u, v, i + 1))
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            for i in range(2, d + 1):
                formula.add(-s(u, v, i), s(u, u, i))
                formula.add(-s(u, v, i), s(v, v, i))
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            for w in range(v + 1, n + 1):
                for i in range(1, d + 1):
                    formula.add(-s(u, v, i), -s(u, w, i), s(v, w, i))
                    formula.add(-s(u, v, i), -s(v, w, i), s(u, w, i))
                    formula.add(-s(u, w, i), -s(v, w, i), s(u, v, i))
    # D3: two co-members cannot both be new at a level
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            for i in range(2, d + 1):
                formula.add(-s(u, v, i), s(u, u, i - 1), s(v, v, i - 1))
    # D4: an edge endpoint may only be introduced next to or after the other
    for a, b in g.edges:
        u, v = min(a, b), max(a, b)
        for i in range(2, d + 1):
            formula.add(-s(u, u, i), -s(v, v, i), s(u, u, i - 1), s(u, v, i))
            formula.add(-s(u, u, i), -s(v, v, i), s(v, v, i - 1), s(u, v, i))


def add_td_symmetry(g: Multigraph, omega: int, reg: VarRegistry, formula: CnfFormula) -> None:
    """Symmetry breaking: a dominated endpoint may be forced below its neighbour.

    For every edge {u, v} with N(u) - v contained in N(v) - u some optimal
    forest makes v an ancestor of u.  Vertices enter the derivation bottom-up
    (descendants before ancestors), so the ancestor's presence at a level
    implies the descendant's.  When the containment holds both ways only one
    orientation is emitted, keeping the smaller vertex the descendant.
    """
    adj = g.adjacency()
    s = lambda u, v, i: svar(reg, u, v, i)
    for a, b in g.edges:
        down_ab = adj[a] - {b} <= adj[b] - {a}
        down_ba = adj[b] - {a} <= adj[a] - {b}
        if down_ab and down_ba:
            desc, anc = min(a, b), max(a, b)
        elif down_ab:
            desc, anc = a, b
        elif down_ba:
            desc, anc = b, a
        else:
            continue
        for i in range(2, omega + 1):
            formula.add(-s(anc, anc, i), s(desc, desc, i))


def decode_td_partition(
    model: Mapping[int, bool], reg: VarRegistry, g: Multigraph, omega: int
) -> TreedepthForest:
    """Forest from a satisfying assignment of the partition encoding.

    Sets that add no vertex over their children are dissolved into them, so
    every remaining set introduces exactly one vertex; each introduced vertex
    becomes the parent of the vertices introduced by its child sets.
    """
    der = decode_derivation(model, reg, g, omega)
    prev: dict[frozenset[int], int] = {}
    parents: dict[int, int | None] = {}
    introduced: set[int] = set()
    for i in range(2, der.length + 1):
        cur: dict[frozenset[int], int] = {}
        for part in sorted(der.levels[i - 1], key=min):
            children = [c for c in prev if c <= part]
            covered = frozenset().union(*children) if children else frozenset()
            bag = part - covered
            if not bag:
                for c in children:
                    cur[c] = prev[c]
            elif len(bag) == 1:
                (v,) = bag
                if v in introduced:
                    raise DecodeError(f"vertex {v} introduced twice")
                introduced.add(v)
                parents.setdefault(v, None)
                for c in children:
                    parents[prev[c]] = v
                cur[part] = v
            else:
                raise DecodeError(f"set {sorted(part)} introduces {len(bag)} vertices at level {i}")
        prev = cur
    if introduced != set(g.vertices()):
        raise DecodeError("not every vertex was introduced by the derivation")
    return TreedepthForest(parents)


# ---------------------------------------------------------------------------
# tree-structure encoding


def encode_td_treestructure(g: Multigraph, omega: int, reg: VarRegistry, formula: CnfFormula) -> None:
    """Formula satisfiable iff the graph has treedepth at most ``omega``.

    Guesses roots ro(r) and a parent relation par(p, c) directly, forces
    anc(a, d) to be the transitive closure of the parent relation (irreflexive
    and antisymmetric, so the guess is a forest), requires every edge to join
    comparable vertices, and bounds each vertex's ancestor count by
    ``omega - 1`` with a sequential counter.
    """
    n = g.n
    if omega < 1:
        raise ValueError(f"depth bound must be at least 1, got {omega}")
    for r in range(1, n + 1):
        reg.new(("ro", r))
    for p in range(1, n + 1):
        for c in range(1, n + 1):
            if p != c:
                reg.new(("par", p, c))
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            reg.new(("anc", a, b))
    ro = lambda r: reg.get(("ro", r))
    par = lambda p, c: reg.get(("par", p, c))
    anc = lambda a, b: reg.get(("anc", a, b))

    # at least one root; every non-root has a parent; at most one parent
    formula.add(*(ro(r) for r in range(1, n + 1)))
    for r in range(1, n + 1):
        formula.add(ro(r), *(par(p, r) for p in range(1, n + 1) if p != r))
    for p in range(1, n + 1):
        for q in range(p + 1, n + 1):
            for c in range(1, n + 1):
                if c != p and c != q:
                    formula.add(-par(p, c), -par(q, c))
    # roots have no ancestors
    for r in range(1, n + 1):
        for a in range(1, n + 1):
            if r != a:
                formula.add(-ro(r), -anc(a, r))
    # ancestry is irreflexive and antisymmetric
    for a in range(1, n + 1):
        formula.add(-anc(a, a))
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if u != v:
                formula.add(-anc(u, v), -anc(v, u))
    # the transitive closure of the parent relation is contained in anc
    for p in range(1, n + 1):
        for c in range(1, n + 1):
            if p != c:
                formula.add(-par(p, c), anc(p, c))
    for q in range(1, n + 1):
        for p in range(1, n + 1):
            for c in range(1, n + 1):
                if q != p and p != c and q != c:
                    formula.add(-par(p, c), -anc(q, p), anc(q, c))
    # and conversely anc is contained in the transitive closure
    for q in range(1, n + 1):
        for p in range(1, n + 1):
            for c in range(1, n + 1):
                if q != p and p != c and q != c:
                    formula.add(-par(p, c), -anc(q, c), anc(q, p))
    # every edge joins comparable vertices
    for u, v in g.edges:
        formula.add(anc(u, v), anc(v, u))
    # bound the ancestor count per vertex
    for c in range(1, n + 1):
        anc_vars = [anc(a, c) for a in range(1, n + 1) if a != c]
        if anc_vars:
            add_at_most_k(formula, reg, anc_vars, omega - 1, ("anc", c))


def decode_td_treestructure(
    model: Mapping[int, bool], reg: VarRegistry, g: Multigraph
) -> TreedepthForest:
    parents: dict[int, int | None] = {}
    truth = lambda key: model.get(reg.get(key), False)
    for c in g.vertices():
        found = [p for p in g.vertices() if p != c and truth(("par", p, c))]
        if len(found) > 1:
            raise DecodeError(f"vertex {c} has multiple parents {found}")
        if found:
            parents[c] = found[0]
        elif truth(("ro", c)):
            parents[c] = None
        else:
            raise DecodeError(f"vertex {c} is neither a root nor has a parent")
    return TreedepthForest(parents)


def decode_td(
    model: Mapping[int, bool],
    reg: VarRegistry,
    g: Multigraph,
    omega: int,
    encoding: str = "partition",
) -> TreedepthForest:
    """Forest from a model of either treedepth encoding."""
    if encoding == "partition":
        return decode_td_partition(model, reg, g, omega)
    if encoding == "tree-structure":
        return decode_td_treestructure(model, reg, g)
    raise ValueError(f"unknown treedepth encoding {encoding!r}")


def forest_to_json(forest: TreedepthForest) -> dict:
    return {"parents": {str(v): forest.parents[v] for v in sorted(forest.parents)}}


def forest_from_json(data: dict) -> TreedepthForest:
    parents = {
        int(v): (None if p is None else int(p)) for v, p in data["parents"].items()
    }
    return TreedepthForest(parents)
