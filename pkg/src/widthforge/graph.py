"""Multigraph representation, file formats, and standard graph generators."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

__all__ = [
    "GraphFormatError",
    "Multigraph",
    "connected_components",
    "delta",
    "generate_random",
    "generate_standard",
    "induced_subgraph",
    "is_connected",
    "parse_graph",
    "write_dimacs_graph",
]

STANDARD_FAMILIES = ("path", "cycle", "complete", "complete-bipartite", "binary-tree", "grid")


class GraphFormatError(ValueError):
    """Raised for malformed graph input."""


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph on vertices 1..n with a stable edge order.

    Edges are addressed by their 1-based position in ``edges``; parallel
    edges appear once per occurrence.  Self-loops are never stored: the
    parsers strip them (counted in ``loops_dropped``) and the constructor
    rejects them outright.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    loops_dropped: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"vertex count must be non-negative, got {self.n}")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v in edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) out of vertex range 1..{self.n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}; strip loops before construction")

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def edge(self, eid: int) -> tuple[int, int]:
        """Endpoints of the edge with 1-based id ``eid``."""
        return self.edges[eid - 1]

    def adjacency(self) -> dict[int, set[int]]:
        """Simple adjacency sets (multiplicities collapsed)."""
        adj: dict[int, set[int]] = {v: set() for v in self.vertices()}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v: int) -> int:
        """Multigraph degree of ``v`` (parallel edges counted)."""
        return sum(1 for u, w in self.edges if v in (u, w))

    def max_degree(self) -> int:
        if self.n == 0:
            return 0
        counts = {v: 0 for v in self.vertices()}
        for u, w in self.edges:
            counts[u] += 1
            counts[w] += 1
        return max(counts.values())


def delta(g: Multigraph, s: Iterable[int]) -> tuple[int, ...]:
    """Edge ids with exactly one endpoint in ``s`` (a multiset: parallels repeat)."""
    inside = set(s)
    return tuple(
        eid for eid, (u, v) in enumerate(g.edges, start=1) if (u in inside) != (v in inside)
    )


def connected_components(g: Multigraph) -> list[list[int]]:
    """Vertex sets of the connected components, ordered by smallest vertex id."""
    adj = g.adjacency()
    seen: set[int] = set()
    comps: list[list[int]] = []
    for start in g.vertices():
        if start in seen:
            continue
        stack = [start]
        comp = []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Multigraph) -> bool:
    return len(connected_components(g)) <= 1


def induced_subgraph(g: Multigraph, vertices: Iterable[int]) -> tuple[Multigraph, tuple[int, ...]]:
    """Induced subgraph relabelled to 1..k.

    Returns the subgraph together with its vertex map: position ``i`` holds
    the original id of new vertex ``i + 1``.  Edge order follows the original
    edge order, so the result is deterministic.
    """
    vmap = tuple(sorted(set(vertices)))
    rev = {orig: new for new, orig in enumerate(vmap, start=1)}
    edges = tuple((rev[u], rev[v]) for u, v in g.edges if u in rev and v in rev)
    return Multigraph(len(vmap), edges), vmap


def parse_graph(text: str, fmt: str | None = None) -> Multigraph:
    """Parse a graph from DIMACS-edge or plain edge-list text.

    ``fmt`` is ``"dimacs-edge"``, ``"edge-list"``, or ``None`` to sniff: a
    ``p edge`` header selects DIMACS.  Self-loops are dropped and counted in
    ``loops_dropped`` on the result.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    content = [ln for ln in lines if ln and not ln.startswith("c")]
    if not content:
        raise GraphFormatError("empty graph input")
    if fmt is None:
        fmt = "dimacs-edge" if content[0].startswith("p") else "edge-list"
    if fmt == "dimacs-edge":
        return _parse_dimacs(content)
    if fmt == "edge-list":
        return _parse_edge_list(content)
    raise GraphFormatError(f"unknown graph format {fmt!r}")


def _parse_dimacs(content: list[str]) -> Multigraph:
    header = None
    raw_edges: list[tuple[int, int]] = []
    for ln in content:
        parts = ln.split()
        if parts[0] == "p":
            if header is not None:
                raise GraphFormatError("duplicate 'p' header line")
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphFormatError(f"malformed header: {ln!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise GraphFormatError(f"malformed header: {ln!r}") from exc
        elif parts[0] == "e":
            if header is None:
                raise GraphFormatError("edge line before 'p edge' header")
            if len(parts) != 3:
                raise GraphFormatError(f"malformed edge line: {ln!r}")
            try:
                raw_edges.append((int(parts[1]), int(parts[2])))
            except ValueError as exc:
                raise GraphFormatError(f"malformed edge line: {ln!r}") from exc
        else:
            raise GraphFormatError(f"unrecognised line: {ln!r}")
    if header is None:
        raise GraphFormatError("missing 'p edge' header")
    n = header[0]
    return _finish(n, raw_edges)


def _parse_edge_list(content: list[str]) -> Multigraph:
    head = content[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"malformed first line (want '<n> <m>'): {content[0]!r}")
    try:
        n = int(head[0])
        int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"malformed first line: {content[0]!r}") from exc
    raw_edges = []
    for ln in content[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"malformed edge line: {ln!r}")
        try:
            raw_edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise GraphFormatError(f"malformed edge line: {ln!r}") from exc
    return _finish(n, raw_edges)


def _finish(n: int, raw_edges: list[tuple[int, int]]) -> Multigraph:
    loops = 0
    edges = []
    for u, v in raw_edges:
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"edge ({u},{v}) out of vertex range 1..{n}")
        if u == v:
            loops += 1
        else:
            edges.append((u, v))
    return Multigraph(n, tuple(edges), loops_dropped=loops)


def write_dimacs_graph(g: Multigraph, comments: Iterable[str] = ()) -> str:
    """DIMACS-edge text for ``g``; ``comments`` become leading ``c`` lines."""
    out = [f"c {c}" if c else "c" for c in comments]
    out.append(f"p edge {g.n} {g.m}")
    out.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def generate_standard(family: str, n: int) -> Multigraph:
    """Named graph families with canonical vertex numbering.

    path:               vertices 1..n along the path (n >= 1)
    cycle:              vertices 1..n around the cycle (n >= 3)
    complete:           K_n on 1..n (n >= 1)
    complete-bipartite: K_{n,n}, sides 1..n and n+1..2n (n >= 1)
    binary-tree:        complete binary tree of height n in heap order,
                        children of i are 2i and 2i+1 (n >= 1)
    grid:               n x n grid, vertex (r,c) -> (r-1)*n + c (n >= 1)
    """
    if family == "path":
        if n < 1:
            raise ValueError("path needs n >= 1")
        return Multigraph(n, tuple((i, i + 1) for i in range(1, n)))
    if family == "cycle":
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
        return Multigraph(n, tuple(edges))
    if family == "complete":
        if n < 1:
            raise ValueError("complete needs n >= 1")
        return Multigraph(n, tuple((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)))
    if family == "complete-bipartite":
        if n < 1:
            raise ValueError("complete-bipartite needs n >= 1")
        edges = tuple((a, b) for a in range(1, n + 1) for b in range(n + 1, 2 * n + 1))
        return Multigraph(2 * n, edges)
    if family == "binary-tree":
        if n < 1:
            raise ValueError("binary-tree needs n >= 1")
        size = 2**n - 1
        edges = []
        for i in range(1, size + 1):
            for child in (2 * i, 2 * i + 1):
                if child <= size:
                    edges.append((i, child))
        return Multigraph(size, tuple(edges))
    if family == "grid":
        if n < 1:
            raise ValueError("grid needs n >= 1")

        def vid(r: int, c: int) -> int:
            return (r - 1) * n + c

        edges = []
        for r in range(1, n + 1):
            for c in range(1, n + 1):
                if c < n:
                    edges.append((vid(r, c), vid(r, c + 1)))
                if r < n:
                    edges.append((vid(r, c), vid(r + 1, c)))
        return Multigraph(n * n, tuple(edges))
    raise ValueError(f"unknown family {family!r}; choose from {STANDARD_FAMILIES}")


def generate_random(n: int, p: float, seed: int) -> Multigraph:
    """G(n, p) with a reproducible edge list.

    Uses Python's Mersenne Twister seeded with the integer ``seed`` and
    draws pairs in ascending (u, v) order, so the same seed always yields
    the same edge list bit for bit.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0,1], got {p}")
    rng = random.Random(seed)
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < p:
                edges.append((u, v))
    return Multigraph(n, tuple(edges))
