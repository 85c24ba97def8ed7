"""Named benchmark graphs with known widths, shipped as DIMACS files.

Each graph is built from its textbook construction; the (n, m, max degree)
triple of every entry is validated against the published values at load
time to catch transcription errors.  Expected widths ride along as
annotations in the corpus files.  Names with no agreed-upon construction
(e.g. "Pmin", "Watsin", "Sousselier") are deliberately absent.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .graph import Multigraph, parse_graph, write_dimacs_graph

__all__ = [
    "ACCEPTANCE_NAMES",
    "FAMOUS",
    "FamousGraph",
    "corpus_text",
    "famous_graph",
    "load_corpus",
    "write_corpus_files",
]


def _lcf(n: int, shifts: list[int], repeats: int) -> Multigraph:
    """Cubic Hamiltonian graph from its LCF code, vertices 1..n."""
    if len(shifts) * repeats != n:
        raise ValueError("LCF shift list does not tile the cycle")
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    chords = set()
    for i in range(n):
        j = (i + shifts[i % len(shifts)]) % n
        chords.add((min(i, j) + 1, max(i, j) + 1))
    edges.extend(sorted(chords))
    g = Multigraph(n, tuple(edges))
    if any(g.degree(v) != 3 for v in g.vertices()):
        raise ValueError("LCF code did not produce a cubic graph")
    return g


def _diamond() -> Multigraph:
    return Multigraph(4, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4)))


def _bull() -> Multigraph:
    return Multigraph(5, ((1, 2), (1, 3), (2, 3), (1, 4), (2, 5)))


def _butterfly() -> Multigraph:
    return Multigraph(5, ((1, 2), (1, 3), (2, 3), (1, 4), (1, 5), (4, 5)))


def _prism() -> Multigraph:
    return Multigraph(6, ((1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)))


def _moser() -> Multigraph:
    return Multigraph(
        7,
        (
            (1, 2), (1, 3), (2, 3), (2, 4), (3, 4),
            (1, 5), (1, 6), (5, 6), (5, 7), (6, 7),
            (4, 7),
        ),
    )


def _wagner() -> Multigraph:
    edges = [(i, i + 1) for i in range(1, 8)] + [(8, 1)]
    edges += [(i, i + 4) for i in range(1, 5)]
    return Multigraph(8, tuple(edges))


def _petersen() -> Multigraph:
    outer = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6, 8), (8, 10), (10, 7), (7, 9), (9, 6)]
    return Multigraph(10, tuple(outer + spokes + inner))


def _herschel() -> Multigraph:
    return Multigraph(
        11,
        (
            (1, 3), (1, 4), (1, 5),
            (2, 3), (2, 4), (2, 6),
            (3, 7), (3, 8),
            (4, 9), (4, 10),
            (5, 7), (5, 9),
            (6, 8), (6, 10),
            (7, 11), (8, 11), (9, 11), (10, 11),
        ),
    )


def _grotzsch() -> Multigraph:
    cycle = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]
    mirrors = [(6, 2), (6, 5), (7, 1), (7, 3), (8, 2), (8, 4), (9, 3), (9, 5), (10, 4), (10, 1)]
    hub = [(11, j) for j in range(6, 11)]
    return Multigraph(11, tuple(cycle + mirrors + hub))


def _durer() -> Multigraph:
    outer = [(i, i + 1) for i in range(1, 6)] + [(6, 1)]
    spokes = [(i, i + 6) for i in range(1, 7)]
    inner = [(7, 9), (9, 11), (11, 7), (8, 10), (10, 12), (12, 8)]
    return Multigraph(12, tuple(outer + spokes + inner))


def _franklin() -> Multigraph:
    return _lcf(12, [5, -5], 6)


def _frucht() -> Multigraph:
    return _lcf(12, [-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2], 1)


def _tietze() -> Multigraph:
    base = [
        (2, 3), (3, 4), (4, 5),
        (2, 7), (3, 8), (4, 9), (5, 10),
        (6, 8), (8, 10), (10, 7), (7, 9), (9, 6),
    ]
    triangle = [(1, 11), (11, 12), (1, 12)]
    attach = [(1, 2), (11, 5), (12, 6)]
    return Multigraph(12, tuple(base + triangle + attach))


def _chvatal() -> Multigraph:
    zero_based = [
        (0, 1), (0, 4), (0, 6), (0, 9), (1, 2), (1, 5), (1, 7), (2, 3),
        (2, 6), (2, 8), (3, 4), (3, 7), (3, 9), (4, 5), (4, 8), (5, 10),
        (5, 11), (6, 10), (6, 11), (7, 8), (7, 11), (8, 10), (9, 10), (9, 11),
    ]
    return Multigraph(12, tuple((u + 1, v + 1) for u, v in zero_based))


def _paley13() -> Multigraph:
    residues = {pow(x, 2, 13) for x in range(1, 13)}
    edges = [
        (i + 1, j + 1)
        for i in range(13)
        for j in range(i + 1, 13)
        if (j - i) % 13 in residues
    ]
    return Multigraph(13, tuple(edges))


def _pappus() -> Multigraph:
    return _lcf(18, [5, 7, -7, 7, -7, -5], 3)


def _desargues() -> Multigraph:
    return _lcf(20, [5, -5, 9, -9], 5)


def _dodecahedron() -> Multigraph:
    return _lcf(20, [10, 7, 4, -4, -7, 10, -4, 7, -7, 4], 2)


def _mcgee() -> Multigraph:
    return _lcf(24, [12, 7, -7], 8)


def _nauru() -> Multigraph:
    return _lcf(24, [5, -9, 7, -7, 9, -5], 4)


@dataclass(frozen=True)
class FamousGraph:
    name: str
    build: object  # () -> Multigraph
    n: int
    m: int
    max_degree: int
    tcw: int
    td: int
    note: str


FAMOUS: dict[str, FamousGraph] = {
    f.name: f
    for f in [
        FamousGraph("diamond", _diamond, 4, 5, 3, 2, 3, "K4 minus one edge"),
        FamousGraph("bull", _bull, 5, 5, 3, 2, 3, "triangle 1-2-3 with pendants 4 at 1 and 5 at 2"),
        FamousGraph("butterfly", _butterfly, 5, 6, 4, 2, 3, "two triangles sharing vertex 1"),
        FamousGraph("prism", _prism, 6, 9, 3, 4, 5, "triangular prism: C3 x K2"),
        FamousGraph("moser", _moser, 7, 11, 4, 4, 5, "Moser spindle: two rhombi at hub 1, tips 4 and 7 joined"),
        FamousGraph("wagner", _wagner, 8, 12, 3, 4, 6, "Wagner graph: Moebius ladder on 8 vertices"),
        FamousGraph("petersen", _petersen, 10, 15, 3, 5, 6, "Petersen: outer C5 1..5, spokes +5, inner pentagram"),
        FamousGraph("herschel", _herschel, 11, 18, 4, 5, 5, "Herschel: smallest non-Hamiltonian polyhedral graph"),
        FamousGraph("grotzsch", _grotzsch, 11, 20, 5, 6, 7, "Groetzsch: Mycielskian of C5, hub 11"),
        FamousGraph("durer", _durer, 12, 18, 3, 4, 7, "Duerer graph: generalized Petersen GP(6,2)"),
        FamousGraph("franklin", _franklin, 12, 18, 3, 4, 7, "Franklin graph, LCF [5,-5]^6"),
        FamousGraph("frucht", _frucht, 12, 18, 3, 4, 6, "Frucht graph, LCF [-5,-2,-4,2,5,-2,2,5,-2,-5,4,2]"),
        FamousGraph("tietze", _tietze, 12, 18, 3, 5, 7, "Tietze graph: Petersen with vertex 1 expanded to a triangle"),
        FamousGraph("chvatal", _chvatal, 12, 24, 4, 6, 8, "Chvatal graph: 4-regular, 4-chromatic, triangle-free"),
        FamousGraph("paley13", _paley13, 13, 39, 6, 10, 10, "Paley graph on GF(13), quadratic-residue circulant"),
        FamousGraph("pappus", _pappus, 18, 27, 3, 6, 8, "Pappus graph, LCF [5,7,-7,7,-7,-5]^3"),
        FamousGraph("desargues", _desargues, 20, 30, 3, 6, 9, "Desargues graph, LCF [5,-5,9,-9]^5"),
        FamousGraph("dodecahedron", _dodecahedron, 20, 30, 3, 6, 9, "dodecahedral graph, LCF [10,7,4,-4,-7,10,-4,7,-7,4]^2"),
        FamousGraph("mcgee", _mcgee, 24, 36, 3, 6, 11, "McGee graph, LCF [12,7,-7]^8"),
        FamousGraph("nauru", _nauru, 24, 36, 3, 6, 10, "Nauru graph: generalized Petersen GP(12,5)"),
    ]
}

# the small instances every release must solve exactly
ACCEPTANCE_NAMES = (
    "diamond", "bull", "butterfly", "prism", "moser", "wagner", "petersen",
    "herschel", "grotzsch", "durer", "franklin", "frucht", "tietze",
    "chvatal", "paley13",
)


def famous_graph(name: str) -> Multigraph:
    """Build a corpus graph and validate its vertex/edge/degree counts."""
    entry = FAMOUS[name]
    g = entry.build()
    _validate(name, g)
    return g


def _validate(name: str, g: Multigraph) -> None:
    entry = FAMOUS[name]
    triple = (g.n, g.m, g.max_degree())
    if triple != (entry.n, entry.m, entry.max_degree):
        raise ValueError(
            f"{name}: built (n, m, maxdeg) = {triple}, expected "
            f"{(entry.n, entry.m, entry.max_degree)}"
        )


def corpus_text(name: str) -> str:
    """DIMACS text for one corpus graph, with provenance and expected widths."""
    entry = FAMOUS[name]
    g = famous_graph(name)
    comments = [
        f"{entry.name}: {entry.note}",
        f"check n={entry.n} m={entry.m} maxdeg={entry.max_degree}",
        f"expected tcw={entry.tcw} td={entry.td}",
    ]
    return write_dimacs_graph(g, comments)


def write_corpus_files(directory) -> None:
    """Regenerate the shipped .gr files (development helper)."""
    from pathlib import Path

    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    for name in FAMOUS:
        (root / f"{name}.gr").write_text(corpus_text(name))


def load_corpus() -> list[tuple[str, Multigraph, dict[str, int]]]:
    """Read the shipped corpus files and re-validate each entry.

    Returns (name, graph, expected widths) triples in registry order.
    """
    out = []
    package = resources.files("widthforge").joinpath("data", "famous")
    for name, entry in FAMOUS.items():
        text = package.joinpath(f"{name}.gr").read_text()
        g = parse_graph(text, "dimacs-edge")
        _validate(name, g)
        if g != famous_graph(name):
            raise ValueError(f"corpus file for {name} drifted from its construction")
        out.append((name, g, {"tcw": entry.tcw, "td": entry.td}))
    return out
