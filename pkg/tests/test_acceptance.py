"""Acceptance gate: one test per release criterion, zero tolerance throughout.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Needs a DIMACS CDCL solver on PATH (splr is the default pick).
"""
import random
import time

import pytest

from widthforge.cli import main
from widthforge.cnf import CnfFormula, VarRegistry
from widthforge.cuts import find_small_cut, split_treecut_tasks
from widthforge.famous import ACCEPTANCE_NAMES, FAMOUS, corpus_text, famous_graph
from widthforge.graph import (
    connected_components,
    generate_random,
    generate_standard,
)
from widthforge.oracle import oracle_tcw, oracle_tcw_general, oracle_td
from widthforge.search import search_td_treestructure, search_width, verify_tcw_certificate
from widthforge.tcw import derivation_counts, encode_derivation
from widthforge.td import verify_td

pytestmark = pytest.mark.acceptance


@pytest.fixture(scope="module")
def famous_results(solver_cfg):
    """Solve all acceptance-listed famous graphs once; reused across criteria."""
    results = {}
    for name in ACCEPTANCE_NAMES:
        g = famous_graph(name)
        start = time.perf_counter()
        tcw = search_width(g, "tcw", solver_cfg)
        td = search_width(g, "td", solver_cfg)
        elapsed = time.perf_counter() - start
        results[name] = (g, tcw, td, elapsed)
    return results


def test_criterion_1_famous_graph_regression(famous_results):
    """Unambiguous small Table rows solve exactly, each instance under 120 s."""
    for name in ACCEPTANCE_NAMES:
        g, tcw, td, elapsed = famous_results[name]
        entry = FAMOUS[name]
        assert tcw.status == "exact" and tcw.upper == entry.tcw, (
            f"{name}: tcw {tcw.status} {tcw.lower}-{tcw.upper}, expected {entry.tcw}"
        )
        assert td.status == "exact" and td.upper == entry.td, (
            f"{name}: td {td.status} {td.lower}-{td.upper}, expected {entry.td}"
        )
        assert elapsed < 120.0, f"{name}: took {elapsed:.1f}s"
    print("ACCEPTANCE 1 famous-graph regression (15 instances, tcw and td): PASS")


def test_criterion_2_closed_form_families(solver_cfg):
    """tcw(K_n) = n, tcw(K_{n,n}) = 2n-2, td(K_n) = n without SAT calls."""
    for n in range(4, 9):
        result = search_width(generate_standard("complete", n), "tcw", solver_cfg)
        assert (result.status, result.upper) == ("exact", n), f"tcw(K_{n})"
    for n in range(3, 6):
        result = search_width(generate_standard("complete-bipartite", n), "tcw", solver_cfg)
        assert (result.status, result.upper) == ("exact", 2 * n - 2), f"tcw(K_{n},{n})"
    for n in range(2, 11):
        result = search_width(generate_standard("complete", n), "td", solver_cfg)
        assert (result.status, result.upper) == ("exact", n), f"td(K_{n})"
        assert result.calls == [], f"td(K_{n}) must not reach the solver"
    print("ACCEPTANCE 2 closed-form families: PASS")


def test_criterion_3_preprocessing_only_rows(solver_cfg):
    """Paths, cycles, and complete binary trees need zero SAT calls for tcw."""
    cases = [
        ("path", [2, 5, 16, 33], 2),
        ("cycle", [3, 8, 20], 2),
        ("binary-tree", [2, 3, 5], 2),
    ]
    for family, sizes, want in cases:
        for size in sizes:
            g = generate_standard(family, size)
            result = search_width(g, "tcw", solver_cfg)
            assert result.status == "exact" and result.calls == [], (family, size)
            assert result.upper == want, (family, size, result.upper)
    assert search_width(generate_standard("path", 1), "tcw", solver_cfg).upper == 1
    # cross-check the expected constants against the exhaustive oracle
    for g in (
        generate_standard("path", 4),
        generate_standard("path", 5),
        generate_standard("cycle", 4),
        generate_standard("cycle", 5),
        generate_standard("binary-tree", 2),
    ):
        assert oracle_tcw_general(g) == 2
    print("ACCEPTANCE 3 preprocessing-only families: PASS")


def test_criterion_4_oracle_equivalence(solver_cfg):
    """SAT pipeline equals brute force: treedepth on 200 random connected
    graphs up to n = 6; treecut width on the 3-edge-connected graphs among
    100 random graphs up to n = 5 plus K4, K5, K33."""
    rng = random.Random(2024)
    checked_td = 0
    while checked_td < 200:
        n = rng.randint(2, 6)
        g = generate_random(n, rng.uniform(0.2, 0.95), rng.randint(0, 10**7))
        if len(connected_components(g)) != 1:
            continue
        result = search_width(g, "td", solver_cfg)
        assert result.status == "exact"
        assert result.upper == oracle_td(g), (g, result.upper)
        checked_td += 1

    rng = random.Random(4048)
    three_ec = 0
    for _ in range(100):
        n = rng.randint(2, 5)
        g = generate_random(n, rng.uniform(0.3, 1.0), rng.randint(0, 10**7))
        result = search_width(g, "tcw", solver_cfg)
        assert result.status == "exact"
        assert result.upper == oracle_tcw_general(g), (g, result.upper)
        if (
            g.n >= 2
            and len(connected_components(g)) == 1
            and find_small_cut(g) is None
        ):
            assert result.upper == oracle_tcw(g)
            three_ec += 1
    for g, want in [
        (generate_standard("complete", 4), 4),
        (generate_standard("complete", 5), 5),
        (generate_standard("complete-bipartite", 3), 4),
    ]:
        result = search_width(g, "tcw", solver_cfg)
        assert (result.status, result.upper) == ("exact", want)
        assert oracle_tcw(g, max_vertices=6) == want
    print(
        f"ACCEPTANCE 4 oracle equivalence (200 td, 100 tcw incl. {three_ec} 3ec, named trio): PASS"
    )


def test_criterion_5_certification_invariant(famous_results):
    """Every exact result ships a decomposition the independent verifier
    accepts at exactly the reported width."""
    checked = 0
    for name in ACCEPTANCE_NAMES:
        g, tcw, td, _ = famous_results[name]
        assert tcw.certificate is not None and td.certificate is not None
        tcw_verdict = verify_tcw_certificate(g, tcw.certificate)
        assert tcw_verdict.valid and tcw_verdict.width == tcw.upper, name
        td_verdict = verify_td(td.certificate, g)
        assert td_verdict.valid and td_verdict.depth == td.upper, name
        checked += 2
    print(f"ACCEPTANCE 5 certification invariant ({checked} certificates): PASS")


def test_criterion_6_encoding_size_conformance():
    """Measured formula sizes equal the closed-form counts and stay inside
    the quadratic/cubic envelopes."""
    for n in (5, 10, 15, 20):
        for d in (2, n // 2 + 1, n):
            if d < 2:
                continue
            g = generate_random(n, 0.4, n * 97 + d)
            reg = VarRegistry()
            formula = CnfFormula(reg)
            encode_derivation(g, d, reg, formula)
            want_vars, want_clauses = derivation_counts(n, d)
            assert formula.variable_count == want_vars, (n, d)
            assert formula.clause_count == want_clauses, (n, d)
            assert formula.variable_count <= n * n * d, (n, d)
            assert formula.clause_count <= n * n * n * d, (n, d)
    print("ACCEPTANCE 6 encoding-size conformance: PASS")


def test_criterion_7_cross_encoding_agreement(solver_cfg):
    """Partition and tree-structure treedepth encodings agree (after the
    length/depth shift) and symmetry clauses never change the optimum."""
    rng = random.Random(777)
    checked = 0
    while checked < 30:
        n = rng.randint(2, 6)
        g = generate_random(n, rng.uniform(0.2, 0.9), rng.randint(0, 10**7))
        if len(connected_components(g)) != 1:
            continue
        with_sym = search_width(g, "td", solver_cfg, symmetry=True)
        without = search_width(g, "td", solver_cfg, symmetry=False)
        tree_depth, forest, _ = search_td_treestructure(g, solver_cfg)
        assert with_sym.status == without.status == "exact"
        assert with_sym.upper == without.upper == tree_depth, (g,)
        assert verify_td(forest, g, tree_depth).valid
        checked += 1
    print(f"ACCEPTANCE 7 cross-encoding agreement ({checked} instances): PASS")


def test_criterion_8_scalability_smoke(solver_cfg):
    """td(P_63) = 6 and td(B_4) = 4, each solved exactly within 300 s."""
    start = time.perf_counter()
    result = search_width(generate_standard("path", 63), "td", solver_cfg)
    path_elapsed = time.perf_counter() - start
    assert (result.status, result.upper) == ("exact", 6)
    assert path_elapsed < 300.0, f"P_63 took {path_elapsed:.1f}s"

    start = time.perf_counter()
    result = search_width(generate_standard("binary-tree", 4), "td", solver_cfg)
    tree_elapsed = time.perf_counter() - start
    assert (result.status, result.upper) == ("exact", 4)
    assert tree_elapsed < 300.0, f"B_4 took {tree_elapsed:.1f}s"
    print(
        f"ACCEPTANCE 8 scalability smoke (P_63 in {path_elapsed:.0f}s, B_4 in {tree_elapsed:.1f}s): PASS"
    )


def test_criterion_9_determinism(tmp_path, solver_cfg):
    """Encoding twice is byte-identical; random bench tables reproduce
    modulo the timing column."""
    graph_file = tmp_path / "petersen.gr"
    graph_file.write_text(corpus_text("petersen"))
    encodings = []
    for idx in (0, 1):
        out = tmp_path / f"enc{idx}.cnf"
        rc = main(
            ["encode", "--param", "tcw", "--width", "4", "--graph", str(graph_file), "-o", str(out)]
        )
        assert rc == 0
        encodings.append(out.read_bytes())
    assert encodings[0] == encodings[1]

    tables = []
    for idx in (0, 1):
        out = tmp_path / f"bench{idx}.csv"
        rc = main(
            [
                "bench", "--suite", "random", "--gen-params", "n=6,p=0.4,count=4,seed=11",
                "--solver", solver_cfg.executable, "-o", str(out),
            ]
        )
        assert rc == 0
        lines = out.read_text().splitlines()
        timing_column = lines[0].split(",").index("cpu-seconds")
        tables.append(
            [
                ",".join(cell for i, cell in enumerate(line.split(",")) if i != timing_column)
                for line in lines
            ]
        )
    assert tables[0] == tables[1]
    # the splitting recursion is deterministic too
    g = generate_random(9, 0.35, 5)
    assert split_treecut_tasks(g) == split_treecut_tasks(g)
    print("ACCEPTANCE 9 determinism: PASS")
