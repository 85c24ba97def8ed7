"""Width search pipelines: preprocess, encode, solve, decode, verify, certify."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .cnf import CnfFormula, VarRegistry
from .cuts import DecompositionTask, split_treecut_tasks, tiny_task_width
from .graph import Multigraph, connected_components, induced_subgraph
from .solver import SolveOutcome, SolverConfig, SolverError, run_solver
from .tcw import (
    TcwVerdict,
    TreecutDecomposition,
    decode_derivation,
    derivation_width,
    encode_derivation,
    encode_width,
    to_decomposition,
    verify_tcw,
)
from .td import (
    TreedepthForest,
    add_td_symmetry,
    decode_td_partition,
    decode_td_treestructure,
    encode_td_partition,
    encode_td_treestructure,
    preprocess_td,
    rebuild_forest,
    verify_td,
)

__all__ = [
    "SolveCall",
    "TaskCertificate",
    "TcwCertificate",
    "WidthResult",
    "certificate_from_json",
    "certificate_to_json",
    "search_width",
    "verify_tcw_certificate",
]


@dataclass(frozen=True)
class SolveCall:
    """One SAT call in a width search, for reproducibility logs."""

    task: str
    bound: int
    verdict: str  # "sat", "unsat", or "timeout"
    seconds: float
    variables: int
    clauses: int


@dataclass(frozen=True)
class TaskCertificate:
    """A verified decomposition for one splitting task, bags in original ids."""

    vertex_map: tuple[int, ...]
    decomposition: TreecutDecomposition
    width: int


@dataclass(frozen=True)
class TcwCertificate:
    """Treecut-width certificate: the splitting floor plus per-task trees.

    The splitting itself is deterministic, so a verifier re-splits the graph
    and checks each task's decomposition at its claimed width; the overall
    width is the max of the floor and the task widths.
    """

    floor: int
    split: bool
    tasks: tuple[TaskCertificate, ...]


@dataclass
class WidthResult:
    parameter: str  # "tcw" or "td"
    status: str  # "exact", "bounded", or "unknown"
    lower: int
    upper: int
    certificate: TcwCertificate | TreedepthForest | None
    calls: list[SolveCall] = field(default_factory=list)
    note: str | None = None


class _Budget:
    """Shared deadline bookkeeping for one search."""

    def __init__(self, cfg: SolverConfig):
        self.cfg = cfg
        self.deadline = time.monotonic() + cfg.overall_timeout

    def remaining(self) -> float:
        return self.deadline - time.monotonic()

    def call_config(self) -> SolverConfig | None:
        remaining = self.remaining()
        if remaining <= 0:
            return None
        return SolverConfig(
            executable=self.cfg.executable,
            extra_args=self.cfg.extra_args,
            per_call_timeout=min(self.cfg.per_call_timeout, remaining),
            overall_timeout=self.cfg.overall_timeout,
            keep_files=self.cfg.keep_files,
        )


def search_width(
    g: Multigraph,
    parameter: str,
    cfg: SolverConfig,
    strategy: str = "linear",
    *,
    preprocess: bool = True,
    symmetry: bool = True,
    levels: int | None = None,
) -> WidthResult:
    """Compute treecut width or treedepth of ``g`` exactly, with certificates.

    ``strategy`` is "linear" (sweep bounds upward from 1) or "binary"
    (bisect between 1 and n).  Every SAT model is decoded and the resulting
    decomposition verified before the value is trusted; exact results always
    carry a certificate that the independent verifier accepts at exactly the
    reported width.  Per-call or overall timeouts freeze the affected bound
    and downgrade the status to "bounded".
    """
    if strategy not in ("linear", "binary"):
        raise ValueError(f"unknown strategy {strategy!r}")
    budget = _Budget(cfg)
    try:
        if parameter == "tcw":
            return _search_tcw(g, cfg, strategy, budget, preprocess, levels)
        if parameter == "td":
            return _search_td(g, cfg, strategy, budget, preprocess, symmetry)
    except SolverError as exc:
        return WidthResult(parameter, "unknown", 0, g.n, None, [], note=str(exc))
    raise ValueError(f"unknown parameter {parameter!r}")


# ---------------------------------------------------------------------------
# treecut width


@dataclass
class _TaskOutcome:
    exact: bool
    lower: int
    upper: int
    certificate: TaskCertificate | None


def _search_tcw(
    g: Multigraph,
    cfg: SolverConfig,
    strategy: str,
    budget: _Budget,
    preprocess: bool,
    levels: int | None,
) -> WidthResult:
    calls: list[SolveCall] = []
    if preprocess:
        tasks, floor = split_treecut_tasks(g)
        split = True
    else:
        tasks, floor = [DecompositionTask(g, tuple(g.vertices()), 0)], 0
        split = False
    outcomes: list[_TaskOutcome] = []
    for idx, task in enumerate(tasks, start=1):
        label = f"task{idx}(n={task.graph.n})"
        outcomes.append(_solve_tcw_task(task, label, cfg, strategy, budget, levels, calls))
    lower = max([floor] + [o.lower for o in outcomes], default=floor)
    upper = max([floor] + [o.upper for o in outcomes], default=floor)
    if all(o.exact for o in outcomes):
        cert = TcwCertificate(floor, split, tuple(o.certificate for o in outcomes))
        verdict = verify_tcw_certificate(g, cert)
        if not verdict.valid or verdict.width != upper:
            raise AssertionError(f"internal certificate check failed: {verdict}")
        return WidthResult("tcw", "exact", lower, upper, cert, calls)
    return WidthResult("tcw", "bounded", lower, upper, None, calls)


def _single_node_decomposition(task: DecompositionTask) -> TreecutDecomposition:
    bag = frozenset(task.vertex_map)
    return TreecutDecomposition({1: None}, {1: bag})


def _solve_tcw_task(
    task: DecompositionTask,
    label: str,
    cfg: SolverConfig,
    strategy: str,
    budget: _Budget,
    levels: int | None,
    calls: list[SolveCall],
) -> _TaskOutcome:
    n = task.graph.n
    if n == 0:
        return _TaskOutcome(True, 0, 0, TaskCertificate((), TreecutDecomposition({}, {}), 0))
    if n <= 2:
        width = tiny_task_width(task.graph)
        cert = TaskCertificate(task.vertex_map, _single_node_decomposition(task), width)
        return _TaskOutcome(True, width, width, cert)
    d = levels if levels is not None else n

    def attempt(omega: int) -> tuple[SolveOutcome | None, TaskCertificate | None]:
        call_cfg = budget.call_config()
        if call_cfg is None:
            return None, None
        reg = VarRegistry()
        formula = CnfFormula(reg)
        encode_derivation(task.graph, d, reg, formula)
        encode_width(task.graph, d, omega, reg, formula)
        outcome = run_solver(formula, call_cfg)
        calls.append(
            SolveCall(label, omega, outcome.status, outcome.seconds, formula.variable_count, formula.clause_count)
        )
        if outcome.status != "sat":
            return outcome, None
        der = decode_derivation(outcome.assignment, reg, task.graph, d)
        dec = to_decomposition(der)
        verdict = verify_tcw(dec, task.graph, omega)
        if not verdict.valid:
            raise AssertionError(f"decoded decomposition rejected: {verdict.reason}")
        if verdict.width != derivation_width(der, task.graph):
            raise AssertionError("derivation width disagrees with decomposition width")
        mapped = TreecutDecomposition(
            dict(dec.parents),
            {t: frozenset(task.vertex_map[v - 1] for v in bag) for t, bag in dec.bags.items()},
        )
        return outcome, TaskCertificate(task.vertex_map, mapped, verdict.width)

    if strategy == "linear":
        low = 1
        while low <= n:
            outcome, cert = attempt(low)
            if outcome is None or outcome.status == "timeout":
                return _TaskOutcome(False, low, n, None)
            if outcome.status == "unsat":
                low += 1
                continue
            if cert.width != low:
                raise AssertionError("first satisfiable width must match the decoded width")
            return _TaskOutcome(True, low, low, cert)
        raise AssertionError("width search ran past n; the top bound is always satisfiable")
    # binary: upper starts at n with the trivial single-bag certificate
    low, high = 1, n
    best = TaskCertificate(task.vertex_map, _single_node_decomposition(task), n)
    while low < high:
        mid = (low + high) // 2
        assert low <= mid < high
        outcome, cert = attempt(mid)
        if outcome is None or outcome.status == "timeout":
            return _TaskOutcome(False, low, high, None)
        if outcome.status == "unsat":
            low = mid + 1
        else:
            best = cert
            high = cert.width
    if best.width != high:
        raise AssertionError("binary search certificate out of sync with bounds")
    return _TaskOutcome(True, low, high, best)


def verify_tcw_certificate(g: Multigraph, cert: TcwCertificate) -> TcwVerdict:
    """Re-split the graph deterministically and verify every task decomposition."""
    if cert.split:
        tasks, floor = split_treecut_tasks(g)
    else:
        tasks, floor = [DecompositionTask(g, tuple(g.vertices()), 0)], 0
    if floor != cert.floor:
        return TcwVerdict(False, reason=f"floor mismatch: split gives {floor}, certificate claims {cert.floor}")
    if len(tasks) != len(cert.tasks):
        return TcwVerdict(False, reason=f"task count mismatch: {len(tasks)} vs {len(cert.tasks)}")
    width = floor
    for task, tc in zip(tasks, cert.tasks):
        if task.vertex_map != tc.vertex_map:
            return TcwVerdict(False, reason="task vertex sets disagree with the canonical split")
        rev = {orig: new for new, orig in enumerate(task.vertex_map, start=1)}
        try:
            local = TreecutDecomposition(
                dict(tc.decomposition.parents),
                {t: frozenset(rev[x] for x in bag) for t, bag in tc.decomposition.bags.items()},
            )
        except KeyError:
            return TcwVerdict(False, reason="certificate bag mentions a vertex outside its task")
        verdict = verify_tcw(local, task.graph)
        if not verdict.valid:
            return TcwVerdict(False, reason=f"task decomposition invalid: {verdict.reason}")
        if verdict.width != tc.width:
            return TcwVerdict(False, reason=f"task width {verdict.width} differs from claimed {tc.width}")
        width = max(width, verdict.width)
    return TcwVerdict(True, width=width)


def certificate_to_json(cert: TcwCertificate) -> dict:
    tasks = []
    for tc in cert.tasks:
        nodes = [
            {"id": t, "parent": tc.decomposition.parents[t], "bag": sorted(tc.decomposition.bags[t])}
            for t in sorted(tc.decomposition.parents)
        ]
        tasks.append({"vertices": list(tc.vertex_map), "width": tc.width, "nodes": nodes})
    return {"kind": "tcw-certificate", "floor": cert.floor, "split": cert.split, "tasks": tasks}


def certificate_from_json(data: dict) -> TcwCertificate:
    tasks = []
    for entry in data["tasks"]:
        parents: dict[int, int | None] = {}
        bags: dict[int, frozenset[int]] = {}
        for node in entry["nodes"]:
            t = int(node["id"])
            parents[t] = None if node["parent"] is None else int(node["parent"])
            bags[t] = frozenset(int(v) for v in node["bag"])
        tasks.append(
            TaskCertificate(tuple(int(v) for v in entry["vertices"]), TreecutDecomposition(parents, bags), int(entry["width"]))
        )
    return TcwCertificate(int(data["floor"]), bool(data.get("split", True)), tuple(tasks))


# ---------------------------------------------------------------------------
# treedepth


@dataclass
class _TdOutcome:
    exact: bool
    lower: int
    upper: int
    forest: dict[int, int | None] | None  # original ids


def _search_td(
    g: Multigraph,
    cfg: SolverConfig,
    strategy: str,
    budget: _Budget,
    preprocess: bool,
    symmetry: bool,
) -> WidthResult:
    calls: list[SolveCall] = []
    outcome = _solve_td_any(g, tuple(g.vertices()), cfg, strategy, budget, preprocess, symmetry, calls, "g")
    if outcome.exact:
        forest = TreedepthForest(outcome.forest)
        verdict = verify_td(forest, g, outcome.upper)
        if not verdict.valid or verdict.depth != outcome.upper:
            raise AssertionError(f"internal forest check failed: {verdict}")
        return WidthResult("td", "exact", outcome.lower, outcome.upper, forest, calls)
    return WidthResult("td", "bounded", outcome.lower, outcome.upper, None, calls)


def _solve_td_any(
    g: Multigraph,
    vmap: tuple[int, ...],
    cfg: SolverConfig,
    strategy: str,
    budget: _Budget,
    preprocess: bool,
    symmetry: bool,
    calls: list[SolveCall],
    label: str,
) -> _TdOutcome:
    """Treedepth of a possibly disconnected graph: max over components."""
    if g.n == 0:
        return _TdOutcome(True, 0, 0, {})
    comps = connected_components(g)
    results = []
    for k, comp in enumerate(comps, start=1):
        sub, cmap = induced_subgraph(g, comp)
        omap = tuple(vmap[c - 1] for c in cmap)
        sub_label = label if len(comps) == 1 else f"{label}.c{k}"
        results.append(
            _solve_td_connected(sub, omap, cfg, strategy, budget, preprocess, symmetry, calls, sub_label)
        )
    lower = max(r.lower for r in results)
    upper = max(r.upper for r in results)
    if all(r.exact for r in results):
        forest: dict[int, int | None] = {}
        for r in results:
            forest.update(r.forest)
        return _TdOutcome(True, lower, upper, forest)
    return _TdOutcome(False, lower, upper, None)


def _solve_td_connected(
    g: Multigraph,
    vmap: tuple[int, ...],
    cfg: SolverConfig,
    strategy: str,
    budget: _Budget,
    preprocess: bool,
    symmetry: bool,
    calls: list[SolveCall],
    label: str,
) -> _TdOutcome:
    if not preprocess:
        return _td_sweep(g, vmap, cfg, strategy, budget, symmetry, calls, label)
    pre = preprocess_td(g)
    events = tuple(
        type(e)(e.kind, vmapped(vmap, e.vertex), anchor=vmapped(vmap, e.anchor), kept=vmapped(vmap, e.kept))
        for e in pre.events
    )
    if pre.reduced.n == 0:
        inner = _TdOutcome(True, 0, 0, {})
    elif pre.reduced.n == g.n:
        return _td_sweep(g, vmap, cfg, strategy, budget, symmetry, calls, label)
    else:
        rmap = tuple(vmap[r - 1] for r in pre.vertex_map)
        inner = _solve_td_any(
            pre.reduced, rmap, cfg, strategy, budget, preprocess, symmetry, calls, label + "r"
        )
    lower = inner.lower + pre.apex_offset
    upper = inner.upper + pre.apex_offset
    if inner.exact:
        return _TdOutcome(True, lower, upper, rebuild_forest(inner.forest, events))
    return _TdOutcome(False, lower, upper, None)


def vmapped(vmap: tuple[int, ...], v: int | None) -> int | None:
    return None if v is None else vmap[v - 1]


def _chain_forest(g: Multigraph, vmap: tuple[int, ...]) -> dict[int, int | None]:
    """Trivial certificate of depth n: the vertices along one path."""
    forest: dict[int, int | None] = {}
    prev: int | None = None
    for v in g.vertices():
        forest[vmap[v - 1]] = prev
        prev = vmap[v - 1]
    return forest


def _td_sweep(
    g: Multigraph,
    vmap: tuple[int, ...],
    cfg: SolverConfig,
    strategy: str,
    budget: _Budget,
    symmetry: bool,
    calls: list[SolveCall],
    label: str,
) -> _TdOutcome:
    """SAT sweep over the depth of one connected, irreducible graph."""
    n = g.n
    if n == 1:
        return _TdOutcome(True, 1, 1, {vmap[0]: None})

    def attempt(depth: int) -> tuple[SolveOutcome | None, dict[int, int | None] | None]:
        call_cfg = budget.call_config()
        if call_cfg is None:
            return None, None
        length = depth + 1
        reg = VarRegistry()
        formula = CnfFormula(reg)
        encode_td_partition(g, length, reg, formula)
        if symmetry:
            add_td_symmetry(g, length, reg, formula)
        outcome = run_solver(formula, call_cfg)
        calls.append(
            SolveCall(label, depth, outcome.status, outcome.seconds, formula.variable_count, formula.clause_count)
        )
        if outcome.status != "sat":
            return outcome, None
        forest = decode_td_partition(outcome.assignment, reg, g, length)
        verdict = verify_td(forest, g, depth)
        if not verdict.valid:
            raise AssertionError(f"decoded forest rejected: {verdict.reason}")
        mapped = {vmapped(vmap, v): vmapped(vmap, p) for v, p in forest.parents.items()}
        return outcome, mapped

    if strategy == "linear":
        depth = 1
        while depth <= n:
            outcome, forest = attempt(depth)
            if outcome is None or outcome.status == "timeout":
                return _TdOutcome(False, depth, n, None)
            if outcome.status == "unsat":
                depth += 1
                continue
            actual = TreedepthForest(forest).depth()
            if actual != depth:
                raise AssertionError("first satisfiable depth must match the decoded depth")
            return _TdOutcome(True, depth, depth, forest)
        raise AssertionError("depth search ran past n; depth n is always achievable")
    low, high = 1, n
    best = _chain_forest(g, vmap)
    while low < high:
        mid = (low + high) // 2
        assert low <= mid < high
        outcome, forest = attempt(mid)
        if outcome is None or outcome.status == "timeout":
            return _TdOutcome(False, low, high, None)
        if outcome.status == "unsat":
            low = mid + 1
        else:
            best = forest
            high = TreedepthForest(forest).depth()
    if TreedepthForest(best).depth() != high:
        raise AssertionError("binary search forest out of sync with bounds")
    return _TdOutcome(True, low, high, best)


# ---------------------------------------------------------------------------
# tree-structure treedepth search (for cross-encoding checks and the CLI encoder)


def search_td_treestructure(
    g: Multigraph, cfg: SolverConfig, budget: _Budget | None = None
) -> tuple[int, TreedepthForest, list[SolveCall]]:
    """Exact treedepth via the tree-structure encoding, linear sweep from 1.

    Handles disconnected graphs natively.  Intended for agreement checks
    against the partition pipeline; no preprocessing is applied.
    """
    if g.n == 0:
        return 0, TreedepthForest({}), []
    budget = budget or _Budget(cfg)
    calls: list[SolveCall] = []
    for depth in range(1, g.n + 1):
        call_cfg = budget.call_config()
        if call_cfg is None:
            raise SolverError("tree-structure search ran out of time")
        reg = VarRegistry()
        formula = CnfFormula(reg)
        encode_td_treestructure(g, depth, reg, formula)
        outcome = run_solver(formula, call_cfg)
        calls.append(
            SolveCall("tree", depth, outcome.status, outcome.seconds, formula.variable_count, formula.clause_count)
        )
        if outcome.status == "timeout":
            raise SolverError("tree-structure search timed out")
        if outcome.status == "sat":
            forest = decode_td_treestructure(outcome.assignment, reg, g)
            verdict = verify_td(forest, g, depth)
            if not verdict.valid:
                raise AssertionError(f"decoded forest rejected: {verdict.reason}")
            return depth, forest, calls
    raise AssertionError("depth n is always achievable")
