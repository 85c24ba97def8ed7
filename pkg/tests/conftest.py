from __future__ import annotations

import shutil

import pytest

from widthforge.solver import SolverConfig


def solver_path() -> str | None:
    return shutil.which("splr")


@pytest.fixture(scope="session")
def solver_cfg() -> SolverConfig:
    path = solver_path()
    if path is None:
        pytest.skip("no SAT solver on PATH (install splr or set $WIDTHFORGE_SOLVER)")
    return SolverConfig(path, per_call_timeout=300.0, overall_timeout=1800.0)


def brute_sat(
    clauses: list[tuple[int, ...]],
    n_vars: int,
    fixed: dict[int, bool] | None = None,
) -> dict[int, bool] | None:
    """Tiny independent DPLL used as the ground truth for small formulas.

    Returns a satisfying assignment extending ``fixed``, or None.  Kept free
    of any production solver code so it can serve as an oracle for it.
    """
    assign: dict[int, bool] = dict(fixed or {})

    def propagate(assign: dict[int, bool]) -> dict[int, bool] | None:
        changed = True
        while changed:
            changed = False
            for clause in clauses:
                unassigned = []
                satisfied = False
                for lit in clause:
                    val = assign.get(abs(lit))
                    if val is None:
                        unassigned.append(lit)
                    elif (lit > 0) == val:
                        satisfied = True
                        break
                if satisfied:
                    continue
                if not unassigned:
                    return None
                if len(unassigned) == 1:
                    lit = unassigned[0]
                    assign[abs(lit)] = lit > 0
                    changed = True
        return assign

    def solve(assign: dict[int, bool]) -> dict[int, bool] | None:
        assign = propagate(dict(assign))
        if assign is None:
            return None
        free = [v for v in range(1, n_vars + 1) if v not in assign]
        if not free:
            return assign
        v = free[0]
        for value in (False, True):
            trial = dict(assign)
            trial[v] = value
            result = solve(trial)
            if result is not None:
                return result
        return None

    return solve(assign)


def projected_models(
    clauses: list[tuple[int, ...]], n_vars: int, project: list[int]
) -> list[dict[int, bool]]:
    """All assignments to ``project`` that extend to a model of the clauses."""
    out = []
    for bits in range(2 ** len(project)):
        fixed = {v: bool((bits >> i) & 1) for i, v in enumerate(project)}
        if brute_sat(clauses, n_vars, fixed) is not None:
            out.append(fixed)
    return out
