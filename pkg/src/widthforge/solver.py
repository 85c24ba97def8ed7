"""External SAT-solver invocation over temp files and stdout."""
from __future__ import annotations

import os
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass

from .cnf import CnfFormula, ModelParseError, parse_model, write_dimacs

__all__ = [
    "SolveOutcome",
    "SolverConfig",
    "SolverError",
    "default_args_for",
    "resolve_solver",
    "run_solver",
]

SOLVER_ENV_VAR = "WIDTHFORGE_SOLVER"

# Flags that make well-known solvers print "s ..."/"v ..." lines on stdout.
# Used only when SolverConfig.extra_args is left unset.
_KNOWN_ARGS: dict[str, tuple[str, ...]] = {
    "splr": ("-q", "-C", "-r", "-"),
    "glucose": ("-model",),
    "glucose-simp": ("-model",),
    "glucose-syrup": ("-model",),
    "cadical": (),
    "kissat": (),
    "cryptominisat5": (),
    "minisat": (),
}


class SolverError(RuntimeError):
    """Spawn failure or solver output that cannot be interpreted."""


@dataclass(frozen=True)
class SolverConfig:
    """How to reach the external solver.

    ``extra_args`` of None picks a per-solver default from a small table of
    known executables (empty for unknown ones); pass an explicit tuple to
    override.  Timeouts are in seconds: ``per_call_timeout`` kills a single
    solver process, ``overall_timeout`` bounds a whole width search.
    """

    executable: str
    extra_args: tuple[str, ...] | None = None
    per_call_timeout: float = 2000.0
    overall_timeout: float = 6 * 3600.0
    keep_files: bool = False

    def __post_init__(self) -> None:
        if self.per_call_timeout <= 0 or self.overall_timeout <= 0:
            raise ValueError("timeouts must be positive")

    def resolved_args(self) -> tuple[str, ...]:
        if self.extra_args is not None:
            return tuple(self.extra_args)
        return default_args_for(self.executable)


def default_args_for(executable: str) -> tuple[str, ...]:
    name = os.path.basename(executable)
    return _KNOWN_ARGS.get(name, ())


def resolve_solver(path: str | None) -> str:
    """Pick the solver executable: explicit path, else $WIDTHFORGE_SOLVER."""
    candidate = path or os.environ.get(SOLVER_ENV_VAR)
    if not candidate:
        raise SolverError(
            f"no SAT solver configured; pass --solver or set ${SOLVER_ENV_VAR}"
        )
    found = shutil.which(candidate)
    if found is None:
        raise SolverError(f"solver executable not found: {candidate}")
    return found


@dataclass(frozen=True)
class SolveOutcome:
    status: str  # "sat", "unsat", or "timeout"
    assignment: dict[int, bool] | None
    seconds: float


def run_solver(formula: CnfFormula | str, cfg: SolverConfig) -> SolveOutcome:
    """Write DIMACS to a temp file, run the solver on it, interpret the output.

    The CNF goes to a fresh temporary directory which is removed after the
    call unless ``cfg.keep_files`` is set.  The solver is invoked as
    ``executable <extra args> <cnf path>`` and killed at
    ``per_call_timeout``.  Output is read per the ``s``/``v`` stdout
    convention, falling back to exit code 10 (SAT) / 20 (UNSAT) when no
    status line is printed.
    """
    text = formula if isinstance(formula, str) else write_dimacs(formula)
    workdir = tempfile.mkdtemp(prefix="widthforge-")
    cnf_path = os.path.join(workdir, "instance.cnf")
    try:
        with open(cnf_path, "w") as handle:
            handle.write(text)
        argv = [cfg.executable, *cfg.resolved_args(), cnf_path]
        start = time.perf_counter()
        try:
            proc = subprocess.run(
                argv,
                capture_output=True,
                text=True,
                timeout=cfg.per_call_timeout,
                cwd=workdir,
            )
        except subprocess.TimeoutExpired:
            return SolveOutcome("timeout", None, time.perf_counter() - start)
        except OSError as exc:
            raise SolverError(f"failed to run solver {argv[0]}: {exc}") from exc
        elapsed = time.perf_counter() - start
        try:
            model = parse_model(proc.stdout)
        except ModelParseError as exc:
            if proc.returncode == 20:
                return SolveOutcome("unsat", None, elapsed)
            if proc.returncode == 10:
                raise SolverError(
                    "solver exited 10 (SAT) but printed no usable model; "
                    "add model-printing flags via extra_args"
                ) from exc
            raise SolverError(
                f"cannot interpret solver output (exit code {proc.returncode}): {exc}"
            ) from exc
        if model is None:
            return SolveOutcome("unsat", None, elapsed)
        return SolveOutcome("sat", model, elapsed)
    finally:
        if cfg.keep_files:
            pass
        else:
            shutil.rmtree(workdir, ignore_errors=True)
