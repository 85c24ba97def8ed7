import os
import stat

import pytest

from conftest import solver_path
from widthforge.cnf import CnfFormula, VarRegistry
from widthforge.solver import SolverConfig, SolverError, resolve_solver, run_solver


def _formula(clauses, n_vars):
    reg = VarRegistry()
    f = CnfFormula(reg)
    for i in range(n_vars):
        reg.new(("x", i))
    for clause in clauses:
        f.add(*clause)
    return f


def _stub(tmp_path, name, body):
    path = tmp_path / name
    path.write_text("#!/bin/sh\n" + body)
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


class TestRunSolver:
    def test_trivially_sat(self, solver_cfg):
        outcome = run_solver(_formula([(1,)], 1), solver_cfg)
        assert outcome.status == "sat"
        assert outcome.assignment[1] is True

    def test_trivially_unsat(self, solver_cfg):
        outcome = run_solver(_formula([(1,), (-1,)], 1), solver_cfg)
        assert outcome.status == "unsat"

    def test_timeout_stub(self, tmp_path):
        exe = _stub(tmp_path, "sleeper", "sleep 60\n")
        cfg = SolverConfig(exe, extra_args=(), per_call_timeout=0.3)
        outcome = run_solver(_formula([(1,)], 1), cfg)
        assert outcome.status == "timeout"

    def test_exit_code_only_unsat(self, tmp_path):
        exe = _stub(tmp_path, "codes", "exit 20\n")
        cfg = SolverConfig(exe, extra_args=())
        assert run_solver(_formula([(1,)], 1), cfg).status == "unsat"

    def test_sat_claim_without_model_rejected(self, tmp_path):
        exe = _stub(tmp_path, "satnomodel", "exit 10\n")
        cfg = SolverConfig(exe, extra_args=())
        with pytest.raises(SolverError):
            run_solver(_formula([(1,)], 1), cfg)

    def test_garbage_output_rejected(self, tmp_path):
        exe = _stub(tmp_path, "garbage", "echo nonsense\nexit 3\n")
        cfg = SolverConfig(exe, extra_args=())
        with pytest.raises(SolverError):
            run_solver(_formula([(1,)], 1), cfg)

    def test_missing_executable(self, tmp_path):
        cfg = SolverConfig(str(tmp_path / "nope"), extra_args=())
        with pytest.raises(SolverError):
            run_solver(_formula([(1,)], 1), cfg)

    def test_multiline_model_accepted(self, tmp_path):
        exe = _stub(tmp_path, "fakesat", 'echo "s SATISFIABLE"\necho "v 1"\necho "v 0"\nexit 10\n')
        cfg = SolverConfig(exe, extra_args=())
        outcome = run_solver(_formula([(1,)], 1), cfg)
        assert outcome.status == "sat"
        assert outcome.assignment == {1: True}


class TestConfig:
    def test_timeouts_must_be_positive(self):
        with pytest.raises(ValueError):
            SolverConfig("splr", per_call_timeout=0)

    def test_known_solver_defaults(self):
        assert SolverConfig("/usr/bin/splr").resolved_args() == ("-q", "-C", "-r", "-")
        assert SolverConfig("glucose").resolved_args() == ("-model",)
        assert SolverConfig("mystery-solver").resolved_args() == ()

    def test_explicit_args_win(self):
        assert SolverConfig("splr", extra_args=("-x",)).resolved_args() == ("-x",)

    def test_resolve_from_env(self, monkeypatch):
        real = solver_path()
        if real is None:
            pytest.skip("no solver on PATH")
        monkeypatch.setenv("WIDTHFORGE_SOLVER", real)
        assert resolve_solver(None) == real

    def test_resolve_missing(self, monkeypatch):
        monkeypatch.delenv("WIDTHFORGE_SOLVER", raising=False)
        with pytest.raises(SolverError):
            resolve_solver(None)
        with pytest.raises(SolverError):
            resolve_solver("definitely-not-a-solver-binary")
