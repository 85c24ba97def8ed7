import itertools

import pytest

from conftest import brute_sat
from widthforge.cnf import (
    CnfFormula,
    DuplicateVariableError,
    ModelParseError,
    VarRegistry,
    add_at_most_k,
    parse_model,
    write_dimacs,
)
from widthforge.graph import generate_random
from widthforge.tcw import encode_derivation, encode_width


class TestRegistry:
    def test_first_index_is_one(self):
        reg = VarRegistry()
        assert reg.new(("s", 1, 1, 1)) == 1

    def test_distinct_keys_distinct_indices(self):
        reg = VarRegistry()
        assert reg.new(("a",)) == 1
        assert reg.new(("b",)) == 2

    def test_duplicate_key_rejected(self):
        reg = VarRegistry()
        reg.new(("a",))
        with pytest.raises(DuplicateVariableError):
            reg.new(("a",))


class TestDimacs:
    def test_single_clause(self):
        reg = VarRegistry()
        f = CnfFormula(reg)
        reg.new(("x",))
        f.add(1)
        assert write_dimacs(f) == "p cnf 1 1\n1 0\n"

    def test_empty_formula(self):
        assert write_dimacs(CnfFormula(VarRegistry())) == "p cnf 0 0\n"

    def test_insertion_order_preserved(self):
        reg = VarRegistry()
        f = CnfFormula(reg)
        reg.new(("x",))
        reg.new(("y",))
        f.add(2, 1)
        f.add(-1)
        assert write_dimacs(f) == "p cnf 2 2\n2 1 0\n-1 0\n"

    def test_empty_clause_rejected(self):
        f = CnfFormula(VarRegistry())
        with pytest.raises(ValueError):
            f.add()

    def test_unregistered_literal_rejected(self):
        f = CnfFormula(VarRegistry())
        with pytest.raises(ValueError):
            f.add(1)


class TestParseModel:
    def test_sat_single_line(self):
        assert parse_model("s SATISFIABLE\nv 1 -2 0\n") == {1: True, 2: False}

    def test_unsat(self):
        assert parse_model("s UNSATISFIABLE\n") is None

    def test_multiline_model(self):
        split = parse_model("s SATISFIABLE\nv 1 -2\nv 3 0\n")
        joined = parse_model("s SATISFIABLE\nv 1 -2 3 0\n")
        assert split == joined == {1: True, 2: False, 3: True}

    def test_comments_and_noise_ignored(self):
        text = "c stats\ns SATISFIABLE: foo.cnf\nc more\ns SATISFIABLE\nv -1 0\n"
        assert parse_model(text) == {1: False}

    def test_missing_status_raises(self):
        with pytest.raises(ModelParseError):
            parse_model("v 1 0\n")

    def test_truncated_model_raises(self):
        with pytest.raises(ModelParseError):
            parse_model("s SATISFIABLE\nv 1 -2\n")


def _counter_instance(n_vars: int, k: int):
    reg = VarRegistry()
    f = CnfFormula(reg)
    base = [reg.new(("x", i)) for i in range(n_vars)]
    add_at_most_k(f, reg, base, k, ("t",))
    return f, base


class TestSequentialCounter:
    def test_two_vars_k1(self):
        f, (a, b) = _counter_instance(2, 1)
        assert brute_sat(f.clauses, f.variable_count, {a: True, b: True}) is None
        assert brute_sat(f.clauses, f.variable_count, {a: True, b: False}) is not None

    def test_vacuous_when_k_reaches_size(self):
        f, base = _counter_instance(3, 3)
        for bits in itertools.product([False, True], repeat=3):
            fixed = dict(zip(base, bits))
            assert brute_sat(f.clauses, f.variable_count, fixed) is not None

    def test_k_zero_degenerates_to_units(self):
        f, (a,) = _counter_instance(1, 0)
        assert f.clauses == [(-a,)]

    def test_extension_iff_at_most_k(self):
        # exhaustive equivalence for all sizes and bounds up to four
        for n_vars in range(1, 5):
            for k in range(0, 5):
                f, base = _counter_instance(n_vars, k)
                for bits in itertools.product([False, True], repeat=n_vars):
                    fixed = dict(zip(base, bits))
                    extends = brute_sat(f.clauses, f.variable_count, fixed) is not None
                    assert extends == (sum(bits) <= k), (n_vars, k, bits)

    def test_size_bounds(self):
        for n_vars in range(1, 6):
            for k in range(1, 5):
                f, base = _counter_instance(n_vars, k)
                added_vars = f.variable_count - n_vars
                assert added_vars <= n_vars * k
                assert f.clause_count <= 3 * n_vars * k + n_vars


class TestDeterminism:
    def test_identical_encodings_byte_identical(self):
        def build():
            g = generate_random(6, 0.5, 7)
            reg = VarRegistry()
            f = CnfFormula(reg)
            encode_derivation(g, g.n, reg, f)
            encode_width(g, g.n, 3, reg, f)
            return write_dimacs(f)

        assert build() == build()
