"""CNF construction: variable registry, sequential at-most-k counter, DIMACS I/O."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "CnfFormula",
    "DuplicateVariableError",
    "ModelParseError",
    "VarRegistry",
    "add_at_most_k",
    "parse_model",
    "write_dimacs",
]

SemanticKey = tuple


class DuplicateVariableError(ValueError):
    """A semantic key was registered twice."""


class ModelParseError(ValueError):
    """Solver output could not be interpreted."""


@dataclass
class VarRegistry:
    """Deterministic map from semantic variable keys to CNF indices.

    Keys are tuples whose first element names the variable family
    ("s", "l", "ad", "tor", "ro", "par", "anc", "counter").  Indices are
    handed out in registration order, so encoders that register in a fixed
    enumeration order produce identical registries for identical inputs.
    """

    _index: dict[SemanticKey, int] = field(default_factory=dict)

    def new(self, key: SemanticKey) -> int:
        if key in self._index:
            raise DuplicateVariableError(f"variable key already registered: {key!r}")
        idx = len(self._index) + 1
        self._index[key] = idx
        return idx

    def get(self, key: SemanticKey) -> int:
        return self._index[key]

    def __contains__(self, key: SemanticKey) -> bool:
        return key in self._index

    @property
    def count(self) -> int:
        return len(self._index)

    def keys_of_kind(self, kind: str) -> list[SemanticKey]:
        return [k for k in self._index if k[0] == kind]


@dataclass
class CnfFormula:
    """A clause store tied to a registry for its variable count.

    Clauses keep insertion order and are never deduplicated.  Empty clauses
    are rejected: an encoder that derives a contradiction should emit two
    opposing unit clauses instead.
    """

    registry: VarRegistry = field(default_factory=VarRegistry)
    clauses: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def variable_count(self) -> int:
        return self.registry.count

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def add(self, *literals: int) -> None:
        if not literals:
            raise ValueError("empty clause; emit two opposing units instead")
        for lit in literals:
            if lit == 0 or abs(lit) > self.registry.count:
                raise ValueError(f"literal {lit} outside registered variables")
        self.clauses.append(tuple(literals))


def add_at_most_k(
    formula: CnfFormula,
    reg: VarRegistry,
    variables: Sequence[int],
    k: int,
    tag: SemanticKey,
) -> None:
    """Constrain at most ``k`` of ``variables`` to be true (sequential counter).

    Registers counter variables ("counter", *tag, position, j) for each
    1-based position in ``variables`` and j in 1..k, where the counter is
    true whenever at least j of the first ``position`` variables hold.
    Adds O(len(variables) * k) variables and clauses.  ``k == 0`` degenerates
    to unit clauses forcing every variable false.
    """
    if k < 0:
        raise ValueError(f"cardinality bound must be non-negative, got {k}")
    if not variables:
        raise ValueError("at-most-k over an empty variable list")
    if k == 0:
        for lit in variables:
            formula.add(-lit)
        return
    total = len(variables)
    count = {}
    for pos in range(1, total + 1):
        for j in range(1, k + 1):
            count[pos, j] = reg.new(("counter", *tag, pos, j))
    # a true variable pushes its prefix count to at least one
    for pos in range(1, total + 1):
        formula.add(-variables[pos - 1], count[pos, 1])
    # prefix counts are monotone in the position
    for pos in range(2, total + 1):
        for j in range(1, k + 1):
            formula.add(-count[pos - 1, j], count[pos, j])
    # a true variable increments the count
    for pos in range(2, total + 1):
        for j in range(2, k + 1):
            formula.add(-variables[pos - 1], -count[pos - 1, j - 1], count[pos, j])
    # forbid a true variable once k is reached
    for pos in range(2, total + 1):
        formula.add(-variables[pos - 1], -count[pos - 1, k])


def write_dimacs(formula: CnfFormula, comments: Sequence[str] = ()) -> str:
    """Byte-deterministic DIMACS CNF text; clauses in insertion order."""
    lines = [f"c {c}" if c else "c" for c in comments]
    lines.append(f"p cnf {formula.variable_count} {formula.clause_count}")
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


_ANSI = re.compile(r"\x1b\[[0-9;]*[A-Za-z]")


def parse_model(text: str) -> dict[int, bool] | None:
    """Interpret solver stdout.

    Returns the assignment for ``s SATISFIABLE`` output (``v`` lines,
    terminated by literal 0; multiple ``v`` lines concatenate), ``None``
    for ``s UNSATISFIABLE``, and raises :class:`ModelParseError` when no
    status line is present or the model is truncated.
    """
    status: str | None = None
    literals: list[int] = []
    terminated = False
    for raw in text.splitlines():
        line = _ANSI.sub("", raw).strip()
        if line.startswith("s "):
            word = line[2:].split(":")[0].strip()
            if word == "SATISFIABLE":
                status = "sat"
            elif word == "UNSATISFIABLE":
                status = "unsat"
            else:
                raise ModelParseError(f"unrecognised status line: {raw!r}")
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                try:
                    lit = int(tok)
                except ValueError as exc:
                    raise ModelParseError(f"bad literal {tok!r} in model line") from exc
                if lit == 0:
                    terminated = True
                    break
                literals.append(lit)
    if status is None:
        raise ModelParseError("no status line in solver output")
    if status == "unsat":
        return None
    if not terminated:
        raise ModelParseError("model not terminated by literal 0")
    return {abs(lit): lit > 0 for lit in literals}
