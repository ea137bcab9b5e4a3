"""3-CNF formulas, DIMACS parsing and brute-force satisfaction helpers."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from ..errors import DimacsSyntaxError, Not3Sat

Literal = Tuple[int, bool]  # (variable index starting at 1, negated)
Clause = Tuple[Literal, Literal, Literal]


@dataclass(frozen=True)
class CnfFormula:
    num_variables: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        if self.num_variables < 0:
            raise ValueError("negative variable count")
        clauses = tuple(tuple((int(v), bool(neg)) for v, neg in c) for c in self.clauses)
        for k, c in enumerate(clauses, 1):
            if len(c) != 3:
                raise Not3Sat(f"clause {k} has {len(c)} literals, expected 3")
            vs = [v for v, _ in c]
            if len(set(vs)) != 3:
                raise Not3Sat(f"clause {k} repeats a variable")
            for v in vs:
                if not 1 <= v <= self.num_variables:
                    raise ValueError(f"clause {k} uses variable {v} outside 1..{self.num_variables}")
        object.__setattr__(self, "clauses", clauses)

    @classmethod
    def from_ints(cls, n: int, clauses: Sequence[Sequence[int]]) -> "CnfFormula":
        return cls(n, tuple(tuple((abs(l), l < 0) for l in c) for c in clauses))

    @property
    def n(self) -> int:
        return self.num_variables

    @property
    def m(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n} {self.m}"]
        for c in self.clauses:
            lines.append(" ".join(str(-v if neg else v) for v, neg in c) + " 0")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Assignment:
    values: Tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(bool(v) for v in self.values))

    def __getitem__(self, var: int) -> bool:
        """Value of variable ``var`` (1-based)."""
        return self.values[var - 1]

    def __len__(self):
        return len(self.values)

    def literal(self, lit: Literal) -> bool:
        v, neg = lit
        return self[v] != neg

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Assignment":
        """Accept ``"101"``, ``"1,0,1"``, ``"T,F,T"`` or DIMACS-style ``"1 -2 3"``."""
        s = text.strip()
        tokens = [t for t in s.replace(",", " ").split() if t]
        if len(tokens) == 1 and set(tokens[0]) <= set("01TFtf") and len(tokens[0]) > 1:
            tokens = list(tokens[0])
        if tokens and all(t.lstrip("-").isdigit() for t in tokens) and any(t.startswith("-") or int(t) > 1 for t in tokens):
            size = n if n is not None else max(abs(int(t)) for t in tokens)
            vals = [False] * size
            for t in tokens:
                v = int(t)
                if v == 0:
                    continue
                vals[abs(v) - 1] = v > 0
            return cls(tuple(vals))
        table = {"1": True, "0": False, "t": True, "f": False, "true": True, "false": False}
        try:
            vals = tuple(table[t.lower()] for t in tokens)
        except KeyError as exc:
            raise ValueError(f"cannot parse assignment {text!r}") from exc
        if n is not None and len(vals) != n:
            raise ValueError(f"assignment has {len(vals)} values, formula has {n} variables")
        return cls(vals)

    def to_string(self) -> str:
        return "".join("1" if v else "0" for v in self.values)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF, requiring every clause to have exactly three distinct variables."""
    header = None
    clauses: List[Tuple[List[int], int]] = []
    current: List[int] = []
    start_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if header is not None:
                raise DimacsSyntaxError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsSyntaxError(f"malformed problem line {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsSyntaxError(f"malformed problem line {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsSyntaxError("negative counts in problem line", lineno)
            continue
        if header is None:
            raise DimacsSyntaxError("clause before problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsSyntaxError(f"bad literal {tok!r}", lineno) from None
            if start_line is None:
                start_line = lineno
            if lit == 0:
                clauses.append((current, start_line))
                current, start_line = [], None
                continue
            if abs(lit) > header[0]:
                raise DimacsSyntaxError(f"literal {lit} exceeds declared variable count {header[0]}", lineno)
            current.append(lit)
    if header is None:
        raise DimacsSyntaxError("missing problem line")
    if current:
        clauses.append((current, start_line))
    if len(clauses) != header[1]:
        raise DimacsSyntaxError(f"problem line declares {header[1]} clauses, found {len(clauses)}")
    for lits, line in clauses:
        if len(lits) != 3:
            raise Not3Sat(f"clause at line {line} has {len(lits)} literals")
        if len({abs(l) for l in lits}) != 3:
            raise Not3Sat(f"clause at line {line} repeats a variable")
    return CnfFormula.from_ints(header[0], [lits for lits, _ in clauses])


def satisfies(f: CnfFormula, a: Assignment) -> bool:
    if len(a) != f.n:
        return False
    return all(any(a.literal(l) for l in c) for c in f.clauses)


def all_satisfying(f: CnfFormula) -> Iterator[Assignment]:
    """Exhaustive 2^n enumeration (test oracle only; n is expected to be small)."""
    for bits in itertools.product((False, True), repeat=f.n):
        a = Assignment(bits)
        if satisfies(f, a):
            yield a
