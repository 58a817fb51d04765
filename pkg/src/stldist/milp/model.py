from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

SENSES = ("<=", ">=", "=")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    coefs: tuple  # ((var, Fraction), ...) in insertion order
    sense: str
    rhs: Fraction
    name: str

    def lhs(self, assignment: Mapping[str, Fraction]) -> Fraction:
        return sum((c * assignment[v] for v, c in self.coefs), Fraction(0))

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        value = self.lhs(assignment)
        if self.sense == "<=":
            return value <= self.rhs
        if self.sense == ">=":
            return value >= self.rhs
        return value == self.rhs


@dataclass
class MilpModel:
    """Linear objective over bounded continuous and binary variables."""

    continuous: dict = field(default_factory=dict)  # name -> (lb, ub)
    binaries: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    sense: str = "max"
    objective: dict = field(default_factory=dict)  # name -> coef
    name: str = "model"
    _bset: set = field(default_factory=set, repr=False, compare=False)

    def add_continuous(self, name: str, lb, ub) -> str:
        if name in self.continuous or name in self._binary_set():
            raise ModelError(f"duplicate variable {name}")
        lb, ub = Fraction(lb), Fraction(ub)
        if lb > ub:
            raise ModelError(f"empty bounds for {name}: [{lb}, {ub}]")
        self.continuous[name] = (lb, ub)
        return name

    def add_binary(self, name: str) -> str:
        if name in self.continuous or name in self._binary_set():
            raise ModelError(f"duplicate variable {name}")
        self.binaries.append(name)
        self._bset.add(name)
        return name

    def _binary_set(self) -> set:
        if len(self._bset) != len(self.binaries):
            self._bset = set(self.binaries)
        return self._bset

    def is_binary(self, name: str) -> bool:
        return name in self._binary_set()

    def add_constraint(self, coefs: Mapping[str, object] | list, sense: str, rhs, name: str | None = None):
        if sense not in SENSES:
            raise ModelError(f"unknown sense {sense!r}")
        items = coefs.items() if isinstance(coefs, Mapping) else coefs
        merged: dict[str, Fraction] = {}
        for var, c in items:
            if not isinstance(c, Fraction):
                c = Fraction(c)
            merged[var] = merged[var] + c if var in merged else c
        packed = tuple((v, c) for v, c in merged.items() if c != 0)
        rhs = rhs if isinstance(rhs, Fraction) else Fraction(rhs)
        con = Constraint(packed, sense, rhs, name or f"c{len(self.constraints)}")
        self.constraints.append(con)
        return con

    def copy(self) -> "MilpModel":
        """Independent copy; constraints are immutable and shared."""
        return MilpModel(dict(self.continuous), list(self.binaries), list(self.constraints),
                         self.sense, dict(self.objective), self.name, set(self._bset))

    def set_objective(self, coefs: Mapping[str, object], sense: str = "max"):
        if sense not in ("max", "min"):
            raise ModelError(f"unknown objective sense {sense!r}")
        self.sense = sense
        self.objective = {v: Fraction(c) for v, c in coefs.items() if c != 0}

    @property
    def variables(self) -> list:
        return list(self.continuous) + list(self.binaries)

    def bounds(self, name: str) -> tuple:
        if name in self.continuous:
            return self.continuous[name]
        return (Fraction(0), Fraction(1))

    def validate(self):
        known = set(self.continuous) | self._binary_set()
        for con in self.constraints:
            for v, _ in con.coefs:
                if v not in known:
                    raise ModelError(f"constraint {con.name} references undeclared variable {v}")
        for v in self.objective:
            if v not in known:
                raise ModelError(f"objective references undeclared variable {v}")

    def objective_value(self, assignment: Mapping[str, Fraction]) -> Fraction:
        return sum((c * assignment[v] for v, c in self.objective.items()), Fraction(0))

    def is_feasible(self, assignment: Mapping[str, Fraction]) -> bool:
        for v in self.continuous:
            lb, ub = self.continuous[v]
            if not lb <= assignment[v] <= ub:
                return False
        for v in self.binaries:
            if assignment[v] not in (0, 1):
                return False
        return all(con.holds(assignment) for con in self.constraints)

    def structurally_equal(self, other: "MilpModel") -> bool:
        def cons(m):
            return sorted((c.name, c.sense, c.rhs, tuple(sorted(c.coefs))) for c in m.constraints)

        return (self.continuous == other.continuous
                and sorted(self.binaries) == sorted(other.binaries)
                and self.sense == other.sense
                and self.objective == other.objective
                and cons(self) == cons(other))


@dataclass(frozen=True)
class MilpSolution:
    status: str  # "optimal" | "infeasible" | "cutoff"
    objective_value: Fraction | None = None
    assignment: dict | None = None
    nodes: int = 0
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"
