"""Constraint satisfaction problems and propositional systems as information sets.

Both compile down to relations: a CSP cover set becomes the relation of all
evaluations on it that violate no constraint, and a propositional formula is
kept as the relation of its satisfying truth assignments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import Knowledgebase
from .core import Assignment, Domain, VariableUniverse, enumerate_assignments
from .errors import ArgumentError, DomainError
from .relations import Relation, project_relation


@dataclass(frozen=True)
class Constraint:
    """A scheme (tuple of variables) plus the relation of allowed evaluations on it."""

    scheme: tuple[str, ...]
    allowed: Relation

    def __post_init__(self):
        if frozenset(self.scheme) != self.allowed.domain:
            raise DomainError(
                f"allowed relation domain {sorted(self.allowed.domain)} does not match scheme {self.scheme}"
            )

    @property
    def scheme_set(self) -> Domain:
        return frozenset(self.scheme)


@dataclass(frozen=True)
class CSPInstance:
    universe: VariableUniverse
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        for c in self.constraints:
            self.universe.check_domain(c.scheme_set)


def evaluation_satisfies(v: Assignment, constraint: Constraint) -> bool:
    """Partial-overlap satisfaction: vacuous when the evaluation misses the scheme.

    With a proper partial overlap, membership is tested against the allowed
    relation projected to the shared variables.
    """
    overlap = v.domain & constraint.scheme_set
    if not overlap:
        return True
    return v.restrict(overlap) in project_relation(constraint.allowed, overlap).tuples


def csp_to_knowledgebase(csp: CSPInstance, covers: Sequence[Domain]) -> Knowledgebase:
    """One relation per cover set: every evaluation on it satisfying all constraints."""
    valuations = []
    for cover in covers:
        csp.universe.check_domain(cover)
        relevant = []
        for c in csp.constraints:
            overlap = cover & c.scheme_set
            if overlap:
                relevant.append((overlap, project_relation(c.allowed, overlap).tuples))
        good = [
            v
            for v in enumerate_assignments(cover, csp.universe)
            if all(v.restrict(overlap) in allowed for overlap, allowed in relevant)
        ]
        valuations.append(Relation(csp.universe, cover, frozenset(good)))
    return Knowledgebase(csp.universe, tuple(valuations))


@dataclass(frozen=True)
class PropositionalSystem:
    """Boolean symbols and formulas pre-compiled to their satisfying relations."""

    universe: VariableUniverse
    formulas: tuple[Relation, ...]

    def __post_init__(self):
        for name in self.universe.names:
            if set(self.universe.frame(name).values) != {"0", "1"}:
                raise ArgumentError(f"propositional symbol {name!r} must have the Boolean frame ('0', '1')")

    def knowledgebase(self) -> Knowledgebase:
        return Knowledgebase(self.universe, self.formulas)


def liar_cycle(n: int, consistent: bool = False) -> PropositionalSystem:
    """A chain of biconditionals s_i <-> s_(i+1) closed by s_n <-> not s_1.

    With `consistent=True` the closing edge is also a plain biconditional,
    which makes the two constant assignments the global models.
    """
    if n < 2:
        raise ArgumentError(f"a liar cycle needs length >= 2, got {n}")
    names = [f"s{i}" for i in range(1, n + 1)]
    universe = VariableUniverse.of([(name, ("0", "1")) for name in names])
    equal_pairs = [("0", "0"), ("1", "1")]
    differ_pairs = [("0", "1"), ("1", "0")]
    formulas = []
    for i in range(n - 1):
        formulas.append(Relation.from_rows(universe, (names[i], names[i + 1]), equal_pairs))
    closing = equal_pairs if consistent else differ_pairs
    formulas.append(Relation.from_rows(universe, (names[0], names[n - 1]), closing))
    return PropositionalSystem(universe, tuple(formulas))
