"""Relations: sets of assignments over a common domain.

This is the information-set instance of the valuation algebra contract:
combination is the natural join, projection keeps the restriction of every
tuple, the neutral element is the full product of frames, and the null
element is the empty relation. The order is set inclusion, with the empty
relation as the bottom of every domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .core import Assignment, Domain, VariableUniverse, enumerate_assignments
from .errors import ArgumentError, DomainError, UniverseMismatchError


@dataclass(frozen=True)
class Relation:
    universe: VariableUniverse
    domain: Domain
    tuples: frozenset[Assignment]

    def __post_init__(self):
        self.universe.check_domain(self.domain)
        for x in self.tuples:
            if x.domain != self.domain:
                raise DomainError(f"tuple {x!r} does not match relation domain {sorted(self.domain)}")

    @classmethod
    def of(cls, universe: VariableUniverse, rows: Iterable[Assignment | Mapping[str, str]]) -> "Relation":
        """Build and validate a relation from assignments or mappings (nonempty input)."""
        tuples = frozenset(row if isinstance(row, Assignment) else Assignment.of(row) for row in rows)
        if not tuples:
            raise ArgumentError("cannot infer a domain from zero rows; use empty_relation")
        domain = next(iter(tuples)).domain
        for x in tuples:
            for var, val in x.items:
                if val not in universe.frame(var):
                    raise ArgumentError(f"value {val!r} not in the frame of {var!r}")
        return cls(universe, domain, tuples)

    @classmethod
    def from_rows(
        cls,
        universe: VariableUniverse,
        variables: Sequence[str],
        rows: Iterable[Sequence[str]],
    ) -> "Relation":
        """Build a relation from value rows aligned with an explicit variable order."""
        assignments = []
        for row in rows:
            if len(row) != len(variables):
                raise ArgumentError(f"row {tuple(row)!r} does not match variables {tuple(variables)!r}")
            assignments.append(Assignment.of(dict(zip(variables, row))))
        if not assignments:
            return empty_relation(universe, frozenset(variables))
        return cls.of(universe, assignments)

    def is_empty(self) -> bool:
        return not self.tuples

    def sorted_tuples(self) -> list[Assignment]:
        return sorted(self.tuples, key=lambda a: a.items)

    def __len__(self) -> int:
        return len(self.tuples)

    def __repr__(self) -> str:
        names = ",".join(sorted(self.domain)) or "∅"
        shown = ", ".join(repr(t) for t in self.sorted_tuples()[:8])
        suffix = ", ..." if len(self.tuples) > 8 else ""
        return f"Relation[{names}]{{{shown}{suffix}}}"


def empty_relation(universe: VariableUniverse, domain: Domain) -> Relation:
    """The null element z_S."""
    return Relation(universe, domain, frozenset())


def full_relation(universe: VariableUniverse, domain: Domain) -> Relation:
    """The neutral element e_S, materialized. Exponential in |S|; callers keep S small."""
    return Relation(universe, domain, frozenset(enumerate_assignments(domain, universe)))


def _check_same_universe(r1: Relation, r2: Relation) -> None:
    if r1.universe != r2.universe:
        raise UniverseMismatchError("relations live in different variable universes")


def natural_join(r1: Relation, r2: Relation) -> Relation:
    """All assignments over the union domain whose restrictions lie in both operands."""
    _check_same_universe(r1, r2)
    union = r1.domain | r2.domain
    if not r1.tuples or not r2.tuples:
        return Relation(r1.universe, union, frozenset())
    # Index the smaller side by its restriction to the shared variables.
    small, large = (r1, r2) if len(r1.tuples) <= len(r2.tuples) else (r2, r1)
    common = r1.domain & r2.domain
    buckets: dict[Assignment, list[Assignment]] = {}
    for x in small.tuples:
        buckets.setdefault(x.restrict(common), []).append(x)
    joined = set()
    for y in large.tuples:
        for x in buckets.get(y.restrict(common), ()):
            joined.add(x.merge(y))
    return Relation(r1.universe, union, frozenset(joined))


def project_relation(r: Relation, target: Domain) -> Relation:
    """Set of restrictions of the relation's tuples (duplicates collapse)."""
    extra = target - r.domain
    if extra:
        raise DomainError(f"projection target not within the relation domain; offending variables: {sorted(extra)}")
    return Relation(r.universe, target, frozenset(x.restrict(target) for x in r.tuples))


class Ordering(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def relation_order(r1: Relation, r2: Relation) -> Ordering:
    """Compare by inclusion. Relations over different domains are incomparable."""
    if r1.universe != r2.universe or r1.domain != r2.domain:
        return Ordering.INCOMPARABLE
    if r1.tuples == r2.tuples:
        return Ordering.EQUAL
    if r1.tuples <= r2.tuples:
        return Ordering.LESS
    if r1.tuples >= r2.tuples:
        return Ordering.GREATER
    return Ordering.INCOMPARABLE


def relation_leq(r1: Relation, r2: Relation) -> bool:
    """Inclusion order on a shared domain; raises DomainError for incomparable operands."""
    if r1.universe != r2.universe:
        raise UniverseMismatchError("relations live in different variable universes")
    if r1.domain != r2.domain:
        raise DomainError("relations over different domains are incomparable")
    return r1.tuples <= r2.tuples


@dataclass(frozen=True)
class AdjointnessReport:
    passed: bool
    checks: int
    counterexample: str | None = None


def adjointness_suite(samples: Sequence[Relation]) -> AdjointnessReport:
    """Check the two adjointness inequalities on relations.

    For every sample M over a domain split Q ∪ U: M ⊆ (M↓Q) ⊗ (M↓U).
    For pairs and triples of samples: the join projected back to each
    operand's domain is contained in that operand.
    """
    checks = 0

    def contained(inner: Relation, outer: Relation) -> bool:
        return inner.tuples <= outer.tuples

    for m in samples:
        names = sorted(m.domain)
        if len(names) < 2:
            continue
        for cut in (1, len(names) // 2, len(names) - 1):
            q = frozenset(names[:cut])
            u = frozenset(names[cut:])
            recombined = natural_join(project_relation(m, q), project_relation(m, u))
            checks += 1
            if not contained(m, recombined):
                return AdjointnessReport(False, checks, f"M ⊄ M↓Q ⊗ M↓U for M={m!r}, Q={sorted(q)}")
    for i in range(len(samples) - 1):
        m1, m2 = samples[i], samples[i + 1]
        if m1.universe != m2.universe:
            continue
        joined = natural_join(m1, m2)
        for side in (m1, m2):
            checks += 1
            if not contained(project_relation(joined, side.domain), side):
                return AdjointnessReport(False, checks, f"(M1⊗M2)↓d(M) ⊄ M for M={side!r}")
    for i in range(len(samples) - 2):
        group = samples[i : i + 3]
        if len({g.universe for g in group}) != 1:
            continue
        joined = natural_join(natural_join(group[0], group[1]), group[2])
        for side in group:
            checks += 1
            if not contained(project_relation(joined, side.domain), side):
                return AdjointnessReport(False, checks, f"(M1⊗M2⊗M3)↓d(M) ⊄ M for M={side!r}")
    return AdjointnessReport(True, checks)
