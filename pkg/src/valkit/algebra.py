"""The valuation-algebra contract and the axiom test suite.

An algebra bundles the three primitive operations (labelling, projection,
combination) with optional capabilities: neutral elements, null elements,
idempotent combination, a completeness order, and adjointness. The axiom
suite exercises an instance against exactly the axioms it claims (or any
explicitly requested set) and reports a concrete counterexample on failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Domain, Semiring, VariableUniverse
from .errors import ArgumentError, CapabilityError
from .potentials import (
    Potential,
    combine_potentials,
    neutral_potential,
    null_potential,
    project_potential,
)
from .relations import (
    Relation,
    empty_relation,
    full_relation,
    natural_join,
    project_relation,
    relation_leq,
)

CORE_AXIOMS = ("A1", "A2", "A3", "A4", "A5", "A6")
ORDER_AXIOMS = ("A10", "A11", "A12", "A13")


class ValuationAlgebra:
    """Behavioral interface every instance implements."""

    name = "abstract"
    has_neutral = False
    has_null = False
    idempotent = False
    ordered = False
    adjoint = False

    def label(self, phi) -> Domain:
        raise NotImplementedError

    def project(self, phi, target: Domain):
        raise NotImplementedError

    def combine(self, phi, psi):
        raise NotImplementedError

    def neutral(self, domain: Domain):
        raise CapabilityError(f"{self.name} has no neutral elements")

    def null(self, domain: Domain):
        raise CapabilityError(f"{self.name} has no null elements")

    def leq(self, phi, psi) -> bool:
        raise CapabilityError(f"{self.name} is not ordered")

    def equal(self, phi, psi) -> bool:
        return phi == psi

    def combine_size_bound(self, phi, psi) -> int:
        """Upper bound on the size of combine(phi, psi), used by resource guards."""
        raise NotImplementedError

    def claimed_axioms(self) -> tuple[str, ...]:
        axioms = list(CORE_AXIOMS)
        if self.has_neutral:
            axioms.append("A7")
        if self.has_null:
            axioms.append("A8")
        if self.idempotent:
            axioms.append("A9")
        if self.ordered:
            axioms.extend(ORDER_AXIOMS)
        return tuple(axioms)


class RelationAlgebra(ValuationAlgebra):
    """Relations under natural join and tuple projection: a full information algebra."""

    name = "relations"
    has_neutral = True
    has_null = True
    idempotent = True
    ordered = True
    adjoint = True

    def __init__(self, universe: VariableUniverse):
        self.universe = universe

    def label(self, phi: Relation) -> Domain:
        return phi.domain

    def project(self, phi: Relation, target: Domain) -> Relation:
        return project_relation(phi, target)

    def combine(self, phi: Relation, psi: Relation) -> Relation:
        return natural_join(phi, psi)

    def neutral(self, domain: Domain) -> Relation:
        return full_relation(self.universe, domain)

    def null(self, domain: Domain) -> Relation:
        return empty_relation(self.universe, domain)

    def leq(self, phi: Relation, psi: Relation) -> bool:
        return relation_leq(phi, psi)

    def combine_size_bound(self, phi: Relation, psi: Relation) -> int:
        return len(phi.tuples) * len(psi.tuples)


class PotentialAlgebra(ValuationAlgebra):
    """Semiring potentials; idempotent exactly when semiring addition is."""

    name = "potentials"
    has_neutral = True
    has_null = True
    ordered = False
    adjoint = False

    def __init__(self, universe: VariableUniverse, semiring: Semiring):
        self.universe = universe
        self.semiring = semiring
        self.idempotent = semiring.additively_idempotent
        self.name = f"potentials[{semiring.name}]"

    def label(self, phi: Potential) -> Domain:
        return phi.domain

    def project(self, phi: Potential, target: Domain) -> Potential:
        return project_potential(phi, target)

    def combine(self, phi: Potential, psi: Potential) -> Potential:
        return combine_potentials(phi, psi)

    def neutral(self, domain: Domain) -> Potential:
        return neutral_potential(self.universe, domain, self.semiring)

    def null(self, domain: Domain) -> Potential:
        return null_potential(self.universe, domain, self.semiring)

    def combine_size_bound(self, phi: Potential, psi: Potential) -> int:
        return self.universe.size(phi.domain | psi.domain)


@dataclass(frozen=True)
class Knowledgebase:
    """A finite list of valuations from one algebra instance."""

    universe: VariableUniverse
    valuations: tuple

    def __post_init__(self):
        if not self.valuations:
            raise ArgumentError("a knowledgebase needs at least one valuation")
        kinds = {type(v) for v in self.valuations}
        if len(kinds) != 1:
            raise ArgumentError("all knowledgebase members must come from one algebra")
        for v in self.valuations:
            if v.universe != self.universe:
                raise ArgumentError("knowledgebase member built over a different universe")
        first = self.valuations[0]
        if isinstance(first, Potential):
            for v in self.valuations:
                if v.semiring != first.semiring:
                    raise ArgumentError("knowledgebase members use different semirings")

    def algebra(self) -> ValuationAlgebra:
        first = self.valuations[0]
        if isinstance(first, Relation):
            return RelationAlgebra(self.universe)
        if isinstance(first, Potential):
            return PotentialAlgebra(self.universe, first.semiring)
        raise ArgumentError(f"no algebra known for valuations of type {type(first).__name__}")

    @property
    def joint_domain(self) -> Domain:
        out: frozenset[str] = frozenset()
        for v in self.valuations:
            out |= v.domain
        return out

    def __len__(self) -> int:
        return len(self.valuations)

    def __iter__(self):
        return iter(self.valuations)


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    passed: bool
    cases: int
    counterexample: str | None = None


_NEUTRAL_SIZE_CAP = 4096


def _subset_choices(domain: Domain, rng: random.Random, cap: int = 16) -> list[Domain]:
    names = sorted(domain)
    if 2 ** len(names) <= cap:
        out = []
        for mask in range(2 ** len(names)):
            out.append(frozenset(n for i, n in enumerate(names) if mask >> i & 1))
        return out
    choices = {frozenset(), frozenset(names)}
    while len(choices) < cap:
        choices.add(frozenset(n for n in names if rng.random() < 0.5))
    return sorted(choices, key=lambda s: (len(s), tuple(sorted(s))))


def _pairs(samples: Sequence, rng: random.Random, cap: int = 120) -> list[tuple]:
    all_pairs = [(a, b) for a in samples for b in samples]
    if len(all_pairs) <= cap:
        return all_pairs
    return rng.sample(all_pairs, cap)


def _triples(samples: Sequence, rng: random.Random, cap: int = 60) -> list[tuple]:
    if len(samples) ** 3 <= cap:
        return [(a, b, c) for a in samples for b in samples for c in samples]
    return [tuple(rng.choice(samples) for _ in range(3)) for _ in range(cap)]


def axiom_suite(
    algebra: ValuationAlgebra,
    samples: Sequence,
    axioms: Iterable[str] | None = None,
    seed: int = 0,
) -> list[AxiomCheck]:
    """Run the axiom property tests on sample valuations.

    By default exactly the axioms the instance claims are checked; pass an
    explicit list to probe others (e.g. A9 on a non-idempotent algebra, which
    should fail with a counterexample).
    """
    rng = random.Random(seed)
    requested = tuple(axioms) if axioms is not None else algebra.claimed_axioms()
    results: list[AxiomCheck] = []
    samples = list(samples)
    pairs = _pairs(samples, rng)
    triples = _triples(samples, rng)
    eq = algebra.equal

    def finish(axiom: str, cases: int, counterexample: str | None = None):
        results.append(AxiomCheck(axiom, counterexample is None, cases, counterexample))

    for axiom in requested:
        cases = 0
        bad: str | None = None

        if axiom == "A1":
            for phi, psi in pairs:
                cases += 1
                if not eq(algebra.combine(phi, psi), algebra.combine(psi, phi)):
                    bad = f"commutativity: phi={phi!r} psi={psi!r}"
                    break
            if bad is None:
                for phi, psi, chi in triples:
                    cases += 1
                    lhs = algebra.combine(algebra.combine(phi, psi), chi)
                    rhs = algebra.combine(phi, algebra.combine(psi, chi))
                    if not eq(lhs, rhs):
                        bad = f"associativity: phi={phi!r} psi={psi!r} chi={chi!r}"
                        break

        elif axiom == "A2":
            for phi in samples:
                for sub in _subset_choices(algebra.label(phi), rng):
                    cases += 1
                    if algebra.label(algebra.project(phi, sub)) != sub:
                        bad = f"d(phi↓S) != S for phi={phi!r} S={sorted(sub)}"
                        break
                if bad:
                    break

        elif axiom == "A3":
            for phi in samples:
                for mid in _subset_choices(algebra.label(phi), rng, cap=8):
                    for sub in _subset_choices(mid, rng, cap=8):
                        cases += 1
                        lhs = algebra.project(algebra.project(phi, mid), sub)
                        if not eq(lhs, algebra.project(phi, sub)):
                            bad = f"transitivity: phi={phi!r} T={sorted(mid)} S={sorted(sub)}"
                            break
                    if bad:
                        break
                if bad:
                    break

        elif axiom == "A4":
            for phi in samples:
                cases += 1
                if not eq(algebra.project(phi, algebra.label(phi)), phi):
                    bad = f"phi↓d(phi) != phi for phi={phi!r}"
                    break

        elif axiom == "A5":
            for phi, psi in pairs:
                cases += 1
                if algebra.label(algebra.combine(phi, psi)) != algebra.label(phi) | algebra.label(psi):
                    bad = f"labelling: phi={phi!r} psi={psi!r}"
                    break

        elif axiom == "A6":
            for phi, psi in pairs:
                s, t = algebra.label(phi), algebra.label(psi)
                for extra in _subset_choices(t - s, rng, cap=8):
                    u = s | extra
                    cases += 1
                    lhs = algebra.project(algebra.combine(phi, psi), u)
                    rhs = algebra.combine(phi, algebra.project(psi, u & t))
                    if not eq(lhs, rhs):
                        bad = f"combination: phi={phi!r} psi={psi!r} U={sorted(u)}"
                        break
                if bad:
                    break

        elif axiom == "A7":
            seen_domains = []
            universe = getattr(algebra, "universe", None)
            for phi in samples:
                s = algebra.label(phi)
                if universe is not None and universe.size(s) > _NEUTRAL_SIZE_CAP:
                    continue
                cases += 1
                if not eq(algebra.combine(phi, algebra.neutral(s)), phi):
                    bad = f"phi ⊗ e_S != phi for phi={phi!r}"
                    break
                seen_domains.append(s)
            if bad is None:
                for s in seen_domains[:4]:
                    for t in seen_domains[:4]:
                        cases += 1
                        lhs = algebra.combine(algebra.neutral(s), algebra.neutral(t))
                        if not eq(lhs, algebra.neutral(s | t)):
                            bad = f"e_S ⊗ e_T != e_(S∪T) for S={sorted(s)} T={sorted(t)}"
                            break
                    if bad:
                        break

        elif axiom == "A8":
            for phi in samples:
                s = algebra.label(phi)
                cases += 1
                if not eq(algebra.combine(phi, algebra.null(s)), algebra.null(s)):
                    bad = f"phi ⊗ z_S != z_S for phi={phi!r}"
                    break
                for sub in _subset_choices(s, rng, cap=8):
                    cases += 1
                    proj_is_null = eq(algebra.project(phi, sub), algebra.null(sub))
                    phi_is_null = eq(phi, algebra.null(s))
                    if proj_is_null != phi_is_null:
                        bad = f"null biconditional fails for phi={phi!r} S={sorted(sub)}"
                        break
                if bad:
                    break

        elif axiom == "A9":
            for phi in samples:
                for sub in _subset_choices(algebra.label(phi), rng, cap=8):
                    cases += 1
                    if not eq(algebra.combine(phi, algebra.project(phi, sub)), phi):
                        bad = f"phi ⊗ phi↓S != phi for phi={phi!r} S={sorted(sub)}"
                        break
                if bad:
                    break

        elif axiom in ORDER_AXIOMS:
            cases, bad = _check_order_axiom(algebra, axiom, samples, pairs, rng)

        else:
            raise ArgumentError(f"unknown axiom {axiom!r}")

        finish(axiom, cases, bad)
    return results


def _comparable_pairs(algebra: ValuationAlgebra, samples: Sequence, pairs: Sequence[tuple]) -> list[tuple]:
    """Pairs (low, high) with low ⪯ high, built from nulls and same-domain meets."""
    out = []
    for phi in samples:
        out.append((algebra.null(algebra.label(phi)), phi))
        out.append((phi, phi))
    for phi, psi in pairs:
        if algebra.label(phi) == algebra.label(psi) and algebra.idempotent:
            out.append((algebra.combine(phi, psi), phi))
    return out


def _check_order_axiom(algebra, axiom, samples, pairs, rng):
    cases = 0
    bad = None
    comparable = _comparable_pairs(algebra, samples, pairs)

    if axiom == "A10":
        for low, high in comparable:
            cases += 1
            if not algebra.leq(low, high):
                bad = f"expected {low!r} ⪯ {high!r}"
                break
            if algebra.label(low) != algebra.label(high):
                bad = f"comparable pair with different domains: {low!r}, {high!r}"
                break
        if bad is None and algebra.idempotent:
            # Same-domain combination acts as a meet: a lower bound dominating sampled lower bounds.
            for phi, psi in pairs:
                if algebra.label(phi) != algebra.label(psi):
                    continue
                meet = algebra.combine(phi, psi)
                cases += 1
                if not (algebra.leq(meet, phi) and algebra.leq(meet, psi)):
                    bad = f"meet not a lower bound: phi={phi!r} psi={psi!r}"
                    break
                for chi in samples:
                    if algebra.label(chi) != algebra.label(phi):
                        continue
                    if algebra.leq(chi, phi) and algebra.leq(chi, psi):
                        cases += 1
                        if not algebra.leq(chi, meet):
                            bad = f"meet not greatest lower bound: chi={chi!r}"
                            break
                if bad:
                    break

    elif axiom == "A11":
        for phi in samples:
            cases += 1
            if not algebra.leq(algebra.null(algebra.label(phi)), phi):
                bad = f"z_S not below phi={phi!r}"
                break

    elif axiom == "A12":
        for i in range(len(comparable)):
            for j in range(i, min(i + 4, len(comparable))):
                lo1, hi1 = comparable[i]
                lo2, hi2 = comparable[j]
                cases += 1
                if not algebra.leq(algebra.combine(lo1, lo2), algebra.combine(hi1, hi2)):
                    bad = f"combination not monotone: ({lo1!r} ⪯ {hi1!r}), ({lo2!r} ⪯ {hi2!r})"
                    break
            if bad:
                break

    elif axiom == "A13":
        for low, high in comparable:
            for sub in _subset_choices(algebra.label(low), rng, cap=8):
                cases += 1
                if not algebra.leq(algebra.project(low, sub), algebra.project(high, sub)):
                    bad = f"projection not monotone: {low!r} ⪯ {high!r}, S={sorted(sub)}"
                    break
            if bad:
                break

    return cases, bad
