"""Measurement scenarios, empirical models, and the contextuality hierarchy.

An empirical model is a knowledgebase of potentials, one per context.
No-signalling is exactly local agreement of that knowledgebase. The support
of each section gives a relation knowledgebase whose combination Gamma holds
every globally consistent assignment: the model is strongly contextual when
Gamma is empty, logically contextual when some supported section falls
outside a projection of Gamma, and probabilistically contextual when no
global distribution reproduces the sections, which exact feasibility decides.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .algebra import Knowledgebase
from .core import Assignment, BOOLEAN, Domain, NONNEG_RATIONAL, VariableUniverse
from .disagreement import (
    DEFAULT_FEASIBILITY_COLUMNS,
    GlobalVerdict,
    check_global_agreement_potentials,
)
from .errors import ArgumentError, PreconditionError
from .inference import DEFAULT_CELL_LIMIT, InferenceProblem, run_solver
from .potentials import (
    Potential,
    possibilistic_collapse,
    project_potential,
    support_relation,
    total_mass,
)
from .relations import Relation, project_relation

PROBABILISTIC = "probabilistic"
POSSIBILISTIC = "possibilistic"


@dataclass(frozen=True)
class MeasurementScenario:
    """Measurements with outcome frames and an antichain cover of contexts."""

    universe: VariableUniverse
    contexts: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.contexts:
            raise ArgumentError("a scenario needs at least one context")
        seen = set()
        for ctx in self.contexts:
            if not ctx:
                raise ArgumentError("contexts must be nonempty")
            if len(set(ctx)) != len(ctx):
                raise ArgumentError(f"context {ctx!r} repeats a measurement")
            self.universe.check_domain(frozenset(ctx))
            seen.update(ctx)
        if seen != set(self.universe.names):
            missing = sorted(set(self.universe.names) - seen)
            raise ArgumentError(f"measurements outside every context: {missing}")
        sets = [frozenset(c) for c in self.contexts]
        for i in range(len(sets)):
            for j in range(len(sets)):
                if i != j and sets[i] <= sets[j]:
                    raise ArgumentError(
                        f"cover must be an antichain; context {self.contexts[i]!r} "
                        f"is contained in {self.contexts[j]!r}"
                    )

    @property
    def measurements(self) -> Domain:
        return self.universe.vars

    def context_sets(self) -> list[Domain]:
        return [frozenset(c) for c in self.contexts]


@dataclass(frozen=True)
class EmpiricalModel:
    scenario: MeasurementScenario
    kind: str  # PROBABILISTIC | POSSIBILISTIC
    sections: tuple[Potential, ...]  # aligned with scenario.contexts

    def __post_init__(self):
        if self.kind not in (PROBABILISTIC, POSSIBILISTIC):
            raise ArgumentError(f"unknown model kind {self.kind!r}")
        if len(self.sections) != len(self.scenario.contexts):
            raise ArgumentError("one section per context is required")
        for ctx, section in zip(self.scenario.contexts, self.sections):
            if section.domain != frozenset(ctx):
                raise ArgumentError(f"section domain {sorted(section.domain)} does not match context {ctx!r}")
            if self.kind == PROBABILISTIC:
                if section.semiring != NONNEG_RATIONAL:
                    raise ArgumentError("probabilistic sections must be rational potentials")
                mass = total_mass(section)
                if mass != 1:
                    raise ArgumentError(f"section over {ctx!r} sums to {mass}, not 1")
            else:
                if section.semiring != BOOLEAN:
                    raise ArgumentError("possibilistic sections must be Boolean potentials")
                if section.is_null():
                    raise ArgumentError(f"section over {ctx!r} has empty support")

    def section_for(self, context: tuple[str, ...]) -> Potential:
        for ctx, section in zip(self.scenario.contexts, self.sections):
            if ctx == tuple(context):
                return section
        raise ArgumentError(f"{tuple(context)!r} is not a context of this scenario")

    def knowledgebase(self) -> Knowledgebase:
        return Knowledgebase(self.scenario.universe, self.sections)

    def support_knowledgebase(self) -> Knowledgebase:
        return Knowledgebase(self.scenario.universe, tuple(support_relation(s) for s in self.sections))


def possibilistic_collapse_model(model: EmpiricalModel) -> EmpiricalModel:
    """Forget probabilities, keep supports."""
    if model.kind == POSSIBILISTIC:
        return model
    return EmpiricalModel(
        model.scenario,
        POSSIBILISTIC,
        tuple(possibilistic_collapse(s) for s in model.sections),
    )


@dataclass(frozen=True)
class NoSignallingVerdict:
    passed: bool
    pair: tuple[tuple[str, ...], tuple[str, ...]] | None = None
    overlap: Domain | None = None
    marginals: tuple[Potential, Potential] | None = None


def check_no_signalling(model: EmpiricalModel) -> NoSignallingVerdict:
    """Marginals of every two sections must agree on the shared measurements."""
    contexts = model.scenario.contexts
    for i in range(len(contexts)):
        for j in range(i + 1, len(contexts)):
            overlap = frozenset(contexts[i]) & frozenset(contexts[j])
            left = project_potential(model.sections[i], overlap)
            right = project_potential(model.sections[j], overlap)
            if left != right:
                return NoSignallingVerdict(False, pair=(contexts[i], contexts[j]), overlap=overlap, marginals=(left, right))
    return NoSignallingVerdict(True)


def gamma(
    model: EmpiricalModel,
    method: str = "fusion",
    cell_limit: int | None = DEFAULT_CELL_LIMIT,
) -> Relation:
    """The combination of all context supports: every globally consistent assignment."""
    verdict = check_no_signalling(model)
    if not verdict.passed:
        raise PreconditionError(f"model signals between contexts {verdict.pair[0]!r} and {verdict.pair[1]!r}")
    kb = model.support_knowledgebase()
    return run_solver(InferenceProblem(kb, kb.joint_domain), method, cell_limit)


@dataclass(frozen=True)
class FlasqueReport:
    passed: bool
    empty_context: tuple[str, ...] | None = None
    failure: tuple[tuple[str, ...], tuple[str, ...]] | None = None  # (U, U') with a non-surjective restriction
    note: str = "compatible families glue into the combination by construction"


def flasque_check(model: EmpiricalModel) -> FlasqueReport:
    """Support presheaf sanity: nonempty contexts and surjective restrictions beneath them.

    The value on a set beneath the cover is the union of the projections of
    the covering contexts' supports.
    """
    possibilistic = possibilistic_collapse_model(model)
    supports = {ctx: support_relation(s) for ctx, s in zip(possibilistic.scenario.contexts, possibilistic.sections)}
    for ctx, support in supports.items():
        if support.is_empty():
            return FlasqueReport(False, empty_context=ctx)

    def beneath(u: Domain) -> frozenset[Assignment]:
        sections = set()
        for ctx, support in supports.items():
            if u <= frozenset(ctx):
                sections.update(x.restrict(u) for x in support.tuples)
        return frozenset(sections)

    for ctx, support in supports.items():
        names = tuple(ctx)
        subsets = []
        for size in range(len(names) + 1):
            subsets.extend(frozenset(c) for c in combinations(names, size))
        for u_prime in subsets:
            restricted = frozenset(x.restrict(u_prime) for x in support.tuples)
            for u in subsets:
                if not u <= u_prime:
                    continue
                image = frozenset(x.restrict(u) for x in restricted)
                if image != beneath(u):
                    return FlasqueReport(False, failure=(tuple(sorted(u)), tuple(sorted(u_prime))))
    return FlasqueReport(True)


def lc_at(
    model: EmpiricalModel,
    context: tuple[str, ...],
    section: Assignment,
    method: str = "fusion",
    cell_limit: int | None = DEFAULT_CELL_LIMIT,
) -> bool:
    """True iff the supported section extends to no globally consistent assignment."""
    possibilistic = possibilistic_collapse_model(model)
    support = support_relation(possibilistic.section_for(context))
    if section not in support.tuples:
        raise ArgumentError(f"{section!r} is not in the support of context {tuple(context)!r}")
    g = gamma(possibilistic, method, cell_limit)
    return section not in project_relation(g, frozenset(context)).tuples


@dataclass(frozen=True)
class ContextualityReport:
    kind: str
    no_signalling: NoSignallingVerdict
    gamma: Relation
    strongly_contextual: bool
    logically_contextual: bool
    probabilistically_contextual: bool | None
    classification: str  # "NC" | "PC" | "LC" | "SC"
    lc_witness: tuple[tuple[str, ...], Assignment] | None = None
    sc_context: tuple[str, ...] | None = None
    feasibility: GlobalVerdict | None = None


def classify(
    model: EmpiricalModel,
    method: str = "fusion",
    cell_limit: int | None = DEFAULT_CELL_LIMIT,
    feasibility_columns: int | None = DEFAULT_FEASIBILITY_COLUMNS,
) -> ContextualityReport:
    """Place a no-signalling model in the hierarchy NC < PC < LC < SC.

    Logical contextuality of a probabilistic model is evaluated on its
    possibilistic collapse; probabilistic contextuality is the failure of the
    marginal feasibility system.
    """
    signalling = check_no_signalling(model)
    if not signalling.passed:
        raise PreconditionError(
            f"model signals between contexts {signalling.pair[0]!r} and {signalling.pair[1]!r}"
        )
    possibilistic = possibilistic_collapse_model(model)
    g = gamma(possibilistic, method, cell_limit)

    strongly = g.is_empty()
    sc_context = model.scenario.contexts[0] if strongly else None

    logically = False
    lc_witness = None
    for ctx, section in zip(possibilistic.scenario.contexts, possibilistic.sections):
        support = support_relation(section)
        covered = project_relation(g, frozenset(ctx))
        missing = sorted(support.tuples - covered.tuples, key=lambda a: a.items)
        if missing:
            logically = True
            lc_witness = (ctx, missing[0])
            break

    probabilistically: bool | None = None
    feasibility: GlobalVerdict | None = None
    if model.kind == PROBABILISTIC:
        feasibility = check_global_agreement_potentials(model.knowledgebase(), feasibility_columns)
        probabilistically = not feasibility.agrees

    if strongly:
        classification = "SC"
    elif logically:
        classification = "LC"
    elif probabilistically:
        classification = "PC"
    else:
        classification = "NC"

    return ContextualityReport(
        kind=model.kind,
        no_signalling=signalling,
        gamma=g,
        strongly_contextual=strongly,
        logically_contextual=logically,
        probabilistically_contextual=probabilistically,
        classification=classification,
        lc_witness=lc_witness,
        sc_context=sc_context,
        feasibility=feasibility,
    )


def probabilistic_model(
    universe: VariableUniverse,
    contexts: list[tuple[str, ...]],
    sections: dict[tuple[str, ...], dict[tuple[str, ...], Fraction | int | str]],
) -> EmpiricalModel:
    """Convenience constructor from nested outcome tables; missing outcomes get 0."""
    scenario = MeasurementScenario(universe, tuple(contexts))
    built = []
    for ctx in scenario.contexts:
        table = {}
        for outcome, value in sections[ctx].items():
            table[Assignment.of(dict(zip(ctx, outcome)))] = Fraction(value)
        built.append(
            Potential.from_table(universe, frozenset(ctx), NONNEG_RATIONAL, table, default=Fraction(0))
        )
    return EmpiricalModel(scenario, PROBABILISTIC, tuple(built))


def possibilistic_model(
    universe: VariableUniverse,
    contexts: list[tuple[str, ...]],
    supports: dict[tuple[str, ...], list[tuple[str, ...]]],
) -> EmpiricalModel:
    """Convenience constructor from supported outcome lists."""
    scenario = MeasurementScenario(universe, tuple(contexts))
    built = []
    for ctx in scenario.contexts:
        table = {Assignment.of(dict(zip(ctx, outcome))): 1 for outcome in supports[ctx]}
        built.append(Potential.from_table(universe, frozenset(ctx), BOOLEAN, table, default=0))
    return EmpiricalModel(scenario, POSSIBILISTIC, tuple(built))
