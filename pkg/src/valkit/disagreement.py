"""Local, global, and complete disagreement between information sources.

Local agreement compares every pair of valuations on their shared variables.
Global agreement asks for one valuation over all variables that projects onto
every member. For adjoint algebras (relations) the combination of the whole
knowledgebase is the only candidate, so the check reduces to inference
problems; for rational potentials no such shortcut exists and the question
becomes exact linear feasibility, with a Farkas certificate on failure.
Complete disagreement means the combination collapses to the null element,
which a single projection detects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Knowledgebase, PotentialAlgebra
from .core import Domain, NONNEG_RATIONAL, enumerate_assignments
from .errors import ArgumentError, CapabilityError, ResourceLimitError
from .feasibility import FarkasCertificate, LinearSystem, solve_feasibility
from .inference import DEFAULT_CELL_LIMIT, InferenceProblem, run_solver
from .potentials import Potential
from .relations import Relation, relation_leq

DEFAULT_FEASIBILITY_COLUMNS = 4096
DEFAULT_TRUTH_SEARCH_STATES = 16


@dataclass(frozen=True)
class LocalVerdict:
    agrees: bool
    pair: tuple[int, int] | None = None  # 1-based member indices
    overlap: Domain | None = None
    projections: tuple | None = None


@dataclass(frozen=True)
class GlobalVerdict:
    agrees: bool
    truth: object | None = None  # the truth valuation gamma, on agreement
    witness_index: int | None = None  # 1-based member whose projection differs
    projected: object | None = None  # what the combination projects to there
    certificate: FarkasCertificate | None = None  # infeasibility proof (potentials path)


@dataclass(frozen=True)
class AgreementReport:
    local: LocalVerdict
    global_agreement: GlobalVerdict
    complete_disagreement: bool | None


def check_local_agreement(kb: Knowledgebase) -> LocalVerdict:
    """Pass iff every pair projects identically onto its shared variables."""
    algebra = kb.algebra()
    members = list(kb)
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            overlap = algebra.label(members[i]) & algebra.label(members[j])
            left = algebra.project(members[i], overlap)
            right = algebra.project(members[j], overlap)
            if not algebra.equal(left, right):
                return LocalVerdict(False, pair=(i + 1, j + 1), overlap=overlap, projections=(left, right))
    return LocalVerdict(True)


def check_global_agreement_adjoint(
    kb: Knowledgebase,
    method: str = "fusion",
    cell_limit: int | None = DEFAULT_CELL_LIMIT,
) -> GlobalVerdict:
    """Adjoint-algebra path: the combination is the only truth candidate.

    Solves one inference problem per member, comparing the projection of the
    combination with the member itself.
    """
    algebra = kb.algebra()
    if not algebra.adjoint:
        raise CapabilityError(
            f"{algebra.name} is not adjoint; use the feasibility path (check_global_agreement_potentials)"
        )
    for index, phi in enumerate(kb, start=1):
        projected = run_solver(InferenceProblem(kb, algebra.label(phi)), method, cell_limit)
        if not algebra.equal(projected, phi):
            return GlobalVerdict(False, witness_index=index, projected=projected)
    gamma = run_solver(InferenceProblem(kb, kb.joint_domain), method, cell_limit)
    return GlobalVerdict(True, truth=gamma)


def marginal_system(kb: Knowledgebase, column_limit: int | None = DEFAULT_FEASIBILITY_COLUMNS) -> LinearSystem:
    """The marginal equations of a rational-potential knowledgebase as A x = b.

    One unknown per global assignment, one equation per member per local
    assignment; every coefficient is 0 or 1.
    """
    universe = kb.universe
    joint = kb.joint_domain
    size = universe.size(joint)
    if column_limit is not None and size > column_limit:
        raise ResourceLimitError(f"joint assignment space has {size} elements (limit {column_limit})")
    columns = tuple(enumerate_assignments(joint, universe))
    rows = []
    rhs = {}
    entries = {}
    for index, phi in enumerate(kb, start=1):
        for local in enumerate_assignments(phi.domain, universe):
            key = (index, local)
            rows.append(key)
            rhs[key] = Fraction(phi.table[local])
    for g in columns:
        for index, phi in enumerate(kb, start=1):
            entries[((index, g.restrict(phi.domain)), g)] = Fraction(1)
    return LinearSystem(columns=columns, rows=tuple(rows), entries=entries, rhs=rhs)


def check_global_agreement_potentials(
    kb: Knowledgebase,
    column_limit: int | None = DEFAULT_FEASIBILITY_COLUMNS,
) -> GlobalVerdict:
    """Feasibility path for rational potentials: find gamma >= 0 with the right marginals."""
    for phi in kb:
        if not isinstance(phi, Potential) or phi.semiring != NONNEG_RATIONAL:
            raise CapabilityError("the feasibility path needs potentials over exact nonnegative rationals")
    system = marginal_system(kb, column_limit)
    outcome = solve_feasibility(system)
    if outcome.feasible:
        table = {g: outcome.solution[g] for g in system.columns}
        gamma = Potential(kb.universe, kb.joint_domain, NONNEG_RATIONAL, table)
        return GlobalVerdict(True, truth=gamma)
    return GlobalVerdict(False, certificate=outcome.certificate)


def check_complete_disagreement(
    kb: Knowledgebase,
    method: str = "fusion",
    cell_limit: int | None = DEFAULT_CELL_LIMIT,
) -> bool:
    """True iff the combination is null; one inference problem suffices."""
    algebra = kb.algebra()
    if not algebra.has_null:
        raise CapabilityError(f"{algebra.name} has no null elements")
    first_domain = algebra.label(kb.valuations[0])
    projected = run_solver(InferenceProblem(kb, first_domain), method, cell_limit)
    return algebra.equal(projected, algebra.null(first_domain))


def search_truth_valuations(
    kb: Knowledgebase,
    state_limit: int = DEFAULT_TRUTH_SEARCH_STATES,
) -> list[Relation]:
    """Exhaustively enumerate every truth valuation of a relation knowledgebase.

    Works directly on global assignments with bitmask bookkeeping, without the
    algebra's combine/project machinery, so it can serve as an independent
    cross-check of the inference-based verdict. Any candidate must project
    inside every member (a definitional filter), and all subsets of the
    surviving assignments are tried.
    """
    if not isinstance(kb.valuations[0], Relation):
        raise CapabilityError("truth-valuation search is defined for relation knowledgebases")
    universe = kb.universe
    joint = kb.joint_domain
    globals_ = enumerate_assignments(joint, universe)
    if len(globals_) > state_limit:
        raise ResourceLimitError(f"global assignment space has {len(globals_)} elements (limit {state_limit})")
    member_data = []
    for phi in kb:
        locals_ = enumerate_assignments(phi.domain, universe)
        index = {a: k for k, a in enumerate(locals_)}
        target = 0
        for t in phi.tuples:
            target |= 1 << index[t]
        proj_bits = [1 << index[g.restrict(phi.domain)] for g in globals_]
        member_data.append((target, proj_bits))
    candidates = [
        gi for gi in range(len(globals_)) if all(bits[gi] & target for target, bits in member_data)
    ]
    k = len(candidates)
    per_member = []
    for target, bits in member_data:
        cand_bits = [bits[c] for c in candidates]
        projected = [0] * (1 << k)
        for mask in range(1, 1 << k):
            low = mask & -mask
            projected[mask] = projected[mask ^ low] | cand_bits[low.bit_length() - 1]
        per_member.append((target, projected))
    found = []
    for mask in range(1 << k):
        if all(projected[mask] == target for target, projected in per_member):
            tuples = frozenset(globals_[candidates[i]] for i in range(k) if mask >> i & 1)
            found.append(Relation(universe, joint, tuples))
    return found


def verify_truth_maximality(
    kb: Knowledgebase,
    gamma: Relation,
    state_limit: int = DEFAULT_TRUTH_SEARCH_STATES,
) -> bool:
    """Check gamma dominates every truth valuation found by exhaustive search."""
    found = search_truth_valuations(kb, state_limit)
    if gamma not in found:
        raise ArgumentError("gamma is not itself a truth valuation of this knowledgebase")
    return all(relation_leq(delta, gamma) for delta in found)


def analyze_knowledgebase(
    kb: Knowledgebase,
    method: str = "fusion",
    cell_limit: int | None = DEFAULT_CELL_LIMIT,
    feasibility_columns: int | None = DEFAULT_FEASIBILITY_COLUMNS,
) -> AgreementReport:
    """Run the local, global, and complete checks, dispatching on capabilities."""
    algebra = kb.algebra()
    local = check_local_agreement(kb)
    if algebra.adjoint:
        global_verdict = check_global_agreement_adjoint(kb, method, cell_limit)
    elif isinstance(algebra, PotentialAlgebra) and algebra.semiring == NONNEG_RATIONAL:
        global_verdict = check_global_agreement_potentials(kb, feasibility_columns)
    else:
        raise CapabilityError(f"no global-agreement decision procedure for {algebra.name}")
    complete = check_complete_disagreement(kb, method, cell_limit) if algebra.has_null else None
    return AgreementReport(local, global_verdict, complete)
