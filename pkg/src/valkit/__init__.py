"""Valuation algebras, generic inference, disagreement, and contextuality."""

from .algebra import (
    AxiomCheck,
    Knowledgebase,
    PotentialAlgebra,
    RelationAlgebra,
    ValuationAlgebra,
    axiom_suite,
)
from .builtins import BUILTINS, builtin
from .contextuality import (
    ContextualityReport,
    EmpiricalModel,
    MeasurementScenario,
    check_no_signalling,
    classify,
    flasque_check,
    gamma,
    lc_at,
    possibilistic_collapse_model,
    possibilistic_model,
    probabilistic_model,
)
from .core import (
    BOOLEAN,
    NONNEG_RATIONAL,
    Assignment,
    Domain,
    Frame,
    Semiring,
    VariableUniverse,
    dom,
    enumerate_assignments,
    project_assignment,
)
from .disagreement import (
    AgreementReport,
    GlobalVerdict,
    LocalVerdict,
    analyze_knowledgebase,
    check_complete_disagreement,
    check_global_agreement_adjoint,
    check_global_agreement_potentials,
    check_local_agreement,
    search_truth_valuations,
    verify_truth_maximality,
)
from .errors import (
    ArgumentError,
    CapabilityError,
    DomainError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    SemiringMismatchError,
    UniverseMismatchError,
    ValkitError,
)
from .feasibility import (
    FarkasCertificate,
    FeasibilityResult,
    LinearSystem,
    solve_feasibility,
    validate_certificate,
    validate_solution,
)
from .inference import (
    DEFAULT_CELL_LIMIT,
    InferenceProblem,
    heuristic_order,
    run_solver,
    solve_fusion,
    solve_naive,
)
from .logic import (
    Constraint,
    CSPInstance,
    PropositionalSystem,
    csp_to_knowledgebase,
    evaluation_satisfies,
    liar_cycle,
)
from .potentials import (
    Potential,
    combine_potentials,
    constant_potential,
    indicator_potential,
    neutral_potential,
    null_potential,
    possibilistic_collapse,
    project_potential,
    support_relation,
    total_mass,
)
from .relations import (
    AdjointnessReport,
    Ordering,
    Relation,
    adjointness_suite,
    empty_relation,
    full_relation,
    natural_join,
    project_relation,
    relation_leq,
    relation_order,
)

__version__ = "0.1.0"
