"""Finite epistemic structures, counterfactual states, and agreement checking.

The package models finite multi-agent information structures, classifies
their relations, computes belief and common-belief operators, constructs the
counterfactual extension of a partitional structure (one duplicate block per
agent and decision-domain event), and exhaustively checks the two
no-agreeing-to-disagree properties together with the Sure-Thing Principle and
like-mindedness hypotheses they rest on.
"""

from .errors import (
    DomainError,
    EpistemicError,
    InputError,
    NotFoundError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
)
from .structures import (
    CLASS_BELIEF,
    CLASS_KD4,
    CLASS_OTHER,
    CLASS_PARTITIONAL,
    Event,
    InformationStructure,
    PropertyReport,
    RelationFlags,
    canonical_event_string,
    euclidean_counterexample,
    negative_introspection_counterexample,
    parse_event_string,
)
from .partitions import (
    DEFAULT_MAX_CELLS,
    FlawReport,
    MAX_CELLS_ENV_VAR,
    equivalence_class,
    equivalence_pairs,
    flaw_report,
    gamma,
    is_possible_belief,
    partition,
    resolve_max_cells,
)
from .counterfactual import (
    CheckResult,
    CounterfactualLabel,
    CounterfactualStructure,
    VerificationReport,
    build_counterfactual,
    counterfactual_state_name,
    verify_counterfactual,
)
from .decisions import (
    ActionAssignment,
    DecisionFunction,
    FIELD_KIND,
    GAMMA_KIND,
    Violation,
    ViolationList,
    check_like_minded,
    check_stp_field,
    check_stp_gamma,
    complete_stp_field,
    derive_action_function,
    enumerate_decision_profiles,
    normalize_actions,
    powerset_field,
    stp_completions,
    union_of_gammas,
)
from .agreement import (
    AgreementVerdict,
    AgreementViolation,
    DisagreementWitness,
    MODE_THEOREM1,
    MODE_THEOREM2,
    agreement_event,
    check_agreement,
    search_disagreement,
)
from .serialization import (
    canonical_json,
    decisions_to_document,
    document_to_structure,
    parse_decisions,
    parse_structure,
    serialize_decisions,
    serialize_structure,
    structure_hash,
    structure_to_document,
)
from .fixtures import d1, d1_document

__version__ = "0.1.0"

__all__ = [
    "ActionAssignment",
    "AgreementVerdict",
    "AgreementViolation",
    "CLASS_BELIEF",
    "CLASS_KD4",
    "CLASS_OTHER",
    "CLASS_PARTITIONAL",
    "CheckResult",
    "CounterfactualLabel",
    "CounterfactualStructure",
    "DEFAULT_MAX_CELLS",
    "DecisionFunction",
    "DisagreementWitness",
    "DomainError",
    "EpistemicError",
    "Event",
    "FIELD_KIND",
    "FlawReport",
    "GAMMA_KIND",
    "InformationStructure",
    "InputError",
    "MAX_CELLS_ENV_VAR",
    "MODE_THEOREM1",
    "MODE_THEOREM2",
    "NotFoundError",
    "ParseError",
    "PreconditionError",
    "PropertyReport",
    "RelationFlags",
    "ResourceLimitError",
    "VerificationReport",
    "Violation",
    "ViolationList",
    "agreement_event",
    "build_counterfactual",
    "canonical_event_string",
    "canonical_json",
    "check_agreement",
    "check_like_minded",
    "check_stp_field",
    "check_stp_gamma",
    "complete_stp_field",
    "counterfactual_state_name",
    "d1",
    "d1_document",
    "decisions_to_document",
    "derive_action_function",
    "document_to_structure",
    "enumerate_decision_profiles",
    "equivalence_class",
    "equivalence_pairs",
    "euclidean_counterexample",
    "flaw_report",
    "gamma",
    "is_possible_belief",
    "negative_introspection_counterexample",
    "normalize_actions",
    "parse_decisions",
    "parse_event_string",
    "parse_structure",
    "partition",
    "powerset_field",
    "resolve_max_cells",
    "search_disagreement",
    "serialize_decisions",
    "serialize_structure",
    "stp_completions",
    "structure_hash",
    "structure_to_document",
    "union_of_gammas",
    "verify_counterfactual",
]
