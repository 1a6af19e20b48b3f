"""CL12 toolkit: sequents as games, proof checking, strategy extraction."""

from cl12.syntax import (
    Sequent,
    parse_formula,
    parse_sequent,
    render_formula,
    render_sequent,
    free_vars,
    substitute,
    elementarize,
    elementarize_sequent,
    surface_occurrences,
    max_run_length,
)
from cl12.classical import (
    FiniteModel,
    Valid,
    Countermodel,
    Unknown,
    prove_valid,
    find_countermodel,
    check_stability,
    eval_elementary,
)
from cl12.games import (
    Interpretation,
    LabMove,
    SequentPosition,
    initial_position,
    legal_move_schemas,
    apply_move,
    adjudicate,
    run_projection,
    is_delay,
)
from cl12.calculus import (
    Proof,
    NotFound,
    SearchBudget,
    check_proof,
    search_proof,
    wait_obligations,
    proof_to_json,
    proof_from_json,
)
from cl12.strategy import (
    extract_strategy,
    monitor_well_behavedness,
    bound_from_proof,
)
from cl12.bounds import GraphTerm, graphterm_eval, compose_bound
from cl12.arena import play, compose, counterstrategy

__all__ = [
    "Sequent", "parse_formula", "parse_sequent", "render_formula",
    "render_sequent", "free_vars", "substitute", "elementarize",
    "elementarize_sequent", "surface_occurrences", "max_run_length",
    "FiniteModel", "Valid", "Countermodel", "Unknown", "prove_valid",
    "find_countermodel", "check_stability", "eval_elementary",
    "Interpretation", "LabMove", "SequentPosition", "initial_position",
    "legal_move_schemas", "apply_move", "adjudicate", "run_projection",
    "is_delay",
    "Proof", "NotFound", "SearchBudget", "check_proof", "search_proof",
    "wait_obligations", "proof_to_json", "proof_from_json",
    "extract_strategy", "monitor_well_behavedness", "bound_from_proof",
    "GraphTerm", "graphterm_eval", "compose_bound",
    "play", "compose", "counterstrategy",
]

__version__ = "0.1.0"
