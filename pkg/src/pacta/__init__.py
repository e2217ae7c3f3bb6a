"""Contracts with circular enabling: games, logic, and agreement analysis."""

from .model import (
    CIRCULAR,
    STANDARD,
    Clause,
    ContractSpec,
    Diagnostic,
    GoalPayoff,
    InvalidPlayError,
    InvalidSpecError,
    OfferRequestPayoff,
    Payoff,
    PreconditionError,
    SpecError,
    Strategy,
    check_event_set,
    check_play,
    circ,
    ensure_valid,
    std,
    validate,
)
from .game import (
    CreditLedger,
    GameVerdict,
    ParticipantVerdict,
    agreement,
    credit_free,
    credits,
    enables,
    innocent,
    is_prudent_play,
    provable_events,
    prudent_events,
    reachable,
    simulate,
    synthesize_strategy,
    verdict,
    wins,
)
from .logic import (
    HornTheory,
    Trace,
    encode_urgency,
    interleave,
    is_proof_trace,
    iter_proof_traces,
    proof_traces,
    provable_atoms,
    reach_atoms,
    spec_of,
    theory_of,
    urgent_atoms,
)
from .oracle import (
    Derivation,
    check_derivation,
    nd_derivation,
    nd_provable,
    prudence_bruteforce,
    prudence_table,
    traces_bruteforce,
)
from .dsl import ParseError, analyze, parse, print_spec
from .gen import shy_dancers

__version__ = "0.1.0"

__all__ = [
    "CIRCULAR",
    "STANDARD",
    "Clause",
    "ContractSpec",
    "CreditLedger",
    "Derivation",
    "Diagnostic",
    "GameVerdict",
    "GoalPayoff",
    "HornTheory",
    "InvalidPlayError",
    "InvalidSpecError",
    "OfferRequestPayoff",
    "ParseError",
    "ParticipantVerdict",
    "Payoff",
    "PreconditionError",
    "SpecError",
    "Strategy",
    "Trace",
    "agreement",
    "analyze",
    "check_derivation",
    "check_event_set",
    "check_play",
    "circ",
    "credit_free",
    "credits",
    "enables",
    "encode_urgency",
    "ensure_valid",
    "innocent",
    "interleave",
    "is_proof_trace",
    "is_prudent_play",
    "iter_proof_traces",
    "nd_derivation",
    "nd_provable",
    "parse",
    "print_spec",
    "proof_traces",
    "provable_atoms",
    "provable_events",
    "prudence_bruteforce",
    "prudence_table",
    "prudent_events",
    "reach_atoms",
    "reachable",
    "shy_dancers",
    "simulate",
    "spec_of",
    "std",
    "synthesize_strategy",
    "theory_of",
    "traces_bruteforce",
    "urgent_atoms",
    "validate",
    "verdict",
    "wins",
]
