"""Multi-agent epistemic planning over possibility-based states."""
from .errors import ClassificationError, DomainError, EplanError, InitialStateError, ParseError, TransitionError
from .estate import EState, bisimilar, canonicalize, entails, reaches
from .initial import build_initial_state
from .language import (
    ActionInstance,
    Domain,
    classify_initially,
    format_domain,
    ground_action_instances,
    parse_domain,
)
from .planner import NoPlan, Plan, SearchConfig, goal_satisfied, plan_bfs
from .transition import apply

__all__ = [
    "ActionInstance",
    "ClassificationError",
    "Domain",
    "DomainError",
    "EState",
    "EplanError",
    "InitialStateError",
    "NoPlan",
    "ParseError",
    "Plan",
    "SearchConfig",
    "TransitionError",
    "apply",
    "bisimilar",
    "build_initial_state",
    "canonicalize",
    "classify_initially",
    "entails",
    "format_domain",
    "goal_satisfied",
    "ground_action_instances",
    "parse_domain",
    "plan_bfs",
    "reaches",
]
