from stride.statespace.actions import Action, describe_action_set
from stride.statespace.models import (
    StateNode, Trace, TransitionRules, ValidationVerdict, Violation,
    build_trace, count_subquestions)
from stride.statespace.workflows import (
    TraceWorkflow, legal_next_actions, validate)

__all__ = [
    'Action', 'describe_action_set', 'StateNode', 'Trace', 'TransitionRules',
    'ValidationVerdict', 'Violation', 'build_trace', 'count_subquestions',
    'TraceWorkflow', 'legal_next_actions', 'validate']
