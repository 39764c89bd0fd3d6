import re

from dataclasses import dataclass, field
from typing import Optional, Tuple

from stride import settings
from stride.evaluation.answers import extract_final_answer
from stride.evaluation.exceptions import NoFinalAnswer, Unparseable
from stride.statespace.actions import Action, SUMMARIZE
from stride.statespace.exceptions import EmptySteps, InvalidRules


ENUMERATED_ITEM = re.compile(r'^\s*(\d+)\.(\s|$)')

# Violation codes reported by validate()
ILLEGAL_TRANSITION = 'ILLEGAL_TRANSITION'
PREMATURE_SUMMARIZE = 'PREMATURE_SUMMARIZE'
ACTION_NOT_IN_STAGE_SET = 'ACTION_NOT_IN_STAGE_SET'
ACTION_AFTER_SUMMARIZE = 'ACTION_AFTER_SUMMARIZE'
DUPLICATE_DECOMPOSE = 'DUPLICATE_DECOMPOSE'
SUBQUESTION_OUT_OF_RANGE = 'SUBQUESTION_OUT_OF_RANGE'
TOO_MANY_SUBQUESTIONS = 'TOO_MANY_SUBQUESTIONS'
INVALID_BACKTRACK_TARGET = 'INVALID_BACKTRACK_TARGET'
MISSING_SUMMARIZE = 'MISSING_SUMMARIZE'
TRACE_TOO_LONG = 'TRACE_TOO_LONG'
NON_CONSECUTIVE_INDEX = 'NON_CONSECUTIVE_INDEX'
INITIAL_STATE_HAS_ACTION = 'INITIAL_STATE_HAS_ACTION'
EMPTY_CONTENT = 'EMPTY_CONTENT'
HEADER_IN_CONTENT = 'HEADER_IN_CONTENT'

# Content lines starting with this would read back as action headers.
HEADER_PREFIX = '[ACTION:'


@dataclass(frozen=True)
class StateNode:
    index: int
    action: Optional[Action]
    content: str


@dataclass(frozen=True)
class Trace:
    question: str
    states: Tuple[StateNode, ...]
    final_answer: Optional[str] = None

    @property
    def actions(self):
        return [state.action for state in self.states[1:]]

    @property
    def is_complete(self):
        return bool(self.states) and self.states[-1].action is not None and \
            self.states[-1].action.kind == SUMMARIZE

    def prefix(self, length):
        """
        Returns the trace made of the first ``length`` action states.
        """
        return Trace(
            question=self.question,
            states=self.states[:length + 1],
            final_answer=final_answer_of(self.states[:length + 1]))


@dataclass(frozen=True)
class TransitionRules:
    allow_verify_backtrack: bool = True
    max_subquestions: int = settings.DEFAULT_MAX_SUBQUESTIONS
    max_states: int = settings.DEFAULT_MAX_STATES

    def __post_init__(self):
        if self.max_states < 3:
            raise InvalidRules(
                'max_states must be at least 3, got %s' % (self.max_states,))
        if self.max_subquestions < 1:
            raise InvalidRules(
                'max_subquestions must be positive, got %s' % (
                    self.max_subquestions,))

    @classmethod
    def stage_one(cls, **kwargs):
        return cls(allow_verify_backtrack=False, **kwargs)

    @classmethod
    def full(cls, **kwargs):
        return cls(allow_verify_backtrack=True, **kwargs)


@dataclass(frozen=True)
class Violation:
    state_index: int
    rule_code: str
    message: str

    def to_dict(self):
        return {
            'state_index': self.state_index,
            'rule_code': self.rule_code,
            'message': self.message,
        }


@dataclass(frozen=True)
class ValidationVerdict:
    violations: Tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self):
        return not self.violations

    @property
    def rule_codes(self):
        return [v.rule_code for v in self.violations]

    def to_dict(self):
        return {
            'valid': self.valid,
            'violations': [v.to_dict() for v in self.violations],
        }


def count_subquestions(content):
    """
    Counts the enumerated items ("1.", "2.", ...) that start a line of a
    Decompose block.

    :param content str: the Decompose content
    :returns: int or None when nothing is enumerated
    """
    count = sum(
        1 for line in content.split('\n') if ENUMERATED_ITEM.match(line))
    return count or None


def final_answer_of(states):
    """
    The answer carried by the last Summarize state, normalized when a
    numeric answer can be extracted from it.
    """
    summaries = [
        state for state in states
        if state.action is not None and state.action.kind == SUMMARIZE]
    if not summaries:
        return None
    content = summaries[-1].content
    try:
        return extract_final_answer(content).canonical
    except (NoFinalAnswer, Unparseable):
        return content.strip()


def build_trace(question, steps):
    """
    Builds a trace from ordered (action, content) steps. The question is
    state 0. The result is not validated.

    :param question str: the original question
    :param steps list: (Action, content) tuples
    :returns: Trace
    """
    steps = list(steps)
    if not steps:
        raise EmptySteps('A trace needs at least one step.')

    states = [StateNode(index=0, action=None, content=question)]
    for index, (action, content) in enumerate(steps, start=1):
        states.append(StateNode(index=index, action=action, content=content))
    return Trace(
        question=question,
        states=tuple(states),
        final_answer=final_answer_of(states))
