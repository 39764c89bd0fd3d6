from dataclasses import dataclass
from typing import Optional

from stride.statespace.exceptions import InvalidAction


FORMALIZE = 'Formalize'
DECOMPOSE = 'Decompose'
SOLVE_SUBQUES = 'SolveSubques'
SOLVE_PARENT = 'SolveParent'
VERIFY = 'Verify'
BACKTRACK = 'Backtrack'
SUMMARIZE = 'Summarize'

ACTION_KINDS = (
    FORMALIZE, DECOMPOSE, SOLVE_SUBQUES, SOLVE_PARENT,
    VERIFY, BACKTRACK, SUMMARIZE)

# Verify and Backtrack are held back from students (stage one).
CORRECTION_KINDS = frozenset([VERIFY, BACKTRACK])
STAGE_ONE_KINDS = frozenset(ACTION_KINDS) - CORRECTION_KINDS
SOLVING_KINDS = frozenset([SOLVE_SUBQUES, SOLVE_PARENT])

PASS = 'PASS'
FAIL = 'FAIL'
VERDICTS = (PASS, FAIL)

DEFINITIONS = {
    FORMALIZE: 'Formalize the question mathematically.',
    DECOMPOSE: 'Divide the original question into numbered subquestions.',
    SOLVE_SUBQUES: 'Provide the solution for one subquestion.',
    SOLVE_PARENT: 'Solve the original question.',
    VERIFY: 'Check the correctness of the current state.',
    BACKTRACK: 'Backtrack to the last correct state.',
    SUMMARIZE: 'State the final answer.',
}


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


@dataclass(frozen=True)
class Action:
    """
    One of the seven reasoning actions.

    ``verdict`` is carried by Verify only, ``subquestion_index`` by
    SolveSubques only and ``target_index`` by Backtrack only.
    """
    kind: str
    verdict: Optional[str] = None
    subquestion_index: Optional[int] = None
    target_index: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ACTION_KINDS:
            raise InvalidAction('Unknown action kind: %r' % (self.kind,))

        if (self.kind == VERIFY) != (self.verdict is not None):
            raise InvalidAction(
                'verdict is required for Verify and illegal otherwise')
        if self.verdict is not None and self.verdict not in VERDICTS:
            raise InvalidAction('Unknown verdict: %r' % (self.verdict,))

        if (self.kind == SOLVE_SUBQUES) != (
                self.subquestion_index is not None):
            raise InvalidAction(
                'subquestion_index is required for SolveSubques '
                'and illegal otherwise')
        if self.subquestion_index is not None and not (
                _is_int(self.subquestion_index) and
                self.subquestion_index >= 1):
            raise InvalidAction(
                'subquestion_index must be a positive integer, got %r' % (
                    self.subquestion_index,))

        if (self.kind == BACKTRACK) != (self.target_index is not None):
            raise InvalidAction(
                'target_index is required for Backtrack and illegal otherwise')
        if self.target_index is not None and not (
                _is_int(self.target_index) and self.target_index >= 0):
            raise InvalidAction(
                'target_index must be a non-negative integer, got %r' % (
                    self.target_index,))

    @classmethod
    def formalize(cls):
        return cls(FORMALIZE)

    @classmethod
    def decompose(cls):
        return cls(DECOMPOSE)

    @classmethod
    def solve_subques(cls, subquestion_index):
        return cls(SOLVE_SUBQUES, subquestion_index=subquestion_index)

    @classmethod
    def solve_parent(cls):
        return cls(SOLVE_PARENT)

    @classmethod
    def verify(cls, passed):
        return cls(VERIFY, verdict=PASS if passed else FAIL)

    @classmethod
    def backtrack(cls, target_index):
        return cls(BACKTRACK, target_index=target_index)

    @classmethod
    def summarize(cls):
        return cls(SUMMARIZE)

    @property
    def passed(self):
        return self.verdict == PASS

    def __str__(self):
        if self.kind == VERIFY:
            return '%s(%s)' % (self.kind, self.verdict)
        if self.kind == SOLVE_SUBQUES:
            return '%s(%s)' % (self.kind, self.subquestion_index)
        if self.kind == BACKTRACK:
            return '%s(target=%s)' % (self.kind, self.target_index)
        return self.kind


def describe_action_set(allow_verify_backtrack=True):
    """
    Returns the action set offered to a generator, in canonical order.

    :param allow_verify_backtrack bool:
        False for students (Verify and Backtrack are left out)
    :returns: list of (kind, definition) tuples
    """
    return [
        (kind, DEFINITIONS[kind]) for kind in ACTION_KINDS
        if allow_verify_backtrack or kind not in CORRECTION_KINDS]
