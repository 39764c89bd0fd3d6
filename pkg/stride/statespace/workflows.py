import threading

from transitions import Machine

from stride.statespace import models
from stride.statespace.actions import (
    BACKTRACK, CORRECTION_KINDS, DECOMPOSE, SOLVE_SUBQUES, SUMMARIZE, VERIFY)
from stride.statespace.exceptions import MalformedPrefix
from stride.statespace.models import (
    ValidationVerdict, Violation, count_subquestions)
from stride.statespace.states import (
    Initial, Formalized, Decomposed, SubquesSolved, ParentSolved, Summarized)


VERIFIED = 'verified'
FAILED = 'failed'
BACKTRACKED = 'backtracked'


class TraceWorkflow(object):
    """
    Walks a trace one state at a time through the reasoning phases.

    The phase graph is a ``transitions`` Machine with the walker as its
    model, so ``self.state`` names the current phase and each solving
    action kind is a trigger. On top of the machine the walker keeps the
    live reasoning path (states not abandoned by a Backtrack), the most
    recent state confirmed by a passing Verify, and whether the previous
    action was a Verify or a Backtrack.
    """
    initial_state = 'initial'
    state_map = {
        'initial': Initial,
        'formalized': Formalized,
        'decomposed': Decomposed,
        'subques_solved': SubquesSolved,
        'parent_solved': ParentSolved,
        'summarized': Summarized,
    }

    def __init__(self, rules):
        self.machine = Machine(
            model=self,
            states=[phase(name) for name, phase in self.state_map.items()],
            transitions=self.transition_table(),
            initial=self.initial_state,
            auto_transitions=False)
        self.reset(rules)

    def reset(self, rules):
        """
        Puts the walker back at the initial state, judging under ``rules``.
        """
        self.rules = rules
        self.machine.set_state(self.initial_state, model=self)
        self.path = [(0, self.initial_state)]
        self.anchor = 0
        self.pending = None
        self.decomposed = False
        self.subquestion_limit = None
        self.steps_taken = 0

    @classmethod
    def transition_table(cls):
        return [
            {'trigger': kind, 'source': name, 'dest': dest}
            for name, phase in sorted(cls.state_map.items())
            for kind, dest in sorted(phase.transitions.items())]

    def get_state(self):
        return self.machine.get_state(self.state)

    @property
    def summarized(self):
        return self.state == 'summarized'

    def has_next(self):
        return not self.summarized and \
            self.steps_taken < self.rules.max_states

    def actions(self):
        """
        The action kinds that may legally follow the states walked so far.

        :returns: frozenset of action kinds
        """
        if not self.has_next():
            return frozenset()
        if self.pending == FAILED:
            return frozenset([BACKTRACK])

        kinds = set(self.machine.get_triggers(self.state))
        if self.decomposed:
            kinds.discard(DECOMPOSE)
        if self.pending is not None or \
                not self.rules.allow_verify_backtrack:
            kinds.discard(VERIFY)
        return frozenset(kinds)

    def backtrack_targets(self):
        """
        States a Backtrack may return to: on the live path, not before the
        last state confirmed by Verify, and before the state that failed.
        """
        return [
            index for index, _ in self.path[:-1] if index >= self.anchor]

    def check(self, node):
        """
        Returns the Violation ``node`` would cause, or None.
        """
        index = node.index
        action = node.action
        if action is None:
            return Violation(
                index, models.ILLEGAL_TRANSITION,
                'State %s carries no action.' % (index,))

        kind = action.kind
        if self.summarized:
            return Violation(
                index, models.ACTION_AFTER_SUMMARIZE,
                '%s follows the terminal Summarize.' % (action,))
        if kind in CORRECTION_KINDS and \
                not self.rules.allow_verify_backtrack:
            return Violation(
                index, models.ACTION_NOT_IN_STAGE_SET,
                '%s is not offered in this stage.' % (kind,))
        if self.steps_taken >= self.rules.max_states:
            return Violation(
                index, models.TRACE_TOO_LONG,
                'More than %s action states.' % (self.rules.max_states,))

        legal = self.actions()
        if kind not in legal:
            if kind == SUMMARIZE:
                code = models.PREMATURE_SUMMARIZE
            elif kind == DECOMPOSE and self.decomposed:
                code = models.DUPLICATE_DECOMPOSE
            else:
                code = models.ILLEGAL_TRANSITION
            return Violation(
                index, code, '%s cannot follow state %s (%s).' % (
                    action, index - 1, self.get_state().verbose_name))

        if kind == SOLVE_SUBQUES and \
                action.subquestion_index > self.subquestion_limit:
            return Violation(
                index, models.SUBQUESTION_OUT_OF_RANGE,
                'Subquestion %s was never introduced; Decompose declared '
                '%s.' % (action.subquestion_index, self.subquestion_limit))

        if kind == DECOMPOSE:
            count = count_subquestions(node.content)
            if count is not None and count > self.rules.max_subquestions:
                return Violation(
                    index, models.TOO_MANY_SUBQUESTIONS,
                    'Decompose declares %s subquestions, at most %s '
                    'allowed.' % (count, self.rules.max_subquestions))

        if kind == BACKTRACK:
            targets = self.backtrack_targets()
            if action.target_index not in targets:
                return Violation(
                    index, models.INVALID_BACKTRACK_TARGET,
                    'Backtrack to %s; the last correct state is one of: '
                    '%s.' % (action.target_index,
                             ', '.join(str(t) for t in targets)))
        return None

    def take_action(self, node):
        """
        Moves the walker past ``node``. Nothing moves when the node is
        illegal.

        :returns: Violation or None
        """
        violation = self.check(node)
        if violation is not None:
            return violation

        action = node.action
        if action.kind == VERIFY:
            getattr(self, VERIFY)()
            if action.passed:
                self.anchor = self.path[-1][0]
                self.pending = VERIFIED
            else:
                self.pending = FAILED
        elif action.kind == BACKTRACK:
            while self.path[-1][0] != action.target_index:
                self.path.pop()
            self.machine.set_state(self.path[-1][1], model=self)
            self.pending = BACKTRACKED
        else:
            getattr(self, action.kind)()
            self.path.append((node.index, self.state))
            self.pending = None
            if action.kind == DECOMPOSE:
                self.decomposed = True
                self.subquestion_limit = count_subquestions(
                    node.content) or self.rules.max_subquestions
        self.steps_taken += 1
        return None

    def run_all(self, nodes):
        """
        Walks ``nodes`` until the first illegal one.

        :returns: Violation or None
        """
        for node in nodes:
            violation = self.take_action(node)
            if violation is not None:
                return violation
        return None


_walkers = threading.local()


def walker(rules):
    """
    A reset TraceWorkflow for the calling thread; one is kept per thread
    and reused across walks.
    """
    workflow = getattr(_walkers, 'workflow', None)
    if workflow is None:
        workflow = _walkers.workflow = TraceWorkflow(rules)
    else:
        workflow.reset(rules)
    return workflow


def _index_violations(trace):
    return [
        Violation(
            position, models.NON_CONSECUTIVE_INDEX,
            'State at position %s has index %s.' % (position, state.index))
        for position, state in enumerate(trace.states)
        if state.index != position]


def legal_next_actions(trace_prefix, rules):
    """
    The action kinds that may legally extend ``trace_prefix``.

    :param trace_prefix Trace: a partial trace
    :param rules TransitionRules: the rules to judge under
    :returns: frozenset of action kinds
    """
    if not trace_prefix.states or _index_violations(trace_prefix):
        raise MalformedPrefix('Prefix indices must be consecutive from 0.')
    if any(state.action is not None and state.action.kind == SUMMARIZE
           for state in trace_prefix.states):
        raise MalformedPrefix('Prefix already ends in Summarize.')

    workflow = walker(rules)
    violation = workflow.run_all(trace_prefix.states[1:])
    if violation is not None:
        raise MalformedPrefix(
            'Prefix is not a legal partial trace: %s' % (violation.message,))
    return workflow.actions()


def validate(trace, rules):
    """
    Judges a whole trace. Problems are reported, never raised.

    :param trace Trace: the trace to judge
    :param rules TransitionRules: the rules to judge under
    :returns: ValidationVerdict
    """
    violations = []
    states = trace.states
    if not states:
        return ValidationVerdict((Violation(
            0, models.MISSING_SUMMARIZE, 'Trace has no states.'),))

    if states[0].action is not None:
        violations.append(Violation(
            0, models.INITIAL_STATE_HAS_ACTION,
            'The initial state holds the question, not an action.'))

    for state in states[1:]:
        if not state.content.strip():
            violations.append(Violation(
                state.index, models.EMPTY_CONTENT,
                'State %s has no content.' % (state.index,)))
        if any(line.startswith(models.HEADER_PREFIX)
               for line in state.content.split('\n')):
            violations.append(Violation(
                state.index, models.HEADER_IN_CONTENT,
                'State %s has a line that reads as an action header.' % (
                    state.index,)))
        if not rules.allow_verify_backtrack and state.action is not None \
                and state.action.kind in CORRECTION_KINDS:
            violations.append(Violation(
                state.index, models.ACTION_NOT_IN_STAGE_SET,
                '%s is not offered in this stage.' % (state.action.kind,)))

    action_states = len(states) - 1
    if action_states > rules.max_states:
        violations.append(Violation(
            rules.max_states + 1, models.TRACE_TOO_LONG,
            '%s action states, at most %s allowed.' % (
                action_states, rules.max_states)))

    index_violations = _index_violations(trace)
    violations.extend(index_violations)
    if not index_violations:
        workflow = walker(rules)
        violation = workflow.run_all(states[1:rules.max_states + 1])
        if violation is not None and violation not in violations:
            violations.append(violation)

    if not trace.is_complete:
        violations.append(Violation(
            len(states) - 1, models.MISSING_SUMMARIZE,
            'The trace does not end in Summarize.'))

    violations.sort(key=lambda v: v.state_index)
    return ValidationVerdict(tuple(violations))
