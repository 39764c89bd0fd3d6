from transitions import State

from stride.statespace.actions import (
    FORMALIZE, DECOMPOSE, SOLVE_SUBQUES, SOLVE_PARENT, SUMMARIZE, VERIFY)


class Phase(State):
    """
    A reasoning phase. ``transitions`` maps the action kinds offered in
    the phase to the phase they lead to; a destination of ``None`` keeps
    the phase where it is.
    """
    verbose_name = ''
    transitions = {}


class Initial(Phase):
    verbose_name = 'Initial state (original question)'
    transitions = {FORMALIZE: 'formalized'}


class Formalized(Phase):
    verbose_name = 'Question formalized'
    transitions = {
        DECOMPOSE: 'decomposed',
        SOLVE_PARENT: 'parent_solved',
    }


class Decomposed(Phase):
    verbose_name = 'Question decomposed'
    transitions = {
        SOLVE_SUBQUES: 'subques_solved',
        SOLVE_PARENT: 'parent_solved',
    }


class SubquesSolved(Phase):
    verbose_name = 'Subquestion solved'
    transitions = {
        SOLVE_SUBQUES: 'subques_solved',
        SOLVE_PARENT: 'parent_solved',
        VERIFY: None,
    }


class ParentSolved(Phase):
    verbose_name = 'Original question solved'
    transitions = {
        SUMMARIZE: 'summarized',
        VERIFY: None,
    }


class Summarized(Phase):
    verbose_name = 'Final answer stated'
    transitions = {}
