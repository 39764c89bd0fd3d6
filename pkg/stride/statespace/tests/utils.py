import string

from hypothesis.strategies import (
    booleans, composite, integers, lists, one_of, sampled_from, text)

from stride.statespace.actions import Action
from stride.statespace.models import build_trace


LINE = text(
    alphabet=string.ascii_letters + string.digits + ' +-=*/().,',
    min_size=1, max_size=30).map(str.strip).filter(bool)

# Lines that look like headers but are not: they must survive a round trip.
HEADER_LIKE = sampled_from([
    '[ACTION items are listed below]', '[ACTIONS]', '[ACTION] next'])


@composite
def contents(draw):
    return '\n'.join(draw(lists(
        one_of(LINE, HEADER_LIKE), min_size=1, max_size=3)))


@composite
def valid_traces(draw, allow_verify_backtrack=True):
    """
    Random traces that are legal under the full rules, and under the
    Stage I rules too when ``allow_verify_backtrack`` is False.
    """
    corrections = allow_verify_backtrack
    steps = []
    path = [0]

    def add(action, content):
        steps.append((action, content))
        return len(steps)

    def solve(action):
        path.append(add(action, draw(contents())))
        if corrections and draw(booleans()):
            add(Action.verify(False), draw(contents()))
            path.pop()
            add(Action.backtrack(path[-1]), draw(contents()))
            path.append(add(action, draw(contents())))
        if corrections and draw(booleans()):
            add(Action.verify(True), draw(contents()))

    path.append(add(Action.formalize(), draw(contents())))
    if draw(booleans()):
        count = draw(integers(min_value=1, max_value=4))
        path.append(add(Action.decompose(), '\n'.join(
            '%s. %s' % (number, draw(LINE))
            for number in range(1, count + 1))))
        for _ in range(draw(integers(min_value=0, max_value=3))):
            solve(Action.solve_subques(
                draw(integers(min_value=1, max_value=count))))
    solve(Action.solve_parent())
    add(Action.summarize(), 'So the answer is\n#### %s' % (
        draw(integers(min_value=-10 ** 6, max_value=10 ** 6)),))
    return build_trace(draw(LINE), steps)
