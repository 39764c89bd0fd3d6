import re

from stride.codec.exceptions import (
    EmptyBlock, TraceDecodeError, TraceSyntaxError)
from stride.statespace.actions import (
    Action, BACKTRACK, SOLVE_SUBQUES, VERIFY)
from stride.statespace.models import HEADER_PREFIX, build_trace


HEADER = re.compile(
    r'^\[ACTION: (?:'
    r'(?P<kind>Formalize|Decompose|SolveParent|Summarize)'
    r'|SolveSubques (?P<subquestion>[1-9]\d*)'
    r'|Verify -> (?P<verdict>PASS|FAIL)'
    r'|Backtrack -> (?P<target>0|[1-9]\d*)'
    r')\]$')


def parse_header(line, line_no):
    """
    Reads one header line into an Action.

    :param line str: the header, trailing whitespace already removed
    :param line_no int: 1-based line number for error reports
    :returns: Action
    """
    match = HEADER.match(line)
    if match is None:
        raise TraceSyntaxError(line_no, 'malformed header %r' % (line,))
    if match.group('kind'):
        return Action(match.group('kind'))
    if match.group('subquestion'):
        return Action.solve_subques(int(match.group('subquestion')))
    if match.group('verdict'):
        return Action(VERIFY, verdict=match.group('verdict'))
    return Action.backtrack(int(match.group('target')))


def render_header(action):
    if action.kind == SOLVE_SUBQUES:
        return '[ACTION: %s %s]' % (action.kind, action.subquestion_index)
    if action.kind == VERIFY:
        return '[ACTION: %s -> %s]' % (action.kind, action.verdict)
    if action.kind == BACKTRACK:
        return '[ACTION: %s -> %s]' % (action.kind, action.target_index)
    return '[ACTION: %s]' % (action.kind,)


def _decode(raw):
    if isinstance(raw, bytes):
        try:
            return raw.decode('utf-8')
        except UnicodeDecodeError as e:
            raise TraceDecodeError('Trace is not valid UTF-8: %s' % (e,))
    if not isinstance(raw, str):
        raise TraceDecodeError(
            'Expected text or bytes, got %s' % (type(raw).__name__,))
    return raw


def parse_tagged(raw, question):
    """
    Parses generator output in the tagged-text format into a Trace. The
    trace is not validated; that is left to the state space.

    :param raw str: the tagged text (bytes are decoded as UTF-8)
    :param question str: the original question, becomes state 0
    :returns: Trace
    """
    text = _decode(raw).replace('\r\n', '\n').replace('\r', '\n')
    lines = text.split('\n')

    blocks = []
    for line_no, line in enumerate(lines, start=1):
        if line.startswith(HEADER_PREFIX):
            action = parse_header(line.rstrip(), line_no)
            blocks.append((line_no, action, []))
        elif blocks:
            blocks[-1][2].append(line)
        elif line.strip():
            raise TraceSyntaxError(
                line_no, 'content before the first action header')

    if not blocks:
        raise TraceSyntaxError(1, 'no action header found')

    steps = []
    for line_no, action, content_lines in blocks:
        content = '\n'.join(content_lines).strip()
        if not content:
            raise EmptyBlock(line_no, '%s has no content' % (action,))
        steps.append((action, content))
    return build_trace(question, steps)


def serialize_tagged(trace):
    """
    Renders a trace in the canonical tagged-text format. State 0 (the
    question) is not part of the text.

    :param trace Trace: the trace to render
    :returns: str
    """
    return '\n'.join(
        '%s\n%s' % (render_header(state.action), state.content)
        for state in trace.states[1:])
