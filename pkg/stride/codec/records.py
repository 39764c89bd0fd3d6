import io
import json
import logging

from stride.codec.exceptions import SchemaError, TraceDecodeError
from stride.statespace.actions import Action
from stride.statespace.exceptions import InvalidAction
from stride.statespace.models import StateNode, Trace, final_answer_of


logger = logging.getLogger(__name__)

TRACE_FIELDS = frozenset(['question', 'states', 'final_answer'])
STATE_FIELDS = frozenset(['index', 'action_kind', 'content'])
ACTION_FIELDS = frozenset(['verdict', 'subquestion_index', 'target_index'])


def to_record(trace):
    """
    The JSON-object image of a trace. Optional action fields are only
    present when the action carries them.

    :param trace Trace: the trace
    :returns: dict
    """
    states = []
    for state in trace.states:
        data = {
            'index': state.index,
            'action_kind': None,
            'content': state.content,
        }
        action = state.action
        if action is not None:
            data['action_kind'] = action.kind
            for name in ('verdict', 'subquestion_index', 'target_index'):
                value = getattr(action, name)
                if value is not None:
                    data[name] = value
        states.append(data)
    return {
        'question': trace.question,
        'states': states,
        'final_answer': trace.final_answer,
    }


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _state_from_record(position, data):
    if not isinstance(data, dict):
        raise SchemaError('states[%s] must be an object' % (position,))
    keys = set(data)
    missing = STATE_FIELDS - keys
    extra = keys - STATE_FIELDS - ACTION_FIELDS
    if missing:
        raise SchemaError('states[%s] is missing: %s' % (
            position, ', '.join(sorted(missing))))
    if extra:
        raise SchemaError('states[%s] has unknown fields: %s' % (
            position, ', '.join(sorted(extra))))
    if not _is_int(data['index']):
        raise SchemaError('states[%s].index must be an integer' % (position,))
    if not isinstance(data['content'], str):
        raise SchemaError('states[%s].content must be a string' % (position,))

    kind = data['action_kind']
    options = dict((name, data[name]) for name in ACTION_FIELDS & keys)
    if kind is None:
        if options:
            raise SchemaError('states[%s] has %s but no action' % (
                position, ', '.join(sorted(options))))
        action = None
    else:
        try:
            action = Action(kind, **options)
        except InvalidAction as e:
            raise SchemaError('states[%s]: %s' % (position, e))
    return StateNode(index=data['index'], action=action,
                     content=data['content'])


def from_record(record):
    """
    Rebuilds a trace from its record. Missing and unknown fields are
    rejected, as is a final_answer that disagrees with the Summarize state.

    :param record dict: a TraceRecord
    :returns: Trace
    """
    if not isinstance(record, dict):
        raise SchemaError('A trace record must be an object.')
    keys = set(record)
    if TRACE_FIELDS - keys:
        raise SchemaError('Record is missing: %s' % (
            ', '.join(sorted(TRACE_FIELDS - keys)),))
    if keys - TRACE_FIELDS:
        raise SchemaError('Record has unknown fields: %s' % (
            ', '.join(sorted(keys - TRACE_FIELDS)),))
    if not isinstance(record['question'], str):
        raise SchemaError('question must be a string')
    if not isinstance(record['states'], list) or not record['states']:
        raise SchemaError('states must be a non-empty list')
    final_answer = record['final_answer']
    if final_answer is not None and not isinstance(final_answer, str):
        raise SchemaError('final_answer must be a string or null')

    states = tuple(
        _state_from_record(position, data)
        for position, data in enumerate(record['states']))
    if final_answer != final_answer_of(states):
        raise SchemaError(
            'final_answer %r does not match the Summarize state' % (
                final_answer,))
    return Trace(
        question=record['question'], states=states,
        final_answer=final_answer)


def dumps_record(trace):
    return json.dumps(to_record(trace), sort_keys=True, ensure_ascii=False)


def loads_record(line):
    try:
        data = json.loads(line)
    except ValueError as e:
        raise TraceDecodeError('Invalid JSON: %s' % (e,))
    return from_record(data)


def iter_jsonl(path):
    """
    Yields ``(line_no, object)`` for every non-blank line of a JSONL file.
    """
    with io.open(path, encoding='utf-8') as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                yield line_no, json.loads(line)
            except ValueError as e:
                raise TraceDecodeError('%s:%s: invalid JSON (%s)' % (
                    path, line_no, e))


def write_jsonl(path, objects):
    """
    Writes one JSON object per line, keys sorted, UTF-8, ``\\n`` endings.

    :returns: int, the number of lines written
    """
    count = 0
    with io.open(path, 'w', encoding='utf-8', newline='\n') as handle:
        for obj in objects:
            handle.write(json.dumps(obj, sort_keys=True, ensure_ascii=False))
            handle.write('\n')
            count += 1
    return count


def read_records(path, key=None):
    """
    Reads the traces of a JSONL file.

    :param path str: the file
    :param key str: read the record nested under this field of each line
        instead of the line itself
    :returns: list of Trace
    """
    traces = []
    for line_no, data in iter_jsonl(path):
        if key is not None:
            if not isinstance(data, dict) or key not in data:
                raise SchemaError('%s:%s: no %r field' % (
                    path, line_no, key))
            data = data[key]
        try:
            traces.append(from_record(data))
        except SchemaError as e:
            raise SchemaError('%s:%s: %s' % (path, line_no, e))
    logger.debug('Read %s traces from %s', len(traces), path)
    return traces


def write_records(path, traces):
    return write_jsonl(path, (to_record(trace) for trace in traces))
