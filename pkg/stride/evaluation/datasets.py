import io
import json

from stride.evaluation.answers import extract_final_answer, normalize_answer
from stride.evaluation.exceptions import (
    EvalSchemaError, NoFinalAnswer, Unparseable)
from stride.evaluation.voting import make_record


def _read_jsonl(path):
    with io.open(path, encoding='utf-8') as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except ValueError as e:
                raise EvalSchemaError('%s:%s: invalid JSON (%s)' % (
                    path, line_no, e))
            if not isinstance(data, dict):
                raise EvalSchemaError(
                    '%s:%s: expected a JSON object' % (path, line_no))
            yield line_no, data


def _problem_id(path, line_no, data):
    problem_id = data.get('problem_id')
    if not isinstance(problem_id, str) or not problem_id:
        raise EvalSchemaError(
            '%s:%s: problem_id must be a non-empty string' % (path, line_no))
    return problem_id


def load_predictions(path):
    """
    Reads ``{problem_id, samples: [str]}`` lines.

    :returns: list of (problem_id, list of samples), in file order
    """
    predictions = []
    seen = set()
    for line_no, data in _read_jsonl(path):
        problem_id = _problem_id(path, line_no, data)
        samples = data.get('samples')
        if not isinstance(samples, list) or \
                not all(isinstance(s, str) for s in samples):
            raise EvalSchemaError(
                '%s:%s: samples must be a list of strings' % (path, line_no))
        if problem_id in seen:
            raise EvalSchemaError('%s:%s: duplicate problem_id %s' % (
                path, line_no, problem_id))
        seen.add(problem_id)
        predictions.append((problem_id, samples))
    return predictions


def gold_answer(answer):
    """
    Reads a gold answer, either a bare value or a GSM8K-style rationale
    ending in ``#### <value>``.
    """
    if isinstance(answer, (int, float)) and not isinstance(answer, bool):
        answer = str(answer)
    if not isinstance(answer, str):
        raise Unparseable('Gold answer must be a string or a number.')
    if '####' in answer:
        try:
            return extract_final_answer(answer)
        except NoFinalAnswer:
            raise Unparseable('No value after #### in %r' % (answer,))
    return normalize_answer(answer)


def load_gold(path):
    """
    Reads ``{problem_id, answer}`` lines.

    :returns: dict of problem_id to NormalizedAnswer
    """
    gold = {}
    for line_no, data in _read_jsonl(path):
        problem_id = _problem_id(path, line_no, data)
        if 'answer' not in data:
            raise EvalSchemaError('%s:%s: missing answer' % (path, line_no))
        try:
            gold[problem_id] = gold_answer(data['answer'])
        except Unparseable as e:
            raise EvalSchemaError('%s:%s: %s' % (path, line_no, e))
    return gold


def build_records(predictions, gold, n):
    """
    One maj@n EvalRecord per prediction line.
    """
    missing = [pid for pid, _ in predictions if pid not in gold]
    if missing:
        raise EvalSchemaError('No gold answer for: %s' % (
            ', '.join(missing[:10]),))
    return [
        make_record(problem_id, gold[problem_id], samples, n)
        for problem_id, samples in predictions]
