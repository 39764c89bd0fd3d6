import io
import json
import logging
import os

from collections import Counter
from datetime import datetime, timezone

from stride import __version__, settings
from stride.codec.exceptions import CodecError
from stride.codec.records import iter_jsonl, to_record, from_record, \
    write_jsonl
from stride.datagen import models
from stride.datagen.exceptions import DatasetIoError
from stride.datagen.models import DatasetManifest, ProblemInstance
from stride.evaluation.datasets import gold_answer
from stride.evaluation.exceptions import Unparseable


logger = logging.getLogger(__name__)

SFT_FILE = 'sft.jsonl'
DPO_FILE = 'dpo.jsonl'
MANIFEST_FILE = 'manifest.json'

PROBLEM_FIELDS = frozenset(['id', 'question', 'reference_answer'])
GSM8K_FIELDS = frozenset(['question', 'answer'])


def _problem(path, line_no, data):
    if not isinstance(data, dict):
        raise DatasetIoError('%s:%s: expected a JSON object' % (
            path, line_no))
    keys = set(data)
    if keys == PROBLEM_FIELDS:
        problem_id, answer = data['id'], data['reference_answer']
    elif keys == GSM8K_FIELDS:
        problem_id, answer = 'train-%s' % (line_no,), data['answer']
    else:
        raise DatasetIoError(
            '%s:%s: expected {id, question, reference_answer} or '
            '{question, answer}' % (path, line_no))
    if not isinstance(problem_id, str) or not problem_id or \
            not isinstance(data['question'], str):
        raise DatasetIoError('%s:%s: id and question must be strings' % (
            path, line_no))
    try:
        reference = gold_answer(answer).canonical
    except Unparseable as e:
        raise DatasetIoError('%s:%s: %s' % (path, line_no, e))
    return ProblemInstance(
        id=problem_id, question=data['question'], reference_answer=reference)


def load_problems(path):
    """
    Reads problems from JSONL. Lines are either
    ``{id, question, reference_answer}`` or GSM8K-style
    ``{question, answer}`` where the answer ends in ``#### <value>``; the
    latter get ids ``train-<line>``.

    :param path str: the problems file
    :returns: list of ProblemInstance
    """
    problems = []
    seen = set()
    try:
        for line_no, data in iter_jsonl(path):
            problem = _problem(path, line_no, data)
            if problem.id in seen:
                raise DatasetIoError('%s:%s: duplicate id %s' % (
                    path, line_no, problem.id))
            seen.add(problem.id)
            problems.append(problem)
    except (IOError, OSError, CodecError) as e:
        raise DatasetIoError('Cannot read problems %s: %s' % (path, e))
    logger.info('Loaded %s problems from %s', len(problems), path)
    return problems


def load_model_predictions(path, problems):
    """
    Reads model predictions ``{problem_id, trace: TraceRecord}`` for
    problems in ``problems``.

    :returns: list of (ProblemInstance, Trace)
    """
    by_id = dict((problem.id, problem) for problem in problems)
    predictions = []
    try:
        for line_no, data in iter_jsonl(path):
            if not isinstance(data, dict) or \
                    set(data) != set(['problem_id', 'trace']):
                raise DatasetIoError(
                    '%s:%s: expected {problem_id, trace}' % (path, line_no))
            if data['problem_id'] not in by_id:
                raise DatasetIoError('%s:%s: unknown problem %s' % (
                    path, line_no, data['problem_id']))
            try:
                trace = from_record(data['trace'])
            except CodecError as e:
                raise DatasetIoError('%s:%s: %s' % (path, line_no, e))
            predictions.append((by_id[data['problem_id']], trace))
    except (IOError, OSError, CodecError) as e:
        raise DatasetIoError('Cannot read predictions %s: %s' % (path, e))
    return predictions


def manifest_timestamp(mock=False):
    """
    ISO-8601 UTC creation time. ``SOURCE_DATE_EPOCH`` wins when set; mock
    runs otherwise use the epoch so reruns match byte for byte.
    """
    if settings.SOURCE_DATE_EPOCH:
        seconds = int(settings.SOURCE_DATE_EPOCH)
    elif mock:
        seconds = 0
    else:
        return datetime.now(timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ')
    return datetime.fromtimestamp(seconds, timezone.utc).strftime(
        '%Y-%m-%dT%H:%M:%SZ')


def sft_line(case):
    return {
        'problem_id': case.problem.id,
        'question': case.problem.question,
        'trace': to_record(case.trace),
    }


def dpo_line(case):
    return {
        'problem_id': case.problem.id,
        'question': case.pair.question,
        'accepted': to_record(case.pair.accepted),
        'rejected': to_record(case.pair.rejected),
    }


def emit_datasets(cases, out_dir, generator='generator', created_at=None,
                  dpo_beta=settings.DPO_BETA):
    """
    Writes ``sft.jsonl`` (right cases), ``dpo.jsonl`` (corrected cases)
    and ``manifest.json`` to ``out_dir``.

    :param cases list: ConstructionCase, in problem order
    :param out_dir str: output directory, created when missing
    :param generator str: generator name recorded in the manifest
    :param created_at str: timestamp recorded in the manifest
    :param dpo_beta float: β recorded in the manifest
    :returns: DatasetManifest
    """
    cases = list(cases)
    right = [case for case in cases if case.outcome == models.RIGHT_CASE]
    corrected = [case for case in cases if case.outcome == models.CORRECTED]
    stage2_sources = Counter(
        case.source for case in cases if case.stage == models.STAGE_TWO)

    try:
        os.makedirs(out_dir, exist_ok=True)
        right_count = write_jsonl(
            os.path.join(out_dir, SFT_FILE), (sft_line(c) for c in right))
        pair_count = write_jsonl(
            os.path.join(out_dir, DPO_FILE), (dpo_line(c) for c in corrected))
        manifest = DatasetManifest(
            right_count=right_count,
            pair_count=pair_count,
            failed_count=sum(
                1 for case in cases if case.outcome == models.FAILED),
            wrong_count=sum(
                1 for case in cases if case.outcome == models.WRONG_CASE),
            generator=generator,
            created_at=created_at or manifest_timestamp(),
            dpo_beta=dpo_beta,
            version=__version__,
            stage2_sources=dict(sorted(stage2_sources.items())))
        with io.open(os.path.join(out_dir, MANIFEST_FILE), 'w',
                     encoding='utf-8', newline='\n') as handle:
            handle.write(json.dumps(
                manifest.to_dict(), sort_keys=True, indent=2))
            handle.write('\n')
    except (IOError, OSError) as e:
        raise DatasetIoError('Cannot write datasets to %s: %s' % (
            out_dir, e))

    logger.info('Wrote %s right cases and %s pairs to %s (%s failed)',
                manifest.right_count, manifest.pair_count, out_dir,
                manifest.failed_count)
    return manifest
