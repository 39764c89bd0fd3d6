import logging

from dataclasses import dataclass
from typing import Optional, Tuple

from stride.evaluation.answers import NormalizedAnswer, extract_final_answer
from stride.evaluation.exceptions import (
    AllExtractionsFailed, EmptyInput, InsufficientSamples, NoFinalAnswer,
    Unparseable)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalRecord:
    problem_id: str
    gold: NormalizedAnswer
    samples: Tuple[str, ...]
    extracted: Tuple[Optional[NormalizedAnswer], ...]
    vote: Optional[NormalizedAnswer]

    @property
    def correct(self):
        return self.vote is not None and self.vote == self.gold


@dataclass(frozen=True)
class Tally:
    """
    Correct and total counts; tallies of disjoint record chunks add up.
    """
    correct: int = 0
    total: int = 0

    def __add__(self, other):
        return Tally(self.correct + other.correct, self.total + other.total)

    @property
    def accuracy(self):
        if not self.total:
            raise EmptyInput('Nothing to score.')
        return self.correct / float(self.total)


def maj_at_n(answers):
    """
    Majority vote over extracted answers. Ties go to the answer seen first;
    failed extractions (None) do not vote.

    :param answers list: NormalizedAnswer or None entries
    :returns: NormalizedAnswer
    """
    answers = list(answers)
    if not answers:
        raise EmptyInput('maj@n needs at least one answer.')

    counts = {}
    first_seen = {}
    for position, answer in enumerate(answers):
        if answer is None:
            continue
        counts[answer] = counts.get(answer, 0) + 1
        first_seen.setdefault(answer, position)

    if not counts:
        raise AllExtractionsFailed(
            'None of the %s samples yielded an answer.' % (len(answers),))
    return min(counts, key=lambda a: (-counts[a], first_seen[a]))


def _extract_or_none(sample):
    try:
        return extract_final_answer(sample)
    except (NoFinalAnswer, Unparseable):
        return None


def make_record(problem_id, gold, samples, n):
    """
    Builds the maj@n record for one question from its first ``n`` samples.

    :param problem_id str: question identifier
    :param gold NormalizedAnswer: reference answer
    :param samples list: sampled prediction texts
    :param n int: number of samples that vote
    :returns: EvalRecord
    """
    if n < 1:
        raise ValueError('n must be positive, got %s' % (n,))
    if len(samples) < n:
        raise InsufficientSamples(
            '%s has %s samples, maj@%s needs %s.' % (
                problem_id, len(samples), n, n))

    samples = tuple(samples[:n])
    extracted = tuple(_extract_or_none(sample) for sample in samples)
    try:
        vote = maj_at_n(extracted)
    except AllExtractionsFailed:
        logger.debug('No answer extracted for %s', problem_id)
        vote = None
    return EvalRecord(
        problem_id=problem_id, gold=gold, samples=samples,
        extracted=extracted, vote=vote)


def tally(records):
    return Tally(
        correct=sum(1 for record in records if record.correct),
        total=len(records))


def score(records):
    """
    Fraction of records whose vote equals the gold answer.

    :param records list: EvalRecord instances
    :returns: float in [0, 1]
    """
    records = list(records)
    if not records:
        raise EmptyInput('Nothing to score.')
    return tally(records).accuracy


def score_chunks(chunks):
    """
    Scores records handed over in chunks, merging per-chunk tallies.
    """
    total = Tally()
    for chunk in chunks:
        total = total + tally(chunk)
    return total.accuracy


def maj_sweep(predictions, gold, ns):
    """
    maj@k accuracy for each k in ``ns`` over sample prefixes.

    :param predictions list: (problem_id, samples) pairs
    :param gold dict: problem_id to NormalizedAnswer
    :param ns list: the k values
    :returns: dict of k to accuracy
    """
    results = {}
    for n in ns:
        records = [
            make_record(problem_id, gold[problem_id], samples, n)
            for problem_id, samples in predictions]
        results[n] = score(records)
    return results
