from stride.evaluation.answers import (
    NormalizedAnswer, answers_match, extract_final_answer, normalize_answer)
from stride.evaluation.voting import (
    EvalRecord, Tally, maj_at_n, maj_sweep, make_record, score, score_chunks)
from stride.evaluation.reports import ReferenceTable, render_report

__all__ = [
    'NormalizedAnswer', 'answers_match', 'extract_final_answer',
    'normalize_answer', 'EvalRecord', 'Tally', 'maj_at_n', 'maj_sweep',
    'make_record', 'score', 'score_chunks', 'ReferenceTable',
    'render_report']
