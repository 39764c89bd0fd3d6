from dataclasses import dataclass
from typing import Optional, Tuple


GSM8K = 'GSM8K'
GSM_HARD = 'GSM-Hard'

MODELS = ('Mistral-7B', 'LLaMA3-8B', 'LLaMA3.1-8B', 'Phi3-mini-4k')
STATE_TRANSITION_METHOD = 'State-transition SFT+DPO (maj@1)'


@dataclass(frozen=True)
class ReferenceRow:
    benchmark: str
    method: str
    values: Tuple[Optional[float], ...]

    def value_for(self, model):
        return self.values[MODELS.index(model)]


# Published accuracies (percent) on the test splits. None marks a cell
# with no published number.
REFERENCE_ROWS = (
    ReferenceRow(GSM8K, '0-shot CoT', (17.89, 68.38, 76.60, 20.17)),
    ReferenceRow(GSM8K, '8-shot CoT', (36.46, 74.53, None, 83.45)),
    ReferenceRow(GSM8K, 'SFT', (68.16, 75.36, 79.45, 81.13)),
    ReferenceRow(GSM8K, 'MetaMathQA', (72.55, 79.08, 81.50, None)),
    ReferenceRow(GSM8K, 'SC(maj@128)', (57.25, 84.69, 88.93, 88.68)),
    ReferenceRow(GSM8K, 'R-STaR(maj@1)', (53.30, 83.85, None, 85.97)),
    ReferenceRow(GSM8K, 'R-STaR(maj@8)', (62.17, 86.05, None, 90.45)),
    ReferenceRow(GSM8K, 'LLaMA-Berry(maj@1)', (None, 68.40, 76.60, None)),
    ReferenceRow(GSM8K, 'LLaMA-Berry(maj@8)', (None, 86.40, 89.80, None)),
    ReferenceRow(
        GSM8K, STATE_TRANSITION_METHOD, (80.52, 86.81, 90.22, 90.52)),
    ReferenceRow(GSM_HARD, '0-shot CoT', (5.16, 14.94, None, 33.73)),
    ReferenceRow(GSM_HARD, '8-shot CoT', (13.57, 25.63, None, 40.63)),
    ReferenceRow(GSM_HARD, 'SC(maj@128)', (25.01, 31.16, None, 45.56)),
    ReferenceRow(GSM_HARD, 'R-STaR(maj@8)', (27.45, 30.93, None, 45.79)),
    ReferenceRow(GSM_HARD, 'LLaMA-Berry(maj@1)', (None, 14.90, 32.75, None)),
    ReferenceRow(GSM_HARD, 'LLaMA-Berry(maj@8)', (None, 30.20, 35.78, None)),
    ReferenceRow(
        GSM_HARD, STATE_TRANSITION_METHOD, (30.86, 31.01, 35.18, 48.52)),
)


@dataclass(frozen=True)
class ReferenceTable:
    rows: Tuple[ReferenceRow, ...] = REFERENCE_ROWS
    citation: str = (
        'published comparison of the state-transition reasoner against '
        'baselines on GSM8K and GSM-Hard; display only, not a reproduction '
        'target')

    def state_transition(self, benchmark, model):
        for row in self.rows:
            if row.benchmark == benchmark and \
                    row.method == STATE_TRANSITION_METHOD:
                return row.value_for(model)
        return None

    def best(self, benchmark, model):
        values = [
            row.value_for(model) for row in self.rows
            if row.benchmark == benchmark and
            row.value_for(model) is not None]
        return max(values) if values else None


def match_model(run_name):
    """
    The reference model a run name refers to, longest name first so that
    ``LLaMA3.1-8B`` is not mistaken for ``LLaMA3-8B``.
    """
    lowered = run_name.lower()
    for model in sorted(MODELS, key=len, reverse=True):
        if model.lower() in lowered:
            return model
    return None


def match_benchmark(run_name):
    lowered = run_name.lower().replace('_', '-')
    if 'gsm-hard' in lowered or 'gsmhard' in lowered:
        return GSM_HARD
    return GSM8K


def _percent(value):
    return '%.2f' % (value * 100,)


def _reference(value):
    return '--' if value is None else '%.2f' % (value,)


def render_report(results, refs=None, benchmark=None):
    """
    Renders measured accuracies beside the published reference numbers.
    No pass or fail judgement is made.

    :param results dict: run name to accuracy in [0, 1]
    :param refs ReferenceTable: the reference numbers
    :param benchmark str: force the benchmark instead of reading it from
        the run names
    :returns: str
    """
    refs = refs or ReferenceTable()
    lines = []

    if results:
        width = max(len('Run'), max(len(name) for name in results))
        lines.append('Measured runs')
        lines.append('%-*s  %-8s  %8s  %-26s' % (
            width, 'Run', 'Bench', 'Accuracy', 'Reference [ref]'))
        for name in sorted(results):
            bench = benchmark or match_benchmark(name)
            model = match_model(name)
            if model is None:
                reference = '--'
            else:
                reference = '%s (%s)' % (
                    _reference(refs.state_transition(bench, model)), model)
            lines.append('%-*s  %-8s  %8s  %-26s' % (
                width, name, bench, _percent(results[name]), reference))
        lines.append('')

    method_width = max(len(row.method) for row in refs.rows)
    lines.append('Published reference accuracies [ref], best marked *')
    lines.append('%-8s  %-*s  %s' % (
        'Bench', method_width, 'Method',
        '  '.join('%12s' % (model,) for model in MODELS)))
    for row in refs.rows:
        cells = []
        for model in MODELS:
            value = row.value_for(model)
            mark = '*' if value is not None and \
                value == refs.best(row.benchmark, model) else ' '
            cells.append('%11s%s' % (_reference(value), mark))
        lines.append('%-8s  %-*s  %s' % (
            row.benchmark, method_width, row.method, '  '.join(cells)))
    lines.append('')
    lines.append('[ref] %s.' % (refs.citation,))
    return '\n'.join(lines) + '\n'
