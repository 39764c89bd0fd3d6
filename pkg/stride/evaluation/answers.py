import re

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from stride.evaluation.exceptions import NoFinalAnswer, Unparseable


# Answers are compared as exact rationals, never as floats.

CURRENCY = re.compile(u'[$€£¥₹]')
NUMBER_WITH_UNITS = re.compile(
    r'^(?P<sign>[-+]?)\s*'
    r'(?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d{1,3})?)'
    r'(?:\s*/\s*(?P<denominator>\d+))?'
    r'\s*(?P<units>[^\d]*)$')
NUMBER_TOKEN = re.compile(
    r'-?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?(?:/\d+)?|-?\.\d+')
FINAL_MARKER = re.compile(r'####[ \t]*([^\n]*)')
ACTION_HEADER = re.compile(r'^\[ACTION:', re.MULTILINE)
SUMMARIZE_HEADER = '[ACTION: Summarize]'
# Upper bound on the digits read from one answer.
MAX_ANSWER_DIGITS = 3000


@dataclass(frozen=True)
class NormalizedAnswer:
    """
    An answer in canonical form: an integer string or a reduced
    ``numerator/denominator``.
    """
    canonical: str

    @property
    def value(self):
        return Fraction(self.canonical)

    @classmethod
    def from_fraction(cls, value):
        if value.denominator == 1:
            return cls(str(value.numerator))
        return cls('%d/%d' % (value.numerator, value.denominator))

    def __str__(self):
        return self.canonical


def normalize_answer(raw):
    """
    Normalizes a raw answer string: strips commas, currency symbols,
    trailing periods and unit words, reads decimals exactly and reduces
    fractions.

    :param raw str: the answer as written
    :returns: NormalizedAnswer
    """
    if isinstance(raw, NormalizedAnswer):
        return raw

    text = CURRENCY.sub('', str(raw)).replace(',', '').strip()
    match = NUMBER_WITH_UNITS.match(text)
    if match is None:
        raise Unparseable('Not a numeric answer: %r' % (raw,))

    digits = len(match.group('number')) + \
        len(match.group('denominator') or '')
    if digits > MAX_ANSWER_DIGITS:
        raise Unparseable('Answer has %s digits, at most %s allowed.' % (
            digits, MAX_ANSWER_DIGITS))

    try:
        value = Fraction(Decimal(match.group('number').rstrip('.')))
        if match.group('denominator') is not None:
            denominator = int(match.group('denominator'))
            if denominator == 0:
                raise Unparseable('Zero denominator: %r' % (raw,))
            value = value / denominator
        if match.group('sign') == '-':
            value = -value
        return NormalizedAnswer.from_fraction(value)
    except (InvalidOperation, ValueError, OverflowError):
        # includes numbers too long to render as digits
        raise Unparseable('Not a numeric answer: %r' % (text[:40],))


def answers_match(predicted, reference):
    """
    True when both answers normalize to the same rational.
    """
    if predicted is None or reference is None:
        return False
    try:
        return normalize_answer(predicted) == normalize_answer(reference)
    except Unparseable:
        return False


def number_tokens(text):
    """
    Number-like tokens of ``text`` in order of appearance. A minus sign
    glued to a preceding word or number is not read as a sign.
    """
    tokens = []
    for match in NUMBER_TOKEN.finditer(text):
        token = match.group(0)
        start = match.start()
        if token.startswith('-') and start > 0 and text[start - 1].isalnum():
            token = token[1:]
        tokens.append(token)
    return tokens


def summarize_block(text):
    """
    Content of the last Summarize block of a serialized trace, or None when
    ``text`` is not one.
    """
    lines = text.split('\n')
    starts = [i for i, line in enumerate(lines)
              if line.rstrip() == SUMMARIZE_HEADER]
    if not starts:
        return None
    block = []
    for line in lines[starts[-1] + 1:]:
        if ACTION_HEADER.match(line):
            break
        block.append(line)
    return '\n'.join(block)


def extract_final_answer(prediction):
    """
    Pulls the final answer out of a prediction: the last ``#### <value>``
    marker wins, otherwise the last number in the final Summarize block of
    a serialized trace, otherwise the last number in the text.

    :param prediction str: the model output
    :returns: NormalizedAnswer
    """
    text = prediction or ''
    markers = FINAL_MARKER.findall(text)
    if markers:
        marked = markers[-1].strip()
        try:
            return normalize_answer(marked)
        except Unparseable:
            tokens = number_tokens(marked)
            if tokens:
                return normalize_answer(tokens[-1])

    scope = summarize_block(text)
    if scope is None:
        scope = text
    tokens = number_tokens(scope)
    if not tokens:
        raise NoFinalAnswer('No numeric answer in prediction.')
    return normalize_answer(tokens[-1])
