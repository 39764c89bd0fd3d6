import io
import re

from dataclasses import dataclass

from stride import settings
from stride.codec.tagged import serialize_tagged
from stride.datagen.exceptions import TemplateError
from stride.statespace.actions import (
    BACKTRACK, SOLVE_SUBQUES, VERIFY, describe_action_set)


PLACEHOLDERS = ('question', 'action_list', 'wrong_trace', 'reference_answer')
PLACEHOLDER = re.compile(r'\{(%s)\}' % ('|'.join(PLACEHOLDERS),))

HEADER_FORMS = {
    SOLVE_SUBQUES: '[ACTION: SolveSubques <k>]',
    VERIFY: '[ACTION: Verify -> PASS|FAIL]',
    BACKTRACK: '[ACTION: Backtrack -> <state index>]',
}


def format_action_list(allow_verify_backtrack):
    """
    The action list shown to the generator, one action per line with the
    header that opens its block.
    """
    return '\n'.join(
        '- %s: %s' % (HEADER_FORMS.get(kind, '[ACTION: %s]' % (kind,)),
                      definition)
        for kind, definition in describe_action_set(allow_verify_backtrack))


def load_template(path):
    try:
        with io.open(path, encoding='utf-8') as handle:
            return handle.read()
    except (IOError, OSError) as e:
        raise TemplateError('Cannot read prompt template %s: %s' % (path, e))


def render(template, **values):
    """
    Fills the known placeholders of ``template``. Other braces are left
    untouched so templates may contain literal ``{`` and ``}``.

    :param template str: the template text
    :returns: str
    """
    def replace(match):
        name = match.group(1)
        if name not in values:
            raise TemplateError('No value for placeholder {%s}' % (name,))
        return values[name]
    return PLACEHOLDER.sub(replace, template)


@dataclass(frozen=True)
class PromptSet:
    student: str
    teacher: str

    @classmethod
    def from_files(cls, student_path=settings.STUDENT_PROMPT_TEMPLATE,
                   teacher_path=settings.TEACHER_PROMPT_TEMPLATE):
        return cls(student=load_template(student_path),
                   teacher=load_template(teacher_path))

    def student_prompt(self, problem):
        """
        The Stage I prompt; its action list leaves out Verify and
        Backtrack.
        """
        return render(
            self.student,
            question=problem.question,
            action_list=format_action_list(False))

    def teacher_prompt(self, case):
        """
        The Stage II prompt for a wrong case, with the complete action list
        and the reference answer.
        """
        return render(
            self.teacher,
            question=case.problem.question,
            action_list=format_action_list(True),
            wrong_trace=serialize_tagged(case.trace),
            reference_answer=case.problem.reference_answer)
