from stride.codec.tagged import parse_tagged
from stride.datagen import models
from stride.datagen.exceptions import TemplateError
from stride.datagen.models import ConstructionCase
from stride.datagen.prompts import (
    PromptSet, format_action_list, load_template, render)
from stride.datagen.tests.base import DatagenTestCase, wrong_text


class PromptTestCase(DatagenTestCase):

    def setUp(self):
        super(PromptTestCase, self).setUp()
        self.prompts = PromptSet.from_files()
        self.problem = self.mk_problem(
            question='Ann has 2 pens and buys 3. How many pens?')

    def test_student_prompt(self):
        prompt = self.prompts.student_prompt(self.problem)
        self.assertIn('Ann has 2 pens and buys 3. How many pens?', prompt)
        self.assertIn('[ACTION: Formalize]', prompt)
        self.assertIn('[ACTION: SolveSubques <k>]', prompt)
        self.assertNotIn('Verify', prompt)
        self.assertNotIn('Backtrack', prompt)
        self.assertNotIn('{', prompt)

    def test_teacher_prompt(self):
        case = ConstructionCase(
            problem=self.problem, stage=models.STAGE_ONE,
            outcome=models.WRONG_CASE,
            trace=parse_tagged(wrong_text(5), self.problem.question))
        prompt = self.prompts.teacher_prompt(case)
        self.assertIn('[ACTION: Verify -> PASS|FAIL]', prompt)
        self.assertIn('[ACTION: Backtrack -> <state index>]', prompt)
        self.assertIn('The reference answer is 5.', prompt)
        self.assertIn('#### 6', prompt)
        self.assertIn('Ann has 2 pens', prompt)

    def test_action_list(self):
        self.assertEqual(len(format_action_list(False).split('\n')), 5)
        self.assertEqual(len(format_action_list(True).split('\n')), 7)

    def test_render(self):
        self.assertEqual(
            render('{question} {literal}', question='Q'), 'Q {literal}')
        self.assertRaises(TemplateError, render, '{question}')

    def test_missing_template(self):
        self.assertRaises(
            TemplateError, load_template, self.path('missing.txt'))
        self.assertRaises(
            TemplateError, PromptSet.from_files,
            self.path('missing.txt'), self.path('missing.txt'))
