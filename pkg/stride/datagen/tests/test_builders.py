from mock import patch

from stride.codec.tagged import parse_tagged
from stride.datagen import models
from stride.datagen.builders import (
    ConstructionBuilder, harvest_model_errors, judge, merge_wrong_cases,
    run_stage1, run_stage2)
from stride.datagen.exceptions import TransportError
from stride.datagen.managers import ScriptedGenerator
from stride.datagen.models import ConstructionCase
from stride.datagen.tests.base import (
    GARBAGE, DatagenTestCase, corrected_text, right_text, verified_text,
    wrong_text)
from stride.statespace.models import TransitionRules


STAGE_ONE = TransitionRules.stage_one()
FULL = TransitionRules.full()


class JudgeTestCase(DatagenTestCase):

    def test_right(self):
        attempt = judge(right_text(5), self.mk_problem(), STAGE_ONE)
        self.assertTrue(attempt.accepted)
        self.assertEqual(attempt.extracted_answer, '5')

    def test_wrong_answer(self):
        attempt = judge(wrong_text(5), self.mk_problem(), STAGE_ONE)
        self.assertTrue(attempt.parsed)
        self.assertTrue(attempt.verdict.valid)
        self.assertFalse(attempt.correct)
        self.assertFalse(attempt.accepted)

    def test_illegal_action(self):
        attempt = judge(verified_text(5), self.mk_problem(), STAGE_ONE)
        self.assertTrue(attempt.correct)
        self.assertFalse(attempt.verdict.valid)
        self.assertFalse(attempt.accepted)
        self.assertTrue(judge(
            verified_text(5), self.mk_problem(), FULL).accepted)

    def test_unparseable(self):
        attempt = judge(GARBAGE, self.mk_problem(), STAGE_ONE)
        self.assertFalse(attempt.parsed)
        self.assertIsNone(attempt.verdict)
        self.assertIn('no action header', attempt.error)

    def test_equivalent_answer_forms(self):
        problem = self.mk_problem(answer='1/2')
        self.assertTrue(judge(right_text('0.5'), problem, STAGE_ONE).correct)

    def test_oversized_answer_is_wrong(self):
        attempt = judge(
            right_text('9' * 5000), self.mk_problem(), STAGE_ONE)
        self.assertTrue(attempt.parsed)
        self.assertTrue(attempt.verdict.valid)
        self.assertFalse(attempt.correct)


class StageOneTestCase(DatagenTestCase):

    def test_right_case(self):
        builder, generator = self.mk_builder({'p1': [right_text(5)]})
        [case] = builder.run_stage1([self.mk_problem()])
        self.assertEqual(case.outcome, models.RIGHT_CASE)
        self.assertEqual(case.stage, models.STAGE_ONE)
        self.assertEqual(len(case.attempts), 1)
        self.assertEqual(case.trace.final_answer, '5')
        [(problem_id, prompt)] = generator.prompts
        self.assertEqual(problem_id, 'p1')
        self.assertNotIn('Verify', prompt)

    def test_right_after_retries(self):
        builder, _ = self.mk_builder(
            {'p1': [GARBAGE, wrong_text(5), right_text(5)]})
        [case] = builder.run_stage1([self.mk_problem()])
        self.assertEqual(case.outcome, models.RIGHT_CASE)
        self.assertEqual(len(case.attempts), 3)

    def test_verify_makes_wrong_case(self):
        builder, _ = self.mk_builder({'p1': [verified_text(5)] * 3})
        [case] = builder.run_stage1([self.mk_problem()])
        self.assertEqual(case.outcome, models.WRONG_CASE)
        self.assertEqual(len(case.attempts), 3)

    def test_wrong_case_keeps_last_parsed_trace(self):
        builder, _ = self.mk_builder(
            {'p1': [wrong_text(5), right_text(7, total='y'), GARBAGE]})
        [case] = builder.run_stage1([self.mk_problem()])
        self.assertEqual(case.outcome, models.WRONG_CASE)
        self.assertEqual(case.trace.final_answer, '7')

    def test_unparseable_fails(self):
        builder, _ = self.mk_builder({'p1': [GARBAGE] * 3})
        [case] = builder.run_stage1([self.mk_problem()])
        self.assertEqual(case.outcome, models.FAILED)
        self.assertEqual(case.cause, 'no parseable attempt')
        self.assertIsNone(case.trace)

    def test_transport_failure_fails(self):
        builder, generator = self.mk_builder({})
        with patch.object(generator, 'complete', side_effect=[
                wrong_text(5), TransportError('connection reset')]):
            [case] = builder.run_stage1([self.mk_problem()])
        self.assertEqual(case.outcome, models.FAILED)
        self.assertEqual(case.cause, 'transport: connection reset')
        self.assertEqual(len(case.attempts), 1)

    def test_short_script_ends_attempts(self):
        builder, _ = self.mk_builder({'p1': [wrong_text(5)]})
        [case] = builder.run_stage1([self.mk_problem()])
        self.assertEqual(case.outcome, models.WRONG_CASE)
        self.assertEqual(len(case.attempts), 1)
        self.assertEqual(case.trace.final_answer, '6')

    def test_empty_script_fails(self):
        builder, _ = self.mk_builder({})
        [case] = builder.run_stage1([self.mk_problem()])
        self.assertEqual(case.outcome, models.FAILED)
        self.assertTrue(case.cause.startswith('script exhausted: '))
        self.assertEqual(case.attempts, ())

    def test_order_preserved(self):
        problems = [self.mk_problem('p%s' % (n,), str(n)) for n in range(9)]
        builder, _ = self.mk_builder(dict(
            ('p%s' % (n,), [right_text(n)]) for n in range(9)),
            parallelism=4)
        cases = builder.run_stage1(problems)
        self.assertEqual(
            [case.problem.id for case in cases],
            [problem.id for problem in problems])

    def test_empty(self):
        builder, _ = self.mk_builder({})
        self.assertEqual(builder.run_stage1([]), [])

    def test_refuses_full_rules(self):
        builder = ConstructionBuilder(
            ScriptedGenerator({}), config=self.mk_config(),
            stage_one_rules=FULL)
        self.assertRaises(ValueError, builder.run_stage1, [])

    def test_module_function(self):
        [case] = run_stage1(
            [self.mk_problem()], ScriptedGenerator({'p1': [right_text(5)]}),
            STAGE_ONE, config=self.mk_config())
        self.assertEqual(case.outcome, models.RIGHT_CASE)


class StageTwoTestCase(DatagenTestCase):

    def mk_wrong_case(self, problem=None):
        problem = problem or self.mk_problem()
        return ConstructionCase(
            problem=problem, stage=models.STAGE_ONE,
            outcome=models.WRONG_CASE,
            trace=parse_tagged(wrong_text(5), problem.question))

    def test_corrected(self):
        wrong = self.mk_wrong_case()
        builder, generator = self.mk_builder({'p1': [corrected_text(5)]})
        [case] = builder.run_stage2([wrong])
        self.assertEqual(case.outcome, models.CORRECTED)
        self.assertEqual(case.stage, models.STAGE_TWO)
        self.assertEqual(case.pair.rejected, wrong.trace)
        self.assertEqual(case.pair.accepted.final_answer, '5')
        self.assertEqual(case.pair.question, wrong.problem.question)
        self.assertEqual(case.source, models.SOURCE_GENERATOR)
        [(_, prompt)] = generator.prompts
        self.assertIn('#### 6', prompt)
        self.assertIn('Backtrack', prompt)

    def test_illegal_order_is_retried(self):
        illegal = (
            '[ACTION: Formalize]\n'
            'Let x be the total.\n'
            '[ACTION: Verify -> PASS]\n'
            'Looks fine.\n'
            '[ACTION: SolveParent]\n'
            'x = 5\n'
            '[ACTION: Summarize]\n'
            '#### 5')
        builder, _ = self.mk_builder(
            {'p1': [illegal, corrected_text(5)]})
        [case] = builder.run_stage2([self.mk_wrong_case()])
        self.assertEqual(case.outcome, models.CORRECTED)
        self.assertEqual(len(case.attempts), 2)
        first = case.attempts[0]
        self.assertTrue(first.correct)
        self.assertFalse(first.verdict.valid)
        self.assertEqual(case.pair.accepted, case.attempts[1].trace)

    def test_still_wrong_fails(self):
        builder, _ = self.mk_builder({'p1': [wrong_text(5)] * 3})
        [case] = builder.run_stage2([self.mk_wrong_case()])
        self.assertEqual(case.outcome, models.FAILED)
        self.assertEqual(case.cause, 'no accepted correction')
        self.assertIsNone(case.pair)

    def test_only_wrong_cases(self):
        builder, _ = self.mk_builder({})
        right = ConstructionCase(
            problem=self.mk_problem(), stage=models.STAGE_ONE,
            outcome=models.RIGHT_CASE,
            trace=parse_tagged(right_text(5), 'q'))
        self.assertRaises(ValueError, builder.run_stage2, [right])

    def test_module_function(self):
        [case] = run_stage2(
            [self.mk_wrong_case()],
            ScriptedGenerator({'p1': [corrected_text(5)]}), FULL,
            config=self.mk_config())
        self.assertEqual(case.outcome, models.CORRECTED)


class HarvestTestCase(DatagenTestCase):

    def test_harvest(self):
        right = self.mk_problem('p1', '5')
        wrong = self.mk_problem('p2', '5')
        invalid = self.mk_problem('p3', '5')
        cases = harvest_model_errors([
            (right, parse_tagged(right_text(5), right.question)),
            (wrong, parse_tagged(wrong_text(5), wrong.question)),
            (invalid, parse_tagged(verified_text(5), invalid.question)),
        ])
        self.assertEqual([case.problem.id for case in cases], ['p2', 'p3'])
        for case in cases:
            self.assertEqual(case.outcome, models.WRONG_CASE)
            self.assertEqual(case.source, models.SOURCE_MODEL)

    def test_harvest_under_full_rules(self):
        problem = self.mk_problem()
        self.assertEqual(harvest_model_errors(
            [(problem, parse_tagged(verified_text(5), problem.question))],
            FULL), [])

    def test_merge(self):
        p1, p2, p3 = [self.mk_problem('p%s' % (n,)) for n in (1, 2, 3)]
        stage_one = [
            ConstructionCase(
                problem=p1, stage=models.STAGE_ONE,
                outcome=models.RIGHT_CASE,
                trace=parse_tagged(right_text(5), 'q')),
            ConstructionCase(
                problem=p2, stage=models.STAGE_ONE,
                outcome=models.WRONG_CASE,
                trace=parse_tagged(wrong_text(5), 'q')),
            ConstructionCase(
                problem=p3, stage=models.STAGE_ONE, outcome=models.FAILED),
        ]
        harvested = harvest_model_errors([
            (p1, parse_tagged(wrong_text(5), 'q')),
            (p2, parse_tagged(wrong_text(5), 'q')),
            (p3, parse_tagged(wrong_text(5), 'q')),
        ])
        merged = merge_wrong_cases(stage_one, harvested)
        self.assertEqual(
            [(case.problem.id, case.source) for case in merged],
            [('p2', models.SOURCE_GENERATOR), ('p3', models.SOURCE_MODEL)])

    def test_build_with_harvest(self):
        solved = self.mk_problem('p1')
        harvested = harvest_model_errors([
            (self.mk_problem('p9'), parse_tagged(wrong_text(5), 'q'))])
        builder, _ = self.mk_builder({
            'p1': [right_text(5)], 'p9': [corrected_text(5)]})
        cases = builder.build([solved], harvested)
        self.assertEqual(
            [(case.problem.id, case.outcome, case.source) for case in cases],
            [('p1', models.RIGHT_CASE, models.SOURCE_GENERATOR),
             ('p9', models.CORRECTED, models.SOURCE_MODEL)])
