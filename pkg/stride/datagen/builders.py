import logging

from concurrent.futures import ThreadPoolExecutor

from stride.codec.exceptions import CodecError
from stride.codec.tagged import parse_tagged, serialize_tagged
from stride.datagen import models
from stride.datagen.exceptions import ScriptExhausted, TransportError
from stride.datagen.models import (
    Attempt, ConstructionCase, GeneratorConfig, PreferencePair)
from stride.datagen.prompts import PromptSet
from stride.evaluation.answers import answers_match
from stride.statespace.models import TransitionRules
from stride.statespace.workflows import validate


logger = logging.getLogger(__name__)


def judge(raw_text, problem, rules):
    """
    Parses, validates and answer-checks one generator response.

    :returns: Attempt
    """
    try:
        trace = parse_tagged(raw_text, problem.question)
    except CodecError as e:
        return Attempt(raw_text=raw_text, error=str(e))
    verdict = validate(trace, rules)
    return Attempt(
        raw_text=raw_text, trace=trace, verdict=verdict,
        extracted_answer=trace.final_answer,
        correct=answers_match(trace.final_answer, problem.reference_answer))


class ConstructionBuilder(object):
    """
    Runs the two data-construction stages against one generator.

    Stage I prompts the generator as a student without Verify and
    Backtrack; Stage II has it correct the wrong cases as a teacher with
    the complete action list.
    """

    def __init__(self, generator, config=None, prompts=None,
                 stage_one_rules=None, full_rules=None):
        self.generator = generator
        self.config = config or GeneratorConfig()
        self.prompts = prompts or PromptSet.from_files()
        self.stage_one_rules = stage_one_rules or TransitionRules.stage_one()
        self.full_rules = full_rules or TransitionRules.full()

    def _map(self, fn, items):
        items = list(items)
        if not items:
            return []
        with ThreadPoolExecutor(
                max_workers=min(self.config.parallelism, len(items))) as ex:
            return list(ex.map(fn, items))

    def _attempts(self, problem, prompt, rules):
        """
        Up to max_retries independent attempts; stops at the first
        accepted one. A transport failure ends the run; running out of
        scripted responses only ends the attempts.

        :returns: (list of Attempt, cause or None)
        """
        attempts = []
        for number in range(1, self.config.max_retries + 1):
            try:
                raw_text = self.generator.complete(
                    prompt, problem_id=problem.id)
            except TransportError as e:
                logger.warning('Generator failed on %s: %s', problem.id, e)
                return attempts, 'transport: %s' % (e,)
            except ScriptExhausted as e:
                if not attempts:
                    return attempts, 'script exhausted: %s' % (e,)
                logger.debug(
                    'Script for %s ran out after %s attempts', problem.id,
                    len(attempts))
                break
            attempt = judge(raw_text, problem, rules)
            attempts.append(attempt)
            logger.debug(
                '%s attempt %s: parsed=%s valid=%s correct=%s', problem.id,
                number, attempt.parsed,
                attempt.verdict is not None and attempt.verdict.valid,
                attempt.correct)
            if attempt.accepted:
                break
        return attempts, None

    def build_stage_one_case(self, problem):
        attempts, cause = self._attempts(
            problem, self.prompts.student_prompt(problem),
            self.stage_one_rules)

        if attempts and attempts[-1].accepted:
            return ConstructionCase(
                problem=problem, stage=models.STAGE_ONE,
                outcome=models.RIGHT_CASE, attempts=tuple(attempts),
                trace=attempts[-1].trace)

        parsed = [attempt for attempt in attempts if attempt.parsed]
        if cause is None and parsed:
            return ConstructionCase(
                problem=problem, stage=models.STAGE_ONE,
                outcome=models.WRONG_CASE, attempts=tuple(attempts),
                trace=parsed[-1].trace)
        return ConstructionCase(
            problem=problem, stage=models.STAGE_ONE, outcome=models.FAILED,
            attempts=tuple(attempts),
            cause=cause or 'no parseable attempt')

    def build_stage_two_case(self, case):
        problem = case.problem
        attempts, cause = self._attempts(
            problem, self.prompts.teacher_prompt(case), self.full_rules)

        if attempts and attempts[-1].accepted:
            pair = PreferencePair(
                question=problem.question,
                accepted=attempts[-1].trace,
                rejected=case.trace)
            return ConstructionCase(
                problem=problem, stage=models.STAGE_TWO,
                outcome=models.CORRECTED, attempts=tuple(attempts),
                pair=pair, source=case.source)
        return ConstructionCase(
            problem=problem, stage=models.STAGE_TWO, outcome=models.FAILED,
            attempts=tuple(attempts),
            cause=cause or 'no accepted correction', source=case.source)

    def run_stage1(self, problems):
        if self.stage_one_rules.allow_verify_backtrack:
            raise ValueError('Stage I runs under the restricted action set.')
        cases = self._map(self.build_stage_one_case, problems)
        logger.info(
            'Stage I: %s right, %s wrong, %s failed of %s problems',
            _count(cases, models.RIGHT_CASE), _count(cases, models.WRONG_CASE),
            _count(cases, models.FAILED), len(cases))
        return cases

    def run_stage2(self, wrong_cases):
        wrong_cases = list(wrong_cases)
        for case in wrong_cases:
            if case.outcome != models.WRONG_CASE:
                raise ValueError(
                    'Stage II takes wrong cases, %s is %s' % (
                        case.problem.id, case.outcome))
        if not self.full_rules.allow_verify_backtrack:
            raise ValueError('Stage II runs under the complete action set.')
        cases = self._map(self.build_stage_two_case, wrong_cases)
        logger.info(
            'Stage II: %s corrected, %s failed of %s wrong cases',
            _count(cases, models.CORRECTED), _count(cases, models.FAILED),
            len(cases))
        return cases

    def build(self, problems, harvested=()):
        """
        Runs Stage I, then Stage II over its wrong cases and any harvested
        model errors.

        :param problems list: ProblemInstance
        :param harvested list: ConstructionCase from harvest_model_errors
        :returns: list of ConstructionCase, one per problem in input order
        """
        problems = list(problems)
        stage_one = self.run_stage1(problems)
        wrong = merge_wrong_cases(stage_one, harvested)
        stage_two = self.run_stage2(wrong)
        by_id = dict((case.problem.id, case) for case in stage_two)
        known = set(problem.id for problem in problems)
        return [by_id.get(case.problem.id, case) for case in stage_one] + [
            case for case in stage_two if case.problem.id not in known]


def _count(cases, outcome):
    return sum(1 for case in cases if case.outcome == outcome)


def run_stage1(problems, gen, rules, config=None, prompts=None):
    return ConstructionBuilder(
        gen, config=config, prompts=prompts,
        stage_one_rules=rules).run_stage1(problems)


def run_stage2(wrong_cases, gen, rules, config=None, prompts=None):
    return ConstructionBuilder(
        gen, config=config, prompts=prompts,
        full_rules=rules).run_stage2(wrong_cases)


def harvest_model_errors(predictions, rules=None):
    """
    Keeps the predictions that are wrong or invalid and wraps them as
    Stage II inputs.

    :param predictions list: (ProblemInstance, Trace) tuples
    :param rules TransitionRules: defaults to the Stage I rules
    :returns: list of ConstructionCase
    """
    rules = rules or TransitionRules.stage_one()
    predictions = list(predictions)
    cases = []
    for problem, trace in predictions:
        verdict = validate(trace, rules)
        correct = answers_match(trace.final_answer, problem.reference_answer)
        if verdict.valid and correct:
            continue
        attempt = Attempt(
            raw_text=serialize_tagged(trace), trace=trace, verdict=verdict,
            extracted_answer=trace.final_answer, correct=correct)
        cases.append(ConstructionCase(
            problem=problem, stage=models.STAGE_TWO,
            outcome=models.WRONG_CASE, attempts=(attempt,), trace=trace,
            source=models.SOURCE_MODEL))
    logger.info('Harvested %s model errors from %s predictions',
                len(cases), len(predictions))
    return cases


def merge_wrong_cases(stage1_cases, harvested):
    """
    The Stage II inputs: Stage I wrong cases followed by harvested model
    errors, without problems already solved in Stage I and keeping the
    first case per problem.
    """
    stage1_cases = list(stage1_cases)
    solved = set(
        case.problem.id for case in stage1_cases
        if case.outcome == models.RIGHT_CASE)
    merged = []
    seen = set()
    for case in stage1_cases + list(harvested):
        if case.outcome != models.WRONG_CASE:
            continue
        if case.problem.id in solved or case.problem.id in seen:
            continue
        seen.add(case.problem.id)
        merged.append(case)
    return merged
