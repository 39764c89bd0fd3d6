import argparse
import logging
import os
import sys

from dataclasses import replace

from stride import __version__
from stride.codec.exceptions import CodecError
from stride.codec.records import read_records
from stride.config import load_config
from stride.datagen.builders import ConstructionBuilder, harvest_model_errors
from stride.datagen.datasets import (
    emit_datasets, load_model_predictions, load_problems, manifest_timestamp)
from stride.datagen.exceptions import DatagenError
from stride.datagen.managers import ChatCompletionManager, ScriptedGenerator
from stride.datagen.models import GeneratorConfig
from stride.datagen.prompts import PromptSet
from stride.evaluation.datasets import (
    build_records, load_gold, load_predictions)
from stride.evaluation.exceptions import (
    EmptyInput, EvalSchemaError, InsufficientSamples)
from stride.evaluation.reports import GSM8K, GSM_HARD, render_report
from stride.evaluation.voting import maj_sweep, score
from stride.exceptions import ConfigError
from stride.log import configure_logging
from stride.losses.checks import run_checks
from stride.losses.exceptions import LossError
from stride.statespace.exceptions import StateSpaceError
from stride.statespace.models import TransitionRules
from stride.statespace.workflows import validate


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError('%r is not an integer' % (value,))
    if number < 1:
        raise argparse.ArgumentTypeError('%r is not positive' % (value,))
    return number


def positive_float(value):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError('%r is not a number' % (value,))
    if not number > 0:
        raise argparse.ArgumentTypeError('%r is not positive' % (value,))
    return number


def int_list(value):
    return [positive_int(part) for part in value.split(',') if part.strip()]


def require_file(path, what):
    if path is not None and not os.path.isfile(path):
        raise UsageError('%s %s does not exist' % (what, path))


def out(line=''):
    sys.stdout.write('%s\n' % (line,))


def rules_for(config, stage):
    return TransitionRules(
        allow_verify_backtrack=stage == 2,
        max_subquestions=config.max_subquestions,
        max_states=config.max_states)


def cmd_validate(args, config):
    require_file(args.traces, 'Traces file')
    rules = rules_for(config, args.stage)
    traces = read_records(args.traces, key=args.key)

    valid = 0
    for number, trace in enumerate(traces, start=1):
        verdict = validate(trace, rules)
        if verdict.valid:
            valid += 1
            out('trace %s: valid' % (number,))
            continue
        out('trace %s: invalid' % (number,))
        for violation in verdict.violations:
            out('  state %s %s: %s' % (
                violation.state_index, violation.rule_code,
                violation.message))
    out('%s/%s valid' % (valid, len(traces)))
    return EXIT_OK if valid == len(traces) else EXIT_FAILURE


def make_generator(args, generator_config):
    if args.mock:
        return ScriptedGenerator.from_file(args.mock)
    return ChatCompletionManager(replace(
        generator_config, credential=GeneratorConfig.credential_from_env()))


def cmd_build(args, config):
    require_file(args.problems, 'Problems file')
    require_file(args.mock, 'Mock script')
    require_file(args.predictions, 'Predictions file')
    require_file(config.student_template, 'Student prompt template')
    require_file(config.teacher_template, 'Teacher prompt template')
    if os.path.exists(args.out_dir) and not os.path.isdir(args.out_dir):
        raise UsageError('%s is not a directory' % (args.out_dir,))

    generator_config = GeneratorConfig(
        endpoint_url=config.endpoint_url,
        model_name=config.model_name,
        temperature=config.temperature,
        max_retries=config.max_retries,
        parallelism=config.parallelism,
        timeout=config.timeout)
    prompts = PromptSet.from_files(
        config.student_template, config.teacher_template)
    problems = load_problems(args.problems)
    harvested = []
    if args.predictions:
        harvested = harvest_model_errors(
            load_model_predictions(args.predictions, problems),
            rules_for(config, 1))
    generator = make_generator(args, generator_config)

    builder = ConstructionBuilder(
        generator, config=generator_config, prompts=prompts,
        stage_one_rules=rules_for(config, 1),
        full_rules=rules_for(config, 2))
    cases = builder.build(problems, harvested)
    manifest = emit_datasets(
        cases, args.out_dir, generator=generator.name,
        created_at=manifest_timestamp(mock=bool(args.mock)),
        dpo_beta=config.dpo_beta)

    out('right %s, pairs %s, failed %s, wrong %s' % (
        manifest.right_count, manifest.pair_count, manifest.failed_count,
        manifest.wrong_count))
    out('wrote %s' % (args.out_dir,))
    return EXIT_OK


def cmd_losses_check(args, config):
    results = run_checks(seed=args.seed)
    for result in results:
        out(str(result))
    failed = [result for result in results if not result.passed]
    out('%s/%s checks passed' % (len(results) - len(failed), len(results)))
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_score(args, config):
    require_file(args.predictions, 'Predictions file')
    require_file(args.gold, 'Gold file')
    predictions = load_predictions(args.predictions)
    gold = load_gold(args.gold)
    run_name = args.run_name or os.path.splitext(
        os.path.basename(args.predictions))[0]

    results = {}
    try:
        accuracy = score(build_records(predictions, gold, args.n))
        out('accuracy %.2f%%' % (accuracy * 100,))
        results[run_name] = accuracy
        if args.sweep:
            for k, value in sorted(maj_sweep(
                    predictions, gold, args.sweep).items()):
                out('maj@%s accuracy %.2f%%' % (k, value * 100))
                results['%s maj@%s' % (run_name, k)] = value
    except (InsufficientSamples, EmptyInput) as e:
        sys.stderr.write('stride: %s\n' % (e,))
        return EXIT_FAILURE

    report = render_report(results, benchmark=args.benchmark)
    if args.output:
        with open(args.output, 'w', encoding='utf-8', newline='\n') as f:
            f.write(report)
    else:
        out()
        sys.stdout.write(report)
    return EXIT_OK


def make_parser():
    parser = argparse.ArgumentParser(
        prog='stride',
        description='State-transition reasoning traces: validation, '
                    'dataset construction, loss checks and scoring.')
    parser.add_argument(
        '--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('--config', help='INI config file')
    parser.add_argument(
        '-v', '--verbose', action='store_true', help='debug logging')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    validate_parser = subparsers.add_parser(
        'validate', help='validate traces against the transition rules')
    validate_parser.add_argument('traces', help='JSONL of trace records')
    validate_parser.add_argument(
        '--stage', type=int, choices=(1, 2), default=2,
        help='1 leaves out Verify and Backtrack (default: 2)')
    validate_parser.add_argument(
        '--key', help='read the trace record nested under this field')
    validate_parser.add_argument('--max-states', type=positive_int)
    validate_parser.add_argument('--max-subquestions', type=positive_int)
    validate_parser.set_defaults(func=cmd_validate)

    build_parser = subparsers.add_parser(
        'build', help='run both construction stages and emit datasets')
    build_parser.add_argument('problems', help='JSONL of problems')
    build_parser.add_argument('--out-dir', required=True)
    source = build_parser.add_mutually_exclusive_group()
    source.add_argument('--mock', help='scripted generator responses')
    source.add_argument('--endpoint-url')
    build_parser.add_argument('--model-name')
    build_parser.add_argument('--temperature', type=float)
    build_parser.add_argument('--max-retries', type=positive_int)
    build_parser.add_argument('--parallelism', type=positive_int)
    build_parser.add_argument('--timeout', type=positive_int)
    build_parser.add_argument('--max-states', type=positive_int)
    build_parser.add_argument('--max-subquestions', type=positive_int)
    build_parser.add_argument('--beta', type=positive_float)
    build_parser.add_argument(
        '--predictions',
        help='JSONL of model predictions {problem_id, trace} to harvest '
             'errors from')
    build_parser.set_defaults(func=cmd_build)

    losses_parser = subparsers.add_parser(
        'losses-check', help='run the loss self-checks')
    losses_parser.add_argument('--seed', type=int, default=0)
    losses_parser.set_defaults(func=cmd_losses_check)

    score_parser = subparsers.add_parser(
        'score', help='maj@n accuracy and reference report')
    score_parser.add_argument('predictions')
    score_parser.add_argument('gold')
    score_parser.add_argument('-n', type=positive_int, default=1)
    score_parser.add_argument(
        '--sweep', type=int_list, help='also report maj@k, e.g. 1,8')
    score_parser.add_argument(
        '--benchmark', choices=(GSM8K, GSM_HARD),
        help='default: read from the run name')
    score_parser.add_argument('--run-name')
    score_parser.add_argument('--output', help='write the report here')
    score_parser.set_defaults(func=cmd_score)
    return parser


def flag_overrides(args):
    return dict(
        endpoint_url=getattr(args, 'endpoint_url', None),
        model_name=getattr(args, 'model_name', None),
        temperature=getattr(args, 'temperature', None),
        max_retries=getattr(args, 'max_retries', None),
        parallelism=getattr(args, 'parallelism', None),
        timeout=getattr(args, 'timeout', None),
        max_states=getattr(args, 'max_states', None),
        max_subquestions=getattr(args, 'max_subquestions', None),
        dpo_beta=getattr(args, 'beta', None))


def main(argv=None):
    args = make_parser().parse_args(argv)
    configure_logging(args.verbose)

    try:
        require_file(args.config, 'Config file')
        config = load_config(args.config).override(**flag_overrides(args))
        logger.info('stride %s started', args.command)
        code = args.func(args, config)
    except (UsageError, ConfigError, DatagenError, CodecError,
            EvalSchemaError, StateSpaceError, LossError,
            IOError, OSError) as e:
        sys.stderr.write('stride: error: %s\n' % (e,))
        logger.debug('%s failed', args.command, exc_info=True)
        return EXIT_USAGE
    logger.info('stride %s finished with exit code %s', args.command, code)
    return code
