import json
import os

from io import StringIO

from mock import patch

from stride import __version__, settings
from stride.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main, make_parser
from stride.codec.records import to_record
from stride.codec.tagged import parse_tagged
from stride.datagen.tests.base import (
    GARBAGE, DatagenTestCase, corrected_text, right_text, wrong_text)
from stride.statespace.tests.base import F, SP, S, V_FAIL, B, mk_trace


class CliTestCase(DatagenTestCase):

    def setUp(self):
        super(CliTestCase, self).setUp()
        patcher = patch.dict(os.environ)
        patcher.start()
        self.addCleanup(patcher.stop)
        os.environ.pop(settings.GENERATOR_CREDENTIAL_ENV, None)
        epoch = patch.object(settings, 'SOURCE_DATE_EPOCH', None)
        epoch.start()
        self.addCleanup(epoch.stop)

    def run_cli(self, *argv):
        stdout, stderr = StringIO(), StringIO()
        with patch('sys.stdout', stdout), patch('sys.stderr', stderr):
            code = main(list(argv))
        return code, stdout.getvalue(), stderr.getvalue()


class ValidateCommandTestCase(CliTestCase):

    def write_traces(self, *traces):
        return self.write_jsonl(
            'traces.jsonl', [to_record(trace) for trace in traces])

    def test_all_valid(self):
        path = self.write_traces(
            mk_trace(F, SP, S), mk_trace(F, SP, S), mk_trace(F, SP, S))
        code, out, _ = self.run_cli('validate', path)
        self.assertEqual(code, EXIT_OK)
        self.assertIn('trace 1: valid', out)
        self.assertTrue(out.endswith('3/3 valid\n'))

    def test_backtrack_under_stage_one(self):
        path = self.write_traces(
            mk_trace(F, SP, S), mk_trace(F, SP, V_FAIL, B(1), SP, S))
        code, out, _ = self.run_cli('validate', '--stage', '1', path)
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn('trace 2: invalid', out)
        self.assertIn('state 3 ACTION_NOT_IN_STAGE_SET', out)
        self.assertIn('1/2 valid', out)

        code, out, _ = self.run_cli('validate', path)
        self.assertEqual(code, EXIT_OK)

    def test_nested_key(self):
        path = self.write_jsonl('sft.jsonl', [{
            'problem_id': 'p1', 'question': 'q',
            'trace': to_record(mk_trace(F, SP, S))}])
        code, out, _ = self.run_cli('validate', '--key', 'trace', path)
        self.assertEqual(code, EXIT_OK)
        self.assertIn('1/1 valid', out)

    def test_too_long(self):
        path = self.write_traces(mk_trace(F, SP, S))
        code, out, _ = self.run_cli('validate', '--max-states', '3', path)
        self.assertEqual(code, EXIT_OK)
        code, out, _ = self.run_cli(
            'validate', '--max-states', '2', path)
        self.assertEqual(code, EXIT_USAGE)

    def test_missing_file(self):
        code, out, err = self.run_cli(
            'validate', self.path('missing.jsonl'))
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(out, '')
        self.assertIn('stride: error: Traces file', err)

    def test_schema_error(self):
        path = self.write_jsonl('traces.jsonl', [{'question': 'q'}])
        code, _, err = self.run_cli('validate', path)
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn('traces.jsonl:1', err)


class BuildCommandTestCase(CliTestCase):

    def setUp(self):
        super(BuildCommandTestCase, self).setUp()
        self.problems = self.write_jsonl('problems.jsonl', [
            {'id': 'p1', 'question': 'Q1', 'reference_answer': '5'},
            {'id': 'p2', 'question': 'Q2', 'reference_answer': '7'},
            {'id': 'p3', 'question': 'Q3', 'reference_answer': '9'},
        ])
        self.script = self.write_jsonl('script.jsonl', [
            {'problem_id': 'p1', 'responses': [right_text(5)]},
            {'problem_id': 'p2', 'responses': [
                wrong_text(7), wrong_text(7), GARBAGE, corrected_text(7)]},
            {'problem_id': 'p3', 'responses': [GARBAGE] * 3},
        ])

    def build(self, out_dir, *extra):
        return self.run_cli(
            'build', self.problems, '--mock', self.script,
            '--out-dir', self.path(out_dir), *extra)

    def test_mock_run(self):
        code, out, _ = self.build('out')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('right 1, pairs 1, failed 1, wrong 0', out)
        with open(self.path('out', 'manifest.json')) as f:
            manifest = json.load(f)
        self.assertEqual(manifest['generator'], 'scripted')
        self.assertEqual(manifest['created_at'], '1970-01-01T00:00:00Z')
        self.assertEqual(manifest['version'], __version__)
        self.assertEqual(manifest['dpo_beta'], settings.DPO_BETA)

    def test_rerun_identical(self):
        self.assertEqual(self.build('first')[0], EXIT_OK)
        self.assertEqual(self.build('second', '--parallelism', '1')[0],
                         EXIT_OK)
        for name in ('sft.jsonl', 'dpo.jsonl', 'manifest.json'):
            self.assertEqual(
                self.read_bytes('first', name),
                self.read_bytes('second', name))

    def test_output_validates(self):
        self.build('out')
        code, out, _ = self.run_cli(
            'validate', '--stage', '1', '--key', 'trace',
            self.path('out', 'sft.jsonl'))
        self.assertEqual(code, EXIT_OK)
        code, out, _ = self.run_cli(
            'validate', '--key', 'accepted', self.path('out', 'dpo.jsonl'))
        self.assertEqual(code, EXIT_OK)

    def test_beta_flag(self):
        self.build('out', '--beta', '0.25')
        with open(self.path('out', 'manifest.json')) as f:
            self.assertEqual(json.load(f)['dpo_beta'], 0.25)

    def test_harvest_predictions(self):
        trace = parse_tagged(wrong_text(9), 'Q3')
        predictions = self.write_jsonl('predictions.jsonl', [
            {'problem_id': 'p3', 'trace': to_record(trace)}])
        self.script = self.write_jsonl('script.jsonl', [
            {'problem_id': 'p1', 'responses': [right_text(5)]},
            {'problem_id': 'p2', 'responses': [right_text(7)]},
            {'problem_id': 'p3', 'responses': [GARBAGE] * 3 + [
                corrected_text(9)]},
        ])
        code, out, _ = self.build('out', '--predictions', predictions)
        self.assertEqual(code, EXIT_OK)
        self.assertIn('right 2, pairs 1, failed 0', out)
        with open(self.path('out', 'manifest.json')) as f:
            self.assertEqual(
                json.load(f)['stage2_sources'], {'model': 1})

    def test_no_credential(self):
        code, out, err = self.run_cli(
            'build', self.problems, '--out-dir', self.path('out'))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn(settings.GENERATOR_CREDENTIAL_ENV, err)
        self.assertFalse(os.path.exists(self.path('out')))

    def test_missing_problems(self):
        code, _, err = self.run_cli(
            'build', self.path('nope.jsonl'), '--mock', self.script,
            '--out-dir', self.path('out'))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn('Problems file', err)

    def test_out_dir_is_a_file(self):
        code, _, err = self.build('problems.jsonl')
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn('is not a directory', err)


class LossesCheckCommandTestCase(CliTestCase):

    def test_pass(self):
        code, out, _ = self.run_cli('losses-check')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('PASS dpo gradient vs finite differences', out)
        self.assertTrue(out.endswith('11/11 checks passed\n'))

    def test_fault_is_reported(self):
        with patch('stride.losses.objectives.sigmoid',
                   lambda x: 0.0 * x + 0.5):
            code, out, _ = self.run_cli('losses-check', '--seed', '3')
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn('FAIL dpo gradient vs finite differences', out)


class ScoreCommandTestCase(CliTestCase):

    def setUp(self):
        super(ScoreCommandTestCase, self).setUp()
        rows = []
        gold = []
        for n in range(5):
            first = '#### %s' % (n if n < 4 else 99,)
            rows.append({'problem_id': 'q%s' % (n,),
                         'samples': [first, '#### %s' % (n,), 'no idea']})
            gold.append({'problem_id': 'q%s' % (n,), 'answer': n})
        self.predictions = self.write_jsonl('mistral-7b.jsonl', rows)
        self.gold = self.write_jsonl('gold.jsonl', gold)

    def test_score(self):
        code, out, _ = self.run_cli('score', self.predictions, self.gold)
        self.assertEqual(code, EXIT_OK)
        self.assertIn('accuracy 80.00%', out)
        self.assertIn('80.52 (Mistral-7B)', out)

    def test_sweep_and_output(self):
        code, out, _ = self.run_cli(
            'score', self.predictions, self.gold, '--sweep', '1,2',
            '--run-name', 'mine', '--output', self.path('report.txt'))
        self.assertEqual(code, EXIT_OK)
        self.assertIn('maj@1 accuracy 80.00%', out)
        self.assertIn('maj@2 accuracy 80.00%', out)
        with open(self.path('report.txt')) as f:
            report = f.read()
        self.assertIn('mine maj@2', report)
        self.assertNotIn('Published', out)

    def test_not_enough_samples(self):
        code, _, err = self.run_cli(
            'score', self.predictions, self.gold, '-n', '4')
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn('maj@4', err)

    def test_schema_error(self):
        gold = self.write_jsonl('gold.jsonl', [{'problem_id': 'q0'}])
        code, _, _ = self.run_cli('score', self.predictions, gold)
        self.assertEqual(code, EXIT_USAGE)

    def test_empty(self):
        empty = self.write_jsonl('empty.jsonl', [])
        code, _, _ = self.run_cli('score', empty, self.gold)
        self.assertEqual(code, EXIT_FAILURE)


class ParserTestCase(CliTestCase):

    def test_version(self):
        stdout = StringIO()
        with patch('sys.stdout', stdout):
            with self.assertRaises(SystemExit) as cm:
                main(['--version'])
        self.assertEqual(cm.exception.code, 0)
        self.assertIn(__version__, stdout.getvalue())

    def test_bad_flag_exits_two(self):
        with patch('sys.stderr', StringIO()):
            with self.assertRaises(SystemExit) as cm:
                main(['validate', 'x', '--stage', '3'])
        self.assertEqual(cm.exception.code, 2)

    def test_mock_and_endpoint_exclusive(self):
        with patch('sys.stderr', StringIO()):
            self.assertRaises(SystemExit, make_parser().parse_args, [
                'build', 'p', '--out-dir', 'o', '--mock', 'm',
                '--endpoint-url', 'http://x'])

    def test_config_file(self):
        config = self.path('stride.ini')
        with open(config, 'w') as f:
            f.write('[rules]\nmax_states = 2\n')
        path = self.write_jsonl(
            'traces.jsonl', [to_record(mk_trace(F, SP, S))])
        code, _, err = self.run_cli('--config', config, 'validate', path)
        self.assertEqual(code, EXIT_USAGE)
        code, _, _ = self.run_cli(
            '--config', config, 'validate', '--max-states', '5', path)
        self.assertEqual(code, EXIT_OK)

    def test_missing_config(self):
        code, _, err = self.run_cli(
            '--config', self.path('nope.ini'), 'losses-check')
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn('Config file', err)
