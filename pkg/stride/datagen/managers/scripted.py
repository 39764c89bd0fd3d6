import logging
import threading

from stride.codec.records import iter_jsonl
from stride.codec.exceptions import CodecError
from stride.datagen.exceptions import DatasetIoError, ScriptExhausted
from stride.datagen.managers.base import GeneratorClient


logger = logging.getLogger(__name__)


def load_script(path):
    """
    Reads a mock script: JSONL lines of ``{problem_id, responses: [str]}``.

    :returns: dict of problem_id to list of responses
    """
    script = {}
    try:
        for line_no, data in iter_jsonl(path):
            if not isinstance(data, dict) or \
                    set(data) != set(['problem_id', 'responses']):
                raise DatasetIoError(
                    '%s:%s: expected {problem_id, responses}' % (
                        path, line_no))
            responses = data['responses']
            if not isinstance(responses, list) or \
                    not all(isinstance(r, str) for r in responses):
                raise DatasetIoError(
                    '%s:%s: responses must be a list of strings' % (
                        path, line_no))
            script.setdefault(data['problem_id'], []).extend(responses)
    except (IOError, OSError, CodecError) as e:
        raise DatasetIoError('Cannot read mock script %s: %s' % (path, e))
    return script


class ScriptedGenerator(GeneratorClient):
    """
    Replays canned responses per problem, in order, across both stages.
    Safe to call from several threads.
    """
    name = 'scripted'

    def __init__(self, script):
        self.script = dict(
            (problem_id, list(responses))
            for problem_id, responses in script.items())
        self.positions = dict((problem_id, 0) for problem_id in self.script)
        self.prompts = []
        self.lock = threading.Lock()

    @classmethod
    def from_file(cls, path):
        return cls(load_script(path))

    def complete(self, prompt, problem_id=None):
        with self.lock:
            self.prompts.append((problem_id, prompt))
            responses = self.script.get(problem_id, [])
            position = self.positions.get(problem_id, 0)
            if position >= len(responses):
                raise ScriptExhausted(
                    'No scripted response left for problem %s' % (
                        problem_id,))
            self.positions[problem_id] = position + 1
        logger.debug('Scripted response %s for %s', position, problem_id)
        return responses[position]
