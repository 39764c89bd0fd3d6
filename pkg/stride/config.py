import configparser
import logging
import os

from dataclasses import dataclass, replace

from stride import settings
from stride.exceptions import ConfigError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Config:
    """
    Run configuration: settings defaults, overridden by a ``--config`` INI
    file, overridden by command-line flags.
    """
    endpoint_url: str = settings.GENERATOR_ENDPOINT_URL
    model_name: str = settings.GENERATOR_MODEL_NAME
    temperature: float = settings.GENERATOR_TEMPERATURE
    max_retries: int = settings.GENERATOR_MAX_RETRIES
    parallelism: int = settings.GENERATOR_PARALLELISM
    timeout: int = settings.DEFAULT_REQUEST_TIMEOUT
    max_states: int = settings.DEFAULT_MAX_STATES
    max_subquestions: int = settings.DEFAULT_MAX_SUBQUESTIONS
    dpo_beta: float = settings.DPO_BETA
    student_template: str = settings.STUDENT_PROMPT_TEMPLATE
    teacher_template: str = settings.TEACHER_PROMPT_TEMPLATE

    def override(self, **values):
        """
        A copy with the given non-None values replaced.
        """
        return replace(self, **dict(
            (key, value) for key, value in values.items()
            if value is not None))


# section -> key -> (Config field, type)
SECTIONS = {
    'generator': {
        'endpoint_url': ('endpoint_url', str),
        'model_name': ('model_name', str),
        'temperature': ('temperature', float),
        'max_retries': ('max_retries', int),
        'parallelism': ('parallelism', int),
        'timeout': ('timeout', int),
    },
    'rules': {
        'max_states': ('max_states', int),
        'max_subquestions': ('max_subquestions', int),
    },
    'dpo': {
        'beta': ('dpo_beta', float),
    },
    'prompts': {
        'student': ('student_template', str),
        'teacher': ('teacher_template', str),
    },
}

PATH_FIELDS = ('student_template', 'teacher_template')


def load_config(path=None):
    """
    Reads an INI config file over the settings defaults. Template paths
    are relative to the file.

    :param path str: the file, or None for the defaults
    :returns: Config
    """
    config = Config()
    if path is None:
        return config

    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding='utf-8') as handle:
            parser.read_file(handle)
    except (IOError, OSError) as e:
        raise ConfigError('Cannot read config %s: %s' % (path, e))
    except configparser.Error as e:
        raise ConfigError('Malformed config %s: %s' % (path, e))

    base = os.path.dirname(os.path.abspath(path))
    values = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError('%s: unknown section [%s]' % (path, section))
        for key, raw in parser.items(section):
            if key not in SECTIONS[section]:
                raise ConfigError('%s: unknown key %s in [%s]' % (
                    path, key, section))
            name, kind = SECTIONS[section][key]
            try:
                value = kind(raw)
            except ValueError:
                raise ConfigError('%s: [%s] %s = %r is not a valid %s' % (
                    path, section, key, raw, kind.__name__))
            if name in PATH_FIELDS:
                value = os.path.join(base, value)
            values[name] = value

    logger.debug('Loaded config %s: %s', path, sorted(values))
    return config.override(**values)
