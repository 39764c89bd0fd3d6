# Default settings for stride.

from os.path import abspath, dirname, join
from os import environ


def bool_env(val):
    """Replaces string based environment values with Python booleans"""
    return True if environ.get(val, False) == 'True' else False


PROJECT_ROOT = environ.get(
    'PROJECT_ROOT', dirname(dirname(abspath(__file__))))

# Generator endpoint (HTTP JSON chat-completion)
GENERATOR_ENDPOINT_URL = environ.get(
    'GENERATOR_ENDPOINT_URL', 'http://localhost:8000/v1/chat/completions')
GENERATOR_MODEL_NAME = environ.get('GENERATOR_MODEL_NAME', 'generator')
# Name of the environment variable holding the generator credential.
# The credential itself is never a setting, a config key or a flag.
GENERATOR_CREDENTIAL_ENV = 'STRIDE_GENERATOR_API_KEY'
GENERATOR_TEMPERATURE = float(environ.get('GENERATOR_TEMPERATURE', 0.7))
GENERATOR_MAX_RETRIES = int(environ.get('GENERATOR_MAX_RETRIES', 3))
GENERATOR_PARALLELISM = int(environ.get('GENERATOR_PARALLELISM', 4))

DEFAULT_REQUEST_TIMEOUT = int(environ.get(
    'DEFAULT_REQUEST_TIMEOUT', 120))

# Transition rules
DEFAULT_MAX_STATES = int(environ.get('DEFAULT_MAX_STATES', 64))
DEFAULT_MAX_SUBQUESTIONS = int(environ.get('DEFAULT_MAX_SUBQUESTIONS', 10))

# Preference objective
DPO_BETA = float(environ.get('DPO_BETA', 0.1))

# Prompt templates shipped with the package
PROMPT_TEMPLATE_DIR = environ.get(
    'PROMPT_TEMPLATE_DIR',
    join(dirname(abspath(__file__)), 'datagen', 'templates'))
STUDENT_PROMPT_TEMPLATE = join(PROMPT_TEMPLATE_DIR, 'student.txt')
TEACHER_PROMPT_TEMPLATE = join(PROMPT_TEMPLATE_DIR, 'teacher.txt')

# Training defaults recorded in every dataset manifest. Nothing in stride
# trains a model; these travel with the data for whoever does.
TRAINING_HYPERPARAMETERS = {
    'lora_rank': 16,
    'learning_rate': 1.0e-4,
    'epochs': 10,
    'optimizer': 'AdamW',
    'lr_scheduler': 'cosine decay',
    'batch_size': 32,
}

# Reproducible manifest timestamps, see reproducible-builds.org
SOURCE_DATE_EPOCH = environ.get('SOURCE_DATE_EPOCH')

# Sentry configuration
RAVEN_DSN = environ.get('RAVEN_DSN')

LOG_LEVEL = environ.get('LOG_LEVEL', 'INFO')
DEBUG = bool_env('DEBUG')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'stride': {
            'handlers': ['console'],
            'level': 'DEBUG' if DEBUG else LOG_LEVEL,
            'propagate': False,
        },
    }
}

if RAVEN_DSN:
    LOGGING['handlers']['sentry'] = {
        'level': 'ERROR',
        'class': 'raven.handlers.logging.SentryHandler',
        'dsn': RAVEN_DSN,
    }
    LOGGING['loggers']['stride']['handlers'].append('sentry')
