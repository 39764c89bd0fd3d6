import os


# Test runs use the built-in defaults whatever the shell exports. This
# runs before stride.settings is first imported.
for name in ('GENERATOR_ENDPOINT_URL', 'GENERATOR_MODEL_NAME',
             'GENERATOR_TEMPERATURE', 'GENERATOR_MAX_RETRIES',
             'GENERATOR_PARALLELISM', 'DEFAULT_REQUEST_TIMEOUT',
             'DEFAULT_MAX_STATES', 'DEFAULT_MAX_SUBQUESTIONS', 'DPO_BETA',
             'PROMPT_TEMPLATE_DIR', 'SOURCE_DATE_EPOCH', 'RAVEN_DSN',
             'STRIDE_GENERATOR_API_KEY'):
    os.environ.pop(name, None)
os.environ.setdefault('LOG_LEVEL', 'WARNING')
