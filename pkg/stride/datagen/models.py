from dataclasses import dataclass, field
from os import environ
from typing import Dict, Optional, Tuple

from stride import settings
from stride.datagen.exceptions import (
    InvalidGeneratorConfig, MissingCredential)
from stride.statespace.models import Trace, ValidationVerdict


STAGE_ONE = 'StageI'
STAGE_TWO = 'StageII'

RIGHT_CASE = 'RightCase'
WRONG_CASE = 'WrongCase'
CORRECTED = 'Corrected'
FAILED = 'Failed'
OUTCOMES = (RIGHT_CASE, WRONG_CASE, CORRECTED, FAILED)

# Where a Stage II input came from
SOURCE_GENERATOR = 'generator'
SOURCE_MODEL = 'model'


@dataclass(frozen=True)
class ProblemInstance:
    id: str
    question: str
    reference_answer: str

    def __post_init__(self):
        if not self.id:
            raise ValueError('A problem needs an id.')
        if not self.reference_answer:
            raise ValueError('Problem %s has no reference answer.' % (
                self.id,))


@dataclass(frozen=True)
class GeneratorConfig:
    endpoint_url: str = settings.GENERATOR_ENDPOINT_URL
    model_name: str = settings.GENERATOR_MODEL_NAME
    temperature: float = settings.GENERATOR_TEMPERATURE
    max_retries: int = settings.GENERATOR_MAX_RETRIES
    parallelism: int = settings.GENERATOR_PARALLELISM
    timeout: int = settings.DEFAULT_REQUEST_TIMEOUT
    credential: Optional[str] = field(default=None, repr=False)

    def __post_init__(self):
        if self.max_retries < 1:
            raise InvalidGeneratorConfig(
                'max_retries must be at least 1, got %s' % (
                    self.max_retries,))
        if self.parallelism < 1:
            raise InvalidGeneratorConfig(
                'parallelism must be at least 1, got %s' % (
                    self.parallelism,))
        if self.temperature < 0:
            raise InvalidGeneratorConfig(
                'temperature must be non-negative, got %s' % (
                    self.temperature,))

    @staticmethod
    def credential_from_env(name=settings.GENERATOR_CREDENTIAL_ENV):
        """
        Reads the generator credential from the environment.

        :param name str: the environment variable
        :returns: str
        """
        credential = environ.get(name)
        if not credential:
            raise MissingCredential(
                'No generator credential: set the %s environment variable '
                'or pass --mock SCRIPT for an offline run.' % (name,))
        return credential


@dataclass(frozen=True)
class Attempt:
    """
    One generator response and what was made of it. ``trace`` and
    ``verdict`` are None when the response did not parse.
    """
    raw_text: str
    trace: Optional[Trace] = None
    verdict: Optional[ValidationVerdict] = None
    extracted_answer: Optional[str] = None
    correct: bool = False
    error: Optional[str] = None

    @property
    def parsed(self):
        return self.trace is not None

    @property
    def accepted(self):
        return self.verdict is not None and self.verdict.valid and \
            self.correct


@dataclass(frozen=True)
class PreferencePair:
    question: str
    accepted: Trace
    rejected: Trace


@dataclass(frozen=True)
class ConstructionCase:
    """
    The result of constructing data for one problem in one stage.

    ``trace`` holds the right trace of a RightCase and the wrong trace of a
    WrongCase; ``pair`` is set for Corrected only.
    """
    problem: ProblemInstance
    stage: str
    outcome: str
    attempts: Tuple[Attempt, ...] = ()
    trace: Optional[Trace] = None
    pair: Optional[PreferencePair] = None
    cause: Optional[str] = None
    source: str = SOURCE_GENERATOR

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError('Unknown outcome: %r' % (self.outcome,))
        if self.outcome in (RIGHT_CASE, WRONG_CASE) and self.trace is None:
            raise ValueError('%s needs a trace.' % (self.outcome,))
        if (self.outcome == CORRECTED) != (self.pair is not None):
            raise ValueError('Exactly the Corrected outcome holds a pair.')


@dataclass(frozen=True)
class DatasetManifest:
    right_count: int
    pair_count: int
    failed_count: int
    wrong_count: int
    generator: str
    created_at: str
    dpo_beta: float
    version: str
    hyperparameters: Dict[str, object] = field(
        default_factory=lambda: dict(settings.TRAINING_HYPERPARAMETERS))
    stage2_sources: Dict[str, int] = field(default_factory=dict)

    def to_dict(self):
        return {
            'right_count': self.right_count,
            'pair_count': self.pair_count,
            'failed_count': self.failed_count,
            'wrong_count': self.wrong_count,
            'generator': self.generator,
            'created_at': self.created_at,
            'dpo_beta': self.dpo_beta,
            'version': self.version,
            'hyperparameters': dict(self.hyperparameters),
            'stage2_sources': dict(self.stage2_sources),
        }
