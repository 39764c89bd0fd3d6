from dataclasses import dataclass
from typing import Tuple

import numpy as np

from stride import settings
from stride.losses.exceptions import (
    EmptyBatch, InvalidConfig, InvalidLogProbs, NonFiniteInput)


class TokenLogProbs(object):
    """
    Per-token log-probabilities of one sequence, ``values[t]`` being
    log P(y_t | y_<t). Every entry is finite and at most 0.
    """

    def __init__(self, values):
        try:
            values = np.array(values, dtype=np.float64).reshape(-1)
        except (TypeError, ValueError) as e:
            raise InvalidLogProbs('Not a list of numbers: %s' % (e,))
        if values.size < 1:
            raise InvalidLogProbs('A sequence needs at least one token.')
        if not np.all(np.isfinite(values)):
            raise NonFiniteInput('Log-probabilities must be finite.')
        if np.any(values > 0):
            raise InvalidLogProbs(
                'Log-probabilities must be <= 0, got max %r' % (
                    float(values.max()),))
        values.setflags(write=False)
        self.values = values

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return 'TokenLogProbs(%r)' % (self.values.tolist(),)

    def total(self):
        """Sequence log-probability."""
        return float(np.sum(self.values))


@dataclass(frozen=True)
class PreferenceItem:
    policy_accepted: TokenLogProbs
    policy_rejected: TokenLogProbs
    ref_accepted: TokenLogProbs
    ref_rejected: TokenLogProbs

    def __post_init__(self):
        if len(self.policy_accepted) != len(self.ref_accepted):
            raise InvalidLogProbs(
                'Policy and reference disagree on the accepted length.')
        if len(self.policy_rejected) != len(self.ref_rejected):
            raise InvalidLogProbs(
                'Policy and reference disagree on the rejected length.')

    @classmethod
    def from_lists(cls, policy_accepted, policy_rejected, ref_accepted,
                   ref_rejected):
        return cls(
            TokenLogProbs(policy_accepted), TokenLogProbs(policy_rejected),
            TokenLogProbs(ref_accepted), TokenLogProbs(ref_rejected))


@dataclass(frozen=True)
class PreferenceBatch:
    items: Tuple[PreferenceItem, ...]

    def __post_init__(self):
        object.__setattr__(self, 'items', tuple(self.items))
        if not self.items:
            raise EmptyBatch('A preference batch needs at least one item.')

    def __len__(self):
        return len(self.items)


@dataclass(frozen=True)
class DpoConfig:
    beta: float = settings.DPO_BETA

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta <= 0:
            raise InvalidConfig('beta must be positive, got %r' % (
                self.beta,))
