from dataclasses import dataclass

import numpy as np

from stride.losses.models import DpoConfig, PreferenceBatch, TokenLogProbs


def log_sigmoid(x):
    """
    log σ(x), computed as -softplus(-x) so that large margins of either
    sign neither overflow nor underflow.
    """
    return -np.logaddexp(0.0, -np.asarray(x, dtype=np.float64))


def sigmoid(x):
    return np.exp(log_sigmoid(x))


def _as_log_probs(seq):
    if isinstance(seq, TokenLogProbs):
        return seq
    return TokenLogProbs(seq)


def ntp_loss(seq):
    """
    Next-token prediction loss of one target sequence: the negated sum of
    its token log-probabilities.

    :param seq TokenLogProbs: the sequence (a plain list is accepted)
    :returns: float >= 0
    """
    return float(-np.sum(_as_log_probs(seq).values)) + 0.0


def dpo_margins(batch, cfg=None):
    """
    Per-item margins β·((Σπa - Σra) - (Σπr - Σrr)), where sequence
    log-probabilities are sums of token log-probabilities.

    :returns: numpy array of shape (len(batch),)
    """
    cfg = cfg or DpoConfig()
    if not isinstance(batch, PreferenceBatch):
        batch = PreferenceBatch(batch)
    return np.array([
        cfg.beta * (
            (item.policy_accepted.total() - item.ref_accepted.total()) -
            (item.policy_rejected.total() - item.ref_rejected.total()))
        for item in batch.items], dtype=np.float64)


def dpo_loss(batch, cfg=None):
    """
    Mean over the batch of -log σ(margin).

    :param batch PreferenceBatch: the preference items
    :param cfg DpoConfig: holds β
    :returns: float > 0
    """
    return float(np.mean(-log_sigmoid(dpo_margins(batch, cfg))))


@dataclass(frozen=True)
class ItemGradient:
    """
    Gradient of the batch loss with respect to one item's log-probs.
    The reference model is frozen, its gradients are zero.
    """
    policy_accepted: np.ndarray
    policy_rejected: np.ndarray
    ref_accepted: np.ndarray
    ref_rejected: np.ndarray


def dpo_grad(batch, cfg=None):
    """
    Analytic gradient of dpo_loss with respect to the policy token
    log-probabilities. Each accepted token gets -β·σ(-m)/N and each
    rejected token +β·σ(-m)/N, where m is the item margin and N the batch
    size.

    :returns: list of ItemGradient, one per item
    """
    cfg = cfg or DpoConfig()
    if not isinstance(batch, PreferenceBatch):
        batch = PreferenceBatch(batch)
    margins = dpo_margins(batch, cfg)
    scale = cfg.beta * sigmoid(-margins) / len(batch)

    gradients = []
    for item, coefficient in zip(batch.items, scale):
        gradients.append(ItemGradient(
            policy_accepted=np.full(
                len(item.policy_accepted), -coefficient),
            policy_rejected=np.full(
                len(item.policy_rejected), coefficient),
            ref_accepted=np.zeros(len(item.ref_accepted)),
            ref_rejected=np.zeros(len(item.ref_rejected))))
    return gradients
