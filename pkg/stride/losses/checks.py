import logging
import math

from dataclasses import dataclass

import numpy as np

from stride.losses import objectives
from stride.losses.models import (
    DpoConfig, PreferenceBatch, PreferenceItem, TokenLogProbs)


logger = logging.getLogger(__name__)

TOLERANCE = 1e-12
FD_STEP = 1e-6
FD_TOLERANCE = 1e-5
GRADIENT_BATCHES = 100


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __str__(self):
        return '%s %s: %s' % (
            'PASS' if self.passed else 'FAIL', self.name, self.detail)


def _close(name, got, expected, tolerance=TOLERANCE):
    passed = bool(abs(got - expected) <= tolerance)
    return CheckResult(name, passed, 'got %.15g, expected %.15g' % (
        got, expected))


def _item(policy_accepted, policy_rejected, ref_accepted, ref_rejected):
    return PreferenceItem.from_lists(
        policy_accepted, policy_rejected, ref_accepted, ref_rejected)


def analytic_checks():
    """
    Closed-form cases of both objectives.

    :returns: list of CheckResult
    """
    results = [
        _close('ntp zero loss', objectives.ntp_loss([0.0, 0.0, 0.0]), 0.0),
        _close('ntp 3 ln 2', objectives.ntp_loss([math.log(0.5)] * 3),
               3 * math.log(2)),
        _close('ntp single token', objectives.ntp_loss([-1.0]), 1.0),
    ]

    equal = PreferenceBatch([
        _item([-0.3, -1.2], [-2.0], [-0.3, -1.2], [-2.0]),
        _item([-0.7], [-0.1, -0.4, -0.9], [-0.7], [-0.1, -0.4, -0.9])])
    results.append(_close(
        'dpo equal policies ln 2',
        objectives.dpo_loss(equal, DpoConfig(beta=0.37)), math.log(2)))

    ln3 = PreferenceBatch([_item([0.0], [-1.0], [-math.log(3)], [-1.0])])
    results.append(_close(
        'dpo beta=1 ln 3 margin', objectives.dpo_loss(ln3, DpoConfig(1.0)),
        math.log(4.0 / 3.0)))

    half = PreferenceBatch([_item([-1.0], [-3.0], [-3.0], [-1.0])])
    results.append(_close(
        'dpo beta=0.5 margin 2', objectives.dpo_loss(half, DpoConfig(0.5)),
        math.log1p(math.exp(-2.0))))

    [grad] = objectives.dpo_grad(
        PreferenceBatch([_item([-1.0, -2.0], [-0.5], [-1.0, -2.0], [-0.5])]),
        DpoConfig(1.0))
    expected = np.concatenate([np.full(2, -0.5), np.full(1, 0.5)])
    got = np.concatenate([grad.policy_accepted, grad.policy_rejected])
    error = float(np.max(np.abs(got - expected)))
    results.append(CheckResult(
        'dpo equal policies gradient', error <= TOLERANCE,
        'max deviation from -0.5/+0.5 is %.3g' % (error,)))

    for margin in (20.0, -20.0, 100.0, -100.0):
        loss = objectives.dpo_loss(
            PreferenceBatch([_item([0.0], [0.0], [-margin], [0.0])
                             if margin > 0 else
                             _item([0.0], [0.0], [0.0], [margin])]),
            DpoConfig(1.0))
        lower = max(-margin, 0.0)
        upper = lower + math.exp(-abs(margin))
        above = lower < loss if margin > 0 else lower <= loss
        results.append(CheckResult(
            'dpo bounds at margin %+g' % (margin,),
            bool(math.isfinite(loss) and above and loss <= upper),
            'loss %.6g within (%.6g, %.6g]' % (loss, lower, upper)))
    return results


def random_batch(rng, beta, margin=None):
    """
    A random preference batch. When ``margin`` is given the reference
    log-probs are shifted so every item has that margin.
    """
    items = []
    for _ in range(rng.randint(1, 5)):
        lengths = rng.randint(1, 7, size=2)
        pa = -rng.uniform(0.01, 3.0, size=lengths[0])
        pr = -rng.uniform(0.01, 3.0, size=lengths[1])
        ra = -rng.uniform(0.01, 3.0, size=lengths[0])
        rr = -rng.uniform(0.01, 3.0, size=lengths[1])
        if margin is not None:
            current = (pa.sum() - ra.sum()) - (pr.sum() - rr.sum())
            delta = margin / beta - current
            if delta > 0:
                ra = ra - delta / ra.size
            else:
                rr = rr + delta / rr.size
        items.append(PreferenceItem(
            TokenLogProbs(pa), TokenLogProbs(pr),
            TokenLogProbs(ra), TokenLogProbs(rr)))
    return PreferenceBatch(items)


def _with_policy(batch, position, accepted, values):
    items = list(batch.items)
    item = items[position]
    if accepted:
        item = PreferenceItem(
            TokenLogProbs(values), item.policy_rejected,
            item.ref_accepted, item.ref_rejected)
    else:
        item = PreferenceItem(
            item.policy_accepted, TokenLogProbs(values),
            item.ref_accepted, item.ref_rejected)
    items[position] = item
    return PreferenceBatch(items)


def finite_difference_grad(batch, cfg, step=FD_STEP):
    """
    Central finite differences of dpo_loss over every policy token.

    :returns: flat numpy array, accepted then rejected tokens per item
    """
    estimates = []
    for position, item in enumerate(batch.items):
        for accepted, seq in ((True, item.policy_accepted),
                              (False, item.policy_rejected)):
            for t in range(len(seq)):
                up = np.array(seq.values)
                down = np.array(seq.values)
                up[t] += step
                down[t] -= step
                estimates.append((
                    objectives.dpo_loss(
                        _with_policy(batch, position, accepted, up), cfg) -
                    objectives.dpo_loss(
                        _with_policy(batch, position, accepted, down), cfg)
                ) / (2 * step))
    return np.array(estimates)


def analytic_grad(batch, cfg):
    return np.concatenate([
        np.concatenate([grad.policy_accepted, grad.policy_rejected])
        for grad in objectives.dpo_grad(batch, cfg)])


def relative_error(analytic, numeric):
    scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-300)
    return float(np.linalg.norm(analytic - numeric) / scale)


def gradient_check(seed=0, batches=GRADIENT_BATCHES, step=FD_STEP,
                   tolerance=FD_TOLERANCE):
    """
    Compares dpo_grad against central finite differences on random
    batches, a fifth of them pinned to margins of +50 or -50.

    :returns: CheckResult
    """
    rng = np.random.RandomState(seed)
    worst = 0.0
    for number in range(batches):
        beta = float(rng.uniform(0.05, 2.0))
        margin = None
        if number % 5 == 3:
            margin = 50.0
        elif number % 5 == 4:
            margin = -50.0
        batch = random_batch(rng, beta, margin)
        cfg = DpoConfig(beta)
        error = relative_error(
            analytic_grad(batch, cfg),
            finite_difference_grad(batch, cfg, step))
        worst = max(worst, error)
        if not error < tolerance:
            return CheckResult(
                'dpo gradient vs finite differences', False,
                'batch %s (beta %.3g, margin %s): relative error %.3g' % (
                    number, beta, margin, error))
    return CheckResult(
        'dpo gradient vs finite differences', True,
        '%s batches, worst relative error %.3g' % (batches, worst))


def run_checks(seed=0):
    """
    The full self-check suite: closed-form cases and the gradient check.

    :returns: list of CheckResult
    """
    results = analytic_checks() + [gradient_check(seed=seed)]
    for result in results:
        logger.debug('%s', result)
    return results
