from stride.losses.models import (
    DpoConfig, PreferenceBatch, PreferenceItem, TokenLogProbs)
from stride.losses.objectives import (
    dpo_grad, dpo_loss, dpo_margins, log_sigmoid, ntp_loss, sigmoid)

__all__ = [
    'DpoConfig', 'PreferenceBatch', 'PreferenceItem', 'TokenLogProbs',
    'dpo_grad', 'dpo_loss', 'dpo_margins', 'log_sigmoid', 'ntp_loss',
    'sigmoid']
