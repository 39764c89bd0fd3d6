class LossError(Exception):
    pass


class NonFiniteInput(LossError):
    pass


class InvalidLogProbs(LossError):
    pass


class EmptyBatch(LossError):
    pass


class InvalidConfig(LossError):
    pass
