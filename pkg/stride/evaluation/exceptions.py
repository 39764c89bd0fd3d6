class EvaluationError(Exception):
    pass


class NoFinalAnswer(EvaluationError):
    pass


class Unparseable(EvaluationError):
    pass


class AllExtractionsFailed(EvaluationError):
    pass


class EmptyInput(EvaluationError):
    pass


class InsufficientSamples(EvaluationError):
    pass


class EvalSchemaError(EvaluationError):
    pass
