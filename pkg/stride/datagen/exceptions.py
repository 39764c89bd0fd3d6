class DatagenError(Exception):
    pass


class TransportError(DatagenError):
    pass


class GeneratorApiException(TransportError):

    def __init__(self, message, status_code=None):
        super(GeneratorApiException, self).__init__(message)
        self.status_code = status_code


class ScriptExhausted(DatagenError):
    pass


class MissingCredential(DatagenError):
    pass


class InvalidGeneratorConfig(DatagenError):
    pass


class TemplateError(DatagenError):
    pass


class DatasetIoError(DatagenError):
    pass
