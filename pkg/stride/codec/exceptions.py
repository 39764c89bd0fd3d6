class CodecError(Exception):
    pass


class TraceSyntaxError(CodecError):
    """
    A malformed tagged-text trace. ``line_no`` is 1-based.
    """

    def __init__(self, line_no, message):
        super(TraceSyntaxError, self).__init__(
            'line %s: %s' % (line_no, message))
        self.line_no = line_no
        self.message = message


class EmptyBlock(TraceSyntaxError):
    pass


class SchemaError(CodecError):
    pass


class TraceDecodeError(CodecError):
    pass
