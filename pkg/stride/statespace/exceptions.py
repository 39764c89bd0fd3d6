class StateSpaceError(Exception):
    pass


class InvalidAction(StateSpaceError):
    pass


class MalformedPrefix(StateSpaceError):
    pass


class EmptySteps(StateSpaceError):
    pass


class InvalidRules(StateSpaceError):
    pass
