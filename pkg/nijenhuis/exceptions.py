class NijenhuisError(ValueError):
    pass


class ExprSyntaxError(NijenhuisError):

    def __init__(self, message, position=None):
        self.position = position
        self.reason = message
        if position is not None:
            message = "%s (at column %d)" % (message, position + 1)
        super(ExprSyntaxError, self).__init__(message)


class UnknownIdentifier(ExprSyntaxError):
    pass


class UnknownCoordinate(NijenhuisError):
    pass


class ZeroDenominator(NijenhuisError):
    pass


class PoleError(NijenhuisError):
    pass


class DegreeOverflow(NijenhuisError):
    pass


class ChartMismatch(NijenhuisError):
    pass


class InvariantViolation(NijenhuisError):
    pass


class PreconditionFailed(NijenhuisError):
    pass


class NotLinear(NijenhuisError):
    pass


class ScenarioError(NijenhuisError):

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = "line %d, column %d: %s" % (line, column or 1, message)
        super(ScenarioError, self).__init__(message)
