class KthitError(Exception):
    """
    Base class for errors raised by kthit.
    """


class GraphError(KthitError, ValueError):
    pass


class ParseError(KthitError):
    """
    Malformed graph, CNF or instance text.
    """

    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class CapExceeded(KthitError):
    pass


class PreconditionViolated(KthitError):
    pass


class ComponentMismatch(PreconditionViolated):
    pass


class InvalidRoot(PreconditionViolated):
    pass


class IsClique(PreconditionViolated):
    pass


class InvariantBroken(KthitError):
    pass


class FormulaError(KthitError, ValueError):
    pass
