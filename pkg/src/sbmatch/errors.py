"""Exception hierarchy shared by the library and the command line."""


class SBMatchError(Exception):
    """Base class for every error raised by sbmatch."""


class InstanceError(SBMatchError, ValueError):
    """An instance file or instance definition is invalid."""


class MalformedLine(InstanceError):
    def __init__(self, line_no, message="malformed line"):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class SelfLoop(InstanceError):
    def __init__(self, ordinal):
        self.ordinal = ordinal
        super().__init__(f"edge {ordinal} repeats an endpoint")


class UnknownVertex(InstanceError):
    pass


class DuplicateCapacity(InstanceError):
    pass


class UniformityMismatch(InstanceError):
    pass


class UnknownItem(InstanceError):
    pass


class InvalidParams(SBMatchError, ValueError):
    """Generator or streaming parameters outside their admissible range."""


class InvalidP(InvalidParams):
    """Sampling probability outside the range the analysis requires."""


class InvalidSpec(SBMatchError, ValueError):
    """A matroid description that cannot be turned into an oracle."""


class DoubleCommit(SBMatchError):
    pass


class DependentInput(SBMatchError, ValueError):
    pass


class NotFinalized(SBMatchError):
    pass


class TooLarge(SBMatchError):
    """Instance exceeds the exhaustive-enumeration guard."""


class AssertionFailure(SBMatchError, AssertionError):
    """A guarantee check failed; ``details`` holds the counterexample."""

    def __init__(self, message, details=None):
        self.details = details or {}
        super().__init__(message)
