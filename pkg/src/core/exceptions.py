class EkrLabError(Exception):
    """Base class for every error raised by EKR Lab."""


class PermutationError(EkrLabError, ValueError):
    """Invalid permutation data, degree mismatch or malformed cycle text."""


class GroupError(EkrLabError, ValueError):
    """A group-level precondition does not hold."""


class GroupTooLargeError(GroupError):
    """Closure enumeration passed the configured element cap."""

    def __init__(self, cap):
        super().__init__(f"Group has more than {cap} elements (element cap)")
        self.cap = cap


class GraphTooLargeError(EkrLabError):
    """A graph operation was asked for more vertices than its cap allows."""


class BudgetExceededError(EkrLabError):
    """
    A time or enumeration budget ran out before an exact answer.

    Args:
        message: Human readable reason
        partial: Best data found so far (solver specific), or None
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class VerificationError(EkrLabError):
    """A construction or certificate failed its own check."""


class SpecParseError(EkrLabError, ValueError):
    """Group spec text does not follow the grammar."""

    def __init__(self, message, line=None, source=None):
        location = ''
        if source is not None:
            location += f"{source}"
        if line is not None:
            location += f":{line}" if location else f"line {line}"
        super().__init__(f"{location}: {message}" if location else message)
        self.line = line
        self.source = source
