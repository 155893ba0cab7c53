"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`PapcError`,
so callers (and the CLI) can separate domain failures from programming bugs.
"""


class PapcError(Exception):
    """Base class for all library errors."""


# structure validation
class IndexOutOfRange(PapcError, IndexError):
    pass


class DuplicateBlock(PapcError):
    pass


class DuplicatePointInBlock(PapcError):
    pass


class IsolatedPoint(PapcError):
    pass


class NotAPap(PapcError):
    """The structure is not a partial affine plane of the expected order."""


# constructions
class UnsupportedOrder(PapcError):
    pass


class TooLarge(PapcError):
    pass


class NotASquare(PapcError):
    pass


class RetriesExhausted(PapcError):
    pass


# analysis
class PreconditionViolated(PapcError):
    pass


# completion
class HypothesesNotMet(PapcError):
    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        super().__init__(f"{clause}: {detail}" if detail else clause)


class ResultNotADesign(PapcError):
    """Raised when a constructive completion fails validation (an internal bug)."""


class TooManyClasses(PapcError):
    pass


class NotEquivalence(PapcError):
    pass


class InvalidInput(PapcError):
    pass


class NotAPlane(PapcError):
    pass


class NotCompletable(PapcError):
    def __init__(self, message: str, outcome=None):
        super().__init__(message)
        self.outcome = outcome


class BudgetExhausted(PapcError):
    def __init__(self, message: str, outcome=None):
        super().__init__(message)
        self.outcome = outcome


# inversive
class DerivedNotCompletable(PapcError):
    def __init__(self, point: int, reason: str = ""):
        self.point = point
        super().__init__(f"derived structure at point {point} has no completion" + (f" ({reason})" if reason else ""))


class InvalidWitness(PapcError):
    pass


class ConditionsNotMet(PapcError):
    def __init__(self, point: int):
        self.point = point
        super().__init__(f"neither gluing condition holds at point {point}")


class GlueInconsistent(PapcError):
    def __init__(self, circle, base_point: int, other_point: int):
        self.circle = tuple(circle)
        self.base_point = base_point
        self.other_point = other_point
        super().__init__(
            f"added circle {self.circle} from point {base_point} is not an added line at point {other_point}"
        )


class NoClauseSatisfied(PapcError):
    def __init__(self, point: int):
        self.point = point
        super().__init__(f"no completion clause holds at point {point}")


# io
class ParseError(PapcError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NonCanonicalInput(UserWarning):
    pass
