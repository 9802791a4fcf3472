"""Exception taxonomy shared by all zda modules."""


class ZdaError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(ZdaError, ValueError):
    """A constructor argument violates its stated precondition."""


class CrossRingError(ZdaError):
    """Elements or ideals of different rings were mixed in one operation."""


class ResourceBoundError(ZdaError):
    """A requested computation exceeds the configured size bound."""


class NotAHomomorphismError(ZdaError):
    """A candidate map fails a ring-homomorphism axiom.

    Carries a witness describing the first failing check.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UnresolvableNaturalHomError(ZdaError):
    """No canonical homomorphism is defined between the two rings."""


class InternalConsistencyError(ZdaError):
    """Two independent computations of the same object disagree.

    Indicates a table bug; never a property of valid inputs.
    """


class TheoremViolationError(ZdaError):
    """A structural prediction contradicts the brute-force graph oracle.

    Any instance of this error on a valid input is a build-stopping bug.
    """

    def __init__(self, message: str, witness=None, report=None):
        super().__init__(message)
        self.witness = witness
        self.report = report


class ClassificationGapError(TheoremViolationError):
    """No diameter branch fired for a valid finite instance."""


class InvalidVertexError(ZdaError):
    """A graph query referenced something that is not a vertex."""


class ScenarioError(ZdaError):
    """Base for scenario-text errors; carries a 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class ScenarioSyntaxError(ScenarioError):
    pass


class ScenarioSemanticError(ScenarioError):
    pass
