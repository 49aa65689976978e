"""Shared exception types."""


class QdeskError(Exception):
    pass


class DimensionMismatch(QdeskError, ValueError):
    pass


class LengthMismatch(DimensionMismatch):
    pass


class TargetOutOfRange(QdeskError, IndexError):
    pass


class NotHermitian(QdeskError, ValueError):
    pass


class NotTracePreserving(QdeskError, ValueError):
    pass


class InfiniteDivergence(QdeskError, ValueError):
    """Relative entropy is +inf: support of p not contained in support of q."""


class ZeroProbabilityComponent(QdeskError, ValueError):
    pass


class ZeroProbabilityBranch(QdeskError, ValueError):
    pass


class OutsideBlochBall(QdeskError, ValueError):
    pass


class NotAnEigenvector(QdeskError, ValueError):
    pass


class NoSolutions(QdeskError, ValueError):
    pass


class AllSolutions(QdeskError, ValueError):
    pass


class SingularMatrix(QdeskError, ValueError):
    pass


class PostselectionImpossible(QdeskError, ValueError):
    pass


class ZeroVector(QdeskError, ValueError):
    pass


class DuplicateSample(QdeskError, ValueError):
    pass


class BadLength(QdeskError, ValueError):
    pass


class UnsupportedKind(QdeskError, ValueError):
    pass


class AliasedSpectrum(QdeskError, ValueError):
    pass


class UnsupportedGenerator(QdeskError, ValueError):
    pass


class IncompleteProjectors(QdeskError, ValueError):
    pass


class SingularSystem(QdeskError, ValueError):
    pass


class EmptyClass(QdeskError, ValueError):
    pass


class IntegratorDiverged(QdeskError, RuntimeError):
    pass
