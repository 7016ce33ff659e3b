"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class ConstShapeError(Exception):
    exit_code = 4


class UsageError(ConstShapeError):
    exit_code = 2


class SchemaError(UsageError):
    pass


class ResourceLimit(ConstShapeError):
    exit_code = 3


class InvariantBreach(ConstShapeError):
    exit_code = 4


class NotExpansive(UsageError):
    pass


class AmbiguousExpansion(UsageError):
    pass


class SingularMatrix(UsageError):
    pass


class InvalidDomain(UsageError):
    pass


class InvalidSubstitution(UsageError):
    pass


class NotCovered(InvariantBreach):
    pass


class NotStabilized(ResourceLimit):
    pass


class BadB(UsageError):
    pass


class NotFolner(ConstShapeError):
    exit_code = 1


class WindowTooSmall(ResourceLimit):
    pass


class Ambiguous(ConstShapeError):
    exit_code = 1


class NoDecomposition(ConstShapeError):
    exit_code = 1


class MissingTableEntry(ConstShapeError):
    exit_code = 1


class IncompleteLanguage(ResourceLimit):
    pass


class NotCertified(ConstShapeError):
    exit_code = 1
