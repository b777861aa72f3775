"""Exception types shared across the package."""


class FinkError(ValueError):
    pass


class OverlappingSupports(FinkError):
    pass


class EmptyInput(FinkError):
    pass


class LevelMismatch(FinkError):
    pass


class OutOfRange(FinkError):
    pass


class AtomOverlap(FinkError):
    """Two staircase atoms wrote to the same position (input is not an sos)."""


class IncompatibleReduct(FinkError):
    pass


class EncodingError(FinkError):
    pass
