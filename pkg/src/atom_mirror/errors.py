"""Exception hierarchy. Every model error is a ``ValueError`` so callers can catch broadly."""


class ModelError(ValueError):
    pass


class NonPositiveRate(ModelError):
    pass


class NonFinite(ModelError):
    pass


class InvalidGeometry(ModelError):
    pass


class NonPositiveDistance(ModelError):
    pass


class GridTooCoarse(ModelError):
    pass


class DegenerateDenominator(ModelError):
    pass


class ZeroDriving(ModelError):
    pass


class ZeroDetuning(ModelError):
    pass


class InsufficientSamples(ModelError):
    pass


class DegenerateNullSpace(ModelError):
    pass


class StepTooLarge(ModelError):
    pass


class CalibrationAmbiguous(ModelError):
    pass


class InvalidState(ModelError):
    pass


class NonPositiveSeparation(ModelError):
    pass


class FlatCurve(ModelError):
    pass


class InvalidSpec(ModelError):
    pass


class IoFailure(OSError):
    pass
