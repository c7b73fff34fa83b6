"""Exception types raised across the package."""


class CalibrationError(Exception):
    """Base class for every error raised by plcalib."""


class RankDeficient(CalibrationError):
    pass


class NoConvergence(CalibrationError):
    pass


class Diverged(CalibrationError):
    pass


class BehindCamera(CalibrationError):
    pass


class InvalidCamera(CalibrationError):
    pass


class DegenerateFrontalPose(CalibrationError):
    pass


class IllConditioned(CalibrationError):
    pass


class InvalidDimensions(CalibrationError):
    pass


class InvalidRecipe(CalibrationError):
    pass


class TooFewRemaining(CalibrationError):
    pass


class TooFewPoints(CalibrationError):
    pass


class DegenerateConfiguration(CalibrationError):
    pass


class NearParallelLines(CalibrationError):
    pass


class TooFewLines(CalibrationError):
    pass


class DegenerateSet(CalibrationError):
    pass


class ConfigError(CalibrationError):
    pass


class ParseError(CalibrationError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InconsistentBoard(CalibrationError):
    pass


class EmptySelection(CalibrationError):
    pass
