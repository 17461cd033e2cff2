"""Exception types raised by the numeric kernels."""


class ChartUndefined(ValueError):
    """The requested affine chart does not contain the point."""


class DegenerateImage(ValueError):
    """A projective action produced a numerically zero vector."""


class NormalizationUndefined(ValueError):
    """The leading entry is too close to zero to rescale to 1."""


class OutOfChart(ValueError):
    """A group element left the neighbourhood where the log chart is valid."""


class ThetaZero(ValueError):
    """The scaled-density evaluator was asked for the Dirac case theta = 0."""


class StepTooSmall(ValueError):
    """A finite-difference step fell below the roundoff floor of the values."""


class DeltaOutOfRange(ValueError):
    """Requested neighbourhood width is outside the admissible range."""


class ConfigError(ValueError):
    """A configuration failed validation; the message names the field."""
