"""Exception types raised across the package."""


class MixgapError(Exception):
    """Base class for all package errors."""


class InfeasibleParameters(MixgapError, ValueError):
    pass


class GenerationFailed(MixgapError):
    pass


class BallNotTree(MixgapError):
    pass


class EmptyASet(MixgapError):
    pass


class MissingLabels(MixgapError):
    pass


class DisconnectedGraph(MixgapError):
    pass


class LengthMismatch(MixgapError, ValueError):
    pass


class ZeroStationaryMass(MixgapError, ValueError):
    pass


class EmptySet(MixgapError, ValueError):
    pass


class CouplingBroken(MixgapError, AssertionError):
    pass


class ConfigInvalid(MixgapError, ValueError):
    pass


class GraphFormatError(MixgapError, ValueError):
    pass
