"""Exception hierarchy; each class carries the code reported by the CLI."""


class BruhatError(Exception):
    code = "Error"


class SingularMatrix(BruhatError, ZeroDivisionError):
    code = "SingularMatrix"


class RepeatedPoint(BruhatError, ValueError):
    code = "RepeatedPoint"


class ZeroPointWithVanishing(BruhatError, ValueError):
    code = "ZeroPointWithVanishing"


class ZeroOrInfinitePoint(BruhatError, ValueError):
    code = "ZeroOrInfinitePoint"


class InconsistentSystem(BruhatError, ValueError):
    code = "InconsistentSystem"


class InvalidPartition(BruhatError, ValueError):
    code = "InvalidPartition"


class InvalidBlock(BruhatError, ValueError):
    code = "InvalidBlock"


class IndexOutOfRange(BruhatError, IndexError):
    code = "IndexOutOfRange"


class InvalidSplitting(BruhatError, ValueError):
    code = "InvalidSplitting"


class NotAnAutomorphism(BruhatError, ValueError):
    code = "NotAnAutomorphism"


class InvalidConfiguration(BruhatError, ValueError):
    code = "InvalidConfiguration"


class NotBlockDiagonal(BruhatError, ValueError):
    code = "NotBlockDiagonal"


class DimensionMismatch(BruhatError, ValueError):
    code = "DimensionMismatch"


class EqualWeights(BruhatError, ValueError):
    code = "EqualWeights"


class InvalidWeights(BruhatError, ValueError):
    code = "InvalidWeights"


class IncompatibleData(BruhatError, ValueError):
    code = "IncompatibleData"


class AnchorsNotInCell(BruhatError, ValueError):
    code = "AnchorsNotInCell"


class NoStrongWitness(BruhatError, ValueError):
    code = "NoStrongWitness"


class Resonant(BruhatError, ArithmeticError):
    code = "Resonant"


class NotRank2(BruhatError, ValueError):
    code = "NotRank2"


class NotInGauge(BruhatError, ValueError):
    code = "NotInGauge"


class CoincidentFlags(BruhatError, ValueError):
    code = "CoincidentFlags"


class NoAdaptedConnection(BruhatError, ValueError):
    code = "NoAdaptedConnection"
