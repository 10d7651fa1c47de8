"""Exception types.

``InputError`` subclasses map to CLI exit code 2, ``NumericError`` subclasses
to exit code 3.
"""


class MixClustError(ValueError):
    pass


class InputError(MixClustError):
    pass


class NumericError(MixClustError):
    pass


class EmptyColumn(InputError):
    pass


class ConstantColumn(InputError):
    pass


class LevelOutOfRange(InputError):
    pass


class BadTupleWidth(InputError):
    pass


class MissingValue(InputError):
    pass


class SchemaMismatch(InputError):
    pass


class OutOfHingeRange(InputError):
    pass


class DegenerateHinges(InputError):
    pass


class LengthMismatch(InputError):
    pass


class BadK(InputError):
    pass


class ConstantContinuousColumn(InputError):
    pass


class BadOmega(InputError):
    pass


class NoPreimage(NumericError):
    pass


class NegativeEntry(NumericError):
    pass


class ZeroMarginal(NumericError):
    pass


class InfeasibleDesign(NumericError):
    pass


class DegenerateGainsWarning(RuntimeWarning):
    pass


class ZeroVarianceBlockWarning(UserWarning):
    pass
