"""Exception hierarchy.

Every error carries the name of the module that raised it so the CLI can
report ``[module] ErrorName: message``. ``InputError`` covers bad arguments
and malformed data; ``NumericalError`` covers failures that only show up
once the numbers are computed.
"""


class PWGraphError(Exception):
    module = "pwgraph"


class InputError(PWGraphError, ValueError):
    pass


class NumericalError(PWGraphError, ArithmeticError):
    pass


# graph-core
class GraphError(InputError):
    module = "graph-core"


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class Disconnected(GraphError):
    pass


class IndexOutOfRange(GraphError):
    pass


class TooSmall(GraphError):
    pass


class LengthMismatch(GraphError):
    pass


class EdgeListFormatError(GraphError):
    pass


# spectral
class TooLarge(InputError):
    module = "spectral"


class ConvergenceFailure(NumericalError):
    module = "spectral"


class SingularPower(NumericalError):
    module = "spectral"


class ZeroSignal(InputError):
    module = "spectral"


# spline
class SingularOperator(NumericalError):
    module = "spline"


class EmptyConstraintSet(InputError):
    module = "spline"


class DuplicateVertex(InputError):
    module = "spline"


class IllConditioned(NumericalError):
    module = "spline"


class NotAnInterpolant(InputError):
    module = "spline"


# sampling
class EmptySet(InputError):
    module = "sampling"


class NoFiniteConstant(NumericalError):
    module = "sampling"


class InvalidSize(InputError):
    module = "sampling"


class OverlappingClosures(InputError):
    module = "sampling"


class InvalidLambda(InputError):
    module = "sampling"


class OutOfRange(InputError):
    module = "sampling"


class PreconditionViolated(NumericalError):
    module = "sampling"


# reconstruct
class InfeasibleBandwidth(NumericalError):
    module = "reconstruct"


class GammaNotLessThanOne(NumericalError):
    module = "reconstruct"


class EmptySampleSet(InputError):
    module = "reconstruct"


class EmptyBand(InputError):
    module = "reconstruct"


# cli
class ConfigInvalid(InputError):
    module = "cli"
