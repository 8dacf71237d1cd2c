"""Exception types shared across the package."""


class MinorkitError(Exception):
    """Base class for all package errors."""


class ParseError(MinorkitError):
    """Malformed input file or rational literal."""


class DimensionMismatch(MinorkitError):
    """Operands live in different dimensions."""


class VertexMismatch(MinorkitError):
    """Representation does not cover exactly the graph's vertex set."""


class MissingWitness(MinorkitError):
    """No stored exclusivity witness for the requested vertex."""


class TooLarge(MinorkitError):
    """Instance exceeds the configured exact-computation gate."""


class OracleTooLarge(TooLarge):
    """A brute-force oracle was asked to handle more than its bound."""


class InvalidEdit(MinorkitError):
    """Edit operation targets a vertex or edge that is not present."""


class Disconnected(MinorkitError):
    """Operation requires a connected graph."""


class NotATree(MinorkitError):
    """Builder requires a tree input."""


class TooSmall(MinorkitError):
    """Builder requires a larger instance."""


class BadNesting(MinorkitError):
    """Stable-set neighbourhood sizes must be non-increasing and fit the clique."""


class InvalidInput(MinorkitError):
    """A lift was handed a representation that fails verification."""


class BadSnapshot(MinorkitError):
    """Neighbourhood snapshot is inconsistent with the target graph."""


class SequenceMismatch(MinorkitError):
    """Edit sequence does not replay to its recorded base graph."""


class MissingGain(MinorkitError):
    """Flow operation needs a gain on every edge."""


class Inconsistent(MinorkitError):
    """Flow vector implies conflicting vertex states."""


class InfeasibleSpec(MinorkitError):
    """Attack target set admits no stealth vector."""


class ImproperColoring(MinorkitError):
    """Adjacent component-graph nodes share a colour."""


class BadBounds(MinorkitError):
    """Gain bounds must satisfy 0 < eps1 <= eps2."""


class EmptyF(MinorkitError):
    """Operation needs a non-empty target edge set."""


class ScheduleStalled(MinorkitError):
    """The lambda schedule cannot reach the requested gap for this component structure."""
