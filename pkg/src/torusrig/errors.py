"""Exception types shared across the package."""


class TorusRigError(Exception):
    """Base class for all library errors."""


class GraphFormatError(TorusRigError):
    """Malformed graph, configuration, or sequence data."""


class GraphNotConnectedError(TorusRigError):
    """Operation requires a connected orbit graph."""


class InvalidCycleError(TorusRigError):
    """A closed walk is not closed, or steps are not incident."""


class InvalidTreeError(TorusRigError):
    """Edge set is not a spanning tree of the graph."""


class NotSparseError(TorusRigError):
    """Operation requires a (2,2)-sparse orbit graph."""


class OracleTooLargeError(TorusRigError):
    """Exhaustive subgraph enumeration refused beyond its size bound."""


class InvalidMoveError(TorusRigError):
    """A construction move violates its gain or incidence constraints."""


class WrongDegreeError(InvalidMoveError):
    """Vertex does not have the degree the reduction requires."""


class InfeasibleSplitError(InvalidMoveError):
    """No reverse edge-split candidate keeps the graph tight and constructive.

    Signals that the input violated the count or gain hypotheses."""


class NotMinimallyRigidError(TorusRigError):
    """Decomposition requires a graph that passes the combinatorial check."""


class ReplayError(TorusRigError):
    """A move in a construction sequence failed; carries its 1-based index."""

    def __init__(self, index: int, message: str):
        super().__init__(f"move {index}: {message}")
        self.index = index
