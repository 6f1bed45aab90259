"""Torus geometry: lattice matrices, vertex configurations, derived windows."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import GraphFormatError
from .gains import GainVector, PeriodicOrbitGraph

Point = tuple[Fraction, Fraction]

# Fixed sampling grid for generic configurations: numerators are drawn
# uniformly from [1, 2**31) over this denominator.
SAMPLE_DENOMINATOR = 2**31


@dataclass(frozen=True)
class LatticeMatrix:
    """Lower-triangular 2x2 lattice matrix with rows (x, 0) and (y1, y2).

    The rows generate the translation group of the torus; both must be
    nonzero in their pivot entry so the rows are independent.
    """

    x: Fraction
    y1: Fraction
    y2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y1", Fraction(self.y1))
        object.__setattr__(self, "y2", Fraction(self.y2))
        if self.x == 0 or self.y2 == 0:
            raise GraphFormatError("lattice rows must be independent: x != 0, y2 != 0")

    @classmethod
    def identity(cls) -> "LatticeMatrix":
        return cls(Fraction(1), Fraction(0), Fraction(1))

    def rows(self) -> tuple[Point, Point]:
        return ((self.x, Fraction(0)), (self.y1, self.y2))

    def displacement(self, z: GainVector) -> Point:
        """Row vector z times the lattice matrix: z1*(x,0) + z2*(y1,y2)."""
        return (z.a * self.x + z.b * self.y1, z.b * self.y2)


@dataclass(frozen=True)
class Configuration:
    """Rational vertex positions on the torus plus the lattice matrix.

    Positions are expected in [0,1)^2; coincident positions are allowed and
    simply produce lower matrix ranks (never rejected here).
    """

    positions: dict[int, Point]
    lattice: LatticeMatrix

    def __post_init__(self):
        fixed = {
            int(v): (Fraction(p[0]), Fraction(p[1]))
            for v, p in self.positions.items()
        }
        object.__setattr__(self, "positions", fixed)

    def position(self, v: int) -> Point:
        try:
            return self.positions[v]
        except KeyError:
            raise GraphFormatError(f"configuration has no position for vertex {v}") from None

    def covers(self, graph: PeriodicOrbitGraph) -> bool:
        return all(v in self.positions for v in graph.vertices())


def random_configuration(
    graph: PeriodicOrbitGraph,
    rng: random.Random,
    lattice: LatticeMatrix | None = None,
) -> Configuration:
    """Sample a configuration with coordinates n/2^31, n uniform in [1, 2^31).

    With overwhelming probability such a draw avoids the measure-zero set of
    degenerate positions; callers take the max rank over several draws."""
    lattice = lattice or LatticeMatrix.identity()
    positions = {
        v: (
            Fraction(rng.randrange(1, SAMPLE_DENOMINATOR), SAMPLE_DENOMINATOR),
            Fraction(rng.randrange(1, SAMPLE_DENOMINATOR), SAMPLE_DENOMINATOR),
        )
        for v in graph.vertices()
    }
    return Configuration(positions=positions, lattice=lattice)


@dataclass(frozen=True)
class DerivedVertex:
    vertex: int
    cell: tuple[int, int]
    position: Point


@dataclass(frozen=True)
class DerivedEdge:
    edge_id: int
    tail: tuple[int, tuple[int, int]]
    head: tuple[int, tuple[int, int]]


@dataclass(frozen=True)
class DerivedWindow:
    """Finite portion of the infinite derived framework."""

    vertices: tuple[DerivedVertex, ...]
    edges: tuple[DerivedEdge, ...]


def derive_window(
    graph: PeriodicOrbitGraph,
    config: Configuration,
    window: tuple[Iterable[int], Iterable[int]],
) -> DerivedWindow:
    """Expand the orbit graph over a finite window of lattice cells.

    A vertex copy (v, z) sits at p(v) + z*L0.  An edge copy joins (tail, z)
    to (head, z + gain) and is emitted only when both cells lie inside the
    window.
    """
    if not config.covers(graph):
        raise GraphFormatError("configuration does not cover all vertices")
    cells = [(za, zb) for za in window[0] for zb in window[1]]
    cell_set = set(cells)
    vertices = []
    for cell in cells:
        z = GainVector(*cell)
        dx, dy = config.lattice.displacement(z)
        for v in graph.vertices():
            px, py = config.position(v)
            vertices.append(DerivedVertex(v, cell, (px + dx, py + dy)))
    edges = []
    for cell in cells:
        for e in graph.edges:
            head_cell = (cell[0] + e.gain.a, cell[1] + e.gain.b)
            if head_cell in cell_set:
                edges.append(DerivedEdge(e.id, (e.tail, cell), (e.head, head_cell)))
    return DerivedWindow(vertices=tuple(vertices), edges=tuple(edges))
