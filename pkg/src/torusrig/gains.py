"""Periodic orbit graphs: directed multigraphs with Z^2 gains on edges.

A graph here is a quotient of an infinite periodic graph by its translation
group.  Each edge carries a gain in Z^2 recording which translate of the head
vertex the edge actually reaches.  Reversing an edge negates its gain, so one
stored orientation per edge suffices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, Sequence

from .errors import (
    GraphFormatError,
    GraphNotConnectedError,
    InvalidCycleError,
    InvalidTreeError,
)


@dataclass(frozen=True, order=True)
class GainVector:
    """Element of Z^2, in units of lattice periods."""

    a: int
    b: int

    def __add__(self, other: "GainVector") -> "GainVector":
        return GainVector(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "GainVector") -> "GainVector":
        return GainVector(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "GainVector":
        return GainVector(-self.a, -self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def as_tuple(self) -> tuple[int, int]:
        return (self.a, self.b)


ZERO_GAIN = GainVector(0, 0)


@dataclass(frozen=True)
class DirectedGainEdge:
    """Edge {tail, head; gain}; identical to {head, tail; -gain}."""

    id: int
    tail: int
    head: int
    gain: GainVector

    def reversed(self) -> "DirectedGainEdge":
        return DirectedGainEdge(self.id, self.head, self.tail, -self.gain)

    def is_loop(self) -> bool:
        return self.tail == self.head

    def other_end(self, v: int) -> int:
        if v == self.tail:
            return self.head
        if v == self.head:
            return self.tail
        raise ValueError(f"vertex {v} not incident to edge {self.id}")

    def gain_from(self, v: int) -> GainVector:
        """Gain seen when traversing the edge out of vertex ``v``.

        Loops are traversed in their stored direction."""
        if v == self.tail:
            return self.gain
        if v == self.head:
            return -self.gain
        raise ValueError(f"vertex {v} not incident to edge {self.id}")


@dataclass(frozen=True)
class PeriodicOrbitGraph:
    """Directed multigraph on vertices 1..vertex_count with gains in Z^2.

    Parallel edges and loops are allowed.  The direction of an edge only
    fixes the sign of its gain; connectivity and degrees treat the graph as
    undirected.  Instances are immutable; all operations return new graphs.
    """

    vertex_count: int
    edges: tuple[DirectedGainEdge, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise GraphFormatError("vertex_count must be at least 1")
        object.__setattr__(self, "edges", tuple(self.edges))
        seen: set[int] = set()
        for e in self.edges:
            if e.id in seen:
                raise GraphFormatError(f"duplicate edge id {e.id}")
            seen.add(e.id)
            for v in (e.tail, e.head):
                if not 1 <= v <= self.vertex_count:
                    raise GraphFormatError(
                        f"edge {e.id} endpoint {v} outside 1..{self.vertex_count}"
                    )

    # -- basic queries ----------------------------------------------------

    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    @cached_property
    def _edge_by_id(self) -> dict[int, DirectedGainEdge]:
        return {e.id: e for e in self.edges}

    def edge(self, edge_id: int) -> DirectedGainEdge:
        try:
            return self._edge_by_id[edge_id]
        except KeyError:
            raise GraphFormatError(f"no edge with id {edge_id}") from None

    @cached_property
    def _incidence(self) -> dict[int, tuple[DirectedGainEdge, ...]]:
        inc: dict[int, list[DirectedGainEdge]] = {v: [] for v in self.vertices()}
        for e in self.edges:
            inc[e.tail].append(e)
            if not e.is_loop():
                inc[e.head].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def incident_edges(self, v: int) -> tuple[DirectedGainEdge, ...]:
        return self._incidence[v]

    def degree(self, v: int) -> int:
        """Incident edge-ends; a loop contributes 2."""
        return sum(2 if e.is_loop() else 1 for e in self._incidence[v])

    def next_edge_id(self) -> int:
        return max((e.id for e in self.edges), default=0) + 1

    def induced_edges(self, vertex_set: Iterable[int]) -> tuple[DirectedGainEdge, ...]:
        vs = set(vertex_set)
        return tuple(e for e in self.edges if e.tail in vs and e.head in vs)

    def is_connected(self) -> bool:
        if self.vertex_count == 1:
            return True
        reached = {1}
        queue = deque([1])
        while queue:
            v = queue.popleft()
            for e in self._incidence[v]:
                w = e.other_end(v)
                if w not in reached:
                    reached.add(w)
                    queue.append(w)
        return len(reached) == self.vertex_count

    def components(self) -> list[frozenset[int]]:
        remaining = set(self.vertices())
        comps = []
        while remaining:
            start = min(remaining)
            comp = {start}
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for e in self._incidence[v]:
                    w = e.other_end(v)
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            comps.append(frozenset(comp))
            remaining -= comp
        return comps


def single_vertex_graph() -> PeriodicOrbitGraph:
    return PeriodicOrbitGraph(1, ())


# -- spanning trees and potentials -----------------------------------------


@dataclass(frozen=True)
class SpanningTreeData:
    """A rooted spanning tree with the net gain from the root to each vertex.

    potentials[root] == (0,0); for a tree edge v->w with gain g,
    potentials[w] == potentials[v] + g.
    """

    root: int
    tree_edges: frozenset[int]
    potentials: dict[int, GainVector] = field(compare=False)

    @classmethod
    def from_edges(
        cls, graph: PeriodicOrbitGraph, root: int, tree_edge_ids: Iterable[int]
    ) -> "SpanningTreeData":
        ids = frozenset(tree_edge_ids)
        if len(ids) != graph.vertex_count - 1:
            raise InvalidTreeError(
                f"{len(ids)} edges cannot span {graph.vertex_count} vertices"
            )
        potentials = {root: ZERO_GAIN}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for e in graph.incident_edges(v):
                if e.id in ids and not e.is_loop():
                    w = e.other_end(v)
                    if w not in potentials:
                        potentials[w] = potentials[v] + e.gain_from(v)
                        queue.append(w)
        if len(potentials) != graph.vertex_count:
            raise InvalidTreeError("edge set does not span the graph")
        return cls(root=root, tree_edges=ids, potentials=potentials)


def bfs_spanning_tree(graph: PeriodicOrbitGraph, root: int = 1) -> SpanningTreeData:
    """Deterministic spanning tree: breadth-first from the root.

    Ties among edges out of the current vertex are broken by smallest
    neighbour id, then lexicographically smallest traversal gain, then
    smallest edge id.  The gain tie-break makes the chosen edge set invariant
    under re-gauging, which t_gain_canonical_form relies on.
    """
    if not graph.is_connected():
        raise GraphNotConnectedError("spanning tree requires a connected graph")
    potentials = {root: ZERO_GAIN}
    tree: set[int] = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        candidates = [e for e in graph.incident_edges(v) if not e.is_loop()]
        candidates.sort(key=lambda e: (e.other_end(v), e.gain_from(v), e.id))
        for e in candidates:
            w = e.other_end(v)
            if w not in potentials:
                potentials[w] = potentials[v] + e.gain_from(v)
                tree.add(e.id)
                queue.append(w)
    return SpanningTreeData(root=root, tree_edges=frozenset(tree), potentials=potentials)


# -- cycles and gain spaces -------------------------------------------------


def net_cycle_gain(graph: PeriodicOrbitGraph, walk: Sequence[int]) -> GainVector:
    """Signed sum of gains along a closed walk.

    ``walk`` alternates vertex and edge ids: [v0, e1, v1, ..., ek, v0].
    An edge traversed head-to-tail contributes its negated gain.  A loop
    step contributes the stored gain (pass the reversed edge to traverse a
    loop backwards).
    """
    if len(walk) % 2 == 0 or len(walk) < 1:
        raise InvalidCycleError("walk must alternate v0, e1, v1, ..., ek, vk")
    if walk[0] != walk[-1]:
        raise InvalidCycleError(f"walk is not closed: {walk[0]} != {walk[-1]}")
    total = ZERO_GAIN
    for i in range(1, len(walk), 2):
        prev_v, eid, next_v = walk[i - 1], walk[i], walk[i + 1]
        e = graph.edge(eid)
        if e.is_loop():
            if prev_v != e.tail or next_v != e.tail:
                raise InvalidCycleError(f"loop edge {eid} not at vertex {prev_v}")
            total = total + e.gain
        elif e.tail == prev_v and e.head == next_v:
            total = total + e.gain
        elif e.head == prev_v and e.tail == next_v:
            total = total - e.gain
        else:
            raise InvalidCycleError(
                f"edge {eid} does not join {prev_v} to {next_v}"
            )
    return total


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf_basis(generators: Iterable[GainVector]) -> tuple[GainVector, ...]:
    """Hermite-normal-form basis of the subgroup of Z^2 the generators span.

    Canonical form: rank 2 gives ((x, 0), (c, d)) with x > 0, d > 0 and
    0 <= c < x; rank 1 gives the unique generator with positive second
    component (or positive first if the second is zero); rank 0 is empty.
    Equal subgroups therefore compare equal.
    """
    vecs = [g.as_tuple() for g in generators if not g.is_zero()]
    if not vecs:
        return ()
    # Combine generators with nonzero second component into one vector
    # (c, d) where d = gcd of all second components.
    c, d = 0, 0
    for p, q in vecs:
        if q == 0:
            continue
        if d == 0:
            c, d = (p, q) if q > 0 else (-p, -q)
        else:
            g, s, t = _egcd(d, q)
            c, d = s * c + t * p, g
    if d == 0:
        x = 0
        for p, _q in vecs:
            x = gcd(x, p)
        return (GainVector(x, 0),)
    # Subtracting multiples of (c, d) drops every generator onto the axis.
    x = 0
    for p, q in vecs:
        x = gcd(x, p - (q // d) * c)
    if x == 0:
        return (GainVector(c, d),)
    return (GainVector(x, 0), GainVector(c % x, d))


@dataclass(frozen=True)
class GainSpace:
    """Subgroup of Z^2 of net gains on cycles, in Hermite normal form."""

    basis: tuple[GainVector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def from_generators(cls, generators: Iterable[GainVector]) -> "GainSpace":
        return cls(basis=hnf_basis(generators))


def fundamental_cycle_gains(
    vertex_ids: Iterable[int], edges: Iterable[DirectedGainEdge]
) -> list[GainVector]:
    """Net gains of a fundamental cycle basis of the subgraph given by
    ``vertex_ids`` and ``edges`` (any vertex labels; may be disconnected).

    Computed per component: a spanning forest assigns each vertex the net
    gain from its component root, and each non-forest edge contributes
    potential[tail] + gain - potential[head].
    """
    vs = set(vertex_ids)
    incidence: dict[int, list[DirectedGainEdge]] = {v: [] for v in vs}
    edge_list = list(edges)
    for e in edge_list:
        if e.tail not in vs or e.head not in vs:
            raise GraphFormatError(f"edge {e.id} leaves the vertex set")
        incidence[e.tail].append(e)
        if not e.is_loop():
            incidence[e.head].append(e)
    potential: dict[int, GainVector] = {}
    forest: set[int] = set()
    for start in sorted(vs):
        if start in potential:
            continue
        potential[start] = ZERO_GAIN
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for e in incidence[v]:
                if e.is_loop():
                    continue
                w = e.other_end(v)
                if w not in potential:
                    potential[w] = potential[v] + e.gain_from(v)
                    forest.add(e.id)
                    queue.append(w)
    return [
        potential[e.tail] + e.gain - potential[e.head]
        for e in edge_list
        if e.id not in forest
    ]


def gain_space(graph: PeriodicOrbitGraph) -> GainSpace:
    """Gain space of the graph: subgroup of Z^2 generated by net cycle gains.

    For a disconnected graph the per-component subgroups are summed.
    """
    gens = fundamental_cycle_gains(graph.vertices(), graph.edges)
    return GainSpace.from_generators(gens)


# -- re-gauging -------------------------------------------------------------


def t_gain_procedure(
    graph: PeriodicOrbitGraph, tree: SpanningTreeData
) -> PeriodicOrbitGraph:
    """Re-gauge all edge gains through the spanning tree's potentials.

    Every tree edge ends up with gain (0,0); the net gain of every cycle is
    unchanged.  Topology, edge ids, and orientations are preserved.
    """
    if not graph.is_connected():
        raise GraphNotConnectedError("T-gain procedure requires a connected graph")
    pot = tree.potentials
    if set(pot) != set(graph.vertices()):
        raise InvalidTreeError("tree potentials do not cover the graph")
    new_edges = tuple(
        DirectedGainEdge(e.id, e.tail, e.head, pot[e.tail] + e.gain - pot[e.head])
        for e in graph.edges
    )
    return PeriodicOrbitGraph(graph.vertex_count, new_edges)


def t_gain_canonical_form(graph: PeriodicOrbitGraph) -> PeriodicOrbitGraph:
    """Re-gauge through the deterministic BFS tree rooted at vertex 1.

    Two orbit graphs on the same underlying multigraph are T-gain equivalent
    exactly when their canonical forms have equal edge multisets (compare
    with canonical_edge_multiset).  Idempotent.
    """
    return t_gain_procedure(graph, bfs_spanning_tree(graph, root=1))


def canonical_edge_multiset(
    graph: PeriodicOrbitGraph,
) -> tuple[tuple[int, int, tuple[int, int]], ...]:
    """Orientation- and id-insensitive edge multiset of the canonical form.

    Each edge is normalised to (min end, max end, gain as traversed from the
    min end); loops normalise the gain sign.  Sorted tuple, so equality is
    multiset equality.
    """
    canon = t_gain_canonical_form(graph)
    normalised = []
    for e in canon.edges:
        if e.is_loop():
            g = e.gain if e.gain >= ZERO_GAIN else -e.gain
            normalised.append((e.tail, e.head, g.as_tuple()))
        elif e.tail <= e.head:
            normalised.append((e.tail, e.head, e.gain.as_tuple()))
        else:
            normalised.append((e.head, e.tail, (-e.gain).as_tuple()))
    return tuple(sorted(normalised))


def t_gain_equivalent(a: PeriodicOrbitGraph, b: PeriodicOrbitGraph) -> bool:
    """True when the canonical forms carry identical edge multisets."""
    if a.vertex_count != b.vertex_count or len(a.edges) != len(b.edges):
        return False
    return canonical_edge_multiset(a) == canonical_edge_multiset(b)
