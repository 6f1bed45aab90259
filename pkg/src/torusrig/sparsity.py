"""Counting side of periodic rigidity: (2,l)-sparsity, tight subgraphs,
constructive gain assignments, and the combinatorial minimal-rigidity test.

The decisive fact: a tight graph is generically minimally rigid on the fixed
torus exactly when every (2,2)-tight subgraph contains a cycle with nonzero
net gain.  Tight subgraphs of a sparse graph are always induced and
connected, so witnesses are vertex sets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .errors import (
    GraphNotConnectedError,
    NotSparseError,
    OracleTooLargeError,
)
from .gains import (
    DirectedGainEdge,
    GainSpace,
    PeriodicOrbitGraph,
    fundamental_cycle_gains,
)

EXHAUSTIVE_VERTEX_BOUND = 14


@dataclass(frozen=True)
class SparsityParams:
    """Only (2,2) and (2,3) are meaningful here."""

    k: int = 2
    l: int = 2

    def __post_init__(self):
        if self.k != 2 or self.l not in (2, 3):
            raise ValueError("supported sparsity counts: (2,2) and (2,3)")


class PebbleGame:
    """Incremental (2,l)-sparsity oracle (Lee-Streinu style).

    Every vertex starts with 2 pebbles.  Accepting an edge consumes one
    pebble from an endpoint and orients the edge away from it; pebbles are
    recovered by reversing directed paths.  An edge is accepted iff the
    accepted set stays (2,l)-sparse.  On rejection the set of vertices
    reachable from the endpoints is the minimal blocked region: its induced
    accepted edges number exactly 2|W| - l.
    """

    def __init__(self, vertex_count: int, l: int):
        self.k = 2
        self.l = l
        self.n = vertex_count
        self.pebbles = [self.k] * (vertex_count + 1)  # index 0 unused
        self.out: dict[int, set[int]] = {v: set() for v in range(1, vertex_count + 1)}
        self.head: dict[int, int] = {}  # edge id -> current head
        self.tail: dict[int, int] = {}
        self.accepted: list[int] = []

    def _reach(self, roots: tuple[int, ...]) -> tuple[Optional[list[int]], set[int]]:
        """DFS along current orientations.  Returns (path to a free pebble
        outside the roots, visited set).  path[0] is a root vertex."""
        parent: dict[int, tuple[int, int]] = {}  # vertex -> (prev vertex, edge id)
        visited = set(roots)
        stack = list(roots)
        while stack:
            v = stack.pop()
            for eid in self.out[v]:
                w = self.head[eid]
                if w in visited:
                    continue
                visited.add(w)
                parent[w] = (v, eid)
                if self.pebbles[w] > 0:
                    path = [w]
                    while path[-1] in parent:
                        path.append(parent[path[-1]][0])
                    path.reverse()
                    return path, visited
                stack.append(w)
        return None, visited

    def _move_pebble(self, path: list[int]) -> None:
        # Reverse every edge along the path; the pebble moves to path[0].
        for a, b in zip(path, path[1:]):
            eid = next(e for e in self.out[a] if self.head[e] == b)
            self.out[a].discard(eid)
            self.out[b].add(eid)
            self.tail[eid], self.head[eid] = b, a
        self.pebbles[path[-1]] -= 1
        self.pebbles[path[0]] += 1

    def _collect(self, u: int, v: int, need: int) -> tuple[bool, set[int]]:
        roots = (u,) if u == v else (u, v)
        while True:
            have = self.pebbles[u] if u == v else self.pebbles[u] + self.pebbles[v]
            if have >= need:
                return True, set()
            path, visited = self._reach(roots)
            if path is None:
                return False, visited
            self._move_pebble(path)

    def try_insert(self, edge: DirectedGainEdge) -> tuple[bool, frozenset[int]]:
        """Attempt to accept an edge.  Returns (accepted, blocked_region);
        the region is empty on success."""
        u, v = edge.tail, edge.head
        ok, region = self._collect(u, v, self.l + 1)
        if not ok:
            return False, frozenset(region)
        payer = u if self.pebbles[u] > 0 else v
        other = v if payer == u else u
        self.pebbles[payer] -= 1
        self.out[payer].add(edge.id)
        self.tail[edge.id], self.head[edge.id] = payer, other
        self.accepted.append(edge.id)
        return True, frozenset()


@dataclass(frozen=True)
class PebbleGameReport:
    sparse: bool
    tight: bool
    rejected: tuple[int, ...]


def pebble_game_sparse(
    graph: PeriodicOrbitGraph, params: SparsityParams = SparsityParams()
) -> PebbleGameReport:
    """Run one (2,l) pebble game over the edges in ascending id order.

    sparse: every subgraph satisfies |E'| <= 2|V'| - l (no edge rejected).
    tight: additionally |E| = 2|V| - l.  Loops can never collect l+1 > 2
    pebbles on one vertex, so they are always rejected.
    """
    game = PebbleGame(graph.vertex_count, params.l)
    rejected = []
    for e in sorted(graph.edges, key=lambda e: e.id):
        accepted, _ = game.try_insert(e)
        if not accepted:
            rejected.append(e.id)
    sparse = not rejected
    tight = sparse and len(graph.edges) == 2 * graph.vertex_count - params.l
    return PebbleGameReport(sparse=sparse, tight=tight, rejected=tuple(rejected))


@dataclass(frozen=True)
class TightSubgraph:
    """Vertex set whose induced subgraph has exactly 2|V'| - 2 edges."""

    vertices: frozenset[int]
    edge_ids: tuple[int, ...]


def _is_connected_induced(
    graph: PeriodicOrbitGraph, vertex_set: frozenset[int]
) -> bool:
    start = next(iter(vertex_set))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for e in graph.incident_edges(v):
            w = e.other_end(v)
            if w in vertex_set and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(vertex_set)


def enumerate_tight_subgraphs(
    graph: PeriodicOrbitGraph,
    params: SparsityParams = SparsityParams(),
    max_vertices: int = EXHAUSTIVE_VERTEX_BOUND,
) -> list[TightSubgraph]:
    """Brute-force oracle: all connected vertex subsets of size >= 2 whose
    induced edge count equals 2|V'| - l, ascending by size then lexicographic.

    Singletons are vacuously tight for l = 2 and are omitted (they carry no
    cycle and never act as witnesses).
    """
    n = graph.vertex_count
    if n > max_vertices:
        raise OracleTooLargeError(
            f"{n} vertices exceeds the exhaustive bound {max_vertices}"
        )
    out = []
    for size in range(2, n + 1):
        for subset in combinations(graph.vertices(), size):
            vs = frozenset(subset)
            induced = graph.induced_edges(vs)
            if len(induced) == params.k * size - params.l and _is_connected_induced(
                graph, vs
            ):
                out.append(
                    TightSubgraph(vertices=vs, edge_ids=tuple(e.id for e in induced))
                )
    return out


@dataclass(frozen=True)
class ConstructiveReport:
    constructive: bool
    witness: Optional[TightSubgraph]  # a tight subgraph with rank-0 gain space


def _subgraph_gain_rank(
    vertices: Iterable[int], edges: Iterable[DirectedGainEdge]
) -> int:
    return GainSpace.from_generators(fundamental_cycle_gains(vertices, edges)).rank


def _witness_from_region(
    graph: PeriodicOrbitGraph, region: frozenset[int]
) -> TightSubgraph:
    induced = graph.induced_edges(region)
    return TightSubgraph(vertices=region, edge_ids=tuple(e.id for e in induced))


def _require_sparse_connected(graph: PeriodicOrbitGraph) -> None:
    if not graph.is_connected():
        raise GraphNotConnectedError("constructive check requires a connected graph")
    report = pebble_game_sparse(graph, SparsityParams(2, 2))
    if not report.sparse:
        raise NotSparseError(
            f"graph is not (2,2)-sparse; rejected edges {list(report.rejected)}"
        )


def is_constructive(
    graph: PeriodicOrbitGraph, method: str = "fast"
) -> ConstructiveReport:
    """Does every (2,2)-tight subgraph contain a cycle with nonzero net gain?

    Requires a connected, (2,2)-sparse graph (raises otherwise).

    fast: one (2,3) pebble game; each rejected edge closes a blocked region
    W whose accepted edges plus the rejected edge form the full induced
    subgraph on W with 2|W| - 2 edges.  That subgraph fails exactly when its
    gain space is trivial.  A minimal rank-0 tight subgraph is always caught
    when its last edge arrives, because all of its other edges were accepted
    and the reachability region cannot escape it.

    exhaustive: test the gain space of every enumerated tight subgraph.
    Both methods agree; the exhaustive path is the oracle.
    """
    _require_sparse_connected(graph)
    if method == "exhaustive":
        return _is_constructive_exhaustive(graph)
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    game = PebbleGame(graph.vertex_count, l=3)
    accepted: dict[int, DirectedGainEdge] = {}
    for e in sorted(graph.edges, key=lambda e: e.id):
        ok, region = game.try_insert(e)
        if ok:
            accepted[e.id] = e
            continue
        region_edges = [
            f for f in accepted.values() if f.tail in region and f.head in region
        ]
        region_edges.append(e)
        if _subgraph_gain_rank(region, region_edges) == 0:
            return ConstructiveReport(
                constructive=False, witness=_witness_from_region(graph, region)
            )
    return ConstructiveReport(constructive=True, witness=None)


def _is_constructive_exhaustive(graph: PeriodicOrbitGraph) -> ConstructiveReport:
    for tight in enumerate_tight_subgraphs(graph, SparsityParams(2, 2)):
        edges = [graph.edge(eid) for eid in tight.edge_ids]
        if _subgraph_gain_rank(tight.vertices, edges) == 0:
            return ConstructiveReport(constructive=False, witness=tight)
    return ConstructiveReport(constructive=True, witness=None)


# -- Nash-Williams decomposition --------------------------------------------


@dataclass(frozen=True)
class TreeDecomposition:
    """Two edge-disjoint spanning trees covering the edge set."""

    first: frozenset[int]
    second: frozenset[int]


def nash_williams_decompose(
    graph: PeriodicOrbitGraph,
) -> Optional[TreeDecomposition]:
    """Partition the edges into two spanning trees; None when impossible.

    Succeeds exactly on (2,2)-tight graphs.  Uses matroid-union style
    augmentation: an edge that closes a cycle in both forests may evict a
    cycle edge to the other forest, searched breadth-first over
    (edge, target forest) states.
    """
    n = graph.vertex_count
    if len(graph.edges) != 2 * n - 2:
        return None
    color: dict[int, int] = {}
    adjacency: list[dict[int, list[tuple[int, int]]]] = [
        {v: [] for v in graph.vertices()} for _ in range(2)
    ]

    def forest_path(c: int, a: int, b: int) -> Optional[list[int]]:
        # Edge ids along the unique forest path a..b, or None if disconnected.
        if a == b:
            return []
        prev: dict[int, tuple[int, int]] = {}
        seen = {a}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for y, eid in adjacency[c][x]:
                if y in seen:
                    continue
                seen.add(y)
                prev[y] = (x, eid)
                if y == b:
                    path = []
                    cur = b
                    while cur != a:
                        cur, eid2 = prev[cur]
                        path.append(eid2)
                    return path
                queue.append(y)
        return None

    def place(eid: int, c: int) -> None:
        e = graph.edge(eid)
        color[eid] = c
        adjacency[c][e.tail].append((e.head, eid))
        adjacency[c][e.head].append((e.tail, eid))

    def remove(eid: int) -> None:
        c = color.pop(eid)
        e = graph.edge(eid)
        adjacency[c][e.tail].remove((e.head, eid))
        adjacency[c][e.head].remove((e.tail, eid))

    for edge in sorted(graph.edges, key=lambda e: e.id):
        if edge.is_loop():
            return None
        # BFS over (edge, forest) states; predecessor links record which
        # placement each eviction would unblock.
        start_states = [(edge.id, 0), (edge.id, 1)]
        pred: dict[tuple[int, int], Optional[tuple[int, int]]] = {
            s: None for s in start_states
        }
        queue = deque(start_states)
        goal = None
        while queue:
            eid, c = queue.popleft()
            e = graph.edge(eid)
            cyc = forest_path(c, e.tail, e.head)
            if cyc is None:
                goal = (eid, c)
                break
            for blocker in cyc:
                state = (blocker, 1 - color[blocker])
                if state not in pred:
                    pred[state] = (eid, c)
                    queue.append(state)
        if goal is None:
            return None
        # Unwind: move each edge on the predecessor chain into its target.
        eid, c = goal
        while True:
            if eid in color:
                remove(eid)
            place(eid, c)
            parent = pred[(eid, c)]
            if parent is None:
                break
            eid, c = parent
    first = frozenset(eid for eid, c in color.items() if c == 0)
    second = frozenset(eid for eid, c in color.items() if c == 1)
    if len(first) != n - 1 or len(second) != n - 1:
        return None
    return TreeDecomposition(first=first, second=second)


# -- combined combinatorial check --------------------------------------------


@dataclass(frozen=True)
class LamanReport:
    minimally_rigid: bool
    reason: str  # ok | disconnected | count-failure | tight-failure | non-constructive
    witness: Optional[TightSubgraph] = None
    rejected_edges: tuple[int, ...] = ()


def periodic_laman_check(
    graph: PeriodicOrbitGraph, method: str = "fast"
) -> LamanReport:
    """Combinatorial test for generic minimal rigidity on the fixed torus:
    (2,2)-tight with a constructive gain assignment.

    Equals the generic rank criterion rank R0 = 2|V| - 2.  Disconnected
    graphs are reported as not rigid rather than rejected.
    """
    n = graph.vertex_count
    if not graph.is_connected():
        return LamanReport(minimally_rigid=False, reason="disconnected")
    if len(graph.edges) != 2 * n - 2:
        return LamanReport(minimally_rigid=False, reason="count-failure")
    report = pebble_game_sparse(graph, SparsityParams(2, 2))
    if not report.sparse:
        return LamanReport(
            minimally_rigid=False,
            reason="tight-failure",
            rejected_edges=report.rejected,
        )
    constructive = is_constructive(graph, method=method)
    if not constructive.constructive:
        return LamanReport(
            minimally_rigid=False,
            reason="non-constructive",
            witness=constructive.witness,
        )
    return LamanReport(minimally_rigid=True, reason="ok")
