"""Inductive construction moves: periodic vertex additions and edge splits.

A graph is generically minimally rigid on the fixed torus exactly when a
sequence of these moves builds it from a single vertex.  Moves insert their
new vertex at an explicit id, shifting existing ids upward, so decomposing
and replaying reproduces the original vertex labels exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .errors import (
    InfeasibleSplitError,
    InvalidMoveError,
    NotMinimallyRigidError,
    ReplayError,
    WrongDegreeError,
)
from .gains import (
    DirectedGainEdge,
    GainVector,
    PeriodicOrbitGraph,
    single_vertex_graph,
)
from .sparsity import LamanReport, pebble_game_sparse, periodic_laman_check


@dataclass(frozen=True)
class VertexAddition:
    """Add new_vertex with two edges {new, n1; g1}, {new, n2; g2}.

    Gains are as seen from the new vertex; when both neighbours coincide the
    gains must differ.  Neighbour ids refer to the post-move labelling.
    """

    new_vertex: int
    attachments: tuple[tuple[int, GainVector], tuple[int, GainVector]]


@dataclass(frozen=True)
class EdgeSplit:
    """Remove edge {split_tail, split_head; split_gain}; add new_vertex with
    edges {new, split_tail; (0,0)}, {new, split_head; split_gain} and
    {new, third[0]; third[1]}.

    Constraints: third neighbour differs from split_tail; its gain differs
    from split_gain when it equals split_head.  Ids are post-move labels.
    """

    new_vertex: int
    split_tail: int
    split_head: int
    split_gain: GainVector
    third: tuple[int, GainVector]


HennebergMove = Union[VertexAddition, EdgeSplit]


@dataclass(frozen=True)
class HennebergSequence:
    """Moves that build a graph from a single vertex; prefix k yields the
    graph on k+1 vertices."""

    moves: tuple[HennebergMove, ...]


def _shift_up(graph: PeriodicOrbitGraph, new_vertex: int) -> PeriodicOrbitGraph:
    """Free the id ``new_vertex`` by shifting ids >= new_vertex up by one."""
    def relabel(v: int) -> int:
        return v + 1 if v >= new_vertex else v

    edges = tuple(
        DirectedGainEdge(e.id, relabel(e.tail), relabel(e.head), e.gain)
        for e in graph.edges
    )
    return PeriodicOrbitGraph(graph.vertex_count + 1, edges)


def _shift_down(graph: PeriodicOrbitGraph, removed: int) -> PeriodicOrbitGraph:
    def relabel(v: int) -> int:
        return v - 1 if v > removed else v

    edges = tuple(
        DirectedGainEdge(e.id, relabel(e.tail), relabel(e.head), e.gain)
        for e in graph.edges
    )
    return PeriodicOrbitGraph(graph.vertex_count - 1, edges)


def apply_vertex_addition(
    graph: PeriodicOrbitGraph, move: VertexAddition
) -> PeriodicOrbitGraph:
    """Attach a new degree-2 vertex.  Preserves (2,2)-tightness and generic
    rank deficit; raises InvalidMoveError on malformed moves."""
    w = move.new_vertex
    n = graph.vertex_count
    if not 1 <= w <= n + 1:
        raise InvalidMoveError(f"new vertex id {w} outside 1..{n + 1}")
    (n1, g1), (n2, g2) = move.attachments
    if n1 == n2 and g1 == g2:
        raise InvalidMoveError(
            "attachment gains must differ when both neighbours coincide"
        )
    shifted = _shift_up(graph, w)
    for nb in (n1, n2):
        if not 1 <= nb <= n + 1 or nb == w:
            raise InvalidMoveError(f"attachment neighbour {nb} invalid")
    eid = shifted.next_edge_id()
    edges = shifted.edges + (
        DirectedGainEdge(eid, w, n1, g1),
        DirectedGainEdge(eid + 1, w, n2, g2),
    )
    return PeriodicOrbitGraph(n + 1, edges)


def _find_edge(
    graph: PeriodicOrbitGraph, tail: int, head: int, gain: GainVector
) -> Optional[DirectedGainEdge]:
    """Smallest-id edge equal to {tail, head; gain} up to reversal."""
    matches = [
        e
        for e in graph.edges
        if (e.tail, e.head, e.gain) == (tail, head, gain)
        or (e.head, e.tail, -e.gain) == (tail, head, gain)
    ]
    return min(matches, key=lambda e: e.id) if matches else None


def apply_edge_split(
    graph: PeriodicOrbitGraph, move: EdgeSplit
) -> PeriodicOrbitGraph:
    """Subdivide an edge with a new degree-3 vertex.  Preserves
    (2,2)-tightness and generic independence."""
    w = move.new_vertex
    n = graph.vertex_count
    if not 1 <= w <= n + 1:
        raise InvalidMoveError(f"new vertex id {w} outside 1..{n + 1}")

    def unshift(v: int) -> int:
        # Move ids are post-move labels; the split edge lives pre-move.
        return v - 1 if v > w else v

    t3, g3 = move.third
    if t3 == move.split_tail:
        raise InvalidMoveError("third neighbour must differ from split_tail")
    if t3 == move.split_head and g3 == move.split_gain:
        raise InvalidMoveError(
            "third gain must differ from split gain when neighbours coincide"
        )
    if move.split_tail == w or move.split_head == w or t3 == w:
        raise InvalidMoveError("move references the new vertex as a neighbour")
    split = _find_edge(
        graph, unshift(move.split_tail), unshift(move.split_head), move.split_gain
    )
    if split is None:
        raise InvalidMoveError(
            f"split edge {{{move.split_tail},{move.split_head};"
            f"{move.split_gain.as_tuple()}}} not present"
        )
    remaining = tuple(e for e in graph.edges if e.id != split.id)
    shifted = _shift_up(PeriodicOrbitGraph(n, remaining), w)
    eid = max(shifted.next_edge_id(), split.id + 1)
    edges = shifted.edges + (
        DirectedGainEdge(eid, w, move.split_tail, GainVector(0, 0)),
        DirectedGainEdge(eid + 1, w, move.split_head, move.split_gain),
        DirectedGainEdge(eid + 2, w, t3, g3),
    )
    return PeriodicOrbitGraph(n + 1, edges)


def apply_move(graph: PeriodicOrbitGraph, move: HennebergMove) -> PeriodicOrbitGraph:
    if isinstance(move, VertexAddition):
        return apply_vertex_addition(graph, move)
    if isinstance(move, EdgeSplit):
        return apply_edge_split(graph, move)
    raise InvalidMoveError(f"unknown move type {type(move).__name__}")


# -- reductions ---------------------------------------------------------------


def _sorted_attachments(
    graph: PeriodicOrbitGraph, v0: int
) -> list[tuple[int, GainVector, int]]:
    """Incident edges of v0 as (neighbour, gain-from-v0, edge id), sorted."""
    out = []
    for e in graph.incident_edges(v0):
        if e.is_loop():
            raise WrongDegreeError(f"vertex {v0} carries a loop")
        out.append((e.other_end(v0), e.gain_from(v0), e.id))
    out.sort()
    return out


def delete_degree2_vertex(
    graph: PeriodicOrbitGraph, v0: int
) -> tuple[PeriodicOrbitGraph, VertexAddition]:
    """Remove a 2-valent vertex; returns the smaller graph and the forward
    move that re-inserts it."""
    ends = _sorted_attachments(graph, v0)
    if len(ends) != 2:
        raise WrongDegreeError(f"vertex {v0} has degree {graph.degree(v0)}, need 2")
    move = VertexAddition(
        new_vertex=v0,
        attachments=((ends[0][0], ends[0][1]), (ends[1][0], ends[1][1])),
    )
    remaining = tuple(e for e in graph.edges if v0 not in (e.tail, e.head))
    smaller = _shift_down(PeriodicOrbitGraph(graph.vertex_count, remaining), v0)
    return smaller, move


@dataclass(frozen=True)
class ReverseEdgeSplitResult:
    graph: PeriodicOrbitGraph
    added_edge: DirectedGainEdge
    forward_move: EdgeSplit


def reverse_edge_split(
    graph: PeriodicOrbitGraph,
    v0: int,
    check: Callable[[PeriodicOrbitGraph], LamanReport] = periodic_laman_check,
) -> ReverseEdgeSplitResult:
    """Remove a 3-valent vertex and add the one candidate edge that keeps the
    graph (2,2)-tight and constructive.

    With sorted attachments (n1,g1), (n2,g2), (n3,g3), the candidates are
    {n1,n2; g2-g1}, {n2,n3; g3-g2}, {n3,n1; g1-g3}, tried in that order;
    loop candidates are skipped.  On an input satisfying the combinatorial
    rigidity conditions at least one candidate passes; otherwise
    InfeasibleSplitError.  The forward move re-creating a T-gain equivalent
    graph is returned alongside.
    """
    ends = _sorted_attachments(graph, v0)
    if len(ends) != 3:
        raise WrongDegreeError(f"vertex {v0} has degree {graph.degree(v0)}, need 3")
    if ends[0][0] == ends[2][0]:
        raise WrongDegreeError("all three edges at the vertex share one neighbour")
    remaining = tuple(e for e in graph.edges if v0 not in (e.tail, e.head))
    base = _shift_down(PeriodicOrbitGraph(graph.vertex_count, remaining), v0)

    def relabel(v: int) -> int:
        return v - 1 if v > v0 else v

    candidates = [(0, 1), (1, 2), (2, 0)]
    for ia, ib in candidates:
        (na, ga, _), (nb, gb, _) = ends[ia], ends[ib]
        if na == nb:
            continue  # loop candidate; never sparse
        new_edge = DirectedGainEdge(
            base.next_edge_id(), relabel(na), relabel(nb), gb - ga
        )
        candidate = PeriodicOrbitGraph(base.vertex_count, base.edges + (new_edge,))
        if check(candidate).minimally_rigid:
            nc, gc, _ = ends[3 - ia - ib]
            if na == nc:
                # split_tail plays the zero-gain role and must differ from
                # the third neighbour; flip the candidate's orientation.
                move = EdgeSplit(
                    new_vertex=v0,
                    split_tail=nb,
                    split_head=na,
                    split_gain=ga - gb,
                    third=(nc, gc - gb),
                )
            else:
                move = EdgeSplit(
                    new_vertex=v0,
                    split_tail=na,
                    split_head=nb,
                    split_gain=gb - ga,
                    third=(nc, gc - ga),
                )
            return ReverseEdgeSplitResult(
                graph=candidate, added_edge=new_edge, forward_move=move
            )
    raise InfeasibleSplitError(
        f"no reverse edge split at vertex {v0} keeps the graph tight and "
        "constructive; input violates the rigidity hypotheses"
    )


# -- decomposition and replay --------------------------------------------------


def decompose(graph: PeriodicOrbitGraph, method: str = "fast") -> HennebergSequence:
    """Reduce a minimally rigid orbit graph to a single vertex, recording the
    forward moves.

    Each step removes the lowest-id vertex of minimum degree (always 2 or 3:
    the count |E| = 2|V| - 2 forces average degree below 4).  Replaying the
    sequence yields a graph whose canonical re-gauged form equals the
    input's.
    """
    report = periodic_laman_check(graph, method=method)
    if not report.minimally_rigid:
        raise NotMinimallyRigidError(
            f"graph fails the combinatorial rigidity check: {report.reason}"
        )
    moves: list[HennebergMove] = []
    current = graph
    while current.vertex_count > 1:
        degrees = {v: current.degree(v) for v in current.vertices()}
        min_degree = min(degrees.values())
        v0 = min(v for v, d in degrees.items() if d == min_degree)
        if min_degree == 2:
            current, move = delete_degree2_vertex(current, v0)
            moves.append(move)
        elif min_degree == 3:
            result = reverse_edge_split(
                current, v0, check=lambda g: periodic_laman_check(g, method=method)
            )
            current, move = result.graph, result.forward_move
            moves.append(move)
        else:
            raise NotMinimallyRigidError(
                f"minimum degree {min_degree}; counts cannot hold"
            )
    moves.reverse()
    return HennebergSequence(moves=tuple(moves))


def replay(
    sequence: HennebergSequence,
    validate: str = "tight",
) -> PeriodicOrbitGraph:
    """Apply moves in order starting from a single vertex.

    validate: "none" applies moves only; "tight" (default) additionally
    checks every prefix is (2,2)-tight; "rank" also verifies each prefix has
    full generic rank 2|V| - 2.  Any failure raises ReplayError carrying the
    1-based move index.
    """
    if validate not in ("none", "tight", "rank"):
        raise ValueError(f"unknown validation mode {validate!r}")
    graph = single_vertex_graph()
    for index, move in enumerate(sequence.moves, start=1):
        try:
            graph = apply_move(graph, move)
        except InvalidMoveError as exc:
            raise ReplayError(index, str(exc)) from exc
        if validate in ("tight", "rank"):
            report = pebble_game_sparse(graph)
            if not report.tight:
                raise ReplayError(index, "prefix is not (2,2)-tight")
        if validate == "rank":
            from .matrix import generic_rank

            result = generic_rank(graph)
            if result.rank != 2 * graph.vertex_count - 2:
                raise ReplayError(
                    index, f"prefix rank {result.rank} below 2|V|-2"
                )
    return graph


# -- random generation ----------------------------------------------------------


def _random_gain(rng: random.Random, bound: int) -> GainVector:
    return GainVector(rng.randint(-bound, bound), rng.randint(-bound, bound))


def _random_move(
    graph: PeriodicOrbitGraph, rng: random.Random, gain_bound: int
) -> HennebergMove:
    n = graph.vertex_count
    new = n + 1
    do_split = bool(graph.edges) and rng.random() < 0.5
    if not do_split:
        n1 = rng.randint(1, n)
        n2 = rng.randint(1, n)
        g1 = _random_gain(rng, gain_bound)
        g2 = _random_gain(rng, gain_bound)
        while n1 == n2 and g1 == g2:
            g2 = _random_gain(rng, gain_bound)
        return VertexAddition(new_vertex=new, attachments=((n1, g1), (n2, g2)))
    edge = rng.choice(graph.edges)
    t3 = rng.randint(1, n)
    while t3 == edge.tail:
        t3 = rng.randint(1, n)
    g3 = _random_gain(rng, gain_bound)
    while t3 == edge.head and g3 == edge.gain:
        g3 = _random_gain(rng, gain_bound)
    return EdgeSplit(
        new_vertex=new,
        split_tail=edge.tail,
        split_head=edge.head,
        split_gain=edge.gain,
        third=(t3, g3),
    )


def generate_random(
    n: int, gain_bound: int = 2, seed: int = 0
) -> PeriodicOrbitGraph:
    """Random minimally rigid orbit graph on n vertices via n-1 random moves.

    Move parameters are rejection-sampled against the move invariants; the
    result is checked against the combinatorial oracle as a safety net (a
    valid move can never break it, so retries are theoretical).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if gain_bound < 1:
        raise ValueError("gain_bound must be >= 1")
    rng = random.Random(seed)
    graph = single_vertex_graph()
    while graph.vertex_count < n:
        for _attempt in range(100):
            move = _random_move(graph, rng, gain_bound)
            candidate = apply_move(graph, move)
            if periodic_laman_check(candidate).minimally_rigid:
                graph = candidate
                break
        else:
            rng = random.Random(rng.getrandbits(64))
    return graph


def random_multigraph(
    n: int,
    edge_count: int,
    gain_bound: int = 2,
    rng: random.Random | None = None,
    connected: bool = True,
    allow_loops: bool = False,
) -> PeriodicOrbitGraph:
    """Uniform-ish random gain multigraph for corpus runs; not necessarily
    rigid or even sparse."""
    rng = rng or random.Random(0)
    while True:
        edges = []
        for eid in range(1, edge_count + 1):
            tail = rng.randint(1, n)
            head = rng.randint(1, n)
            while not allow_loops and head == tail and n > 1:
                head = rng.randint(1, n)
            edges.append(
                DirectedGainEdge(eid, tail, head, _random_gain(rng, gain_bound))
            )
        graph = PeriodicOrbitGraph(n, tuple(edges))
        if not connected or graph.is_connected():
            return graph
