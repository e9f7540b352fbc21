"""Topology abstraction of scenarios and the similarity metric used for
deduplication.

A scenario maps to an undirected graph whose vertices carry component
kinds and whose edges are the connections. Similarity counts, for each
vertex, whether every incident edge's unordered kind pair also appears in
the other graph; two scenarios are duplicates when the score is exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .components import ComponentKind
from .errors import ValidationError
from .generation import RoadScenario

KindPair = tuple[ComponentKind, ComponentKind]


def _kind_pair(a: ComponentKind, b: ComponentKind) -> KindPair:
    return (a, b) if a.value <= b.value else (b, a)


@dataclass(frozen=True)
class TopologyGraph:
    """Undirected graph: vertices are (id, kind), edges unordered id pairs."""

    vertices: tuple[tuple[int, ComponentKind], ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        ids = [vid for vid, _ in self.vertices]
        if len(set(ids)) != len(ids):
            raise ValidationError("vertex-ids", "duplicate vertex id")
        known = set(ids)
        normalized = set()
        for a, b in self.edges:
            if a == b:
                raise ValidationError("self-loop", f"vertex {a}")
            if a not in known or b not in known:
                raise ValidationError("edge-endpoints", f"({a}, {b}) references unknown vertex")
            normalized.add((a, b) if a < b else (b, a))
        object.__setattr__(self, "edges", frozenset(normalized))

    @cached_property
    def kind_of(self) -> dict[int, ComponentKind]:
        return dict(self.vertices)

    @cached_property
    def kind_set(self) -> frozenset[ComponentKind]:
        return frozenset(kind for _, kind in self.vertices)

    @cached_property
    def edge_kind_pairs(self) -> frozenset[KindPair]:
        kinds = self.kind_of
        return frozenset(_kind_pair(kinds[a], kinds[b]) for a, b in self.edges)

    @cached_property
    def incident_pairs(self) -> dict[int, tuple[KindPair, ...]]:
        kinds = self.kind_of
        table: dict[int, list[KindPair]] = {vid: [] for vid, _ in self.vertices}
        for a, b in self.edges:
            pair = _kind_pair(kinds[a], kinds[b])
            table[a].append(pair)
            table[b].append(pair)
        return {vid: tuple(pairs) for vid, pairs in table.items()}


def to_graph(scenario: RoadScenario) -> TopologyGraph:
    """One vertex per placed component, one edge per connection."""
    vertices = tuple(
        (i, inst.template.kind) for i, inst in enumerate(scenario.instances)
    )
    edges = frozenset(
        (conn.from_instance, conn.to_instance) for conn in scenario.connections
    )
    return TopologyGraph(vertices=vertices, edges=edges)


def edge_duplicated(edge: tuple[int, int], graph: TopologyGraph,
                    other: TopologyGraph) -> bool:
    """True if ``other`` has an edge with the same unordered kind pair."""
    a, b = edge
    key = (a, b) if a < b else (b, a)
    if key not in graph.edges:
        raise ValueError(f"edge {edge} not in graph")
    kinds = graph.kind_of
    return _kind_pair(kinds[a], kinds[b]) in other.edge_kind_pairs


def vertex_duplicated(vertex: int, graph: TopologyGraph, other: TopologyGraph) -> bool:
    """True if every edge at ``vertex`` is duplicated in ``other``.

    A degree-0 vertex would satisfy that vacuously and make every
    single-component scenario duplicate everything, so isolated vertices
    instead require the other graph to contain a vertex of the same kind.
    """
    if vertex not in graph.kind_of:
        raise ValueError(f"vertex {vertex} not in graph")
    incident = graph.incident_pairs[vertex]
    if not incident:
        return graph.kind_of[vertex] in other.kind_set
    return all(pair in other.edge_kind_pairs for pair in incident)


def similarity(g1: TopologyGraph, g2: TopologyGraph) -> float:
    """Fraction of vertices (over both graphs) duplicated in the other graph."""
    n1, n2 = len(g1.vertices), len(g2.vertices)
    if n1 == 0 or n2 == 0:
        raise ValueError("similarity is undefined for empty graphs")
    dup1 = sum(1 for vid, _ in g1.vertices if vertex_duplicated(vid, g1, g2))
    dup2 = sum(1 for vid, _ in g2.vertices if vertex_duplicated(vid, g2, g1))
    return (dup1 + dup2) / (n1 + n2)


def is_duplicate(g1: TopologyGraph, g2: TopologyGraph) -> bool:
    """Exact-duplication test: similarity equals 1."""
    return similarity(g1, g2) == 1.0


def deduplicate(
    scenarios: list[RoadScenario], threshold: float = 1.0
) -> list[RoadScenario]:
    """Greedy first-kept-wins filter in input order.

    A scenario is kept iff its similarity to every already-kept scenario is
    strictly below ``threshold``; the default threshold 1.0 removes exact
    topology duplicates only.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    kept: list[RoadScenario] = []
    kept_graphs: list[TopologyGraph] = []
    for scenario in scenarios:
        graph = to_graph(scenario)
        if all(similarity(graph, other) < threshold for other in kept_graphs):
            kept.append(scenario)
            kept_graphs.append(graph)
    return kept


def uniqueness_rate(before: int, after: int) -> float:
    """Scenarios surviving deduplication divided by scenarios generated."""
    if before <= 0:
        raise ValueError("uniqueness rate is undefined for an empty run")
    if after < 0 or after > before:
        raise ValueError(f"need before >= after >= 0, got {before}, {after}")
    return after / before
