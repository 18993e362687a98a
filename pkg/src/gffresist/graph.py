"""Multigraph with a total vertex order, walks, circuits, and cycle-space machinery.

Vertices are identified by their position in the input list, which also fixes
the total order used for canonical edge orientation and traversal signs.
Edges are identified by their position in the edge list; parallel edges are
legal and distinguished by a per-endpoint-pair parallel index.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    DisconnectedError,
    DuplicateVertexNameError,
    EdgeNotInGraphError,
    NotASpanningTreeError,
    SameVertexError,
    SelfLoopError,
    SizeLimitExceededError,
    UnknownEndpointError,
    ValidationError,
)

DEFAULT_CIRCUIT_LIMIT = 1_000_000


@dataclass(frozen=True)
class EdgeRecord:
    """One edge in canonical orientation: tail < head in the vertex order."""

    tail: int
    head: int
    parallel_index: int


@dataclass(frozen=True)
class Multigraph:
    """Connected undirected multigraph without self-loops.

    ``vertices`` holds the vertex names; list position defines both the
    vertex index and the total order. ``edges`` holds one EdgeRecord per
    edge; list position is the edge identifier.
    """

    vertices: tuple
    edges: tuple

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def cycle_rank(self) -> int:
        return self.n_edges - self.n_vertices + 1

    def vertex_index(self, name) -> int:
        try:
            return self.vertices.index(name)
        except ValueError:
            raise UnknownEndpointError(f"unknown vertex {name!r}") from None

    def endpoints(self, edge_id: int) -> tuple:
        rec = self.edges[edge_id]
        return rec.tail, rec.head

    def opposite(self, edge_id: int, vertex: int) -> int:
        rec = self.edges[edge_id]
        if vertex == rec.tail:
            return rec.head
        if vertex == rec.head:
            return rec.tail
        raise EdgeNotInGraphError(f"edge {edge_id} is not incident to vertex {vertex}")

    def incident_edges(self, vertex: int) -> list:
        """Edge ids incident to ``vertex``, in increasing id order."""
        return [e for e, rec in enumerate(self.edges)
                if vertex in (rec.tail, rec.head)]

    def incidence_matrix(self) -> np.ndarray:
        """Signed vertex-edge incidence: +1 at the tail, -1 at the head."""
        b = np.zeros((self.n_vertices, self.n_edges))
        for e, rec in enumerate(self.edges):
            b[rec.tail, e] = 1.0
            b[rec.head, e] = -1.0
        return b


@dataclass(frozen=True)
class Walk:
    """Alternating vertex/edge sequence with traversal signs.

    signs[k] is +1 when the k-th step ascends in the vertex order
    (v_{k+1} > v_k) and -1 when it descends.
    """

    vertices: tuple
    edges: tuple
    signs: tuple

    def __post_init__(self):
        n = len(self.edges)
        if n < 1:
            raise ValidationError("a walk needs at least one edge")
        if len(self.vertices) != n + 1 or len(self.signs) != n:
            raise ValidationError("walk sequences have inconsistent lengths")
        for k in range(n):
            expected = 1 if self.vertices[k + 1] > self.vertices[k] else -1
            if self.signs[k] != expected:
                raise ValidationError(f"sign at step {k} contradicts the vertex order")

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Circuit(Walk):
    """Simple closed walk: returns to its start, no vertex or edge repeats."""

    def __post_init__(self):
        super().__post_init__()
        if self.length < 2:
            raise ValidationError("a circuit needs at least two edges")
        if self.vertices[0] != self.vertices[-1]:
            raise ValidationError("a circuit must end where it starts")
        interior = self.vertices[:-1]
        if len(set(interior)) != len(interior):
            raise ValidationError("a circuit may not revisit a vertex")
        if len(set(self.edges)) != len(self.edges):
            raise ValidationError("a circuit may not reuse an edge")


def _signs_for(vertex_seq) -> tuple:
    return tuple(1 if vertex_seq[k + 1] > vertex_seq[k] else -1
                 for k in range(len(vertex_seq) - 1))


def _check_steps(g: Multigraph, vertex_seq, edge_seq):
    """Every edge id must exist in g and join the consecutive vertex pair."""
    for k, e in enumerate(edge_seq):
        if not 0 <= e < g.n_edges:
            raise EdgeNotInGraphError(f"edge id {e} out of range")
        if {g.edges[e].tail, g.edges[e].head} != {vertex_seq[k], vertex_seq[k + 1]}:
            raise EdgeNotInGraphError(
                f"edge {e} does not join vertices {vertex_seq[k]} and {vertex_seq[k + 1]}")


def make_walk(g: Multigraph, vertex_seq, edge_seq) -> Walk:
    _check_steps(g, vertex_seq, edge_seq)
    return Walk(tuple(vertex_seq), tuple(edge_seq), _signs_for(vertex_seq))


def make_circuit(g: Multigraph, vertex_seq, edge_seq) -> Circuit:
    _check_steps(g, vertex_seq, edge_seq)
    return Circuit(tuple(vertex_seq), tuple(edge_seq), _signs_for(vertex_seq))


def build_multigraph(vertex_names, edge_specs) -> Multigraph:
    """Build a validated multigraph from vertex names and (u, v, ...) specs.

    Edge specs may carry extra entries (e.g. a resistance) past the two
    endpoint names; they are ignored here. Orientation is canonicalized to
    tail < head; parallel indices follow input order within each endpoint
    pair. Raises SelfLoopError, DuplicateVertexNameError,
    UnknownEndpointError, or DisconnectedError on invalid input.
    """
    names = list(vertex_names)
    if len(names) < 2:
        raise ValidationError("a multigraph needs at least 2 vertices")
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateVertexNameError(f"duplicate vertex name {name!r}")
        seen.add(name)
    index = {name: i for i, name in enumerate(names)}

    records = []
    pair_counts = {}
    for spec in edge_specs:
        u, v = spec[0], spec[1]
        for endpoint in (u, v):
            if endpoint not in index:
                raise UnknownEndpointError(f"unknown vertex {endpoint!r}")
        iu, iv = index[u], index[v]
        if iu == iv:
            raise SelfLoopError(f"self-loop at vertex {u!r}")
        tail, head = min(iu, iv), max(iu, iv)
        k = pair_counts.get((tail, head), 0)
        pair_counts[(tail, head)] = k + 1
        records.append(EdgeRecord(tail, head, k))

    g = Multigraph(tuple(names), tuple(records))
    _check_connected(g)
    return g


def _check_connected(g: Multigraph):
    reached = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e in g.incident_edges(v):
            w = g.opposite(e, v)
            if w not in reached:
                reached.add(w)
                queue.append(w)
    if len(reached) != g.n_vertices:
        missing = sorted(set(range(g.n_vertices)) - reached)
        raise DisconnectedError(
            f"vertices {missing} unreachable from vertex 0")


def spanning_tree(g: Multigraph) -> frozenset:
    """Deterministic BFS spanning tree from vertex 0, edge-id tie-break."""
    tree = set()
    reached = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e in g.incident_edges(v):
            w = g.opposite(e, v)
            if w not in reached:
                reached.add(w)
                tree.add(e)
                queue.append(w)
    return frozenset(tree)


def _tree_adjacency(g: Multigraph, tree) -> dict:
    adj = {v: [] for v in range(g.n_vertices)}
    for e in sorted(tree):
        rec = g.edges[e]
        adj[rec.tail].append((rec.head, e))
        adj[rec.head].append((rec.tail, e))
    return adj


def _tree_path(g: Multigraph, tree, a: int, b: int):
    """Unique a-to-b path inside the tree, as (vertex_seq, edge_seq)."""
    adj = _tree_adjacency(g, tree)
    prev = {a: None}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            break
        for w, e in adj[v]:
            if w not in prev:
                prev[w] = (v, e)
                queue.append(w)
    if b not in prev:
        raise NotASpanningTreeError(f"no tree path from {a} to {b}")
    vertex_seq, edge_seq = [b], []
    v = b
    while prev[v] is not None:
        u, e = prev[v]
        vertex_seq.append(u)
        edge_seq.append(e)
        v = u
    return vertex_seq[::-1], edge_seq[::-1]


def walk_between(g: Multigraph, a: int, b: int) -> Walk:
    """The unique spanning-tree walk from a to b."""
    if a == b:
        raise SameVertexError(f"walk endpoints must differ, got vertex {a} twice")
    vs, es = _tree_path(g, spanning_tree(g), a, b)
    return make_walk(g, vs, es)


def _check_spanning_tree(g: Multigraph, tree):
    tree = frozenset(tree)
    if len(tree) != g.n_vertices - 1:
        raise NotASpanningTreeError(
            f"expected {g.n_vertices - 1} tree edges, got {len(tree)}")
    for e in tree:
        if not 0 <= e < g.n_edges:
            raise NotASpanningTreeError(f"edge id {e} out of range")
    adj = _tree_adjacency(g, tree)
    reached = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w, _ in adj[v]:
            if w not in reached:
                reached.add(w)
                queue.append(w)
    if len(reached) != g.n_vertices:
        raise NotASpanningTreeError("tree edges do not span the graph")
    return tree


def fundamental_circuits(g: Multigraph, tree=None) -> list:
    """One circuit per non-tree edge: the edge plus the tree path closing it.

    The list is ordered by non-tree edge id and has length equal to the
    cycle rank |E| - |V| + 1.
    """
    tree = spanning_tree(g) if tree is None else _check_spanning_tree(g, tree)
    circuits = []
    for e, rec in enumerate(g.edges):
        if e in tree:
            continue
        path_vs, path_es = _tree_path(g, tree, rec.head, rec.tail)
        circuits.append(make_circuit(g, [rec.tail] + path_vs, [e] + path_es))
    return circuits


def _canonical_edge_key(edge_seq) -> tuple:
    """Lexicographically smallest rotation/reflection of the edge sequence."""
    best = None
    for seq in (list(edge_seq), list(edge_seq)[::-1]):
        for r in range(len(seq)):
            cand = tuple(seq[r:] + seq[:r])
            if best is None or cand < best:
                best = cand
    return best


def enumerate_circuits(g: Multigraph, limit: int = DEFAULT_CIRCUIT_LIMIT) -> list:
    """Every circuit of g, once up to starting point and direction.

    Deduplication is by canonical edge-id sequence (smallest rotation or
    reflection). Intended for desk-scale graphs; raises
    SizeLimitExceededError once more than ``limit`` distinct circuits are
    found.
    """
    found = {}

    def extend(start, v, path_vs, path_es, visited):
        for e in g.incident_edges(v):
            if e in path_es:
                continue
            w = g.opposite(e, v)
            if w == start:
                key = _canonical_edge_key(path_es + [e])
                if key not in found:
                    found[key] = make_circuit(
                        g, path_vs + [w], path_es + [e])
                    if len(found) > limit:
                        raise SizeLimitExceededError(
                            f"more than {limit} circuits")
            elif w > start and w not in visited:
                extend(start, w, path_vs + [w], path_es + [e], visited | {w})

    for s in range(g.n_vertices):
        extend(s, s, [s], [], {s})
    return list(found.values())


def circuit_sign_vector(g: Multigraph, c: Circuit) -> np.ndarray:
    """Signed edge-incidence vector of a circuit, indexed by edge id."""
    _check_steps(g, c.vertices, c.edges)
    vec = np.zeros(g.n_edges)
    for e, s in zip(c.edges, c.signs):
        vec[e] += s
    return vec


def walk_sign_vector(g: Multigraph, w: Walk) -> np.ndarray:
    """Signed edge-incidence vector of a walk (repeat traversals add up)."""
    _check_steps(g, w.vertices, w.edges)
    vec = np.zeros(g.n_edges)
    for e, s in zip(w.edges, w.signs):
        vec[e] += s
    return vec


def circuit_matrix(g: Multigraph, circuits) -> np.ndarray:
    """Stack of circuit sign vectors, one row per circuit."""
    if not circuits:
        return np.zeros((0, g.n_edges))
    return np.stack([circuit_sign_vector(g, c) for c in circuits])


def enumerate_simple_walks(g: Multigraph, a: int, b: int,
                           limit: int = 10_000) -> list:
    """All walks from a to b visiting no vertex twice, parallel edges distinct."""
    if a == b:
        raise SameVertexError(f"walk endpoints must differ, got vertex {a} twice")
    walks = []

    def extend(v, path_vs, path_es, visited):
        for e in g.incident_edges(v):
            w = g.opposite(e, v)
            if w == b:
                walks.append(make_walk(g, path_vs + [w], path_es + [e]))
                if len(walks) > limit:
                    raise SizeLimitExceededError(
                        f"more than {limit} simple walks from {a} to {b}")
            elif w not in visited:
                extend(w, path_vs + [w], path_es + [e], visited | {w})

    extend(a, [a], [], {a, b})
    return walks
