import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.config.settings import (ADJACENCY_VERTEX_CAP, SPECTRUM_TOLERANCE,
                                 SPECTRUM_VERTEX_CAP)
from .constructions import (external_components, external_direct_product,
                            internal_components, internal_direct_product)
from .exceptions import GraphTooLargeError, VerificationError
from .group import PermutationGroup, classify_frobenius
from .permutation import Permutation, compose

logger = logging.getLogger(__name__)


def iter_bits(row: int) -> Iterator[int]:
    """Yield the set bit positions of row in increasing order."""
    while row:
        low = row & -row
        yield low.bit_length() - 1
        row ^= low


class Graph:
    """
    Undirected simple graph with one adjacency bitrow per vertex.

    Args:
        vertex_count: Number of vertices
        rows: rows[v] has bit u set when u ~ v
        labels: Optional per-vertex labels (group elements, tuples)
    """

    def __init__(self, vertex_count: int, rows: Sequence[int], labels: Optional[Sequence] = None):
        if len(rows) != vertex_count:
            raise ValueError(f"Expected {vertex_count} rows, got {len(rows)}")
        self.vertex_count = vertex_count
        self.rows = list(rows)
        self.labels = list(labels) if labels is not None else None

    @classmethod
    def from_edges(cls, vertex_count: int, edges, labels=None) -> 'Graph':
        rows = [0] * vertex_count
        for u, v in edges:
            if u == v:
                raise ValueError(f"Loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(vertex_count, rows, labels)

    @classmethod
    def complete(cls, n: int) -> 'Graph':
        full = (1 << n) - 1
        return cls(n, [full & ~(1 << v) for v in range(n)])

    @classmethod
    def empty(cls, n: int) -> 'Graph':
        return cls(n, [0] * n)

    def __len__(self):
        return self.vertex_count

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.rows == other.rows

    def __repr__(self):
        return f"Graph(vertices={self.vertex_count}, edges={self.edge_count})"

    @property
    def all_mask(self) -> int:
        return (1 << self.vertex_count) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> List[int]:
        return list(iter_bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return bin(self.rows[v]).count('1')

    def degrees(self) -> List[int]:
        return [self.degree(v) for v in range(self.vertex_count)]

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        for u in range(self.vertex_count):
            for v in iter_bits(self.rows[u] >> (u + 1)):
                yield u, u + 1 + v

    def is_symmetric(self) -> bool:
        return all(not (self.rows[u] >> u & 1) and all(self.has_edge(v, u) for v in iter_bits(self.rows[u]))
                   for u in range(self.vertex_count))

    def is_clique(self, vertices: Sequence[int]) -> bool:
        vs = list(vertices)
        return len(set(vs)) == len(vs) and all(
            self.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])

    def is_independent(self, vertices: Sequence[int]) -> bool:
        vs = list(vertices)
        mask = 0
        for v in vs:
            mask |= 1 << v
        return len(set(vs)) == len(vs) and all(not (self.rows[v] & mask) for v in vs)

    def induced_subgraph(self, vertices: Sequence[int]) -> 'Graph':
        vs = sorted(vertices)
        position = {v: i for i, v in enumerate(vs)}
        rows = []
        for v in vs:
            row = 0
            for u in iter_bits(self.rows[v]):
                if u in position:
                    row |= 1 << position[u]
            rows.append(row)
        labels = [self.labels[v] for v in vs] if self.labels else None
        return Graph(len(vs), rows, labels)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges())
        return graph

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.vertex_count, self.vertex_count), dtype=float)
        for u, v in self.edges():
            matrix[u, v] = matrix[v, u] = 1.0
        return matrix

    def write_edge_list(self, stream):
        """Write one "u v" line per edge, 0-based, u < v, lexicographic."""
        for u, v in self.edges():
            stream.write(f"{u} {v}\n")


def derangement_graph(G: PermutationGroup) -> Graph:
    """
    Cayley graph of G whose connection set is the derangements.

    sigma ~ pi exactly when compose(sigma, inverse(pi)) is a derangement;
    pi = d * sigma runs over the neighbours of sigma as d runs over D.
    """
    if G.order > ADJACENCY_VERTEX_CAP:
        raise GraphTooLargeError(f"{G.description}: {G.order} vertices exceeds the adjacency cap")
    derangements = G.derangement_set()
    index = G.index
    rows = []
    for sigma in G.elements:
        row = 0
        for d in derangements:
            row |= 1 << index[compose(d, sigma)]
        rows.append(row)
    logger.debug(f"Derangement graph of {G.description}: {G.order} vertices, degree {len(derangements)}")
    return Graph(G.order, rows, G.elements)


class DerangementRows:
    """
    Adjacency rows of the derangement graph, built one vertex at a time.

    Searches that touch few vertices of a large group use this instead of
    the full graph.
    """

    def __init__(self, G: PermutationGroup):
        self.group = G
        self.derangements = G.derangement_set()
        self._rows = {}

    def __len__(self):
        return self.group.order

    def __getitem__(self, v: int) -> int:
        row = self._rows.get(v)
        if row is None:
            sigma = self.group.elements[v]
            index = self.group.index
            row = 0
            for d in self.derangements:
                row |= 1 << index[compose(d, sigma)]
            self._rows[v] = row
        return row


def graph_complement(X: Graph) -> Graph:
    full = X.all_mask
    return Graph(X.vertex_count, [full & ~row & ~(1 << v) for v, row in enumerate(X.rows)], X.labels)


def _reflexive_rows(X: Graph) -> List[int]:
    return [row | (1 << v) for v, row in enumerate(X.rows)]


def graph_direct_product(X: Graph, Y: Graph, reflexive: bool = False) -> Graph:
    """
    Direct (tensor) product; vertex (x, y) is x * |V(Y)| + y.

    (x1, y1) ~ (x2, y2) when x1 ~ x2 and y1 ~ y2. With reflexive=True both
    factors are read as carrying a loop at every vertex, so equal
    coordinates also count as adjacent (loops are dropped from the result).
    """
    ny = Y.vertex_count
    x_rows = _reflexive_rows(X) if reflexive else X.rows
    y_rows = _reflexive_rows(Y) if reflexive else Y.rows
    rows = []
    for x in range(X.vertex_count):
        partners = list(iter_bits(x_rows[x]))
        for y in range(ny):
            row = 0
            for xp in partners:
                row |= y_rows[y] << (xp * ny)
            v = x * ny + y
            rows.append(row & ~(1 << v))
    return Graph(X.vertex_count * ny, rows)


def graph_lexicographic_product(X: Graph, Y: Graph) -> Graph:
    """X[Y]: (x1, y1) ~ (x2, y2) when x1 ~ x2, or x1 = x2 and y1 ~ y2."""
    ny = Y.vertex_count
    block = (1 << ny) - 1
    rows = []
    for x in range(X.vertex_count):
        across = 0
        for xp in iter_bits(X.rows[x]):
            across |= block << (xp * ny)
        for y in range(ny):
            rows.append(across | (Y.rows[y] << (x * ny)))
    return Graph(X.vertex_count * ny, rows)


def multi_direct_product(graphs: Sequence[Graph], reflexive: bool = False) -> Graph:
    result = graphs[0]
    for Y in graphs[1:]:
        result = graph_direct_product(result, Y, reflexive=reflexive)
    return result


def lexicographic_projection(vertices: Sequence[int], inner_size: int) -> List[int]:
    """Project vertices of X[Y] onto X."""
    return sorted({v // inner_size for v in vertices})


def connected_components(X: Graph) -> List[List[int]]:
    components = [sorted(c) for c in nx.connected_components(X.to_networkx())]
    return sorted(components, key=lambda c: c[0])


@dataclass
class CliqueUnion:
    is_union: bool
    count: int
    size: Optional[int] = None  # None when the cliques differ in size


def is_disjoint_union_of_cliques(X: Graph) -> CliqueUnion:
    components = connected_components(X)
    is_union = all(X.is_clique(c) for c in components)
    sizes = {len(c) for c in components}
    size = sizes.pop() if is_union and len(sizes) == 1 else None
    return CliqueUnion(is_union, len(components), size)


@dataclass
class Spectrum:
    """Adjacency eigenvalues, descending, with merged multiplicities."""

    eigenvalues: List[Tuple[float, int]] = field(default_factory=list)
    # largest distance of a computed eigenvalue from its nearest integer, before merging
    max_deviation: float = 0.0

    @property
    def vertex_count(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def trace(self) -> float:
        return sum(v * m for v, m in self.eigenvalues)

    def square_sum(self) -> float:
        return sum(v * v * m for v, m in self.eigenvalues)

    def multiplicity(self, value: float, tol: float = SPECTRUM_TOLERANCE) -> int:
        return sum(m for v, m in self.eigenvalues if abs(v - value) <= tol)

    def matches(self, expected: dict, tol: float = SPECTRUM_TOLERANCE) -> bool:
        """True when the spectrum is exactly {value: multiplicity} within tol."""
        if len(expected) != len(self.eigenvalues):
            return False
        return all(self.multiplicity(v, tol) == m for v, m in expected.items())


def spectrum(X: Graph, tol: float = SPECTRUM_TOLERANCE, vertex_cap: int = SPECTRUM_VERTEX_CAP) -> Spectrum:
    """
    Eigenvalues of the 0/1 adjacency matrix with a dense symmetric solver.

    Values closer than tol * max(1, max degree) are merged into one bucket.
    """
    if X.vertex_count > vertex_cap:
        raise GraphTooLargeError(f"Spectrum of a {X.vertex_count}-vertex graph exceeds the cap of {vertex_cap}")
    if X.vertex_count == 0:
        return Spectrum([])
    values = np.sort(np.linalg.eigvalsh(X.adjacency_matrix()))[::-1]
    scale = tol * max(1, max(X.degrees()))

    buckets: List[List[float]] = []
    for v in values:
        if buckets and abs(buckets[-1][0] - v) <= scale:
            buckets[-1].append(float(v))
        else:
            buckets.append([float(v)])
    max_deviation = float(np.max(np.abs(values - np.rint(values))))
    eigenvalues = []
    for bucket in buckets:
        mean = float(np.mean(bucket))
        nearest = round(mean)
        value = float(nearest) if abs(mean - nearest) <= scale else round(mean, 10)
        eigenvalues.append((value, len(bucket)))
    return Spectrum(eigenvalues, max_deviation)


def _relabel_rows(X: Graph, mapping: Sequence[int]) -> List[int]:
    """Rows of X after moving vertex v to mapping[v]."""
    rows = [0] * X.vertex_count
    for v, row in enumerate(X.rows):
        new_row = 0
        for u in iter_bits(row):
            new_row |= 1 << mapping[u]
        rows[mapping[v]] = new_row
    return rows


def _component_vertex(components: Sequence[Permutation], groups: Sequence[PermutationGroup]) -> int:
    value = 0
    for g, G in zip(components, groups):
        value = value * G.order + G.index_of(g)
    return value


def external_identity_holds(groups: Sequence[PermutationGroup]) -> bool:
    """
    Check Gamma_G = complement(complement(Gamma_1) x ... x complement(Gamma_k)).

    An element intersects itself, so the inner complements carry loops.
    """
    product = external_direct_product(groups)
    gamma = derangement_graph(product)
    factors = [graph_complement(derangement_graph(G)) for G in groups]
    composite = graph_complement(multi_direct_product(factors, reflexive=True))
    mapping = [_component_vertex(external_components(g, groups), groups) for g in product.elements]
    return _relabel_rows(gamma, mapping) == composite.rows


def internal_identity_holds(groups: Sequence[PermutationGroup]) -> bool:
    """Check Gamma_G = Gamma_1 x ... x Gamma_k for the internal product."""
    product = internal_direct_product(groups)
    gamma = derangement_graph(product)
    composite = multi_direct_product([derangement_graph(G) for G in groups])
    mapping = [_component_vertex(internal_components(g, groups), groups) for g in product.elements]
    return _relabel_rows(gamma, mapping) == composite.rows


def verify_product_identity(groups: Sequence[PermutationGroup]) -> bool:
    external = external_identity_holds(groups)
    internal = internal_identity_holds(groups)
    if not (external and internal):
        logger.warning(f"Product identity failed (external={external}, internal={internal}) "
                       f"for {', '.join(G.description for G in groups)}")
    return external and internal


def is_right_translation_automorphism(gamma: Graph, G: PermutationGroup, g: Permutation) -> bool:
    """True when sigma -> sigma * g preserves every edge of gamma."""
    mapping = [G.index[compose(sigma, g)] for sigma in G.elements]
    return _relabel_rows(gamma, mapping) == gamma.rows


def zhang_alpha(alphas: Sequence[int], sizes: Sequence[int]) -> int:
    """max_i alpha_i * prod_{j != i} |V_j|, the independence number of a direct product of vertex-transitive graphs."""
    total = math.prod(sizes)
    return max(a * (total // s) for a, s in zip(alphas, sizes))


@dataclass
class FrobeniusStructure:
    kernel_order: int
    complement_order: int
    clique_count: int
    clique_size: int
    spectrum: Spectrum
    spectrum_matches: bool


def verify_frobenius_structure(G: PermutationGroup, tol: float = SPECTRUM_TOLERANCE) -> FrobeniusStructure:
    """
    Check that the derangement graph of a Frobenius group is |H| copies of K_n.

    The clique-union test is the primary check; the spectrum
    {n-1: |H|, -1: |H|(n-1)} corroborates it.
    """
    classification = classify_frobenius(G)
    if not classification.is_frobenius:
        raise VerificationError(f"{G.description} is not a Frobenius group")
    n, h = G.degree, classification.complement_order
    gamma = derangement_graph(G)
    union = is_disjoint_union_of_cliques(gamma)
    if not union.is_union or union.count != h or union.size != n:
        raise VerificationError(f"{G.description}: derangement graph is not {h} copies of K_{n}")
    spec = spectrum(gamma, tol)
    expected = {n - 1: h, -1: h * (n - 1)} if n > 1 else {0: h}
    matches = spec.matches(expected, tol * max(1, n - 1))
    if not matches:
        logger.warning(f"{G.description}: spectrum {spec.eigenvalues} differs from {expected}")
    return FrobeniusStructure(n, h, union.count, union.size, spec, matches)
