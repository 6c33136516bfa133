"""Uniform superpositions over all simple graphs with a function qubit.

A graph on n vertices is encoded by its upper-triangle adjacency bits in
lexicographic edge order, edge (0,1) most significant; one extra qubit holds
f(G).  Graphs are simple and undirected, and a Hamiltonian cycle requires at
least 3 distinct vertices (no 2-cycles), so no graph on fewer than 3 vertices
has one.

The function-qubit marginal of the quantum state is diag(1-q, q) with q the
fraction of graphs where f = 1, so its entropy equals the mutual information
of the matching classical (graph, bit) distribution.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .measures import binary_entropy
from .states import Cut, PureState, ValidationError, schmidt_decompose

MAX_VERTICES = 5
MAX_ORACLE_VERTICES = 8


def edge_order(n_vertices: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n_vertices), 2))


def n_edge_slots(n_vertices: int) -> int:
    return n_vertices * (n_vertices - 1) // 2


def adjacency_from_index(index: int, n_vertices: int) -> np.ndarray:
    """Decode a graph index into a symmetric 0/1 adjacency matrix."""
    edges = edge_order(n_vertices)
    m = len(edges)
    adj = np.zeros((n_vertices, n_vertices), dtype=np.uint8)
    for pos, (i, j) in enumerate(edges):
        bit = (index >> (m - 1 - pos)) & 1
        adj[i, j] = adj[j, i] = bit
    return adj


def index_from_adjacency(adj: np.ndarray) -> int:
    n = adj.shape[0]
    edges = edge_order(n)
    m = len(edges)
    index = 0
    for pos, (i, j) in enumerate(edges):
        if adj[i, j]:
            index |= 1 << (m - 1 - pos)
    return index


def hamiltonian_cycle_oracle(adjacency: np.ndarray) -> int:
    """1 iff the graph has a Hamiltonian cycle, by brute force over permutations."""
    adj = np.asarray(adjacency)
    n = adj.shape[0]
    if adj.shape != (n, n) or np.any(adj != adj.T):
        raise ValidationError("adjacency", "adjacency must be a symmetric 0/1 matrix")
    if n > MAX_ORACLE_VERTICES:
        raise ValidationError("desk-scale", f"oracle enumerates permutations only up to {MAX_ORACLE_VERTICES} vertices")
    if n < 3:
        return 0
    for perm in itertools.permutations(range(1, n)):
        cycle = (0,) + perm
        if all(adj[cycle[i], cycle[(i + 1) % n]] for i in range(n)):
            return 1
    return 0


def edge_parity_oracle(adjacency: np.ndarray) -> int:
    adj = np.asarray(adjacency)
    n = adj.shape[0]
    return int(sum(adj[i, j] for i, j in edge_order(n)) % 2)


def const0_oracle(adjacency: np.ndarray) -> int:
    return 0


F_ORACLES = {
    "hamiltonian": hamiltonian_cycle_oracle,
    "parity": edge_parity_oracle,
    "const0": const0_oracle,
}


def _f_table(n_vertices: int, f_oracle) -> np.ndarray:
    m = n_edge_slots(n_vertices)
    table = np.zeros(2**m, dtype=np.uint8)
    for g in range(2**m):
        value = int(f_oracle(adjacency_from_index(g, n_vertices)))
        if value not in (0, 1):
            raise ValidationError("f-binary", "f must return 0 or 1")
        table[g] = value
    return table


@dataclass(frozen=True, eq=False)
class GraphFunctionState:
    """Uniform superposition sum_G |G>|f(G)> / sqrt(M) over all n-vertex graphs."""

    n_vertices: int
    f_table: np.ndarray
    state: PureState

    @property
    def n_graphs(self) -> int:
        return int(self.f_table.shape[0])

    @property
    def function_qubit(self) -> int:
        return n_edge_slots(self.n_vertices)

    def function_cut(self) -> Cut:
        return Cut.bipartition([self.function_qubit], self.function_qubit + 1)

    def fraction_true(self) -> float:
        return float(np.sum(self.f_table)) / self.n_graphs


def build_graph_function_state(n_vertices: int, f_oracle) -> GraphFunctionState:
    if n_vertices < 2 or n_vertices > MAX_VERTICES:
        raise ValidationError("desk-scale", f"graph states support 2..{MAX_VERTICES} vertices")
    table = _f_table(n_vertices, f_oracle)
    m_graphs = table.shape[0]
    amps = np.zeros(2 * m_graphs, dtype=np.complex128)
    amp = 1.0 / math.sqrt(m_graphs)
    for g in range(m_graphs):
        amps[2 * g + int(table[g])] = amp
    n_qubits = n_edge_slots(n_vertices) + 1
    return GraphFunctionState(
        n_vertices=n_vertices,
        f_table=table,
        state=PureState(amps, (2,) * n_qubits),
    )


@dataclass(frozen=True, eq=False)
class ClassicalDistribution:
    """p(G, x) = 1/M when x = f(G), else 0, plus its mutual information."""

    n_vertices: int
    f_table: np.ndarray
    mutual_information_bits: float

    @property
    def n_graphs(self) -> int:
        return int(self.f_table.shape[0])

    def p(self, graph_index: int, x: int) -> float:
        if not 0 <= graph_index < self.n_graphs or x not in (0, 1):
            raise ValidationError("distribution-support", "index outside the distribution support")
        return 1.0 / self.n_graphs if int(self.f_table[graph_index]) == x else 0.0

    def fraction_true(self) -> float:
        return float(np.sum(self.f_table)) / self.n_graphs


def classical_distribution(n_vertices: int, f_oracle) -> ClassicalDistribution:
    """The classical analogue of the graph-function state.

    X is deterministic given G, so I(G; X) = H(X) = h(q) with q the fraction
    of graphs where f = 1.
    """
    if n_vertices < 2 or n_vertices > MAX_VERTICES:
        raise ValidationError("desk-scale", f"distributions support 2..{MAX_VERTICES} vertices")
    table = _f_table(n_vertices, f_oracle)
    q = float(np.sum(table)) / table.shape[0]
    return ClassicalDistribution(
        n_vertices=n_vertices,
        f_table=table,
        mutual_information_bits=binary_entropy(q),
    )


def graph_state_entanglement_profile(gfs: GraphFunctionState, cuts) -> dict[str, float]:
    """Base-2 entanglement entropy of the state across each requested cut."""
    out = {}
    for cut in cuts:
        out[cut.label()] = schmidt_decompose(gfs.state, cut).entropy()
    return out
