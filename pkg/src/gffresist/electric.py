"""Deterministic circuit theory for resistive multigraphs.

Node voltages come from a dense symmetric solve of the reduced Laplacian
under a unit current source. The Thomson flow follows by Ohm's law; an
independent minimum-energy route re-derives the same flow by unconstrained
quadratic minimization in cycle coordinates, so the two can cross-check
each other.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    SameVertexError,
    SingularSystemError,
    ValidationError,
)
from .graph import (
    Multigraph,
    circuit_matrix,
    fundamental_circuits,
    walk_between,
    walk_sign_vector,
)

MIN_RESISTANCE = 1e-12


@dataclass(frozen=True)
class ResistiveNetwork:
    """Multigraph plus a strictly positive resistance per edge (ohms)."""

    graph: Multigraph
    resistances: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.resistances, dtype=float).copy()
        if r.shape != (self.graph.n_edges,):
            raise DimensionMismatchError(
                f"expected {self.graph.n_edges} resistances, got shape {r.shape}")
        if not np.all(np.isfinite(r)):
            raise ValidationError("resistances must be finite")
        if np.any(r < MIN_RESISTANCE):
            raise ValidationError(
                f"resistances must be >= {MIN_RESISTANCE} ohms to keep "
                "conductances finite")
        r.setflags(write=False)
        object.__setattr__(self, "resistances", r)

    def with_resistances(self, r) -> "ResistiveNetwork":
        return ResistiveNetwork(self.graph, np.asarray(r, dtype=float))


@dataclass(frozen=True)
class FlowVector:
    """Signed current per edge, relative to canonical orientation (amperes)."""

    currents: np.ndarray

    def __post_init__(self):
        i = np.asarray(self.currents, dtype=float).copy()
        if not np.all(np.isfinite(i)):
            raise ValidationError("currents must be finite")
        i.setflags(write=False)
        object.__setattr__(self, "currents", i)


@dataclass(frozen=True)
class VoltageVector:
    """Potential per vertex (volts); the ground vertex sits at exactly 0."""

    potentials: np.ndarray
    ground: int

    def __post_init__(self):
        v = np.asarray(self.potentials, dtype=float).copy()
        if v[self.ground] != 0.0:
            raise ValidationError("ground potential must be exactly 0")
        v.setflags(write=False)
        object.__setattr__(self, "potentials", v)


def _check_flow(n: ResistiveNetwork, f: FlowVector):
    if f.currents.shape != (n.graph.n_edges,):
        raise DimensionMismatchError(
            f"flow has shape {f.currents.shape}, network has "
            f"{n.graph.n_edges} edges")


def laplacian(n: ResistiveNetwork) -> np.ndarray:
    """Weighted graph Laplacian with edge conductances 1/R_e."""
    g = n.graph
    lap = np.zeros((g.n_vertices, g.n_vertices))
    for e, rec in enumerate(g.edges):
        c = 1.0 / n.resistances[e]
        lap[rec.tail, rec.head] -= c
        lap[rec.head, rec.tail] -= c
        lap[rec.tail, rec.tail] += c
        lap[rec.head, rec.head] += c
    return lap


def node_voltages(n: ResistiveNetwork, a: int, b: int) -> VoltageVector:
    """Vertex potentials for a unit current injected at a, extracted at grounded b."""
    if a == b:
        raise SameVertexError("source and sink must differ")
    keep = [v for v in range(n.graph.n_vertices) if v != b]
    reduced = laplacian(n)[np.ix_(keep, keep)]
    rhs = np.zeros(len(keep))
    rhs[keep.index(a)] = 1.0
    try:
        sol = scipy.linalg.solve(reduced, rhs, assume_a="pos")
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            "reduced Laplacian is singular; is the network connected?") from exc
    potentials = np.zeros(n.graph.n_vertices)
    potentials[keep] = sol
    return VoltageVector(potentials, ground=b)


def effective_resistance(n: ResistiveNetwork, a: int, b: int) -> float:
    """Voltage at a under a unit a-to-b current source with b grounded."""
    return float(node_voltages(n, a, b).potentials[a])


def thomson_flow(n: ResistiveNetwork, a: int, b: int) -> FlowVector:
    """The unique unit a-to-b flow satisfying both Kirchhoff laws (Ohm route)."""
    volts = node_voltages(n, a, b).potentials
    tails = np.array([rec.tail for rec in n.graph.edges])
    heads = np.array([rec.head for rec in n.graph.edges])
    return FlowVector((volts[tails] - volts[heads]) / n.resistances)


def min_energy_flow_oracle(n: ResistiveNetwork, a: int, b: int) -> FlowVector:
    """Unit a-to-b flow minimizing dissipated power, without any voltage solve.

    Feasible flows are the tree-path flow plus the span of the fundamental
    circuit sign vectors; the power quadratic is minimized by solving its
    normal equations in cycle coordinates.
    """
    if a == b:
        raise SameVertexError("source and sink must differ")
    base = walk_sign_vector(n.graph, walk_between(n.graph, a, b))
    cycles = circuit_matrix(n.graph, fundamental_circuits(n.graph))
    if cycles.shape[0] == 0:
        return FlowVector(base)
    weighted = cycles * n.resistances
    gram = weighted @ cycles.T
    try:
        t = scipy.linalg.solve(gram, -weighted @ base, assume_a="pos")
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("cycle Gram matrix is singular") from exc
    return FlowVector(base + cycles.T @ t)


def dissipated_power(n: ResistiveNetwork, f: FlowVector) -> float:
    """Total power sum(I_e^2 R_e) dissipated by the flow."""
    _check_flow(n, f)
    return float(np.sum(f.currents ** 2 * n.resistances))


def kcl_residual(n: ResistiveNetwork, f: FlowVector, a: int, b: int) -> float:
    """Worst-vertex violation of current conservation for a unit a-to-b source."""
    _check_flow(n, f)
    source = np.zeros(n.graph.n_vertices)
    source[a] += 1.0
    source[b] -= 1.0
    net = n.graph.incidence_matrix() @ f.currents
    return float(np.max(np.abs(net - source)))


def kvl_residual(n: ResistiveNetwork, f: FlowVector) -> float:
    """Worst fundamental-circuit violation of the voltage-drop sum law."""
    _check_flow(n, f)
    cycles = circuit_matrix(n.graph, fundamental_circuits(n.graph))
    if cycles.shape[0] == 0:
        return 0.0
    drops = cycles @ (f.currents * n.resistances)
    return float(np.max(np.abs(drops)))
