"""Gaussian free field of a resistive network.

The field lives on edges: the independent edge Gaussian with variances R_e,
conditioned to vanish on every circuit functional. Vertex potentials are
derived through tree-path functionals, and the variance of any a-to-b
potential difference reproduces the effective resistance.
"""

from dataclasses import dataclass

import numpy as np

from .electric import ResistiveNetwork
from .errors import SameVertexError
from .gaussian import (
    ConstraintSet,
    GaussianVector,
    condition_on_zero,
    independent_gaussian,
    linear_functional_variance,
)
from .graph import (
    circuit_matrix,
    enumerate_simple_walks,
    fundamental_circuits,
    walk_between,
    walk_sign_vector,
)


@dataclass(frozen=True)
class FreeField:
    """Conditioned edge field of a network, with its conditioning basis."""

    network: ResistiveNetwork
    edge_field: GaussianVector
    reference_vertex: int
    constraint_basis: ConstraintSet


def build_free_field(n: ResistiveNetwork, v_star: int = 0) -> FreeField:
    """Condition the independent edge Gaussian on the fundamental cycle basis."""
    basis = ConstraintSet(circuit_matrix(n.graph, fundamental_circuits(n.graph)))
    field = condition_on_zero(independent_gaussian(n.resistances), basis)
    return FreeField(n, field, v_star, basis)


def potential_difference_functional(f: FreeField, a: int, b: int) -> np.ndarray:
    """Edge functional whose value on the field is the a-to-b potential difference.

    Any a-to-b walk gives the same value almost surely; the spanning-tree
    walk is used as the representative.
    """
    if a == b:
        raise SameVertexError("potential difference needs two distinct vertices")
    g = f.network.graph
    return walk_sign_vector(g, walk_between(g, a, b))


def potential_difference_variance(f: FreeField, a: int, b: int) -> float:
    """Variance of the a-to-b potential difference; equals the effective resistance."""
    return linear_functional_variance(
        f.edge_field, potential_difference_functional(f, a, b))


def eta_field(f: FreeField) -> GaussianVector:
    """Vertex potential field, grounded at the reference vertex.

    Coordinate v applies the tree-path functional from the reference vertex
    to v; the reference coordinate is identically zero.
    """
    g = f.network.graph
    rows = np.zeros((g.n_vertices, g.n_edges))
    for v in range(g.n_vertices):
        if v == f.reference_vertex:
            continue
        rows[v] = walk_sign_vector(g, walk_between(g, f.reference_vertex, v))
    cov = rows @ f.edge_field.covariance @ rows.T
    return GaussianVector(np.zeros(g.n_vertices), 0.5 * (cov + cov.T))


def path_independence_check(f: FreeField, a: int, b: int,
                            limit: int = 10_000) -> float:
    """Worst variance of the difference between two a-to-b walk functionals.

    Enumerates simple walks only; any other walk differs from a simple one
    by circuit functionals, which the conditioning already kills. The
    contract is a value at most 1e-10.
    """
    g = f.network.graph
    walks = enumerate_simple_walks(g, a, b, limit=limit)
    vectors = [walk_sign_vector(g, w) for w in walks]
    worst = 0.0
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            var = linear_functional_variance(f.edge_field,
                                             vectors[i] - vectors[j])
            worst = max(worst, var)
    return worst
