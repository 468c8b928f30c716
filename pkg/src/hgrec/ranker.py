"""Query-seeded ranking on the hypergraph.

The graph is materialized as a 0/1 vertex-edge incidence matrix with a
diagonal of edge weights. Degrees follow the standard hypergraph-learning
convention: a vertex degree is the weight sum of its incident edges, an edge
degree is its member count. The resulting transition matrix

    A = Dv^-1 @ H @ W @ De^-1 @ H.T

is row-stochastic on every vertex with positive degree; zero-degree
(isolated) vertices get an all-zero row, which pins their score to the query
value. Scores solve (I - alpha * A) f = y, either by a direct sparse
factorization or by the fixed-point iteration f <- alpha * A @ f + y, which
converges because alpha < 1 bounds the spectral radius of alpha * A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .config import DIRECT_SOLVER_MAX_VERTICES, HyperParams
from .errors import ConfigError, ConvergenceError, NoEdgesError, SolverError
from .hypergraph import Hypergraph


@dataclass
class RankingSystem:
    incidence: sp.csr_matrix
    edge_weights: np.ndarray
    vertex_degree: np.ndarray
    edge_degree: np.ndarray
    alpha: float
    isolated: np.ndarray
    _transition: sp.csr_matrix | None = field(default=None, repr=False)

    @property
    def n_vertices(self) -> int:
        return self.incidence.shape[0]

    @property
    def n_edges(self) -> int:
        return self.incidence.shape[1]


def assemble(graph: Hypergraph, alpha: float) -> RankingSystem:
    """Materialize incidence, weights and degrees for a built hypergraph."""
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    if not graph.edges:
        raise NoEdgesError("hypergraph has no edges")

    rows, cols = [], []
    for e, edge in enumerate(graph.edges):
        for v in edge.members:
            rows.append(v)
            cols.append(e)
    n_v, n_e = graph.n_vertices, len(graph.edges)
    incidence = sp.csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(n_v, n_e), dtype=np.float64
    )
    edge_weights = np.asarray([e.weight for e in graph.edges], dtype=np.float64)
    vertex_degree = incidence @ edge_weights
    edge_degree = np.asarray([len(e.members) for e in graph.edges], dtype=np.float64)
    return RankingSystem(
        incidence=incidence,
        edge_weights=edge_weights,
        vertex_degree=vertex_degree,
        edge_degree=edge_degree,
        alpha=alpha,
        isolated=vertex_degree <= 0.0,
    )


def transition_matrix(system: RankingSystem) -> sp.csr_matrix:
    """Vertex-to-vertex diffusion operator; memoized on the system."""
    if system._transition is None:
        inv_dv = np.where(system.isolated, 0.0, 1.0)
        np.divide(inv_dv, system.vertex_degree, out=inv_dv, where=~system.isolated)
        per_edge = system.edge_weights / system.edge_degree
        system._transition = (
            sp.diags(inv_dv)
            @ system.incidence
            @ sp.diags(per_edge)
            @ system.incidence.T
        ).tocsr()
    return system._transition


def solve_direct(system: RankingSystem, query: np.ndarray) -> np.ndarray:
    """Score vector via a sparse direct solve of (I - alpha * A) f = query."""
    query = np.asarray(query, dtype=np.float64)
    matrix = sp.identity(system.n_vertices, format="csc") - system.alpha * (
        transition_matrix(system).tocsc()
    )
    scores = spla.spsolve(matrix, query)
    scores = np.atleast_1d(np.asarray(scores, dtype=np.float64))
    if not np.all(np.isfinite(scores)):
        raise SolverError("direct solve produced non-finite scores")
    return scores


def solve_iterative(
    system: RankingSystem,
    query: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 10000,
    return_info: bool = False,
):
    """Score vector via fixed-point iteration from f = query.

    Stops when the max-norm step falls below tol; the result then lies
    within tol / (1 - alpha) of the direct solution. Raises
    ConvergenceError with the last step size if max_iter is exhausted.
    """
    query = np.asarray(query, dtype=np.float64)
    transition = transition_matrix(system)
    alpha = system.alpha
    scores = query.copy()
    step = np.inf
    for iteration in range(1, max_iter + 1):
        updated = alpha * (transition @ scores) + query
        step = float(np.max(np.abs(updated - scores))) if len(scores) else 0.0
        scores = updated
        if step < tol:
            if return_info:
                return scores, {"iterations": iteration, "last_step": step}
            return scores
    raise ConvergenceError(iterations=max_iter, residual=step, tol=tol)


def solve(system: RankingSystem, query: np.ndarray, params: HyperParams) -> np.ndarray:
    """Dispatch per params.solver; auto picks direct below the size cutoff."""
    method = params.solver
    if method == "auto":
        method = (
            "direct"
            if system.n_vertices <= DIRECT_SOLVER_MAX_VERTICES
            else "iterative"
        )
    if method == "direct":
        return solve_direct(system, query)
    return solve_iterative(system, query, tol=params.tol, max_iter=params.max_iter)
