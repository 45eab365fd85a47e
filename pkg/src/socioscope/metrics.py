"""Weighted graph metrics over sociograms.

Conventions shared by every metric:

* Directed conversation graphs are symmetrized (A + A^T) for the spectral and
  path metrics (eigenvector, clustering, Katz, path lengths, edge
  connectivity); PageRank and betweenness are inherently directional and
  respect edge direction.
* Path metrics use edge distance 1/weight: stronger interaction means a
  shorter distance, since weights encode intensity rather than cost.
* Variabilities are population standard deviations over the roster.
* Iterative solvers run with tolerance 1e-10, at most 1000 iterations, and a
  deterministic uniform start; failures raise NotConverged instead of
  returning silently degraded values.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from .model import Roster, Sociogram, adjacency, is_connected

SOLVER_TOL = 1e-10
SOLVER_MAX_ITER = 1000

DEFAULT_PAGERANK_DAMPING = 0.85
DEFAULT_KATZ_ALPHA_FACTOR = 0.85
DEFAULT_KATZ_BETA = 1.0


class NotConverged(RuntimeError):
    """An iterative solver failed to reach tolerance within the iteration cap."""

    def __init__(self, what: str, iterations: int):
        self.iterations = iterations
        super().__init__(f"{what} did not converge within {iterations} iterations")


class DisconnectedGraph(ValueError):
    """A metric that requires a connected sociogram was given a disconnected one."""


class SingularSystem(RuntimeError):
    """The Katz fixed point produced non-finite values (alpha too close to 1/lambda_max)."""


@dataclass(frozen=True)
class MetricsReport:
    """Numeric output of the metric suite for one sociogram.

    When the sociogram is disconnected only ``connected`` is meaningful and
    every numeric field is None; the characterization layer turns that into
    the worst-case profile.
    """

    connected: bool
    eigenvector_centrality: dict[str, float] | None = None
    mean_eigenvector: float | None = None
    eigenvector_variability: float | None = None
    clustering: dict[str, float] | None = None
    clustering_variability: float | None = None
    pagerank: dict[str, float] | None = None
    pagerank_variability: float | None = None
    betweenness: dict[str, float] | None = None
    betweenness_variability: float | None = None
    mean_katz: float | None = None
    path_length_variability: float | None = None
    edge_connectivity: int | None = None

    def to_dict(self) -> dict:
        if not self.connected:
            return {"connected": False}
        return {
            "connected": True,
            "eigenvector_centrality": self.eigenvector_centrality,
            "mean_eigenvector": self.mean_eigenvector,
            "eigenvector_variability": self.eigenvector_variability,
            "clustering": self.clustering,
            "clustering_variability": self.clustering_variability,
            "pagerank": self.pagerank,
            "pagerank_variability": self.pagerank_variability,
            "betweenness": self.betweenness,
            "betweenness_variability": self.betweenness_variability,
            "mean_katz": self.mean_katz,
            "path_length_variability": self.path_length_variability,
            "edge_connectivity": self.edge_connectivity,
        }


def _symmetrized(sociogram: Sociogram) -> np.ndarray:
    a = adjacency(sociogram)
    return a + a.T if sociogram.directed else a


def _dominant_eigenpair(a_sym: np.ndarray) -> tuple[float, np.ndarray]:
    """Dominant eigenpair of a symmetric non-negative matrix via Lanczos.

    Deterministic: the startup vector is uniform. The Perron vector is
    sign-fixed to be entrywise non-negative and exactly unit L2 norm.
    """
    n = a_sym.shape[0]
    v0 = np.full(n, 1.0 / math.sqrt(n))
    try:
        vals, vecs = eigsh(a_sym, k=1, which="LA", v0=v0, tol=1e-12, maxiter=SOLVER_MAX_ITER)
    except ArpackNoConvergence as exc:
        raise NotConverged("eigenvector centrality", SOLVER_MAX_ITER) from exc
    except ArpackError as exc:
        raise NotConverged("eigenvector centrality", SOLVER_MAX_ITER) from exc
    lam = float(vals[0])
    vec = vecs[:, 0]
    if vec.sum() < 0:
        vec = -vec
    vec = np.maximum(vec, 0.0)  # clamp rounding noise; the Perron vector is non-negative
    vec /= np.linalg.norm(vec)
    return lam, vec


def eigenvector_centrality(sociogram: Sociogram) -> tuple[dict[str, float], float, float]:
    """Unit-L2 dominant eigenvector of the (symmetrized) adjacency.

    Returns (per-node values, population mean, population standard deviation).
    """
    if not is_connected(sociogram):
        raise DisconnectedGraph("eigenvector centrality needs a connected sociogram")
    _, vec = _dominant_eigenpair(_symmetrized(sociogram))
    values = {p: float(vec[i]) for i, p in enumerate(sociogram.roster)}
    return values, float(vec.mean()), float(vec.std())


def clustering_coefficients(sociogram: Sociogram) -> tuple[dict[str, float], float]:
    """Binary clustering coefficient C_i = 2 e_i / (k_i (k_i - 1)).

    Neighborhoods ignore direction; e_i counts edges (not weights) among the
    neighbors of i. Nodes with fewer than two neighbors get C_i = 0.
    """
    b = _symmetrized(sociogram) > 0
    n = b.shape[0]
    coeffs = np.zeros(n)
    for i in range(n):
        nbrs = np.flatnonzero(b[i])
        k = len(nbrs)
        if k < 2:
            continue
        e_i = int(np.count_nonzero(b[np.ix_(nbrs, nbrs)])) // 2
        coeffs[i] = 2.0 * e_i / (k * (k - 1))
    values = {p: float(coeffs[i]) for i, p in enumerate(sociogram.roster)}
    return values, float(coeffs.std())


def pagerank(
    sociogram: Sociogram, damping: float = DEFAULT_PAGERANK_DAMPING
) -> tuple[dict[str, float], float]:
    """Weighted PageRank with the standard dangling-node completion.

    Transitions from j are proportional to outgoing edge weights; nodes with
    no out-edges redistribute their mass uniformly over all nodes. Fixed
    point by iteration from the uniform vector.
    """
    if not 0 < damping < 1:
        raise ValueError(f"damping must be in (0, 1), got {damping}")
    a = adjacency(sociogram)
    if not sociogram.directed:
        a = np.maximum(a, a.T)  # already symmetric; keep explicit
    n = a.shape[0]
    out_strength = a.sum(axis=1)
    dangling = out_strength == 0
    transition = np.zeros_like(a)
    nz = ~dangling
    transition[nz] = a[nz] / out_strength[nz, None]

    p = np.full(n, 1.0 / n)
    base = (1.0 - damping) / n
    for _ in range(SOLVER_MAX_ITER):
        nxt = base + damping * (p @ transition + p[dangling].sum() / n)
        if np.abs(nxt - p).sum() < SOLVER_TOL:
            p = nxt
            break
        p = nxt
    else:
        raise NotConverged("pagerank", SOLVER_MAX_ITER)
    values = {pid: float(p[i]) for i, pid in enumerate(sociogram.roster)}
    return values, float(p.std())


def _length_adjacency(sociogram: Sociogram, respect_direction: bool) -> list[list[tuple[int, float]]]:
    """Adjacency lists with edge length 1/weight."""
    a = adjacency(sociogram)
    if not respect_direction and sociogram.directed:
        a = a + a.T
    n = a.shape[0]
    return [[(j, 1.0 / a[i, j]) for j in range(n) if a[i, j] > 0] for i in range(n)]


def _dijkstra(adj: list[list[tuple[int, float]]], source: int):
    """Single-source shortest paths with path counting (Brandes bookkeeping).

    Returns (settled order, distances, path counts, predecessor lists).
    Edge lengths are strictly positive, so a node already settled can never
    be re-relaxed at equal distance.
    """
    n = len(adj)
    dist: dict[int, float] = {}
    seen = {source: 0.0}
    sigma = [0.0] * n
    sigma[source] = 1.0
    preds: list[list[int]] = [[] for _ in range(n)]
    order: list[int] = []
    counter = 0
    heap = [(0.0, counter, source)]
    while heap:
        d, _, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        order.append(v)
        for w, length in adj[v]:
            if w in dist:
                continue
            nd = d + length
            if w not in seen or nd < seen[w]:
                seen[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                counter += 1
                heapq.heappush(heap, (nd, counter, w))
            elif nd == seen[w]:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, dist, sigma, preds


def betweenness(sociogram: Sociogram) -> tuple[dict[str, float], float]:
    """Normalized shortest-path betweenness with distance = 1/weight.

    Directed sociograms count ordered (s, t) pairs and normalize by
    (n-1)(n-2); undirected ones count unordered pairs and normalize by
    (n-1)(n-2)/2, keeping g(v) on a [0, 1] scale either way.
    """
    n = len(sociogram.roster)
    if n < 3:
        return {p: 0.0 for p in sociogram.roster}, 0.0
    adj = _length_adjacency(sociogram, respect_direction=sociogram.directed)
    raw = np.zeros(n)
    for s in range(n):
        order, _, sigma, preds = _dijkstra(adj, s)
        delta = np.zeros(n)
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                raw[w] += delta[w]
    if sociogram.directed:
        g = raw / ((n - 1) * (n - 2))
    else:
        g = (raw / 2.0) / ((n - 1) * (n - 2) / 2.0)
    values = {p: float(g[i]) for i, p in enumerate(sociogram.roster)}
    return values, float(g.std())


def katz_centrality(
    sociogram: Sociogram,
    alpha_factor: float = DEFAULT_KATZ_ALPHA_FACTOR,
    beta: float = DEFAULT_KATZ_BETA,
) -> tuple[dict[str, float], float]:
    """L2-normalized Katz centrality by fixed-point iteration.

    The decay is alpha = alpha_factor / lambda_max, which keeps the fixed
    point x = alpha A x + beta well defined (alpha_factor < 1) and makes the
    normalized vector invariant under rescaling of all edge weights.

    Returns (per-node normalized values, the alpha actually used).
    """
    if not 0 < alpha_factor < 1:
        raise ValueError(f"alpha_factor must be in (0, 1), got {alpha_factor}")
    if not is_connected(sociogram):
        raise DisconnectedGraph("katz centrality needs a connected sociogram")
    a_sym = _symmetrized(sociogram)
    lam, _ = _dominant_eigenpair(a_sym)
    alpha = alpha_factor / lam
    n = a_sym.shape[0]
    x = np.full(n, 1.0)
    for _ in range(SOLVER_MAX_ITER):
        nxt = alpha * (a_sym @ x) + beta
        if not np.all(np.isfinite(nxt)):
            raise SingularSystem("katz iteration produced non-finite values")
        if np.abs(nxt - x).max() < SOLVER_TOL:
            x = nxt
            break
        x = nxt
    else:
        raise NotConverged("katz centrality", SOLVER_MAX_ITER)
    x = x / np.linalg.norm(x)
    values = {p: float(x[i]) for i, p in enumerate(sociogram.roster)}
    return values, alpha


def katz_mean(
    sociogram: Sociogram,
    alpha_factor: float = DEFAULT_KATZ_ALPHA_FACTOR,
    beta: float = DEFAULT_KATZ_BETA,
) -> float:
    values, _ = katz_centrality(sociogram, alpha_factor, beta)
    return float(np.mean(list(values.values())))


def path_length_variability(sociogram: Sociogram) -> float:
    """Population standard deviation of per-node mean shortest-path distances.

    Distances are 1/weight on the direction-ignored graph, so doubling all
    weights halves the result.
    """
    if not is_connected(sociogram):
        raise DisconnectedGraph("path lengths need a connected sociogram")
    n = len(sociogram.roster)
    adj = _length_adjacency(sociogram, respect_direction=False)
    means = np.zeros(n)
    for s in range(n):
        _, dist, _, _ = _dijkstra(adj, s)
        if len(dist) != n:
            raise DisconnectedGraph("path lengths need a connected sociogram")
        means[s] = sum(d for v, d in dist.items() if v != s) / (n - 1)
    return float(means.std())


def _unit_maxflow(neighbors: list[set[int]], s: int, t: int) -> int:
    """Max s-t flow with unit capacity per undirected edge (Edmonds-Karp)."""
    cap: dict[tuple[int, int], int] = {}
    for u, nbrs in enumerate(neighbors):
        for v in nbrs:
            cap[(u, v)] = 1
    flow = 0
    while True:
        parent = {s: s}
        queue = [s]
        while queue and t not in parent:
            u = queue.pop(0)
            for v in neighbors[u]:
                if v not in parent and cap.get((u, v), 0) > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return flow
        v = t
        while v != s:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] = cap.get((v, u), 0) + 1
            v = u
        flow += 1


def edge_connectivity(sociogram: Sociogram) -> int:
    """Minimum number of edges whose removal disconnects the graph.

    Counts edges on the direction-ignored simple graph (the unweighted min
    cut). Returns 0 for an already-disconnected sociogram.
    """
    if not is_connected(sociogram):
        return 0
    n = len(sociogram.roster)
    idx = {p: i for i, p in enumerate(sociogram.roster)}
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for (u, v) in sociogram.edges:
        neighbors[idx[u]].add(idx[v])
        neighbors[idx[v]].add(idx[u])
    # kappa' = min over t of maxflow(s0, t); s0 is on one side of any cut
    return min(_unit_maxflow(neighbors, 0, t) for t in range(1, n))


def compute_metrics(
    sociogram: Sociogram,
    damping: float = DEFAULT_PAGERANK_DAMPING,
    katz_alpha_factor: float = DEFAULT_KATZ_ALPHA_FACTOR,
    katz_beta: float = DEFAULT_KATZ_BETA,
) -> MetricsReport:
    """Run the full metric suite; disconnected graphs yield an empty report.

    Metrics are only defined on connected sociograms, so a disconnected input
    produces connected=False with every numeric field absent.
    """
    if not is_connected(sociogram):
        return MetricsReport(connected=False)
    eig_values, eig_mean, eig_std = eigenvector_centrality(sociogram)
    clust_values, clust_std = clustering_coefficients(sociogram)
    pr_values, pr_std = pagerank(sociogram, damping)
    btw_values, btw_std = betweenness(sociogram)
    return MetricsReport(
        connected=True,
        eigenvector_centrality=eig_values,
        mean_eigenvector=eig_mean,
        eigenvector_variability=eig_std,
        clustering=clust_values,
        clustering_variability=clust_std,
        pagerank=pr_values,
        pagerank_variability=pr_std,
        betweenness=btw_values,
        betweenness_variability=btw_std,
        mean_katz=katz_mean(sociogram, katz_alpha_factor, katz_beta),
        path_length_variability=path_length_variability(sociogram),
        edge_connectivity=edge_connectivity(sociogram),
    )
