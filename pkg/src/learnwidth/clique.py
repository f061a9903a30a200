"""Graph clique decisions through linear optimization over the k-incoherent
set: edge-list ingestion, the promise-gap parameters of the reduction, and
the threshold rule, cross-validated by brute force."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .incoherence import DEFAULT_CAP, _check_cap, mu_oracle, mu_sdp


class GraphParseError(ValueError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with 1-based vertices, matching the file
    format; adjacency rows are 0-based."""

    n: int
    edges: frozenset

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u < v <= self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u - 1, v - 1] = 1.0
            a[v - 1, u - 1] = 1.0
        return a

    def neighbors(self, u: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == u:
                out.add(b)
            elif b == u:
                out.add(a)
        return out


@dataclass(frozen=True)
class GapParameters:
    """Promise-gap data for one (graph, k) instance: the value thresholds
    gamma +- delta around the normalized adjacency optimum, and the
    eigenvalue gap eps_k separating clique from non-clique subgraphs."""

    e: int
    k: int
    n: int
    eps_k: float
    gamma: float
    delta: float


def load_graph(text: str) -> Graph:
    """Parse 'n m' followed by m lines 'u v' (1-based vertices)."""
    lines = text.splitlines()
    if not lines:
        raise GraphParseError("empty input", 1)
    head = lines[0].split()
    if len(head) != 2:
        raise GraphParseError(f"expected 'n m', got {lines[0]!r}", 1)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphParseError(f"expected integers 'n m', got {lines[0]!r}", 1) from None
    if n < 1 or m < 0:
        raise GraphParseError(f"invalid sizes n={n}, m={m}", 1)
    edges = set()
    count = 0
    for offset, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected 'u v', got {raw!r}", offset)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"expected integers 'u v', got {raw!r}", offset) from None
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", offset)
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphParseError(f"vertex out of range in ({u}, {v})", offset)
        key = (min(u, v), max(u, v))
        if key in edges:
            raise GraphParseError(f"duplicate edge ({u}, {v})", offset)
        edges.add(key)
        count += 1
    if count != m:
        raise GraphParseError(f"declared {m} edges but found {count}", len(lines))
    return Graph(n, frozenset(edges))


def gap_parameters(g: Graph, k: int) -> GapParameters:
    """Thresholds for deciding k-cliques from the normalized optimum.

    The eigenvalue gap is instantiated with equality in the complete-graph
    bound, the tightest admissible choice, which maximizes delta.
    """
    if k < 2:
        raise ValueError("the reduction requires k >= 2")
    if k > g.n:
        raise ValueError(f"k={k} exceeds vertex count {g.n}")
    e = g.num_edges
    if e < 1:
        raise ValueError("the reduction requires a nonempty graph")
    # gap = (k-1) - sqrt((k-1)^2 - 2 + 2/k), the shortfall of the best
    # non-complete k-vertex subgraph below k-1
    eps_k = (k - 1.0) - math.sqrt((k - 1.0) ** 2 - 2.0 + 2.0 / k)
    root = math.sqrt(2.0 * e)
    delta = eps_k / (root * (3.0 + (2.0 * g.n + 1.0) * (k - 1.0) / root))
    gamma = (k - 1.0) / root - eps_k / root + 2.0 * delta
    if not delta > 0:
        raise AssertionError("degenerate promise gap")
    return GapParameters(e=e, k=k, n=g.n, eps_k=eps_k, gamma=gamma, delta=delta)


def normalized_mu(g: Graph, k: int, method: str = "ORACLE",
                  cap: int = DEFAULT_CAP) -> float:
    """Optimum of the Frobenius-normalized adjacency objective over the
    k-incoherent set, by exact enumeration or by the SDP."""
    params = gap_parameters(g, k)
    adjacency = g.adjacency()
    scale = math.sqrt(2.0 * params.e)
    if method == "ORACLE":
        return mu_oracle(adjacency, k, cap=cap).value / scale
    if method == "SDP":
        return mu_sdp(adjacency / scale, k, eps=params.delta / 2.0, cap=cap)
    raise ValueError("method must be ORACLE or SDP")


def decide_clique(g: Graph, k: int, method: str = "ORACLE",
                  cap: int = DEFAULT_CAP) -> bool:
    """True iff the graph contains a k-clique.

    The normalized optimum provably lands at or above gamma + delta on
    clique instances and at or below gamma - delta otherwise, so the
    midpoint threshold at gamma is safe at computation precision delta/2
    (which the SDP method requests from the solver).
    """
    params = gap_parameters(g, k)
    value = normalized_mu(g, k, method=method, cap=cap)
    return value >= params.gamma


def brute_force_clique(g: Graph, k: int, cap: int = DEFAULT_CAP) -> bool:
    """Exhaustive validation oracle over all k-subsets."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > g.n:
        return False
    _check_cap(g.n, k, cap)
    adjacency = {u: g.neighbors(u) for u in range(1, g.n + 1)}
    for subset in combinations(range(1, g.n + 1), k):
        if all(v in adjacency[u] for u, v in combinations(subset, 2)):
            return True
    return False
