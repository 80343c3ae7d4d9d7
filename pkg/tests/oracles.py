"""Independent reference computations used only by the tests."""
from __future__ import annotations

import itertools
import math

import networkx as nx
import numpy as np

from dictcore.graph import DictGraph, graph_from_edges


def random_digraph(rng, n, p) -> DictGraph:
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return graph_from_edges(n, edges)


def dense_adjacency(g: DictGraph) -> np.ndarray:
    A = np.zeros((g.node_count, g.node_count), dtype=np.int64)
    for u, v in g.edges():
        A[u, v] = 1
    return A


def closure_by_powers(g: DictGraph) -> np.ndarray:
    """R[u, v] true iff a walk of length >= 1 leads from u to v (boolean powering)."""
    A = dense_adjacency(g).astype(bool)
    R = A.copy()
    P = A.copy()
    for _ in range(g.node_count):
        P = (P.astype(np.int64) @ A.astype(np.int64)) > 0
        new = R | P
        if (new == R).all():
            break
        R = new
    return R


def mutual_reachability_classes(g: DictGraph) -> list[list[int]]:
    R = closure_by_powers(g)
    n = g.node_count
    classes = []
    assigned = set()
    for u in range(n):
        if u in assigned:
            continue
        cls = [u] + [v for v in range(n) if v != u and R[u, v] and R[v, u]]
        assigned.update(cls)
        classes.append(sorted(cls))
    return sorted(classes)


def johnson_girths(g: DictGraph) -> dict[tuple[int, int], float]:
    """Per-edge minimum over every simple cycle (networkx's Johnson enumeration)."""
    G = nx.DiGraph()
    G.add_nodes_from(range(g.node_count))
    G.add_edges_from(g.edges())
    best = {e: math.inf for e in g.edges()}
    for cyc in nx.simple_cycles(G):
        k = len(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if k < best[(a, b)]:
                best[(a, b)] = k
    return best


def floyd_distances(g: DictGraph) -> np.ndarray:
    n = g.node_count
    D = np.full((n, n), np.inf)
    for u, v in g.edges():
        D[u, v] = 1
    for k in range(n):
        D = np.minimum(D, D[:, [k]] + D[[k], :])
    return D


def dense_walk_oracle(g: DictGraph, indicator: np.ndarray, max_len: int) -> np.ndarray:
    A = dense_adjacency(g).astype(object)
    x = np.asarray(indicator, dtype=object)
    total = np.zeros_like(x)
    P = np.identity(g.node_count, dtype=object)
    for _ in range(max_len):
        P = P.dot(A)
        total = total + P.dot(x)
    return total


def enumerate_walks(g: DictGraph, start: int, targets: set[int], max_len: int) -> int:
    count = 0
    frontier = {start: 1}
    for _ in range(max_len):
        nxt: dict[int, int] = {}
        for u, c in frontier.items():
            for v in g.out_adj[u]:
                nxt[v] = nxt.get(v, 0) + c
        count += sum(c for v, c in nxt.items() if v in targets)
        frontier = nxt
    return count


def jacobi_svd(W: np.ndarray, tol: float = 1e-15, sweeps: int = 60):
    """One-sided Jacobi SVD (Hestenes).  Returns (U, s, Vt) sorted by s descending."""
    U = np.array(W, dtype=np.float64, copy=True)
    m, n = U.shape
    V = np.identity(n)
    for _ in range(sweeps):
        rotated = False
        for i, j in itertools.combinations(range(n), 2):
            a = U[:, i] @ U[:, i]
            b = U[:, j] @ U[:, j]
            c = U[:, i] @ U[:, j]
            if abs(c) <= tol * math.sqrt(a * b) or c == 0.0:
                continue
            rotated = True
            if abs(b - a) > 1e150 * abs(c):
                t = c / (b - a)  # small-angle limit
            else:
                zeta = (b - a) / (2 * c)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
            cs = 1 / math.sqrt(1 + t * t)
            sn = cs * t
            Ui, Uj = U[:, i].copy(), U[:, j].copy()
            U[:, i], U[:, j] = cs * Ui - sn * Uj, sn * Ui + cs * Uj
            Vi, Vj = V[:, i].copy(), V[:, j].copy()
            V[:, i], V[:, j] = cs * Vi - sn * Vj, sn * Vi + cs * Vj
        if not rotated:
            break
    s = np.linalg.norm(U, axis=0)
    order = np.argsort(-s)
    s = s[order]
    V = V[:, order]
    U = U[:, order] / np.where(s > 0, s, 1.0)
    return U, s, V.T


def rand_index(labels_a: dict, labels_b: dict, items) -> float:
    """Plain Rand index over all unordered pairs of ``items``."""
    items = list(items)
    agree = total = 0
    for x, y in itertools.combinations(items, 2):
        same_a = labels_a[x] == labels_a[y]
        same_b = labels_b[x] == labels_b[y]
        agree += same_a == same_b
        total += 1
    return agree / total if total else 1.0
