"""Walk counts from every word into every component, and their singular vectors."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .decompose import ComponentSet
from .graph import DictGraph

log = logging.getLogger(__name__)

UINT64_MAX = np.iinfo(np.uint64).max
# float shadow values at or above this are treated as overflowed
_SATURATION_LEVEL = float(2 ** 64) * (1 - 1e-12)


@dataclass
class WalkMatrix:
    """Sparse ``nodes x components`` matrix of bounded-length walk counts."""

    counts: sp.csr_matrix
    component_ids: list[int]
    max_walk_length: int = 5
    pruned_components: list[int] = field(default_factory=list)
    saturated: int = 0

    @property
    def shape(self):
        return self.counts.shape

    def column(self, component_id: int) -> np.ndarray:
        j = self.component_ids.index(component_id)
        return self.counts[:, j].toarray().ravel()

    def dense(self) -> np.ndarray:
        return self.counts.toarray()


def adjacency_matrix(g: DictGraph, dtype=np.uint64) -> sp.csr_matrix:
    rows = np.repeat(np.arange(g.node_count), [len(a) for a in g.out_adj])
    cols = np.fromiter((v for a in g.out_adj for v in a), dtype=np.int64, count=g.edge_count)
    data = np.ones(g.edge_count, dtype=dtype)
    return sp.csr_matrix((data, (rows, cols)), shape=(g.node_count, g.node_count))


def walk_counts(g: DictGraph, components: ComponentSet, max_len: int = 5) -> WalkMatrix:
    """Entry (n, k): walks of length 1..max_len from node n ending in component k.

    Vertices and edges may repeat.  Counts are exact unsigned 64-bit integers;
    a float64 shadow of the same recurrence flags entries whose true value
    would exceed 2**64, and those saturate at the maximum instead of wrapping.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    n = g.node_count
    comps = list(components)
    seen: set[int] = set()
    for c in comps:
        if seen.intersection(c.members):
            raise ValueError("components overlap")
        seen.update(c.members)
    A = adjacency_matrix(g)
    Af = A.astype(np.float64)
    x = np.zeros((n, len(comps)), dtype=np.uint64)
    for j, c in enumerate(comps):
        x[c.members, j] = 1
    total = np.zeros_like(x)
    xf = x.astype(np.float64)
    total_f = np.zeros_like(xf)
    with np.errstate(over="ignore"):
        for _ in range(max_len):
            x = np.asarray(A @ x, dtype=np.uint64)
            xf = Af @ xf
            total = total + x
            total_f += xf
    over = total_f >= _SATURATION_LEVEL
    saturated = int(over.sum())
    if saturated:
        total[over] = UINT64_MAX
        log.warning("%d walk counts saturated at 2**64 - 1", saturated)
    return WalkMatrix(sp.csr_matrix(total), [c.id for c in comps], max_len, [], saturated)


def prune_ubiquitous(W: WalkMatrix, support_threshold: float = 0.8) -> WalkMatrix:
    """Drop components reached from more than ``support_threshold`` of all rows."""
    rows = W.shape[0]
    support = np.diff(W.counts.tocsc().indptr)
    keep = [j for j in range(W.shape[1]) if support[j] <= support_threshold * rows]
    dropped = [W.component_ids[j] for j in range(W.shape[1]) if j not in set(keep)]
    return WalkMatrix(
        sp.csr_matrix(W.counts[:, keep]),
        [W.component_ids[j] for j in keep],
        W.max_walk_length,
        W.pruned_components + dropped,
        W.saturated,
    )


@dataclass
class SvdResult:
    singular_values: np.ndarray
    right_vectors: np.ndarray  # shape (k, cols), one vector per row
    left_vectors: np.ndarray | None
    component_ids: list[int]
    notice: str = ""

    @property
    def k(self) -> int:
        return len(self.singular_values)


def _orient(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def svd_topk(
    W,
    k: int = 10,
    component_ids: Sequence[int] | None = None,
    scale_columns: bool = False,
    with_left: bool = True,
) -> SvdResult:
    """Leading singular triplets through the eigendecomposition of ``W.T @ W``.

    Columns are few, so the Gram matrix is small and dense; rows stay sparse.
    Each right vector is flipped so its largest-magnitude entry is positive.
    Triplets below numerical rank are dropped with a notice.
    """
    if isinstance(W, WalkMatrix):
        component_ids = W.component_ids
        M = W.counts.astype(np.float64)
    elif sp.issparse(W):
        M = sp.csr_matrix(W, dtype=np.float64)
    else:
        M = np.asarray(W, dtype=np.float64)
    rows, cols = M.shape
    if component_ids is None:
        component_ids = list(range(cols))
    if not 1 <= k <= min(rows, cols):
        raise ValueError(f"k must be in [1, {min(rows, cols)}]")
    if scale_columns:
        norms = np.sqrt(np.asarray((M.multiply(M) if sp.issparse(M) else M * M).sum(axis=0)).ravel())
        norms[norms == 0] = 1.0
        M = M @ sp.diags(1.0 / norms) if sp.issparse(M) else M / norms
    gram = M.T @ M
    gram = gram.toarray() if sp.issparse(gram) else np.asarray(gram)
    gram = (gram + gram.T) / 2
    evals, evecs = np.linalg.eigh(gram)
    order = np.argsort(evals)[::-1]
    evals = np.clip(evals[order], 0.0, None)
    evecs = evecs[:, order]
    sigma = np.sqrt(evals)
    tol = (sigma[0] if sigma.size else 0.0) * max(rows, cols) * np.finfo(float).eps ** 0.5
    rank = int(np.sum(sigma > tol)) if sigma.size and sigma[0] > 0 else 0
    notice = ""
    if rank < k:
        notice = f"requested {k} triplets but numerical rank is {rank}"
        log.warning(notice)
    keep = min(k, rank)
    vecs = np.array([_orient(evecs[:, i]) for i in range(keep)]).reshape(keep, cols)
    left = None
    if with_left and keep:
        left = np.column_stack([np.asarray(M @ vecs[i]).ravel() / sigma[i] for i in range(keep)])
    return SvdResult(sigma[:keep], vecs, left, list(component_ids), notice)


@dataclass
class ThemeEntry:
    component_id: int
    coefficient: float
    label: str

    @property
    def positive(self) -> bool:
        return self.coefficient > 0


def theme_report(
    res: SvdResult,
    labels: dict[int, str] | None = None,
    coeff_threshold: float = 0.1,
    top_n: int = 10,
) -> list[list[ThemeEntry]]:
    """For each singular vector, components with ``|coefficient| > coeff_threshold``.

    Entries are ordered by decreasing magnitude and capped at ``top_n``.
    """
    labels = labels or {}
    out = []
    for i in range(res.k):
        v = res.right_vectors[i]
        idx = [j for j in np.argsort(-np.abs(v), kind="stable") if abs(v[j]) > coeff_threshold]
        out.append([
            ThemeEntry(res.component_ids[j], float(v[j]), labels.get(res.component_ids[j], str(res.component_ids[j])))
            for j in idx[:top_n]
        ])
    return out


def format_themes(themes: list[list[ThemeEntry]], res: SvdResult) -> str:
    """Text listing; negative coefficients are wrapped in underscores (italics)."""
    lines = []
    for i, entries in enumerate(themes):
        lines.append(f"vector {i} sigma={res.singular_values[i]:.6g}")
        if not entries:
            lines.append("  (no coefficient above threshold)")
        for e in entries:
            text = e.label if e.positive else f"_{e.label}_"
            lines.append(f"  {e.coefficient:+.4f} {text}")
    return "\n".join(lines) + "\n"


def write_walk_matrix(path, W: WalkMatrix) -> None:
    """JSON header line, then ``row,col,count`` triplets in row-major order."""
    coo = W.counts.tocoo()
    order = np.lexsort((coo.col, coo.row))
    header = {
        "rows": W.shape[0], "cols": W.shape[1], "max_len": W.max_walk_length,
        "component_ids": W.component_ids, "pruned": W.pruned_components,
        "saturated": W.saturated,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(header) + "\n")
        for i in order:
            fh.write(f"{coo.row[i]},{coo.col[i]},{int(coo.data[i])}\n")


def read_walk_matrix(path) -> WalkMatrix:
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        rows, cols, data = [], [], []
        for line in fh:
            r, c, v = line.split(",")
            rows.append(int(r))
            cols.append(int(c))
            data.append(int(v))
    counts = sp.csr_matrix(
        (np.array(data, dtype=np.uint64), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(header["rows"], header["cols"]),
    )
    return WalkMatrix(counts, header["component_ids"], header["max_len"],
                      header["pruned"], header.get("saturated", 0))
