"""Array kernels: BFS distances, diameters, batched Pruefer decoding and the
distance-1 coloring scan.

Each kernel has a numba version and a pure-numpy version. Numba is used when
it imports and TREECHK_NO_NUMBA is unset (or "0").
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("TREECHK_NO_NUMBA", "0") in ("", "0")


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def to_csr(n: int, edges) -> tuple[np.ndarray, np.ndarray]:
    deg = np.zeros(n + 1, dtype=np.int64)
    src = []
    dst = []
    for u, v in edges:
        if u == v:
            continue
        src += [u, v]
        dst += [v, u]
    src_a = np.asarray(src, dtype=np.int64)
    dst_a = np.asarray(dst, dtype=np.int64)
    order = np.lexsort((dst_a, src_a))
    src_a, dst_a = src_a[order], dst_a[order]
    np.add.at(deg, src_a + 1, 1)
    return np.cumsum(deg), dst_a


# ---------------------------------------------------------------- numpy versions

def _np_bfs(indptr, indices, src):
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    dist[src] = 0
    frontier = np.array([src], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        starts, ends = indptr[frontier], indptr[frontier + 1]
        counts = ends - starts
        if counts.sum() == 0:
            break
        offs = np.repeat(ends - counts.cumsum(), counts) + np.arange(counts.sum())
        nbrs = np.unique(indices[offs])
        nbrs = nbrs[dist[nbrs] < 0]
        dist[nbrs] = level
        frontier = nbrs
    return dist


def _np_tree_diameter(indptr, indices):
    d0 = _np_bfs(indptr, indices, 0)
    far = int(np.argmax(d0))
    return int(_np_bfs(indptr, indices, far).max())


def _np_graph_diameter(indptr, indices):
    n = len(indptr) - 1
    best = 0
    for s in range(n):
        d = _np_bfs(indptr, indices, s)
        if (d < 0).any():
            return -1
        best = max(best, int(d.max()))
    return best


def _np_prufer_bfs_ordered(seqs: np.ndarray, n: int) -> np.ndarray:
    """Decode a batch of Pruefer sequences; keep those whose labeling is a
    BFS order from vertex 0 (parent[i] < i and nondecreasing). Returns the
    parent arrays of the kept trees."""
    m = seqs.shape[0]
    if n == 1:
        return np.full((m, 1), -1, dtype=np.int64)
    if n == 2:
        return np.array([[-1, 0]] * m, dtype=np.int64)
    deg = np.ones((m, n), dtype=np.int64)
    rows = np.arange(m)
    for j in range(n - 2):
        np.add.at(deg, (rows, seqs[:, j]), 1)
    eu = np.empty((m, n - 1), dtype=np.int64)
    ev = np.empty((m, n - 1), dtype=np.int64)
    for j in range(n - 2):
        leaf = np.argmax(deg == 1, axis=1)
        eu[:, j] = leaf
        ev[:, j] = seqs[:, j]
        deg[rows, leaf] = 0
        deg[rows, seqs[:, j]] -= 1
    last = np.argsort(deg != 1, axis=1, kind="stable")[:, :2]
    eu[:, n - 2] = last[:, 0]
    ev[:, n - 2] = last[:, 1]
    # every edge must join i to a smaller parent with nondecreasing parents
    hi = np.maximum(eu, ev)
    lo = np.minimum(eu, ev)
    parent = np.full((m, n), -1, dtype=np.int64)
    parent[rows[:, None], hi] = lo
    ok = (parent[:, 1:] >= 0).all(axis=1) & (np.diff(parent[:, 1:], axis=1) >= 0).all(axis=1)
    return parent[ok]


def _ready_lists(indptr, indices):
    """CSR lists of the vertices whose closed neighborhood is fully colored
    once vertices 0..i are colored."""
    n = len(indptr) - 1
    at = np.empty(n, dtype=np.int64)
    for v in range(n):
        last = v
        for p in range(indptr[v], indptr[v + 1]):
            if indices[p] > last:
                last = indices[p]
        at[v] = last
    order = np.argsort(at, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        ptr[at[v] + 1] += 1
    return np.cumsum(ptr), order.astype(np.int64)


def _np_scan_colorings(indptr, indices, c, allowed, maxdeg):
    """Colorings of one tree shape accepted by a distance-1 rule table, found
    by extending partial colorings vertex by vertex and dropping a partial
    coloring as soon as some vertex with a fully colored neighborhood fails.

    allowed[color-1] is a boolean array over neighbor count vectors, indexed by
    the mixed-radix code sum(count[k] * (maxdeg+1)**k).
    """
    n = len(indptr) - 1
    ready_ptr, ready = _ready_lists(indptr, indices)
    radix = (maxdeg + 1) ** np.arange(c, dtype=np.int64)
    cols = np.zeros((1, 0), dtype=np.int64)
    for i in range(n):
        m = cols.shape[0]
        cols = np.concatenate([np.repeat(cols, c, axis=0), np.tile(np.arange(c, dtype=np.int64), m)[:, None]], axis=1)
        for v in ready[ready_ptr[i]:ready_ptr[i + 1]]:
            key = np.zeros(cols.shape[0], dtype=np.int64)
            for p in range(indptr[v], indptr[v + 1]):
                key += radix[cols[:, indices[p]]]
            cols = cols[allowed[cols[:, v], key]]
        if cols.shape[0] == 0:
            return np.zeros((0, n), dtype=np.int64)
    return cols + 1


# ---------------------------------------------------------------- numba versions

if _HAVE_NUMBA:

    @njit(cache=True)
    def _nb_bfs(indptr, indices, src):
        n = len(indptr) - 1
        dist = np.full(n, -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        dist[src] = 0
        queue[0] = src
        head, tail = 0, 1
        while head < tail:
            x = queue[head]
            head += 1
            for p in range(indptr[x], indptr[x + 1]):
                y = indices[p]
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue[tail] = y
                    tail += 1
        return dist

    @njit(cache=True)
    def _nb_tree_diameter(indptr, indices):
        d0 = _nb_bfs(indptr, indices, 0)
        far = np.argmax(d0)
        return _nb_bfs(indptr, indices, far).max()

    @njit(cache=True)
    def _nb_graph_diameter(indptr, indices):
        n = len(indptr) - 1
        best = 0
        for s in range(n):
            d = _nb_bfs(indptr, indices, s)
            for x in range(n):
                if d[x] < 0:
                    return -1
                if d[x] > best:
                    best = d[x]
        return best

    @njit(cache=True)
    def _nb_prufer_bfs_ordered(seqs, n):
        m = seqs.shape[0]
        keep = np.zeros(m, dtype=np.bool_)
        parents = np.full((m, n), -1, dtype=np.int64)
        deg = np.empty(n, dtype=np.int64)
        for r in range(m):
            if n <= 2:
                if n == 2:
                    parents[r, 1] = 0
                keep[r] = True
                continue
            deg[:] = 1
            for j in range(n - 2):
                deg[seqs[r, j]] += 1
            ok = True
            for j in range(n - 2):
                leaf = 0
                while deg[leaf] != 1:
                    leaf += 1
                a = seqs[r, j]
                hi, lo = (leaf, a) if leaf > a else (a, leaf)
                if parents[r, hi] >= 0:
                    ok = False
                    break
                parents[r, hi] = lo
                deg[leaf] = 0
                deg[a] -= 1
            if not ok:
                continue
            u = -1
            for x in range(n):
                if deg[x] == 1:
                    if u < 0:
                        u = x
                    else:
                        if parents[r, x] >= 0:
                            ok = False
                        else:
                            parents[r, x] = u
                        break
            if not ok:
                continue
            for x in range(1, n):
                if parents[r, x] < 0 or (x > 1 and parents[r, x] < parents[r, x - 1]):
                    ok = False
                    break
            keep[r] = ok
        return parents[keep]

    @njit(cache=True)
    def _nb_scan_colorings(indptr, indices, c, allowed, maxdeg, ready_ptr, ready):
        n = len(indptr) - 1
        radix = np.empty(c, dtype=np.int64)
        radix[0] = 1
        for k in range(1, c):
            radix[k] = radix[k - 1] * (maxdeg + 1)
        cols = np.full(n, -1, dtype=np.int64)
        found = []
        i = 0
        while i >= 0:
            cols[i] += 1
            if cols[i] == c:
                cols[i] = -1
                i -= 1
                continue
            ok = True
            for r in range(ready_ptr[i], ready_ptr[i + 1]):
                v = ready[r]
                key = 0
                for p in range(indptr[v], indptr[v + 1]):
                    key += radix[cols[indices[p]]]
                if not allowed[cols[v], key]:
                    ok = False
                    break
            if not ok:
                continue
            if i == n - 1:
                found.append(cols.copy())
            else:
                i += 1
        out = np.empty((len(found), n), dtype=np.int64)
        for j in range(len(found)):
            out[j] = found[j] + 1
        return out


def bfs_distances(indptr, indices, src: int) -> np.ndarray:
    if USE_NUMBA:
        return _nb_bfs(indptr, indices, src)
    return _np_bfs(indptr, indices, src)


def tree_diameter(indptr, indices) -> int:
    if len(indptr) <= 2:
        return 0
    if USE_NUMBA:
        return int(_nb_tree_diameter(indptr, indices))
    return _np_tree_diameter(indptr, indices)


def graph_diameter(indptr, indices) -> int:
    if len(indptr) <= 2:
        return 0
    if USE_NUMBA:
        return int(_nb_graph_diameter(indptr, indices))
    return _np_graph_diameter(indptr, indices)


def prufer_bfs_ordered(seqs: np.ndarray, n: int) -> np.ndarray:
    seqs = np.ascontiguousarray(seqs, dtype=np.int64)
    if USE_NUMBA:
        return _nb_prufer_bfs_ordered(seqs, n)
    return _np_prufer_bfs_ordered(seqs, n)


def scan_colorings(indptr, indices, c: int, allowed: np.ndarray, maxdeg: int) -> np.ndarray:
    if USE_NUMBA:
        ready_ptr, ready = _ready_lists(indptr, indices)
        return _nb_scan_colorings(indptr, indices, c, allowed, maxdeg, ready_ptr, ready)
    return _np_scan_colorings(indptr, indices, c, allowed, maxdeg)
