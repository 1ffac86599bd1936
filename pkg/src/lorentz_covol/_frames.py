"""Exhaustive counter for solutions of A^t S A = S over Z/q, S diagonal.

A solution is a frame of columns c_0..c_{m-1} with <c_i, c_j>_S = S_ij.  The
search fixes columns left to right and keeps, for every later column, the
list of candidates still orthogonal to everything placed so far.  Three exact
symmetries shrink the tree:

* column 0 is taken up to signed permutations of rows with equal diagonal
  entry; every orbit representative is weighted by its orbit size;
* every later column is taken up to sign (never c = -c for a unit vector);
* later columns with the same diagonal entry are interchangeable, so they are
  enumerated as increasing sequences of candidate indices.
"""

from __future__ import annotations

import math

import numba
import numpy as np


@numba.njit(cache=True)
def _count_from_first(vecs, diag, q, init_lists, init_sizes, first, ordered, budget):
    """Number of completions with column 0 fixed; returns (count, nodes) or (-1, nodes)."""
    m = vecs.shape[1]
    L = init_lists.shape[1]
    alive = np.empty((m + 1, m, L), dtype=np.int32)
    size = np.zeros((m + 1, m), dtype=np.int64)
    sv = np.empty(m, dtype=np.int64)
    chosen = np.zeros(m, dtype=np.int64)
    for i in range(m):
        sv[i] = (diag[i] * vecs[first, i]) % q
    for j in range(1, m):
        c = 0
        for t in range(init_sizes[j]):
            w = init_lists[j, t]
            s = 0
            for i in range(m):
                s += sv[i] * vecs[w, i]
            if s % q == 0:
                alive[1, j, c] = w
                c += 1
        size[1, j] = c
    if m == 1:
        return 1, 1
    pos = np.zeros(m + 1, dtype=np.int64)
    total = 0
    nodes = 1
    k = 1
    while k >= 1:
        if pos[k] >= size[k, k]:
            k -= 1
            if k >= 1:
                pos[k] += 1
            continue
        u = alive[k, k, pos[k]]
        if ordered[k] and u <= chosen[k - 1]:
            pos[k] += 1
            continue
        if k == m - 1:
            if ordered[k]:
                # candidates are sorted, the rest of the list qualifies
                total += size[k, k] - pos[k]
            else:
                total += size[k, k]
            pos[k] = size[k, k]
            continue
        nodes += 1
        if nodes > budget:
            return -1, nodes
        chosen[k] = u
        for i in range(m):
            sv[i] = (diag[i] * vecs[u, i]) % q
        for j in range(k + 1, m):
            c = 0
            for t in range(size[k, j]):
                w = alive[k, j, t]
                s = 0
                for i in range(m):
                    s += sv[i] * vecs[w, i]
                if s % q == 0:
                    alive[k + 1, j, c] = w
                    c += 1
            size[k + 1, j] = c
        k += 1
        pos[k] = 0
    return total, nodes


MAX_GRID = 60_000_000


class _Budget(Exception):
    def __init__(self, nodes):
        self.nodes = nodes


def count_frames(diag: list[int], q: int, budget: int) -> tuple[int, int]:
    """Exact number of A over Z/q with A^t diag(diag) A = diag(diag); returns (count, nodes)."""
    m = len(diag)
    if q ** m > MAX_GRID:
        raise _Budget(0)
    if q == 1:
        return 1, 0
    d = np.array([x % q for x in diag], dtype=np.int64)
    # group equal diagonal entries so interchangeable columns are adjacent
    order = np.argsort(d, kind="stable")
    d = d[order]
    grids = np.indices((q,) * m, dtype=np.int32).reshape(m, -1).T
    norms = np.zeros(len(grids), dtype=np.int64)
    for i in range(m):
        norms = (norms + d[i] * grids[:, i].astype(np.int64) ** 2) % q
    targets = sorted(set(int(t) for t in d))
    keep = np.isin(norms, targets)
    vecs = np.ascontiguousarray(grids[keep])
    nv = norms[keep]
    del grids, norms
    codes = np.zeros(len(vecs), dtype=np.int64)
    neg_codes = np.zeros(len(vecs), dtype=np.int64)
    for i in range(m):
        codes = codes * q + vecs[:, i]
        neg_codes = neg_codes * q + (q - vecs[:, i]) % q
    # codes are increasing because np.indices enumerates lexicographically
    by_norm = {t: np.nonzero(nv == t)[0] for t in targets}
    lists = []
    multiplier = 1
    for j in range(m):
        cand = by_norm[int(d[j])]
        if j > 0:
            neg = np.searchsorted(codes, neg_codes[cand])
            if np.all(neg != cand):
                cand = cand[cand < neg]
                multiplier *= 2
        lists.append(cand)
    ordered = np.zeros(m, dtype=np.bool_)
    for j in range(2, m):
        if d[j] == d[j - 1]:
            ordered[j] = True
    run = 1
    for j in range(2, m + 1):
        if j < m and d[j] == d[j - 1]:
            run += 1
        else:
            multiplier *= math.factorial(run)
            run = 1
    L = max(len(x) for x in lists)
    init = np.zeros((m, L), dtype=np.int32)
    sizes = np.zeros(m, dtype=np.int64)
    for j, x in enumerate(lists):
        init[j, : len(x)] = x
        sizes[j] = len(x)
    # orbit representatives for column 0 under signed row permutations
    c0 = vecs[lists[0]].astype(np.int64)
    folded = np.minimum(c0, (q - c0) % q)
    blocks = []
    start = 0
    for j in range(1, m + 1):
        if j == m or d[j] != d[start]:
            blocks.append(np.sort(folded[:, start:j], axis=1))
            start = j
    key = np.concatenate(blocks, axis=1)
    _, first_idx, weights = np.unique(key, axis=0, return_index=True, return_counts=True)
    total = 0
    nodes = 0
    for fi, w in zip(first_idx, weights):
        t, nd = _count_from_first(vecs, d, q, init, sizes, int(lists[0][fi]), ordered, budget - nodes)
        nodes += nd
        if t < 0:
            raise _Budget(nodes)
        total += int(w) * int(t)
    return total * multiplier, nodes
