"""Spatial acceleration structures: union-find, uniform hash grid, AABB tree."""

from __future__ import annotations

import numpy as np


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def groups(self) -> list[list[int]]:
        """Components as lists of sorted member ids, ordered by smallest member."""
        comps: dict = {}
        for i in range(len(self.parent)):
            comps.setdefault(self.find(i), []).append(i)
        return sorted(comps.values(), key=lambda g: g[0])


class SpatialHash:
    """Uniform grid over points; neighbor queries scan the 3^d adjacent bins.

    With cell size >= the largest query distance, any pair within that
    distance lands in the same or an adjacent bin.
    """

    # Half of the 27 neighbor offsets (plus the zero offset handled
    # separately) so each bin pair is visited once.
    _HALF_OFFSETS = [
        (dx, dy, dz)
        for dx in (-1, 0, 1)
        for dy in (-1, 0, 1)
        for dz in (-1, 0, 1)
        if (dx, dy, dz) > (0, 0, 0)
    ]

    def __init__(self, points: np.ndarray, cell_size: float):
        self.points = np.asarray(points, dtype=np.float64)
        self.cell_size = float(cell_size)
        keys = np.floor(self.points / self.cell_size).astype(np.int64)
        self.keys = keys
        self.bins: dict = {}
        order = np.lexsort(keys.T[::-1])
        sorted_keys = keys[order]
        if len(order):
            change = np.nonzero(np.any(np.diff(sorted_keys, axis=0) != 0, axis=1))[0] + 1
            starts = np.concatenate([[0], change, [len(order)]])
            for s, e in zip(starts[:-1], starts[1:]):
                self.bins[tuple(sorted_keys[s])] = order[s:e]

    def neighbor_candidates(self, i: int) -> np.ndarray:
        """Indices sharing or adjacent to point i's bin (includes i)."""
        kx, ky, kz = self.keys[i]
        chunks = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for dz in (-1, 0, 1):
                    hit = self.bins.get((kx + dx, ky + dy, kz + dz))
                    if hit is not None:
                        chunks.append(hit)
        return np.concatenate(chunks) if chunks else np.array([], dtype=np.int64)

    def close_pairs(self, max_dist: np.ndarray | float) -> list[tuple[int, int, float]]:
        """All pairs (i, j, dist) with i < j and dist < per-pair bound.

        ``max_dist`` is either a scalar bound or a per-point array whose
        pairwise bound is max_dist[i] + max_dist[j] (sphere overlap); both
        must not exceed the grid cell size.
        """
        scalar = np.isscalar(max_dist)
        radii = None if scalar else np.asarray(max_dist, dtype=np.float64)
        pairs: list[tuple[int, int, float]] = []

        def emit(ia: np.ndarray, ib: np.ndarray):
            if not len(ia) or not len(ib):
                return
            diff = self.points[ia][:, None, :] - self.points[ib][None, :, :]
            d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
            if scalar:
                hit = d < float(max_dist)
            else:
                hit = d < radii[ia][:, None] + radii[ib][None, :]
            # Same-bin blocks pass ia == ib; keep the upper triangle.
            if ia is ib:
                hit &= ia[:, None] < ib[None, :]
            for r, c in zip(*np.nonzero(hit)):
                u, v = int(ia[r]), int(ib[c])
                if u > v:
                    u, v = v, u
                pairs.append((u, v, float(d[r, c])))

        for key, members in self.bins.items():
            emit(members, members)
            kx, ky, kz = key
            for dx, dy, dz in self._HALF_OFFSETS:
                other = self.bins.get((kx + dx, ky + dy, kz + dz))
                if other is not None:
                    emit(members, other)
        pairs.sort()
        return pairs


class AABBTree:
    """Median-split bounding-box tree over a set of boxes.

    Supports point-containment queries and best-first nearest traversal
    (the caller supplies the exact per-primitive distance).
    """

    __slots__ = ("lo", "hi", "nodes", "order")

    def __init__(self, lo: np.ndarray, hi: np.ndarray, leaf_size: int = 8):
        self.lo = np.asarray(lo, dtype=np.float64)
        self.hi = np.asarray(hi, dtype=np.float64)
        n = len(self.lo)
        self.order = np.arange(n)
        # nodes: (node_lo, node_hi, start, end, left, right); leaf iff left < 0
        self.nodes: list = []
        if n:
            self._build(0, n, leaf_size)

    def _build(self, start: int, end: int, leaf_size: int) -> int:
        idx = self.order[start:end]
        node_lo = self.lo[idx].min(axis=0)
        node_hi = self.hi[idx].max(axis=0)
        node = len(self.nodes)
        self.nodes.append([node_lo, node_hi, start, end, -1, -1])
        if end - start > leaf_size:
            centers = (self.lo[idx] + self.hi[idx]) / 2.0
            axis = int(np.argmax(node_hi - node_lo))
            local = np.argsort(centers[:, axis], kind="stable")
            self.order[start:end] = idx[local]
            mid = (start + end) // 2
            self.nodes[node][4] = self._build(start, mid, leaf_size)
            self.nodes[node][5] = self._build(mid, end, leaf_size)
        return node

    def query_point(self, p: np.ndarray) -> list[int]:
        """Primitive indices whose box contains p (inclusive bounds)."""
        if not self.nodes:
            return []
        out: list[int] = []
        stack = [0]
        while stack:
            lo, hi, start, end, left, right = self.nodes[stack.pop()]
            if np.any(p < lo) or np.any(p > hi):
                continue
            if left < 0:
                for i in self.order[start:end]:
                    if np.all(p >= self.lo[i]) and np.all(p <= self.hi[i]):
                        out.append(int(i))
            else:
                stack.append(left)
                stack.append(right)
        return out

    def nearest(self, p: np.ndarray, primitive_dist2):
        """(index, squared distance) minimizing primitive_dist2(i, p)."""
        import heapq

        if not self.nodes:
            return -1, np.inf
        best = np.inf
        best_i = -1
        heap = [(self._box_dist2(0, p), 0)]
        while heap:
            d2, node = heapq.heappop(heap)
            if d2 >= best:
                break
            lo, hi, start, end, left, right = self.nodes[node]
            if left < 0:
                for i in self.order[start:end]:
                    d = primitive_dist2(int(i), p)
                    if d < best:
                        best = d
                        best_i = int(i)
            else:
                for child in (left, right):
                    cd = self._box_dist2(child, p)
                    if cd < best:
                        heapq.heappush(heap, (cd, child))
        return best_i, best

    def _box_dist2(self, node: int, p: np.ndarray) -> float:
        lo, hi = self.nodes[node][0], self.nodes[node][1]
        d = np.maximum(np.maximum(lo - p, p - hi), 0.0)
        return float(d @ d)
