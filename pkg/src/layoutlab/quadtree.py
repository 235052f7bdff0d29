"""Square-region quadtree with aggregated charge for Barnes-Hut repulsion.

The tree is stored as flat arrays (struct-of-arrays) and is rebuilt from
scratch every tick; both construction and traversal are level-synchronous so
the hot loops run inside numpy rather than the interpreter. A region of full
width s at distance d from the query point is treated as a single
pseudo-particle when s/d < theta; a region that geometrically contains the
query point is always descended, which is what guarantees the query's own
charge never leaks into an accepted aggregate.

Charges are plain signed scalars: a negative charge repels (force on the
query points away from it), a positive charge attracts.
"""

import warnings

import numpy as np

from .jiggle import COINCIDENT_DIST, jiggle_many, pair_jiggle_many

MAX_DEPTH = 64
_EPS2 = COINCIDENT_DIST * COINCIDENT_DIST


class QuadTreeError(ValueError):
    pass


class QuadTree:
    """Immutable after build; concurrent read queries are safe."""

    def __init__(self, positions, charges, cell_center, cell_half, cell_children,
                 cell_is_leaf, cell_charge, cell_centroid, cell_pt_start,
                 cell_pt_count, point_order, point_leaf):
        self.positions = positions
        self.charges = charges
        self.cell_center = cell_center
        self.cell_half = cell_half
        self.cell_children = cell_children
        self.cell_is_leaf = cell_is_leaf
        self.cell_charge = cell_charge
        self.cell_centroid = cell_centroid
        self.cell_pt_start = cell_pt_start
        self.cell_pt_count = cell_pt_count
        self.point_order = point_order
        self.point_leaf = point_leaf

    @property
    def n_points(self) -> int:
        return self.positions.shape[0]

    @property
    def n_cells(self) -> int:
        return self.cell_center.shape[0]

    # ------------------------------------------------------------------ build

    @classmethod
    def build(cls, positions, charges) -> "QuadTree":
        """Build the tree over N points.

        The root is the tightest square containing all points, expanded by 1%.
        Leaves hold a single point, except that points closer than 1e-12 (or a
        branch at depth 64) share a leaf and are separated by the jiggle at
        force time instead.
        """
        pos = np.ascontiguousarray(positions, dtype=np.float64)
        chg = np.ascontiguousarray(charges, dtype=np.float64)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise QuadTreeError(f"positions must be (N, 2), got {pos.shape}")
        if chg.shape != (pos.shape[0],):
            raise QuadTreeError("charges must have one entry per point")
        n = pos.shape[0]
        finite = np.isfinite(pos).all(axis=1)
        if not finite.all():
            bad = int(np.flatnonzero(~finite)[0])
            raise QuadTreeError(f"non-finite coordinate at point index {bad}")

        empty_i = np.empty(0, dtype=np.int64)
        if n == 0:
            return cls(pos, chg,
                       np.empty((0, 2)), np.empty(0), np.empty((0, 4), dtype=np.int64),
                       np.empty(0, dtype=bool), np.empty(0), np.empty((0, 2)),
                       empty_i, empty_i, empty_i, empty_i)

        lo = pos.min(axis=0)
        hi = pos.max(axis=0)
        root_center = (lo + hi) / 2.0
        root_half = float(np.max(hi - lo)) / 2.0 * 1.01
        if root_half == 0.0:
            root_half = 0.5

        # Growable per-cell attributes, appended one level at a time.
        centers = [root_center[None, :]]
        halves = [np.array([root_half])]
        level_slices: list[tuple[int, int]] = [(0, 1)]
        child_links: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        parent_chunks = [np.array([-1], dtype=np.int64)]

        leaf_cells: list[np.ndarray] = []
        leaf_counts: list[np.ndarray] = []
        order_chunks: list[np.ndarray] = []

        open_pts = np.arange(n, dtype=np.int64)
        open_cell = np.zeros(n, dtype=np.int64)
        n_cells = 1
        depth = 0
        while open_pts.size:
            cells, inv, counts = np.unique(open_cell, return_inverse=True, return_counts=True)
            pts_xy = pos[open_pts]
            lo_c = np.full((cells.size, 2), np.inf)
            hi_c = np.full((cells.size, 2), -np.inf)
            np.minimum.at(lo_c, inv, pts_xy)
            np.maximum.at(hi_c, inv, pts_xy)
            spread = (hi_c - lo_c).max(axis=1)
            make_leaf = (counts <= 1) | (spread <= COINCIDENT_DIST) | (depth >= MAX_DEPTH)

            leaf_pt_mask = make_leaf[inv]
            if leaf_pt_mask.any():
                sealed = open_pts[leaf_pt_mask]
                sealed_inv = inv[leaf_pt_mask]
                order = np.argsort(sealed_inv, kind="stable")
                order_chunks.append(sealed[order])
                leaf_cells.append(cells[make_leaf])
                leaf_counts.append(counts[make_leaf])

            keep = ~leaf_pt_mask
            if not keep.any():
                break
            open_pts = open_pts[keep]
            kept_inv = inv[keep]
            parent_cells = open_cell[keep]
            parent_center = np.concatenate(centers)[parent_cells] if len(centers) > 1 else centers[0][parent_cells]
            quadrant = ((pts_xy[keep, 0] >= parent_center[:, 0]).astype(np.int64)
                        + 2 * (pts_xy[keep, 1] >= parent_center[:, 1]).astype(np.int64))
            key = kept_inv * 4 + quadrant
            new_keys, point_new_cell = np.unique(key, return_inverse=True)
            new_parent_local = new_keys // 4
            new_quadrant = new_keys % 4
            new_parent = cells[new_parent_local]

            parent_half = np.concatenate(halves)[new_parent] if len(halves) > 1 else halves[0][new_parent]
            parent_ctr = (np.concatenate(centers) if len(centers) > 1 else centers[0])[new_parent]
            offs = np.empty((new_keys.size, 2))
            offs[:, 0] = np.where(new_quadrant % 2 == 1, 0.5, -0.5)
            offs[:, 1] = np.where(new_quadrant // 2 == 1, 0.5, -0.5)
            new_center = parent_ctr + offs * parent_half[:, None]
            new_half = parent_half / 2.0

            new_ids = n_cells + np.arange(new_keys.size, dtype=np.int64)
            child_links.append((new_parent, new_quadrant, new_ids))
            centers.append(new_center)
            halves.append(new_half)
            parent_chunks.append(new_parent)
            level_slices.append((n_cells, n_cells + new_keys.size))
            open_cell = new_ids[point_new_cell]
            n_cells += new_keys.size
            depth += 1

        cell_center = np.concatenate(centers)
        cell_half = np.concatenate(halves)
        cell_parent = np.concatenate(parent_chunks)
        cell_children = np.full((n_cells, 4), -1, dtype=np.int64)
        for parents, quads, ids in child_links:
            cell_children[parents, quads] = ids
        cell_is_leaf = (cell_children < 0).all(axis=1)

        point_order = np.concatenate(order_chunks) if order_chunks else empty_i
        cell_pt_start = np.zeros(n_cells, dtype=np.int64)
        cell_pt_count = np.zeros(n_cells, dtype=np.int64)
        offset = 0
        for ids, cnts in zip(leaf_cells, leaf_counts):
            cell_pt_count[ids] = cnts
            cell_pt_start[ids] = offset + np.concatenate(([0], np.cumsum(cnts)[:-1]))
            offset += int(cnts.sum())
        point_leaf = np.empty(n, dtype=np.int64)
        point_leaf[point_order] = np.repeat(np.arange(n_cells), cell_pt_count)

        # Aggregates, children into parents one level at a time (deepest first).
        cell_charge = np.zeros(n_cells)
        weighted = np.zeros((n_cells, 2))
        pos_sum = np.zeros((n_cells, 2))
        np.add.at(cell_charge, point_leaf, chg)
        np.add.at(weighted, point_leaf, chg[:, None] * pos)
        np.add.at(pos_sum, point_leaf, pos)
        cell_npts = np.zeros(n_cells)
        np.add.at(cell_npts, point_leaf, 1.0)
        for start, stop in reversed(level_slices[1:]):
            ids = np.arange(start, stop)
            parents = cell_parent[ids]
            np.add.at(cell_charge, parents, cell_charge[ids])
            np.add.at(weighted, parents, weighted[ids])
            np.add.at(pos_sum, parents, pos_sum[ids])
            np.add.at(cell_npts, parents, cell_npts[ids])
        total = cell_charge[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            cell_centroid = np.where(total != 0.0, weighted / total, pos_sum / cell_npts[:, None])

        return cls(pos, chg, cell_center, cell_half, cell_children, cell_is_leaf,
                   cell_charge, cell_centroid, cell_pt_start, cell_pt_count,
                   point_order, point_leaf)

    # ---------------------------------------------------------------- queries

    def repulsion_all(self, theta: float, seed: int = 0,
                      query_idx=None, query_pos=None) -> np.ndarray:
        """Approximate charge/d^2 force on every query point (default: all points).

        Each query excludes its own index. Coincident query/source pairs are
        separated by the deterministic jiggle before division.
        """
        if query_pos is None:
            query_pos = self.positions
            query_idx = np.arange(self.n_points, dtype=np.int64)
        query_pos = np.asarray(query_pos, dtype=np.float64)
        if query_idx is None:
            query_idx = np.full(query_pos.shape[0], -1, dtype=np.int64)
        else:
            query_idx = np.asarray(query_idx, dtype=np.int64)
        m = query_pos.shape[0]
        out = np.zeros((m, 2))
        if self.n_points == 0 or m == 0:
            return out
        theta = _clamp_theta(theta)
        theta2 = theta * theta

        fq = np.arange(m, dtype=np.int64)
        fc = np.zeros(m, dtype=np.int64)
        while fq.size:
            leaf = self.cell_is_leaf[fc]
            next_q: list[np.ndarray] = []
            next_c: list[np.ndarray] = []

            iq, ic = fq[~leaf], fc[~leaf]
            if ic.size:
                delta = self.cell_centroid[ic] - query_pos[iq]
                d2 = np.einsum("ij,ij->i", delta, delta)
                width = 2.0 * self.cell_half[ic]
                inside = (np.abs(query_pos[iq] - self.cell_center[ic])
                          <= self.cell_half[ic][:, None]).all(axis=1)
                accept = (width * width < theta2 * d2) & ~inside
                if accept.any():
                    aq = iq[accept]
                    adelta = delta[accept]
                    ad2 = d2[accept]
                    tiny = ad2 < _EPS2
                    if tiny.any():
                        adelta[tiny] = jiggle_many(seed, np.abs(query_idx[aq[tiny]]))
                        ad2 = np.einsum("ij,ij->i", adelta, adelta)
                    np.add.at(out, aq, (self.cell_charge[ic[accept]] / ad2)[:, None] * adelta)
                eq, ec = iq[~accept], ic[~accept]
                if ec.size:
                    kids = self.cell_children[ec]
                    valid = kids >= 0
                    next_q.append(np.repeat(eq, 4)[valid.ravel()])
                    next_c.append(kids.ravel()[valid.ravel()])

            lq, lc = fq[leaf], fc[leaf]
            if lc.size:
                qrows, pj = self._leaf_pairs(lq, lc)
                keep = query_idx[qrows] != pj
                qrows, pj = qrows[keep], pj[keep]
                if qrows.size:
                    delta = self.positions[pj] - query_pos[qrows]
                    d2 = np.einsum("ij,ij->i", delta, delta)
                    tiny = d2 < _EPS2
                    if tiny.any():
                        delta[tiny] = pair_jiggle_many(seed, np.abs(query_idx[qrows[tiny]]), pj[tiny])
                        d2 = np.einsum("ij,ij->i", delta, delta)
                    np.add.at(out, qrows, (self.charges[pj] / d2)[:, None] * delta)

            if next_q:
                fq = np.concatenate(next_q)
                fc = np.concatenate(next_c)
            else:
                fq = np.empty(0, dtype=np.int64)
                fc = fq
        return out

    def repulsion(self, i: int, p, theta: float, seed: int = 0) -> np.ndarray:
        """Force on one query point at p, excluding point index i."""
        p = np.asarray(p, dtype=np.float64).reshape(1, 2)
        idx = np.array([i], dtype=np.int64)
        return self.repulsion_all(theta, seed=seed, query_idx=idx, query_pos=p)[0]

    def query_circles(self, centers, radii) -> tuple[np.ndarray, np.ndarray]:
        """All (query, point) pairs with |point - center| <= radius.

        Returned pairs are sorted lexicographically by (query, point index).
        """
        centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
        radii = np.broadcast_to(np.asarray(radii, dtype=np.float64), (centers.shape[0],))
        if (radii < 0).any():
            raise QuadTreeError("radius must be >= 0")
        empty = np.empty(0, dtype=np.int64)
        if self.n_points == 0 or centers.shape[0] == 0:
            return empty, empty

        hits_q: list[np.ndarray] = []
        hits_p: list[np.ndarray] = []
        fq = np.arange(centers.shape[0], dtype=np.int64)
        fc = np.zeros(centers.shape[0], dtype=np.int64)
        while fq.size:
            # Distance from each center to the cell square; prune if > radius.
            gap = np.abs(centers[fq] - self.cell_center[fc]) - self.cell_half[fc][:, None]
            np.clip(gap, 0.0, None, out=gap)
            reach = np.einsum("ij,ij->i", gap, gap) <= radii[fq] ** 2
            fq, fc = fq[reach], fc[reach]
            leaf = self.cell_is_leaf[fc]
            lq, lc = fq[leaf], fc[leaf]
            if lc.size:
                qrows, pj = self._leaf_pairs(lq, lc)
                delta = self.positions[pj] - centers[qrows]
                inside = np.einsum("ij,ij->i", delta, delta) <= radii[qrows] ** 2
                hits_q.append(qrows[inside])
                hits_p.append(pj[inside])
            iq, ic = fq[~leaf], fc[~leaf]
            if ic.size:
                kids = self.cell_children[ic]
                valid = kids >= 0
                fq = np.repeat(iq, 4)[valid.ravel()]
                fc = kids.ravel()[valid.ravel()]
            else:
                fq = np.empty(0, dtype=np.int64)
                fc = fq
        if not hits_q:
            return empty, empty
        q = np.concatenate(hits_q)
        p = np.concatenate(hits_p)
        order = np.lexsort((p, q))
        return q[order], p[order]

    def query_circle(self, center, r: float) -> np.ndarray:
        """Indices of points within distance r of center, ascending."""
        _, pts = self.query_circles(np.asarray(center, dtype=np.float64).reshape(1, 2),
                                    np.array([float(r)]))
        return pts

    def _leaf_pairs(self, lq: np.ndarray, lc: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Expand (query, leaf-cell) rows into (query, point-index) pairs."""
        cnt = self.cell_pt_count[lc]
        total = int(cnt.sum())
        if total == 0:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty
        reps = np.repeat(np.arange(lc.size), cnt)
        within = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        pj = self.point_order[self.cell_pt_start[lc][reps] + within]
        return lq[reps], pj


_theta_warned = False


def _clamp_theta(theta: float) -> float:
    global _theta_warned
    if 0.0 <= theta <= 2.0:
        return theta
    clamped = min(max(theta, 0.0), 2.0)
    if not _theta_warned:
        warnings.warn(f"theta={theta} outside [0, 2]; clamped to {clamped}",
                      RuntimeWarning, stacklevel=3)
        _theta_warned = True
    return clamped


def build(positions, charges) -> QuadTree:
    return QuadTree.build(positions, charges)
