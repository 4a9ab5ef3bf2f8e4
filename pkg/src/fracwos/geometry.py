"""Domain primitives: membership, exact boundary distance, nearest projection.

All domains are open sets (boundary points are OUTSIDE), because the walk
treats any point of the complement as absorbing: the exterior datum g is
evaluated there.  Distances are exact closed forms per shape, which is
what keeps the inscribed-ball radii honest; projections return a nearest
boundary point with deterministic lexicographic tie-breaking.

Every query accepts a single point of shape (n,) or a batch (m, n) and
returns scalars or (m,) / (m, n) arrays accordingly.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Domain",
    "BallDomain",
    "BoxDomain",
    "LShapeDomain",
    "AnnulusDomain",
    "HexagonDomain",
]


class Domain:
    """Interface: contains / dist_boundary / project_boundary (+ bbox helper)."""

    n: int

    # concrete domains implement these on (m, n) float arrays
    def _contains(self, pts):
        raise NotImplementedError

    def _dist(self, pts):
        raise NotImplementedError

    def _project(self, pts):
        raise NotImplementedError

    def _bbox(self):
        """Axis-aligned bounding box (lo, hi) used for grids and sampling."""
        raise NotImplementedError

    def _coerce(self, x):
        pts = np.asarray(x, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[1] != self.n:
            raise ValueError(f"expected points in R^{self.n}, got shape {pts.shape}")
        return pts, single

    def contains(self, x):
        """Open-set membership; boundary points report False."""
        pts, single = self._coerce(x)
        inside = self._contains(pts)
        return bool(inside[0]) if single else inside

    def dist_boundary(self, x):
        """Exact Euclidean distance from an interior point to the boundary."""
        pts, single = self._coerce(x)
        inside = self._contains(pts)
        if not np.all(inside):
            raise ValueError("dist_boundary requires interior points")
        d = self._dist(pts)
        return float(d[0]) if single else d

    def project_boundary(self, x):
        """A nearest boundary point; exact ties break to the lexicographically
        smallest coordinate vector."""
        pts, single = self._coerce(x)
        proj = self._project(pts)
        return proj[0] if single else proj

    def bounding_box(self):
        lo, hi = self._bbox()
        return np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)

    def random_interior(self, count: int, seed: int, margin: float = 0.0):
        """count points uniform on {x : dist_boundary(x) > margin}, rejection
        sampled from the bounding box with a fixed-seed numpy generator."""
        rng = np.random.default_rng(seed)
        lo, hi = self.bounding_box()
        out = np.empty((count, self.n))
        have = 0
        for _ in range(10_000):
            cand = rng.uniform(lo, hi, size=(max(4 * count, 64), self.n))
            ok = self._contains(cand)
            if margin > 0.0:
                okd = np.zeros(cand.shape[0], dtype=bool)
                okd[ok] = self._dist(cand[ok]) > margin
                ok = okd
            cand = cand[ok]
            take = min(count - have, cand.shape[0])
            out[have : have + take] = cand[:take]
            have += take
            if have == count:
                return out
        raise RuntimeError("interior sampling kept missing the domain; margin too large?")


def _lex_smallest(cands, dists):
    """Per row: among candidates attaining the minimal distance, pick the
    lexicographically smallest point.  cands (m, K, n), dists (m, K).

    Ties are detected with a few-ulp relative slack so that geometrically
    symmetric candidates whose distances round differently still count as
    tied."""
    m, K, n = cands.shape
    eps16 = 16.0 * np.finfo(float).eps
    dmin = dists.min(axis=1, keepdims=True)
    active = dists <= dmin + eps16 * np.maximum(1.0, np.abs(dmin))
    for d in range(n):
        coord = np.where(active, cands[:, :, d], np.inf)
        best = coord.min(axis=1, keepdims=True)
        active &= coord <= best + eps16 * np.maximum(1.0, np.abs(best))
    first = np.argmax(active, axis=1)
    return cands[np.arange(m), first]


def _segment_distance(pts, a, b):
    """Distance and nearest point from pts (m,2) to the segment [a, b]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    t = ((pts - a) @ ab) / denom
    t = np.clip(t, 0.0, 1.0)
    foot = a + t[:, None] * ab
    d = np.linalg.norm(pts - foot, axis=1)
    return d, foot


class BallDomain(Domain):
    """Open ball {|x - center| < radius}."""

    def __init__(self, center, radius: float):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        if self.center.ndim != 1:
            raise ValueError("center must be a flat coordinate vector")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        self.n = self.center.shape[0]

    def _r(self, pts):
        return np.linalg.norm(pts - self.center[None, :], axis=1)

    def _contains(self, pts):
        return self._r(pts) < self.radius

    def _dist(self, pts):
        return self.radius - self._r(pts)

    def _project(self, pts):
        rel = pts - self.center[None, :]
        r = np.linalg.norm(rel, axis=1)
        out = np.empty_like(pts)
        deg = r == 0.0
        safe = ~deg
        out[safe] = self.center[None, :] + self.radius * rel[safe] / r[safe, None]
        if np.any(deg):
            # center: every boundary point is nearest; lexicographic smallest
            # is center - radius * e1
            p = self.center.copy()
            p[0] -= self.radius
            out[deg] = p
        return out

    def _bbox(self):
        return self.center - self.radius, self.center + self.radius


class BoxDomain(Domain):
    """Open axis-aligned box prod_i (lo_i, hi_i)."""

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        if self.lo.shape != self.hi.shape or self.lo.ndim != 1:
            raise ValueError("lo/hi must be flat vectors of equal length")
        if not np.all(self.lo < self.hi):
            raise ValueError("box requires lo < hi per axis")
        self.n = self.lo.shape[0]

    def _contains(self, pts):
        return np.all((pts > self.lo) & (pts < self.hi), axis=1)

    def _dist(self, pts):
        gaps = np.minimum(pts - self.lo, self.hi - pts)
        return gaps.min(axis=1)

    def _project(self, pts):
        m = pts.shape[0]
        cands = np.empty((m, 2 * self.n, self.n))
        dists = np.empty((m, 2 * self.n))
        for ax in range(self.n):
            for side, bound in enumerate((self.lo[ax], self.hi[ax])):
                kk = 2 * ax + side
                cands[:, kk, :] = np.clip(pts, self.lo, self.hi)
                cands[:, kk, ax] = bound
                dists[:, kk] = np.linalg.norm(pts - cands[:, kk, :], axis=1)
        return _lex_smallest(cands, dists)

    def _bbox(self):
        return self.lo.copy(), self.hi.copy()


class LShapeDomain(Domain):
    """The square (-1,1)^2 with the closed quadrant [0,1]x[0,1] removed.

    Boundary polygon (-1,-1) (1,-1) (1,0) (0,0) (0,1) (-1,1); the corner at
    the origin is re-entrant.
    """

    _VERTS = np.array(
        [[-1.0, -1.0], [1.0, -1.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [-1.0, 1.0]]
    )

    def __init__(self):
        self.n = 2

    def _contains(self, pts):
        in_square = np.all((pts > -1.0) & (pts < 1.0), axis=1)
        in_cut = (pts[:, 0] >= 0.0) & (pts[:, 1] >= 0.0)
        return in_square & ~in_cut

    def _edges(self):
        v = self._VERTS
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def _dist(self, pts):
        d = np.full(pts.shape[0], np.inf)
        for a, b in self._edges():
            d = np.minimum(d, _segment_distance(pts, a, b)[0])
        return d

    def _project(self, pts):
        edges = self._edges()
        m = pts.shape[0]
        cands = np.empty((m, len(edges), 2))
        dists = np.empty((m, len(edges)))
        for kk, (a, b) in enumerate(edges):
            dists[:, kk], cands[:, kk, :] = _segment_distance(pts, a, b)
        return _lex_smallest(cands, dists)

    def _bbox(self):
        return np.array([-1.0, -1.0]), np.array([1.0, 1.0])


class AnnulusDomain(Domain):
    """Open annulus {inner < |x - center| < outer}."""

    def __init__(self, inner: float, outer: float, center=(0.0, 0.0)):
        if not 0 < inner < outer:
            raise ValueError("annulus requires 0 < inner < outer")
        self.inner = float(inner)
        self.outer = float(outer)
        self.center = np.asarray(center, dtype=float)
        self.n = self.center.shape[0]

    def _r(self, pts):
        return np.linalg.norm(pts - self.center[None, :], axis=1)

    def _contains(self, pts):
        r = self._r(pts)
        return (r > self.inner) & (r < self.outer)

    def _dist(self, pts):
        r = self._r(pts)
        return np.minimum(r - self.inner, self.outer - r)

    def _project(self, pts):
        rel = pts - self.center[None, :]
        r = np.linalg.norm(rel, axis=1)
        deg = r == 0.0
        if np.any(deg):
            # center of the hole: tie along the whole inner circle, and the
            # lexicographically smallest point sits at angle pi
            rel = rel.copy()
            rel[deg, 0] = -1.0
        u = rel / np.where(deg, 1.0, r)[:, None]
        cands = np.stack(
            [
                self.center[None, :] + self.inner * u,
                self.center[None, :] + self.outer * u,
            ],
            axis=1,
        )
        dists = np.stack([r - self.inner, self.outer - r], axis=1)
        return _lex_smallest(cands, dists)

    def _bbox(self):
        return self.center - self.outer, self.center + self.outer


class HexagonDomain(Domain):
    """Open regular hexagon, circumradius R, centered at `center`.

    Orientation: vertices on the x-axis at (+-R, 0), so the top and bottom
    edges are horizontal and the hexagon is inscribed in [-R, R]^2.  Edge
    normals point at 30 + 60k degrees; the inradius is R*sqrt(3)/2.
    """

    def __init__(self, circumradius: float = 1.0, center=(0.0, 0.0)):
        if not circumradius > 0:
            raise ValueError("circumradius must be positive")
        self.circumradius = float(circumradius)
        self.center = np.asarray(center, dtype=float)
        self.n = 2
        ang = np.deg2rad(30.0 + 60.0 * np.arange(6))
        self._normals = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        self.inradius = self.circumradius * np.sqrt(3.0) / 2.0
        vang = np.deg2rad(60.0 * np.arange(6))
        self._verts = self.center[None, :] + self.circumradius * np.stack(
            [np.cos(vang), np.sin(vang)], axis=1
        )

    def _support(self, pts):
        return (pts - self.center[None, :]) @ self._normals.T  # (m, 6)

    def _contains(self, pts):
        return np.all(self._support(pts) < self.inradius, axis=1)

    def _dist(self, pts):
        # interior distance to a convex polygon is the minimal edge-line gap
        return self.inradius - self._support(pts).max(axis=1)

    def _project(self, pts):
        # segment projection stays correct for exterior queries too, where the
        # perpendicular foot of the nearest edge line can fall past a vertex
        m = pts.shape[0]
        cands = np.empty((m, 6, 2))
        dists = np.empty((m, 6))
        for kk in range(6):
            a, b = self._verts[kk], self._verts[(kk + 1) % 6]
            dists[:, kk], cands[:, kk, :] = _segment_distance(pts, a, b)
        return _lex_smallest(cands, dists)

    def _bbox(self):
        r = self.circumradius
        return self.center - r, self.center + r
