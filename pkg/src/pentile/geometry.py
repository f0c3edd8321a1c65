"""Low-level planar geometry helpers: areas, clipping, enclosing/inscribed circles.

Everything works on (n, 2) float arrays of polygon vertices in counterclockwise
order unless stated otherwise.
"""
from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def rot_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def polygon_area(poly: np.ndarray) -> float:
    """Signed shoelace area; positive for counterclockwise vertex order."""
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_centroid(poly: np.ndarray) -> np.ndarray:
    x, y = poly[:, 0], poly[:, 1]
    cross = x * np.roll(y, -1) - np.roll(x, -1) * y
    a = 0.5 * np.sum(cross)
    cx = np.sum((x + np.roll(x, -1)) * cross) / (6.0 * a)
    cy = np.sum((y + np.roll(y, -1)) * cross) / (6.0 * a)
    return np.array([cx, cy])


def polygon_edge_lengths(poly: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.roll(poly, -1, axis=0) - poly, axis=1)


def interior_angles(poly: np.ndarray) -> np.ndarray:
    """Interior angles of a simple ccw polygon, via exterior turning angles."""
    d = np.roll(poly, -1, axis=0) - poly
    d_in = np.roll(d, 1, axis=0)
    cross = d_in[:, 0] * d[:, 1] - d_in[:, 1] * d[:, 0]
    dot = np.sum(d_in * d, axis=1)
    turn = np.arctan2(cross, dot)
    return math.pi - turn


def convex_clip(subject: np.ndarray, clip: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clip of a polygon against a convex ccw polygon.

    Returns the clipped polygon as an (m, 2) array; m == 0 when empty.
    """
    out = [tuple(p) for p in subject]
    n = len(clip)
    for i in range(n):
        if not out:
            break
        a = clip[i]
        b = clip[(i + 1) % n]
        ex, ey = b[0] - a[0], b[1] - a[1]
        pts = out
        out = []
        prev = pts[-1]
        prev_in = ex * (prev[1] - a[1]) - ey * (prev[0] - a[0]) >= 0.0
        for cur in pts:
            cur_in = ex * (cur[1] - a[1]) - ey * (cur[0] - a[0]) >= 0.0
            if cur_in != prev_in:
                # line-segment intersection with the clip edge's carrier line
                dx, dy = cur[0] - prev[0], cur[1] - prev[1]
                denom = ex * dy - ey * dx
                if abs(denom) > 1e-30:
                    t = (ex * (a[1] - prev[1]) - ey * (a[0] - prev[0])) / denom
                    out.append((prev[0] + t * dx, prev[1] + t * dy))
            if cur_in:
                out.append(cur)
            prev, prev_in = cur, cur_in
    return np.array(out).reshape(-1, 2)


def convex_overlap_area(p: np.ndarray, q: np.ndarray) -> float:
    clipped = convex_clip(p, q)
    if len(clipped) < 3:
        return 0.0
    return abs(polygon_area(clipped))


def _disk_segment_term(a: np.ndarray, b: np.ndarray, r: float) -> float:
    """Signed area of disk(0, r) intersected with triangle (0, a, b)."""
    ra, rb = math.hypot(*a), math.hypot(*b)
    cross = a[0] * b[1] - a[1] * b[0]
    if ra <= r and rb <= r:
        return 0.5 * cross
    d = b - a
    dd = float(d @ d)
    if dd < 1e-30:
        return 0.0
    # parametrize p(t) = a + t d and clip against |p| = r
    t0 = -float(a @ d) / dd
    p0 = a + t0 * d
    h2 = r * r - float(p0 @ p0)

    def sector(u, v):
        ang = math.atan2(u[0] * v[1] - u[1] * v[0], float(u @ v))
        return 0.5 * r * r * ang

    if h2 <= 0.0:
        # chord line misses the disk entirely: pure sector
        return sector(a, b)
    dt = math.sqrt(h2 / dd)
    t1, t2 = t0 - dt, t0 + dt
    t1c, t2c = max(t1, 0.0), min(t2, 1.0)
    if t1c >= t2c:
        return sector(a, b)
    p1 = a + t1c * d
    p2 = a + t2c * d
    area = 0.5 * (p1[0] * p2[1] - p1[1] * p2[0])
    if t1c > 0.0:
        area += sector(a, p1)
    if t2c < 1.0:
        area += sector(p2, b)
    return area


def polygon_disk_overlap_area(poly: np.ndarray, center: np.ndarray, r: float) -> float:
    """Exact area of intersection between a simple ccw polygon and a disk."""
    total = 0.0
    rel = poly - np.asarray(center, dtype=float)
    n = len(rel)
    for i in range(n):
        total += _disk_segment_term(rel[i], rel[(i + 1) % n], r)
    return total


def _circumcircle(p1, p2, p3):
    ax, ay = p1
    bx, by = p2
    cx, cy = p3
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-14:
        return None
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    c = np.array([ux, uy])
    return c, math.hypot(ax - ux, ay - uy)


def smallest_enclosing_circle(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimal covering circle by exhaustive pair/triple candidates.

    Intended for small point sets (polygon corners), where O(n^4) is cheap.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    best_c, best_r = None, math.inf
    slack = 1e-12

    def covers(c, r):
        return np.all(np.linalg.norm(pts - c, axis=1) <= r * (1.0 + 1e-12) + slack)

    for i in range(n):
        for j in range(i + 1, n):
            c = 0.5 * (pts[i] + pts[j])
            r = 0.5 * math.hypot(*(pts[i] - pts[j]))
            if r < best_r and covers(c, r):
                best_c, best_r = c, r
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                res = _circumcircle(pts[i], pts[j], pts[k])
                if res is None:
                    continue
                c, r = res
                if r < best_r and covers(c, r):
                    best_c, best_r = c, r
    return best_c, best_r


def largest_inscribed_circle(poly: np.ndarray) -> tuple[np.ndarray, float]:
    """Chebyshev center of a convex ccw polygon via a tiny linear program."""
    from scipy.optimize import linprog

    n = len(poly)
    a_ub = np.zeros((n, 3))
    b_ub = np.zeros(n)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        d = q - p
        nrm = np.array([d[1], -d[0]]) / math.hypot(*d)  # outward for ccw
        a_ub[i, :2] = nrm
        a_ub[i, 2] = 1.0
        b_ub[i] = nrm @ p
    res = linprog(c=[0.0, 0.0, -1.0], A_ub=a_ub, b_ub=b_ub,
                  bounds=[(None, None), (None, None), (0, None)], method="highs")
    if not res.success:
        raise RuntimeError("inscribed-circle LP failed: " + res.message)
    return res.x[:2], float(res.x[2])


def points_in_convex_polygon(pts: np.ndarray, poly: np.ndarray,
                             eps: float = 0.0) -> np.ndarray:
    """Mask of points inside a convex ccw polygon, boundary band eps wide."""
    pts = np.asarray(pts, dtype=float)
    inside = np.ones(len(pts), dtype=bool)
    n = len(poly)
    for k in range(n):
        a = poly[k]
        d = poly[(k + 1) % n] - a
        cross = d[0] * (pts[:, 1] - a[1]) - d[1] * (pts[:, 0] - a[0])
        inside &= cross >= -eps * np.hypot(d[0], d[1])
    return inside


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    d = b - a
    dd = float(d @ d)
    if dd < 1e-30:
        return math.hypot(*(p - a))
    t = float((p - a) @ d) / dd
    t = min(1.0, max(0.0, t))
    return math.hypot(*(p - (a + t * d)))


def points_segment_distance(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from many points to one segment (vectorized)."""
    d = b - a
    dd = float(d @ d)
    if dd < 1e-30:
        return np.linalg.norm(pts - a, axis=1)
    t = np.clip((pts - a) @ d / dd, 0.0, 1.0)
    proj = a + t[:, None] * d
    return np.linalg.norm(pts - proj, axis=1)


def collinear_overlap_length(a1, a2, b1, b2, eps: float) -> float:
    """Length of the common segment of two collinear-ish segments.

    Returns 0 when the segments are not parallel, not on the same carrier
    line (within eps), or overlap in at most a point.
    """
    da = a2 - a1
    la = math.hypot(*da)
    db = b2 - b1
    lb = math.hypot(*db)
    if la < eps or lb < eps:
        return 0.0
    ua = da / la
    cross = ua[0] * db[1] - ua[1] * db[0]
    if abs(cross) > eps * max(1.0, lb):
        return 0.0
    off = b1 - a1
    if abs(ua[0] * off[1] - ua[1] * off[0]) > eps:
        return 0.0
    t1 = float(off @ ua)
    t2 = float((b2 - a1) @ ua)
    lo, hi = max(0.0, min(t1, t2)), min(la, max(t1, t2))
    return max(0.0, hi - lo)


def min_distance_to_polygon(point: np.ndarray, poly: np.ndarray) -> float:
    """Distance from a point to a convex polygon (0 when inside)."""
    n = len(poly)
    inside = True
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        if (q[0] - p[0]) * (point[1] - p[1]) - (q[1] - p[1]) * (point[0] - p[0]) < 0:
            inside = False
            break
    if inside:
        return 0.0
    return min(point_segment_distance(point, poly[i], poly[(i + 1) % n])
               for i in range(n))
