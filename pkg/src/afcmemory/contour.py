"""Marching-squares isolines on rectilinear grids."""

from dataclasses import dataclass

import numpy as np

__all__ = ["Contour", "extract_contours"]


@dataclass(frozen=True)
class Contour:
    """One polyline of the isoline at `level` of the field named `field`."""

    level: float
    points: np.ndarray  # (k, 2) array of (x, y) vertices
    closed: bool = False
    field: str = ""

    def to_dict(self):
        return {
            "level": float(self.level),
            "field": self.field,
            "closed": self.closed,
            "points": [[float(x), float(y)] for x, y in self.points],
        }


# Corner order: 0=(i,j) 1=(i+1,j) 2=(i+1,j+1) 3=(i,j+1); edges: 0:(0,1) 1:(1,2) 2:(3,2) 3:(0,3)
_EDGE_CORNERS = ((0, 1), (1, 2), (3, 2), (0, 3))

# Segments (pairs of edges) per case index = sum(above[c] << c). Saddles 5 and 10 handled separately.
_CASES = {
    0: (), 15: (),
    1: ((3, 0),), 14: ((3, 0),),
    2: ((0, 1),), 13: ((0, 1),),
    3: ((3, 1),), 12: ((3, 1),),
    4: ((1, 2),), 11: ((1, 2),),
    6: ((0, 2),), 9: ((0, 2),),
    7: ((3, 2),), 8: ((3, 2),),
}


def _edge_key(i, j, e):
    # shared between neighbouring cells: ("x", i, j) is the edge from (i,j) to (i+1,j)
    if e == 0:
        return ("x", i, j)
    if e == 1:
        return ("y", i + 1, j)
    if e == 2:
        return ("x", i, j + 1)
    return ("y", i, j)


def _cell_segments(case, corners, level):
    if case == 5 or case == 10:
        # Saddle: the corner average decides whether the high corners connect through the centre.
        centre_high = np.mean(corners) >= level
        high_02 = case == 5  # corners 0 and 2 are the high pair
        if centre_high == high_02:
            # high diagonal joined: cut off the low corners 1 and 3
            return ((0, 1), (2, 3))
        return ((3, 0), (1, 2))
    return _CASES[case]


def extract_contours(field, levels, x=None, y=None, name=""):
    """Isolines of a 2-D field by marching squares with linear edge interpolation.

    Parameters
    ----------
    field : array_like, shape (nx, ny)
        ``field[i, j]`` is the value at ``(x[i], y[j])``; must be finite.
    levels : iterable of float
    x, y : array_like, optional
        Grid coordinates; default to the index ranges.
    name : str
        Label copied into each returned Contour.

    Returns
    -------
    list of Contour
        Ordered by level, then by first vertex. Levels outside the field range
        contribute nothing. A corner equal to the level counts as above it.
        Saddle cells are split by comparing the mean of the four corners with
        the level.
    """
    z = np.asarray(field, dtype=float)
    if z.ndim != 2 or min(z.shape) < 2:
        raise ValueError("field must be a 2-D array with at least 2 points per axis")
    if not np.all(np.isfinite(z)):
        raise ValueError("field must be finite")
    nx, ny = z.shape
    x = np.arange(nx, dtype=float) if x is None else np.asarray(x, dtype=float)
    y = np.arange(ny, dtype=float) if y is None else np.asarray(y, dtype=float)
    out = []
    for level in sorted(float(v) for v in levels):
        if level < z.min() or level > z.max() or z.min() == z.max():
            continue
        out.extend(_trace_level(z, x, y, level, name))
    return out


def _trace_level(z, x, y, level, name):
    above = z >= level
    nx, ny = z.shape
    points = {}
    adjacency = {}

    def vertex(i, j, e):
        key = _edge_key(i, j, e)
        if key not in points:
            a, b = _EDGE_CORNERS[e]
            ca, cb = _corner(i, j, a), _corner(i, j, b)
            za, zb = z[ca], z[cb]
            t = (level - za) / (zb - za)
            pa = np.array([x[ca[0]], y[ca[1]]])
            pb = np.array([x[cb[0]], y[cb[1]]])
            points[key] = pa + t * (pb - pa)
        return key

    for i in range(nx - 1):
        for j in range(ny - 1):
            idx = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            case = sum(int(above[c]) << k for k, c in enumerate(idx))
            if case in (0, 15):
                continue
            corners = [z[c] for c in idx]
            for ea, eb in _cell_segments(case, corners, level):
                ka, kb = vertex(i, j, ea), vertex(i, j, eb)
                adjacency.setdefault(ka, []).append(kb)
                adjacency.setdefault(kb, []).append(ka)

    lines = []
    seen = set()

    def walk(start):
        path = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [k for k in adjacency[cur] if k != prev and k not in seen]
            if not nxt:
                closes = start in adjacency[cur] and cur != start and len(path) > 2
                return path, closes
            prev, cur = cur, nxt[0]
            path.append(cur)
            seen.add(cur)

    for start in sorted(k for k, v in adjacency.items() if len(v) == 1):
        if start not in seen:
            path, _ = walk(start)
            lines.append((path, False))
    for start in sorted(adjacency):
        if start not in seen:
            path, closed = walk(start)
            if closed:
                path = path + [path[0]]
            lines.append((path, closed))

    contours = []
    for path, closed in lines:
        pts = np.array([points[k] for k in path])
        # drop consecutive duplicates produced by vertices sitting exactly on grid nodes
        keep = np.ones(len(pts), dtype=bool)
        keep[1:] = np.any(np.abs(np.diff(pts, axis=0)) > 0, axis=1)
        pts = pts[keep]
        if len(pts) >= 2:
            contours.append(Contour(level, pts, closed, name))
    return contours


def _corner(i, j, c):
    return ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))[c]
