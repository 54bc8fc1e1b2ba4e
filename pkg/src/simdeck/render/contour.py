"""Zero-level contour extraction from a sampled scalar field (marching
squares with linear interpolation along cell edges)."""

from __future__ import annotations

import numpy as np

from .transform import AxisLayout

# Cell corners: a=grid[i,j], b=grid[i,j+1], c=grid[i+1,j+1], d=grid[i+1,j].
# Case index packs the "value > 0" bit of a,b,c,d.  Entries list segments as
# pairs of cell edges ("ab", "bc", "dc", "ad"); the two saddle cases are
# resolved at runtime from the cell-center average.
_CASES: dict[int, list[tuple[str, str]]] = {
    0: [],
    1: [("ad", "dc")],
    2: [("dc", "bc")],
    3: [("ad", "bc")],
    4: [("ab", "bc")],
    6: [("ab", "dc")],
    7: [("ab", "ad")],
    8: [("ab", "ad")],
    9: [("ab", "dc")],
    11: [("ab", "bc")],
    12: [("ad", "bc")],
    13: [("dc", "bc")],
    14: [("ad", "dc")],
    15: [],
}
_SADDLE_5 = {True: [("ab", "ad"), ("bc", "dc")], False: [("ab", "bc"), ("ad", "dc")]}
_SADDLE_10 = {True: [("ab", "bc"), ("ad", "dc")], False: [("ab", "ad"), ("bc", "dc")]}


def contour_zero(grid, axis: AxisLayout) -> list[np.ndarray]:
    """Extract the 0-level of ``grid`` as polylines in data coordinates.

    grid[i, j] samples the field at (x_j, y_i) where x_j and y_i are evenly
    spaced over the axis ranges.  Cells are scanned row-major, so output
    ordering is deterministic; closed loops repeat their first vertex at the
    end.  An all-positive or all-negative grid yields [].
    """
    g = np.asarray(grid, dtype=np.float64)
    if g.ndim != 2 or g.shape[0] < 2 or g.shape[1] < 2:
        raise ValueError(f"grid must be at least 2x2, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("grid must be finite")
    nrow, ncol = g.shape
    x0, x1 = axis.x_range
    y0, y1 = axis.y_range
    xs = np.linspace(x0, x1, ncol)
    ys = np.linspace(y0, y1, nrow)

    verts: dict[tuple, tuple[float, float]] = {}

    def vertex(kind: str, i: int, j: int) -> tuple:
        key = (kind, i, j)
        if key not in verts:
            if kind == "h":
                vp, vq = g[i, j], g[i, j + 1]
                t = vp / (vp - vq)
                verts[key] = (xs[j] + t * (xs[j + 1] - xs[j]), ys[i])
            else:
                vp, vq = g[i, j], g[i + 1, j]
                t = vp / (vp - vq)
                verts[key] = (xs[j], ys[i] + t * (ys[i + 1] - ys[i]))
        return key

    def edge_key(name: str, i: int, j: int) -> tuple:
        if name == "ab":
            return vertex("h", i, j)
        if name == "dc":
            return vertex("h", i + 1, j)
        if name == "ad":
            return vertex("v", i, j)
        return vertex("v", i, j + 1)  # bc

    segments: list[tuple[tuple, tuple]] = []
    for i in range(nrow - 1):
        for j in range(ncol - 1):
            a, b = g[i, j], g[i, j + 1]
            c, d = g[i + 1, j + 1], g[i + 1, j]
            case = (a > 0) << 3 | (b > 0) << 2 | (c > 0) << 1 | (d > 0)
            if case == 5:
                pairs = _SADDLE_5[(a + b + c + d) / 4.0 > 0]
            elif case == 10:
                pairs = _SADDLE_10[(a + b + c + d) / 4.0 > 0]
            else:
                pairs = _CASES[case]
            for e1, e2 in pairs:
                segments.append((edge_key(e1, i, j), edge_key(e2, i, j)))

    return _chain(segments, verts)


def _chain(segments, verts) -> list[np.ndarray]:
    """Join segments sharing edge vertices into polylines, walking in segment
    emission order for determinism."""
    adjacency: dict[tuple, list[int]] = {}
    for idx, (k1, k2) in enumerate(segments):
        adjacency.setdefault(k1, []).append(idx)
        adjacency.setdefault(k2, []).append(idx)

    used = [False] * len(segments)
    polylines = []
    for start, (k1, k2) in enumerate(segments):
        if used[start]:
            continue
        used[start] = True
        chain = [k1, k2]
        for grow_tail in (True, False):
            while True:
                tip = chain[-1] if grow_tail else chain[0]
                nxt = next((i for i in adjacency.get(tip, []) if not used[i]), None)
                if nxt is None:
                    break
                used[nxt] = True
                a, b = segments[nxt]
                other = b if a == tip else a
                if grow_tail:
                    chain.append(other)
                else:
                    chain.insert(0, other)
                if chain[0] == chain[-1]:
                    break
            if chain[0] == chain[-1]:
                break
        polylines.append(np.array([verts[k] for k in chain], dtype=np.float64))
    return polylines
