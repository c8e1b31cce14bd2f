"""Level curves of a SweepGrid: marching squares with bisection-refined crossings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .parallel import parallel_map
from .sweep import SweepGrid, cell_value

BISECTION_RTOL = 1e-6
_MAX_BISECTIONS = 200


@dataclass(frozen=True)
class LevelCurve:
    level: float
    points: tuple[tuple[float, float], ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, 2)


def _value_tol(level: float) -> float:
    return BISECTION_RTOL * max(abs(level), 1e-300)


def bisect_edge(f: Callable[[float], float], lo: float, hi: float, f_lo: float, level: float):
    """Locate f = level on [lo, hi], where f(lo) and f(hi) straddle the level.

    "Above" means f >= level, matching the grid classification. Stops once
    |f - level| <= BISECTION_RTOL*|level| or the interval collapses.
    Returns (t, f(t)).
    """
    tol = _value_tol(level)
    if abs(f_lo - level) <= tol:
        return lo, f_lo
    lo_above = f_lo >= level
    best = (lo, f_lo)
    for _ in range(_MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = f(mid)
        if abs(f_mid - level) < abs(best[1] - level):
            best = (mid, f_mid)
        if abs(f_mid - level) <= tol:
            return mid, f_mid
        if (f_mid >= level) == lo_above:
            lo = mid
        else:
            hi = mid
    return best


def _crossing_task(args):
    kind, mu0, omega0, rel_tol, edge, c0, l0, c1, l1, v0, level = args
    if edge == "c":
        def f(c):
            return cell_value(kind, mu0, omega0, c, l0, rel_tol)

        t, ft = bisect_edge(f, c0, c1, v0, level)
        return (t, l0), ft

    def f(l):
        return cell_value(kind, mu0, omega0, c0, l, rel_tol)

    t, ft = bisect_edge(f, l0, l1, v0, level)
    return (c0, t), ft


def _linear_crossing(c0, l0, c1, l1, v0, v1, level):
    s = 0.0 if v1 == v0 else (level - v0) / (v1 - v0)
    s = min(max(s, 0.0), 1.0)
    return (c0 + s * (c1 - c0), l0 + s * (l1 - l0))


def _segments(values: np.ndarray, level: float):
    """Marching-squares segments as pairs of edge keys.

    Edge keys: ('c', i, j) joins nodes (i, j)-(i+1, j); ('l', i, j) joins
    (i, j)-(i, j+1). Saddles are resolved by the mean of the four corners.
    """
    above = values >= level
    nc, nl = values.shape
    segs = []
    for i in range(nc - 1):
        for j in range(nl - 1):
            # corners counter-clockwise: (i,j), (i+1,j), (i+1,j+1), (i,j+1)
            a, b, c, d = above[i, j], above[i + 1, j], above[i + 1, j + 1], above[i, j + 1]
            if a == b == c == d:
                continue
            bottom, right, top, left = ("c", i, j), ("l", i + 1, j), ("c", i, j + 1), ("l", i, j)
            crossed = [e for e, hit in ((bottom, a != b), (right, b != c), (top, c != d), (left, d != a)) if hit]
            if len(crossed) == 2:
                segs.append(tuple(crossed))
                continue
            centre_above = values[i:i + 2, j:j + 2].mean() >= level
            if centre_above == a:
                # a joins the centre; the b and d corners are cut off
                segs.append((bottom, right))
                segs.append((top, left))
            else:
                segs.append((left, bottom))
                segs.append((right, top))
    return segs


def _chains(segs):
    adj: dict = {}
    for u, v in segs:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen_edges = set()
    chains = []

    def walk(start):
        chain = [start]
        cur = start
        while True:
            nxt = None
            for cand in adj[cur]:
                key = frozenset((cur, cand))
                if key not in seen_edges:
                    nxt = cand
                    seen_edges.add(key)
                    break
            if nxt is None:
                return chain
            chain.append(nxt)
            cur = nxt
            if cur == start:
                return chain

    for node in sorted(adj):
        if len(adj[node]) == 1 and any(frozenset((node, n)) not in seen_edges for n in adj[node]):
            chains.append(walk(node))
    for node in sorted(adj):
        if any(frozenset((node, n)) not in seen_edges for n in adj[node]):
            chains.append(walk(node))
    return chains


def _on_level_runs(grid: SweepGrid, level: float):
    """Grid lines whose nodes sit on the level (e.g. lambda0 = +-1 for ratio grids)."""
    tol = _value_tol(level)
    on = np.abs(grid.values - level) <= tol
    runs = []
    nc, nl = on.shape
    chis, lams = grid.chi0_axis, grid.lambda0_axis
    for j in range(nl):
        for r in _runs(on[:, j]):
            runs.append(tuple((float(chis[i]), float(lams[j])) for i in r))
    for i in range(nc):
        for r in _runs(on[i, :]):
            runs.append(tuple((float(chis[i]), float(lams[j])) for j in r))
    return runs


def _runs(mask: np.ndarray):
    out, start = [], None
    for k, flag in enumerate(list(mask) + [False]):
        if flag and start is None:
            start = k
        elif not flag and start is not None:
            if k - start >= 2:
                out.append(range(start, k))
            start = None
    return out


def extract_level_curve(
    grid: SweepGrid,
    level: float,
    refine: bool = True,
    workers: int = 1,
    evaluator: Optional[Callable[[float, float], float]] = None,
) -> list[LevelCurve]:
    """One polyline per connected component of {value = level}.

    With ``refine`` every edge crossing is re-located by bisection on the
    true quantity (recomputed through quadrature unless ``evaluator`` is
    given); otherwise crossings are linearly interpolated. Grid lines lying
    exactly on the level are returned as their own components.
    """
    values = grid.values
    if not values.min() <= level <= values.max():
        return []
    segs = _segments(values, level)
    edges = sorted({e for seg in segs for e in seg})

    def ends(edge):
        kind, i, j = edge
        if kind == "c":
            return i, j, i + 1, j
        return i, j, i, j + 1

    located = {}
    if refine and evaluator is None:
        tasks = []
        for e in edges:
            i0, j0, i1, j1 = ends(e)
            tasks.append((
                grid.kind, grid.mu0, grid.omega0, grid.rel_tol, e[0],
                float(grid.chi0_axis[i0]), float(grid.lambda0_axis[j0]),
                float(grid.chi0_axis[i1]), float(grid.lambda0_axis[j1]),
                float(values[i0, j0]), level,
            ))
        for e, (pt, _) in zip(edges, parallel_map(_crossing_task, tasks, workers)):
            located[e] = pt
    else:
        for e in edges:
            i0, j0, i1, j1 = ends(e)
            c0, l0 = float(grid.chi0_axis[i0]), float(grid.lambda0_axis[j0])
            c1, l1 = float(grid.chi0_axis[i1]), float(grid.lambda0_axis[j1])
            if refine:
                if e[0] == "c":
                    t, _ = bisect_edge(lambda c: evaluator(c, l0), c0, c1, values[i0, j0], level)
                    located[e] = (t, l0)
                else:
                    t, _ = bisect_edge(lambda l: evaluator(c0, l), l0, l1, values[i0, j0], level)
                    located[e] = (c0, t)
            else:
                located[e] = _linear_crossing(c0, l0, c1, l1, values[i0, j0], values[i1, j1], level)

    curves = [LevelCurve(level, tuple(located[e] for e in chain)) for chain in _chains(segs)]
    curves.extend(LevelCurve(level, run) for run in _on_level_runs(grid, level))
    return curves
