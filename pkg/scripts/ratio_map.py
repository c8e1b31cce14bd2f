"""Ratio to the perfect mirror over (chi0, lambda0) with its level-1 curves.

    python scripts/ratio_map.py --out results/ratio_map --workers 4
"""
import argparse
import json
from pathlib import Path

import numpy as np

from dce_mirror import io as dio
from dce_mirror.contour import extract_level_curve
from dce_mirror.sweep import DEFAULT_CHI0_RANGE, DEFAULT_LAMBDA0_RANGE, AxisRange, sweep_ratio_to_perfect


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/ratio_map", help="output stem")
    ap.add_argument("--grid-chi0", default="{}:{}:{}".format(*DEFAULT_CHI0_RANGE))
    ap.add_argument("--grid-lambda0", default="{}:{}:{}".format(*DEFAULT_LAMBDA0_RANGE))
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    stem = Path(args.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    grid = sweep_ratio_to_perfect(
        chi0_range=AxisRange.parse(args.grid_chi0),
        lambda0_range=AxisRange.parse(args.grid_lambda0),
        workers=args.workers,
    )
    curves = extract_level_curve(grid, 1.0, workers=args.workers)

    csv_path = stem.with_suffix(".csv")
    curves_path = stem.with_suffix(".curves.csv")
    dio.atomic_write(csv_path, dio.sweep_csv(grid))
    dio.atomic_write(curves_path, dio.curves_csv(curves))
    dio.atomic_write(stem.with_suffix(".curves.json"), json.dumps(dio.curves_dict(curves), indent=2) + "\n")
    dio.atomic_write(stem.with_suffix(".gp"), dio.plot_script(csv_path.name, curves_path.name, "N/N(lambda0=1)"))

    c, l, v = grid.argmax()
    share = np.count_nonzero(grid.values > 1.0) / grid.values.size
    print(f"max ratio {v:.4f} at chi0={c:g}, lambda0={l:g}; {share:.1%} of cells above 1")
    for curve in curves:
        pts = curve.as_array()
        if np.all(np.abs(np.abs(pts[:, 1]) - 1.0) == 0.0):
            print(f"level-1 component: perfect-mirror line lambda0={pts[0, 1]:+g}")
            continue
        crossing = pts[np.argmin(np.abs(pts[:, 1]))]
        print(f"level-1 component: {len(pts)} points, crosses lambda0~0 at chi0={crossing[0]:.4f}")


if __name__ == "__main__":
    main()
