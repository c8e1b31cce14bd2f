"""CSV/JSON serialization with atomic file replacement."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .contour import LevelCurve
from .drive import DriveProfile
from .scattering import MirrorParams
from .spectrum import SpectrumGrid
from .sweep import PeakReport, SweepGrid


def fmt(x: float) -> str:
    """Round-trippable decimal text (17 significant digits)."""
    return format(float(x), ".17g")


def atomic_write(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=",", lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def params_dict(p: MirrorParams) -> dict:
    return dataclasses.asdict(p)


def drive_dict(d: DriveProfile) -> dict:
    return dataclasses.asdict(d)


def spectrum_csv(grid: SpectrumGrid) -> str:
    return _csv(["omega", "n_plus", "n_minus", "n_total"], grid.rows())


def spectrum_json(grid: SpectrumGrid) -> str:
    return _json({
        "params": params_dict(grid.params),
        "drive": drive_dict(grid.drive),
        "units": "spectra are N(omega)/tau",
        "samples": [
            {"omega": w, "n_plus": a, "n_minus": b, "n_total": t}
            for w, a, b, t in (map(float, row) for row in grid.rows())
        ],
    })


def sweep_csv(grid: SweepGrid) -> str:
    rows = (
        (c, l, grid.values[i, j])
        for i, c in enumerate(grid.chi0_axis)
        for j, l in enumerate(grid.lambda0_axis)
    )
    return _csv(["chi0", "lambda0", "value"], rows)


def sweep_dict(grid: SweepGrid) -> dict:
    return {
        "kind": grid.kind.value,
        "fixed": {"mu0": grid.mu0, "omega0": grid.omega0},
        "rel_tol": grid.rel_tol,
        "chi0_axis": grid.chi0_axis.tolist(),
        "lambda0_axis": grid.lambda0_axis.tolist(),
        "layout": "values[i][j] at (chi0_axis[i], lambda0_axis[j])",
        "values": grid.values.tolist(),
    }


def sweep_json(grid: SweepGrid) -> str:
    return _json(sweep_dict(grid))


def sweep_from_dict(data: dict) -> SweepGrid:
    from .sweep import SweepKind

    return SweepGrid(
        np.array(data["chi0_axis"]),
        np.array(data["lambda0_axis"]),
        np.array(data["values"]),
        SweepKind(data["kind"]),
        data["fixed"]["mu0"],
        data["fixed"]["omega0"],
        data.get("rel_tol", 1e-10),
    )


def curves_dict(curves: list[LevelCurve]) -> list[dict]:
    return [{"level": c.level, "points": [list(p) for p in c.points]} for c in curves]


def peak_dict(peak: PeakReport) -> dict:
    return {
        "chi0_star": peak.chi0_star,
        "lambda0_star": peak.lambda0_star,
        "value": peak.value,
        "refinement_tol": peak.refinement_tol,
    }


def plot_script(csv_name: str, curves_name: str | None, title: str) -> str:
    """gnuplot script drawing the heatmap from the long-format CSV."""
    lines = [
        "# render with: gnuplot this_file",
        "set datafile separator ','",
        "set terminal pngcairo size 900,700",
        f"set output '{Path(csv_name).stem}.png'",
        f"set title '{title}'",
        "set xlabel 'chi0'",
        "set ylabel 'lambda0'",
        "set view map",
        "set key off",
    ]
    if curves_name:
        lines.append(
            f"splot '{csv_name}' using 1:2:3 skip 1 with pm3d, "
            f"'{curves_name}' using 1:2:(0) skip 1 with lines lc rgb 'white' dt 2"
        )
    else:
        lines.append(f"splot '{csv_name}' using 1:2:3 skip 1 with pm3d")
    return "\n".join(lines) + "\n"


def curves_csv(curves: list[LevelCurve]) -> str:
    """Curves as x,y rows; a blank line separates components (gnuplot convention)."""
    buf = io.StringIO()
    buf.write("chi0,lambda0\n")
    for curve in curves:
        for c, l in curve.points:
            buf.write(f"{fmt(c)},{fmt(l)}\n")
        buf.write("\n")
    return buf.getvalue()
