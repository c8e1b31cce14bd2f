"""Command-line interface.

Exit codes: 0 ok, 1 a reported check failed, 2 invalid input,
3 domain error, 4 quadrature did not converge.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path


from . import io as dio
from .contour import extract_level_curve
from .drive import DriveProfile
from .errors import BracketError, ConvergenceError, DomainError
from .scattering import MirrorParams, Side, reflection_coefficient, transmission_coefficient
from .spectrum import DEFAULT_QUAD_TOL, sample_spectrum
from .sweep import DEFAULT_CHI0_RANGE, DEFAULT_LAMBDA0_RANGE, AxisRange, find_peak, sweep_normalized_rate, sweep_ratio_to_perfect
from .totals import total_energy
from .verify import DEFAULT_OMEGA0_TAUS, run_battery

log = logging.getLogger("dce_mirror")

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2, 3, 4

DEFAULTS = {
    "mu0": 1.0,
    "chi0": 0.0,
    "lambda0": 0.0,
    "epsilon": 0.01,
    "omega0": 1.0,
    "tau": 100.0,
    "monochromatic": False,
    "rel_tol": DEFAULT_QUAD_TOL,
    "format": "csv",
    "out": None,
    "workers": 1,
    "omega": None,
    "n_points": 101,
    "grid_chi0": "{}:{}:{}".format(*DEFAULT_CHI0_RANGE),
    "grid_lambda0": "{}:{}:{}".format(*DEFAULT_LAMBDA0_RANGE),
    "kind": "rate",
    "levels": None,
    "emit_plot_script": False,
    "chi0_bracket": "0.5:10",
    "omega0_tau": None,
    "seed": 12345,
}

_FLOAT_KEYS = {"mu0", "chi0", "lambda0", "epsilon", "omega0", "tau", "rel_tol"}
_INT_KEYS = {"workers", "n_points", "seed"}
_BOOL_KEYS = {"monochromatic", "emit_plot_script"}


class InvalidInput(ValueError):
    pass


@dataclass
class RunConfig:
    mirror: MirrorParams
    drive: DriveProfile
    options: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.options[name]
        except KeyError:
            raise AttributeError(name) from None


def read_config_file(path) -> dict:
    """key = value lines; '#' starts a comment. Keys use flag names (dashes or underscores)."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise InvalidInput(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def _coerce(key, value):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
        if key in _BOOL_KEYS:
            if isinstance(value, bool):
                return value
            lowered = str(value).lower()
            if lowered not in {"1", "0", "true", "false", "yes", "no"}:
                raise ValueError(value)
            return lowered in {"1", "true", "yes"}
        if key in {"omega", "omega0_tau", "levels"}:
            items = value if isinstance(value, list) else [value]
            return [float(x) for item in items for x in str(item).split(",") if x.strip()]
    except ValueError:
        raise InvalidInput(f"invalid value for {key}: {value!r}") from None
    return value


def _omega_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("mirror and drive")
    g.add_argument("--mu0", type=float, help="delta coupling (>= 0)")
    g.add_argument("--chi0", type=float, help="kinetic-term coupling (>= 0)")
    g.add_argument("--lambda0", type=float, help="delta-prime coupling")
    g.add_argument("--epsilon", type=float, help="modulation depth in [0, 0.1]")
    g.add_argument("--omega0", type=float, help="drive frequency")
    g.add_argument("--tau", type=float, help="drive envelope time")
    g.add_argument("--monochromatic", action="store_true", help="use the w0 tau -> infinity drive")
    o = common.add_argument_group("numerics and output")
    o.add_argument("--rel-tol", dest="rel_tol", type=float, help="relative quadrature tolerance")
    o.add_argument("--format", choices=["csv", "json"])
    o.add_argument("--out", help="output path (default: stdout)")
    o.add_argument("--workers", type=int, help="worker processes for grids")
    o.add_argument("--config", help="key = value config file; flags override it")
    o.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="dce-mirror", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], argument_default=argparse.SUPPRESS, help="scattering coefficients per omega")
    p.add_argument("--omega", type=_omega_list, action="append", help="frequency or comma list (repeatable)")

    p = sub.add_parser("spectrum", parents=[common], argument_default=argparse.SUPPRESS, help="tabulate N+-(omega)/tau")
    p.add_argument("--n-points", dest="n_points", type=int)

    sub.add_parser("total", parents=[common], argument_default=argparse.SUPPRESS, help="total number and energy (JSON)")

    for name in ("sweep", "ratio"):
        p = sub.add_parser(name, parents=[common], argument_default=argparse.SUPPRESS, help="(chi0, lambda0) grid" if name == "sweep" else "alias of sweep --kind ratio")
        p.add_argument("--grid-chi0", dest="grid_chi0", help="a:b:n")
        p.add_argument("--grid-lambda0", dest="grid_lambda0", help="a:b:n")
        if name == "sweep":
            p.add_argument("--kind", choices=["rate", "ratio"])
        p.add_argument("--levels", type=_omega_list, action="append", help="level-curve values (comma list)")
        p.add_argument("--emit-plot-script", dest="emit_plot_script", action="store_true")

    p = sub.add_parser("peak", parents=[common], argument_default=argparse.SUPPRESS, help="refined maximum along chi0 at fixed lambda0")
    p.add_argument("--chi0-bracket", dest="chi0_bracket", help="a:b")

    p = sub.add_parser("verify", parents=[common], argument_default=argparse.SUPPRESS, help="run the invariant battery")
    p.add_argument("--omega0-tau", dest="omega0_tau", type=_omega_list, action="append",
                   help="w0 tau values for the convergence study (comma list)")
    p.add_argument("--seed", type=int)
    return parser


def resolve_options(ns: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    opts = dict(DEFAULTS)
    flags = vars(ns).copy()
    config_path = flags.pop("config", None)
    if config_path:
        try:
            opts.update(read_config_file(config_path))
        except OSError as exc:
            raise InvalidInput(f"cannot read config: {exc}") from None
    for key in ("omega", "levels", "omega0_tau"):
        if key in flags and flags[key] is not None:
            flags[key] = [x for chunk in flags[key] for x in chunk]
    opts.update(flags)
    if opts["command"] == "ratio":
        opts["kind"] = "ratio"
    return opts


def make_config(opts: dict) -> RunConfig:
    for key in _FLOAT_KEYS:
        if not math.isfinite(opts[key]):
            raise InvalidInput(f"{key} must be finite")
    try:
        mirror = MirrorParams(opts["mu0"], opts["chi0"], opts["lambda0"], opts["epsilon"])
        drive = DriveProfile(opts["omega0"], opts["tau"], bool(opts["monochromatic"]))
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    if opts["rel_tol"] < 0:
        raise InvalidInput("rel-tol must be >= 0")
    if opts["workers"] < 1:
        raise InvalidInput("workers must be >= 1")
    if opts["n_points"] < 2:
        raise InvalidInput("n-points must be >= 2")
    if opts["format"] not in ("csv", "json"):
        raise InvalidInput("format must be csv or json")
    return RunConfig(mirror, drive, opts)


def _emit(cfg: RunConfig, text: str, path=None):
    target = path or cfg.out
    if target:
        dio.atomic_write(target, text)
    else:
        sys.stdout.write(text)


def cmd_coeffs(cfg: RunConfig) -> int:
    omegas = cfg.omega
    if not omegas:
        raise InvalidInput("coeffs needs at least one --omega")
    p = cfg.mirror
    rows, records, violations = [], [], 0
    for w in omegas:
        s = transmission_coefficient(p, Side.PLUS, w)
        rp = reflection_coefficient(p, Side.PLUS, w)
        rm = reflection_coefficient(p, Side.MINUS, w)
        defect = max(abs(abs(s) ** 2 + abs(r) ** 2 - 1.0) for r in (rp, rm))
        ok = defect <= 1e-12
        violations += not ok
        rows.append((w, s.real, s.imag, abs(s), rp.real, rp.imag, abs(rp), rm.real, rm.imag, abs(rm), defect, int(ok)))
        records.append({
            "omega": w,
            "s": {"re": s.real, "im": s.imag, "abs": abs(s)},
            "r_plus": {"re": rp.real, "im": rp.imag, "abs": abs(rp)},
            "r_minus": {"re": rm.real, "im": rm.imag, "abs": abs(rm)},
            "unitarity_defect": defect,
            "unitary": ok,
        })
    if cfg.format == "json":
        text = dio._json({"params": dio.params_dict(p), "rows": records})
    else:
        header = ["omega", "s_re", "s_im", "s_abs", "r_plus_re", "r_plus_im", "r_plus_abs",
                  "r_minus_re", "r_minus_im", "r_minus_abs", "unitarity_defect", "unitary"]
        text = dio._csv(header, rows)
    _emit(cfg, text)
    if violations:
        log.error("%d row(s) violate |s|^2 + |r|^2 = 1", violations)
        return EXIT_FAILED
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    grid = sample_spectrum(cfg.mirror, cfg.drive, cfg.n_points, cfg.rel_tol, cfg.workers)
    text = dio.spectrum_json(grid) if cfg.format == "json" else dio.spectrum_csv(grid)
    _emit(cfg, text)
    return EXIT_OK


def cmd_total(cfg: RunConfig) -> int:
    totals = total_energy(cfg.mirror, cfg.drive, cfg.rel_tol)
    payload = {
        "params": dio.params_dict(cfg.mirror),
        "drive": dio.drive_dict(cfg.drive),
        "units": "per unit tau",
        "totals": totals.to_dict(),
        "energy_per_particle": totals.e_total / totals.n_total if totals.n_total else None,
        "half_omega0": 0.5 * cfg.drive.omega0,
    }
    if cfg.mirror.epsilon > 0:
        payload["normalized"] = totals.as_normalized(cfg.mirror.epsilon).to_dict()
    _emit(cfg, dio._json(payload))
    return EXIT_OK


def _sidecar(base: Path, suffix: str) -> Path:
    return base.with_name(base.stem + suffix)


def cmd_sweep(cfg: RunConfig) -> int:
    try:
        chi_range = AxisRange.parse(cfg.grid_chi0)
        lam_range = AxisRange.parse(cfg.grid_lambda0)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    fn = sweep_ratio_to_perfect if cfg.kind == "ratio" else sweep_normalized_rate
    grid = fn(cfg.mirror.mu0, cfg.drive.omega0, chi_range, lam_range, cfg.rel_tol, cfg.workers)
    levels = cfg.levels if cfg.levels is not None else ([1.0] if cfg.kind == "ratio" else [])

    text = dio.sweep_json(grid) if cfg.format == "json" else dio.sweep_csv(grid)
    curves = []
    for level in levels:
        curves.extend(extract_level_curve(grid, level, refine=True, workers=cfg.workers))
    if not cfg.out:
        sys.stdout.write(text)
        if curves:
            sys.stdout.write(dio._json({"level_curves": dio.curves_dict(curves)}))
        return EXIT_OK

    out = Path(cfg.out)
    dio.atomic_write(out, text)
    if levels:
        dio.atomic_write(_sidecar(out, ".curves.json"), dio._json(dio.curves_dict(curves)))
    if cfg.emit_plot_script:
        csv_path = out if cfg.format == "csv" else _sidecar(out, ".csv")
        if csv_path != out:
            dio.atomic_write(csv_path, dio.sweep_csv(grid))
        curves_name = None
        if curves:
            curves_path = _sidecar(out, ".curves.csv")
            dio.atomic_write(curves_path, dio.curves_csv(curves))
            curves_name = curves_path.name
        title = "N/N(lambda0=1)" if cfg.kind == "ratio" else "(2 pi/eps^2 tau) N"
        dio.atomic_write(_sidecar(out, ".gp"), dio.plot_script(csv_path.name, curves_name, title))
    return EXIT_OK


def cmd_peak(cfg: RunConfig) -> int:
    try:
        lo, hi = (float(x) for x in cfg.chi0_bracket.split(":"))
    except ValueError:
        raise InvalidInput(f"chi0-bracket must be a:b, got {cfg.chi0_bracket!r}") from None
    peak = find_peak(cfg.mirror.mu0, cfg.drive.omega0, cfg.mirror.lambda0, (lo, hi), cfg.rel_tol)
    _emit(cfg, dio._json(dio.peak_dict(peak)))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    taus = cfg.omega0_tau or list(DEFAULT_OMEGA0_TAUS)
    results = run_battery(cfg.rel_tol, taus, cfg.seed)
    lines = [r.line() for r in results]
    _emit(cfg, "\n".join(lines) + "\n")
    if any(r.error and r.error.startswith("ConvergenceError") for r in results):
        return EXIT_CONVERGENCE
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


COMMANDS = {
    "coeffs": cmd_coeffs,
    "spectrum": cmd_spectrum,
    "total": cmd_total,
    "sweep": cmd_sweep,
    "ratio": cmd_sweep,
    "peak": cmd_peak,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(ns, "verbose", False) else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    if hasattr(ns, "verbose"):
        del ns.verbose
    try:
        cfg = make_config(resolve_options(ns))
        return COMMANDS[ns.command](cfg)
    except InvalidInput as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INVALID
    except (DomainError, BracketError) as exc:
        log.error("domain error: %s", exc)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        log.error("convergence failure: %s", exc)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
