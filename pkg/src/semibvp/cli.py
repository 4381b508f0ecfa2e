"""Command line front end: solve, sweep and extrapolate subcommands.

Run configurations merge three layers with increasing precedence: built-in
defaults, an optional flat key-value config file, then command line flags.
Tables are written with LF line endings and a literal ``inf`` token for the
infinity node; exit status is 0 on success, 1 when an iteration fails to
converge and 2 for configuration problems.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass

import numpy as np

from .continuation import continuation_solve, extrapolate
from .errors import ConfigurationError, SemibvpError
from .mesh import ALGEBRAIC, LOGARITHMIC, GridMap, build_mesh
from .models import mhd_initial_guess, mhd_system, solve_mhd, wall_shear
from .newton import NewtonConfig, newton_solve

_FORMATS = ("csv", "tsv", "human")


@dataclass
class RunConfig:
    """Flat run configuration; field names double as config file keys."""

    map: str = LOGARITHMIC
    c: float = 2.0
    N: int = 1000
    tol: float = 1e-8
    beta_start: float = 0.0
    beta_stop: float = 2.0
    beta_step: float = 0.2
    richardson_n0: int | None = None
    richardson_levels: int | None = None
    richardson_orders: tuple[float, ...] | None = None
    output: str | None = None
    format: str = "csv"

    def grid_map(self) -> GridMap:
        return GridMap(variant=self.map, c=self.c)

    def newton(self, max_iter: int = 25, damping: float = 1.0) -> NewtonConfig:
        return NewtonConfig(tol=self.tol, max_iter=max_iter, damping=damping)


def _parse_orders(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse orders list {text!r}") from exc


_PARSERS = {
    "map": str,
    "c": float,
    "N": int,
    "tol": float,
    "beta_start": float,
    "beta_stop": float,
    "beta_step": float,
    "richardson_n0": int,
    "richardson_levels": int,
    "richardson_orders": _parse_orders,
    "output": str,
    "format": str,
}


def parse_config_file(path: str) -> dict:
    """Read ``key = value`` lines into typed overrides.

    Blank lines and lines starting with ``#`` are ignored.  Unknown keys or
    unparsable values raise ConfigurationError.
    """
    overrides: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value', got {text!r}")
        key, _, value = text.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _PARSERS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            overrides[key] = _PARSERS[key](value)
        except (ValueError, TypeError) as exc:
            raise ConfigurationError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return overrides


def serialize_config(cfg: RunConfig) -> str:
    """Render a config as text that parse_config_file reads back identically."""
    lines = []
    for field in dataclasses.fields(cfg):
        value = getattr(cfg, field.name)
        if value is None:
            continue
        if field.name == "richardson_orders":
            rendered = ",".join(repr(p) for p in value)
        elif isinstance(value, float):
            rendered = repr(value)
        else:
            rendered = str(value)
        lines.append(f"{field.name} = {rendered}")
    return "\n".join(lines) + "\n"


def load_config(path: str | None, flag_overrides: dict) -> RunConfig:
    """Merge defaults, an optional config file and flag overrides."""
    cfg = RunConfig()
    layers = []
    if path is not None:
        layers.append(parse_config_file(path))
    layers.append({k: v for k, v in flag_overrides.items() if v is not None})
    for layer in layers:
        cfg = dataclasses.replace(cfg, **layer)
    _check_config(cfg)
    return cfg


def _check_config(cfg: RunConfig) -> None:
    if cfg.map not in (LOGARITHMIC, ALGEBRAIC):
        raise ConfigurationError(f"map must be 'log' or 'alg', got {cfg.map!r}")
    if cfg.format not in _FORMATS:
        raise ConfigurationError(f"format must be one of {_FORMATS}, got {cfg.format!r}")
    if not (math.isfinite(cfg.c) and cfg.c > 0):
        raise ConfigurationError(f"c must be positive, got {cfg.c!r}")
    if not (math.isfinite(cfg.tol) and cfg.tol > 0):
        raise ConfigurationError(f"tol must be positive, got {cfg.tol!r}")


# ---------------------------------------------------------------- formatting

def _fmt(value: float, decimals: int, full_precision: bool) -> str:
    if full_precision:
        return f"{value:.17g}"
    return f"{value:.{decimals}f}"


def _fmt_beta(beta: float) -> str:
    return f"{beta:g}"


def _render_table(header: list[str], rows: list[list[str]], fmt: str) -> str:
    if fmt == "csv":
        sep = ","
    elif fmt == "tsv":
        sep = "\t"
    else:
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
                  for i, h in enumerate(header)]
        lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
        lines += ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows]
        return "\n".join(lines) + "\n"
    return "\n".join([sep.join(header)] + [sep.join(row) for row in rows]) + "\n"


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        # newline="" keeps the LF endings verbatim on every platform
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _beta_values(cfg: RunConfig) -> list[float]:
    if cfg.beta_stop == cfg.beta_start:
        return [cfg.beta_start]
    if not (math.isfinite(cfg.beta_step) and cfg.beta_step > 0):
        raise ConfigurationError(f"beta_step must be positive, got {cfg.beta_step!r}")
    if cfg.beta_stop < cfg.beta_start:
        raise ConfigurationError("beta_stop must not be below beta_start")
    count = int(math.floor((cfg.beta_stop - cfg.beta_start) / cfg.beta_step + 0.5)) + 1
    return [round(cfg.beta_start + k * cfg.beta_step, 10) for k in range(count)]


def _plot_path(output: str) -> str:
    stem, dot, _ = output.rpartition(".")
    return (stem if dot else output) + ".png"


def _require_output_for_plot(cfg: RunConfig) -> None:
    if cfg.output is None:
        raise ConfigurationError("--plot needs --output so the figure has somewhere to land")


# --------------------------------------------------------------- subcommands

def cmd_solve(
    cfg: RunConfig,
    beta: float | None = None,
    *,
    full_precision: bool = False,
    plot: bool = False,
    max_iter: int = 25,
    damping: float = 1.0,
) -> int:
    """Solve one model instance and write the node-by-node profile."""
    if plot:
        _require_output_for_plot(cfg)
    beta = cfg.beta_start if beta is None else beta
    mesh = build_mesh(cfg.grid_map(), cfg.N)
    system = mhd_system(beta)
    state = mhd_initial_guess().on_mesh(mesh)
    sol = newton_solve(system, mesh, state, cfg.newton(max_iter=max_iter, damping=damping))

    header = ["n", "xi", "x", "u1", "u2", "u3"]
    xi = mesh.xi
    rows = []
    for n in range(mesh.N + 1):
        rows.append(
            [str(n), _fmt(xi[n], 7, full_precision), _fmt(mesh.nodes[n], 7, full_precision)]
            + [_fmt(sol.U[n, j], 7, full_precision) for j in range(3)]
        )
    _write_text(_render_table(header, rows, cfg.format), cfg.output)

    shear = wall_shear(sol)
    print(f"wall shear {_fmt(shear, 15, full_precision)}")
    print(f"iterations {sol.iterations}")
    print(f"converged {'yes' if sol.converged else 'no'}")
    if plot:
        from . import plots

        plots.save_profile_figure(sol, _plot_path(cfg.output), title=f"beta = {_fmt_beta(beta)}")
    if not sol.converged:
        print(
            f"error: no convergence after {sol.iterations} iterations "
            f"(mean update {sol.final_update_norm:.3g})",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_sweep(
    cfg: RunConfig,
    *,
    full_precision: bool = False,
    plot: bool = False,
    warm_start: bool = False,
    max_iter: int = 25,
    damping: float = 1.0,
) -> int:
    """Solve over the beta range and tabulate the wall shear per value.

    Failures are flagged in their row and on standard error; the sweep
    continues and the exit status reports the overall outcome.
    """
    if plot:
        _require_output_for_plot(cfg)
    betas = _beta_values(cfg)
    mesh = build_mesh(cfg.grid_map(), cfg.N)
    newton_cfg = cfg.newton(max_iter=max_iter, damping=damping)
    guess = mhd_initial_guess()

    header = ["beta", "wall_shear", "iterations", "converged"]
    rows = []
    shears: list[float] = []
    failures = 0
    previous = None
    for beta in betas:
        state = previous.U if (warm_start and previous is not None) else guess.on_mesh(mesh)
        try:
            sol = newton_solve(mhd_system(beta), mesh, state, newton_cfg)
        except SemibvpError as exc:
            print(f"error: beta={_fmt_beta(beta)}: {exc}", file=sys.stderr)
            rows.append([_fmt_beta(beta), _fmt(math.nan, 7, full_precision), "0", "0"])
            shears.append(math.nan)
            failures += 1
            continue
        shear = wall_shear(sol)
        rows.append(
            [_fmt_beta(beta), _fmt(shear, 7, full_precision), str(sol.iterations),
             "1" if sol.converged else "0"]
        )
        shears.append(shear)
        if sol.converged:
            previous = sol
        else:
            print(
                f"error: beta={_fmt_beta(beta)}: no convergence after {sol.iterations} "
                f"iterations (mean update {sol.final_update_norm:.3g})",
                file=sys.stderr,
            )
            failures += 1
    _write_text(_render_table(header, rows, cfg.format), cfg.output)
    if cfg.output is not None:
        print(f"wrote {len(rows)} rows to {cfg.output}")
    if plot:
        from . import plots

        plots.save_sweep_figure(betas, shears, _plot_path(cfg.output))
    return 1 if failures else 0


def cmd_extrapolate(
    cfg: RunConfig,
    beta: float | None = None,
    *,
    full_precision: bool = False,
    plot: bool = False,
    max_iter: int = 25,
    damping: float = 1.0,
) -> int:
    """Run mesh-doubling continuation and print the extrapolation ladder."""
    if plot:
        _require_output_for_plot(cfg)
    if cfg.richardson_n0 is None or cfg.richardson_levels is None:
        raise ConfigurationError(
            "extrapolate needs richardson_n0 and richardson_levels (flags --n0/--levels)"
        )
    beta = cfg.beta_start if beta is None else beta
    levels = cfg.richardson_levels
    if levels < 0:
        raise ConfigurationError(f"richardson_levels must be non-negative, got {levels}")
    orders = cfg.richardson_orders
    if orders is not None and len(orders) < levels:
        raise ConfigurationError(f"richardson_orders needs at least {levels} entries")

    solutions = continuation_solve(
        mhd_system(beta), cfg.grid_map(), cfg.richardson_n0, levels, mhd_initial_guess(),
        cfg.newton(max_iter=max_iter, damping=damping),
    )
    n_values = [sol.mesh.N for sol in solutions]
    raw = [wall_shear(sol) for sol in solutions]
    ladder = extrapolate(raw, orders=orders[:levels] if orders is not None else None,
                         n_values=n_values)

    header = ["N"] + [f"level{k}" for k in range(levels + 1)]
    rows = []
    for g, row_vals in enumerate(ladder.values):
        cells = [str(n_values[g])] + [_fmt(v, 9, full_precision) for v in row_vals]
        cells += [""] * (levels - g)
        rows.append(cells)
    _write_text(_render_table(header, rows, cfg.format), cfg.output)
    print(f"benchmark {_fmt(ladder.best, 9, full_precision)}")
    if plot:
        from . import plots

        plots.save_convergence_figure(n_values, raw, ladder.best, _plot_path(cfg.output))
    return 0


# --------------------------------------------------------------------- main

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--map", choices=(LOGARITHMIC, ALGEBRAIC), help="grid map variant")
    parser.add_argument("--c", type=float, help="grid map stretching parameter")
    parser.add_argument("--N", type=int, help="number of grid intervals")
    parser.add_argument("--tol", type=float, help="mean-update stopping tolerance")
    parser.add_argument("-o", "--output", help="write the table to this file instead of stdout")
    parser.add_argument("--format", choices=_FORMATS, help="table format")
    parser.add_argument("--full-precision", action="store_true",
                        help="print 17 significant digits instead of fixed decimals")
    parser.add_argument("--plot", action="store_true",
                        help="also render a PNG figure next to the output file")
    parser.add_argument("--max-iter", type=int, default=25, help="Newton iteration cap")
    parser.add_argument("--damping", type=float, default=1.0,
                        help="step shrink factor on residual growth (1 = plain Newton)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semibvp",
        description="Boundary-layer problems on [0, inf) solved on quasi-uniform grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance and dump the profile")
    _add_common(p_solve)
    p_solve.add_argument("--beta", type=float, help="magnetic parameter (default: beta_start)")

    p_sweep = sub.add_parser("sweep", help="tabulate the wall shear over a beta range")
    _add_common(p_sweep)
    p_sweep.add_argument("--beta", type=float, help="single beta (sets start and stop)")
    p_sweep.add_argument("--beta-start", type=float, dest="beta_start")
    p_sweep.add_argument("--beta-stop", type=float, dest="beta_stop")
    p_sweep.add_argument("--beta-step", type=float, dest="beta_step")
    p_sweep.add_argument("--warm-start", action="store_true",
                         help="seed each beta with the previous converged solution")

    p_extr = sub.add_parser("extrapolate", help="mesh-doubling ladder for the wall shear")
    _add_common(p_extr)
    p_extr.add_argument("--beta", type=float, help="magnetic parameter (default: beta_start)")
    p_extr.add_argument("--n0", type=int, dest="richardson_n0", help="coarsest interval count")
    p_extr.add_argument("--levels", type=int, dest="richardson_levels",
                        help="number of mesh doublings")
    p_extr.add_argument("--orders", type=_parse_orders, dest="richardson_orders",
                        help="comma separated error orders, e.g. 2,4")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {key: getattr(args, key, None) for key in _PARSERS}
    if getattr(args, "beta", None) is not None and args.command == "sweep":
        overrides["beta_start"] = args.beta
        overrides["beta_stop"] = args.beta
    try:
        cfg = load_config(args.config, overrides)
        common = dict(
            full_precision=args.full_precision,
            plot=args.plot,
            max_iter=args.max_iter,
            damping=args.damping,
        )
        if args.command == "solve":
            return cmd_solve(cfg, args.beta, **common)
        if args.command == "sweep":
            return cmd_sweep(cfg, warm_start=args.warm_start, **common)
        return cmd_extrapolate(cfg, args.beta, **common)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SemibvpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
