"""Command-line front end: generate examples, reduce, evaluate norms and
residuals, simulate, and run the benchmark suite."""

import functools
import os
import sys
from pathlib import Path

import click
import numpy as np

from .bands import FreqBand, TimeBand
from .examples import heat_transfer, illustrative_7
from .exceptions import BimorError, ValidationError
from .io import ReportRow, RunManifest, load_system, save_system, write_report
from .norms import error_norm, h2_freq_limited, h2_norm, h2_time_limited
from .optimality import residuals_freq, residuals_time
from .reduce import (
    IterationConfig,
    balanced_truncation,
    flhmora,
    flphmora,
    homora,
    tlhmora,
    tlphmora,
)
from .signals import parse_signal
from .solvers import Direct, FixedPoint
from .system import simulate

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_NONCONVERGED = 4

_BAND_ALGS = {
    "bt": ("infinite", balanced_truncation),
    "tlbt": ("time", balanced_truncation),
    "flbt": ("freq", balanced_truncation),
    "homora": ("infinite", homora),
    "tlhmora": ("time", tlhmora),
    "flhmora": ("freq", flhmora),
    "tlphmora": ("time", tlphmora),
    "flphmora": ("freq", flphmora),
}

_METRIC_BY_KIND = {"infinite": "h2", "time": "h2tau", "freq": "h2omega"}
_UNIT_BY_KIND = {"infinite": "", "time": "s", "freq": "rad/s"}


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            click.echo(f"validation error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)
        except BimorError as exc:
            click.echo(f"numerical error: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)

    return wrapper


def _default_truncation():
    raw = os.environ.get("BIMOR_TRUNC", "3")
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"BIMOR_TRUNC must be an integer, got {raw!r}")
    if value < 1:
        raise ValidationError(f"BIMOR_TRUNC must be >= 1, got {value}")
    return value


def _resolve_band(kind, time_band, freq_band):
    if time_band is not None and freq_band is not None:
        raise ValidationError("give at most one of --time-band / --freq-band")
    if kind == "time":
        if time_band is None:
            raise ValidationError("this algorithm requires --time-band LO HI")
        return TimeBand(*time_band)
    if kind == "freq":
        if freq_band is None:
            raise ValidationError("this algorithm requires --freq-band LO HI")
        return FreqBand(*freq_band)
    if time_band is not None or freq_band is not None:
        raise ValidationError("this algorithm takes no band flags")
    return None


def _mode_object(mode, truncation):
    if mode == "auto":
        return None
    if mode == "direct":
        return Direct()
    return FixedPoint(max_sweeps=truncation)


def _band_fields(kind, band):
    if kind == "infinite":
        return 0.0, float("inf"), ""
    return band.lo, band.hi, _UNIT_BY_KIND[kind]


@click.group()
def main():
    """Time- and frequency-limited model order reduction for bilinear
    systems."""


@main.command("example")
@click.argument("name", type=click.Choice(["illustrative7", "heat"]))
@click.option("--grid", type=int, default=23, show_default=True,
              help="Interior grid points per side (heat only).")
@click.option("-o", "--out", "out_path", required=True,
              type=click.Path(file_okay=False))
@_guard
def cmd_example(name, grid, out_path):
    """Write a built-in example system as a bundle."""
    if name == "illustrative7":
        sys_obj = illustrative_7()
    else:
        sys_obj = heat_transfer(grid)
    save_system(sys_obj, out_path, name=name,
                note=f"built-in example {name}")
    click.echo(f"wrote {name} (n={sys_obj.order}) to {out_path}")


_time_band_opt = click.option("--time-band", nargs=2, type=float, default=None,
                              help="Time window LO HI in seconds.")
_freq_band_opt = click.option("--freq-band", nargs=2, type=float, default=None,
                              help="Frequency band LO HI in rad/s.")


@main.command("reduce")
@click.argument("system_path", type=click.Path(exists=True, file_okay=False))
@click.option("--alg", required=True, type=click.Choice(sorted(_BAND_ALGS)))
@click.option("-r", "order", required=True, type=int)
@_time_band_opt
@_freq_band_opt
@click.option("--truncation", type=int, default=None,
              help="Fixed-point sweep count (default BIMOR_TRUNC or 3).")
@click.option("--tol", type=float, default=1e-5, show_default=True)
@click.option("--max-iter", "max_iter", type=int, default=200,
              show_default=True)
@click.option("--mode", type=click.Choice(["auto", "direct", "fixed"]),
              default="auto", show_default=True)
@click.option("-o", "--out", "out_path", required=True,
              type=click.Path(file_okay=False))
@_guard
def cmd_reduce(system_path, alg, order, time_band, freq_band, truncation,
               tol, max_iter, mode, out_path):
    """Run a reduction algorithm and write ROM bundle, run manifest, and
    outcome row."""
    truncation = _default_truncation() if truncation is None else truncation
    kind, _ = _BAND_ALGS[alg]
    band = _resolve_band(kind, time_band, freq_band)
    solve_mode = _mode_object(mode, truncation)
    outcome = _run_algorithm(load_system(system_path), alg, order, band,
                             IterationConfig(tol=tol, max_iter=max_iter,
                                             solve_mode=solve_mode))
    out = Path(out_path)
    out.mkdir(parents=True, exist_ok=True)
    save_system(outcome.rom, out / "rom", name=f"{alg}_r{order}")
    lo, hi, unit = _band_fields(kind, band)
    RunManifest(
        algorithm=alg, r=order, band_kind=kind if kind != "infinite" else "none",
        band_lo=lo, band_hi=hi, mode=mode, truncation=truncation, tol=tol,
    ).save(out / "run_manifest.txt")
    value = error_norm(load_system(system_path), outcome.rom, kind, band,
                       mode=solve_mode, cross_check=False)
    write_report([ReportRow(
        algorithm=alg, r=order, band_lo=lo, band_hi=hi, band_unit=unit,
        error_metric=_METRIC_BY_KIND[kind], value=value,
        iterations=outcome.iterations, converged=outcome.converged,
    )], out / "outcome.csv")
    click.echo(f"{alg} r={order}: {_METRIC_BY_KIND[kind]} error = {value:.12g} "
               f"({outcome.iterations} iterations, "
               f"{'converged' if outcome.converged else 'not converged'})")
    if not outcome.converged:
        sys.exit(EXIT_NONCONVERGED)


def _run_algorithm(sys_obj, alg, order, band, cfg):
    kind, fn = _BAND_ALGS[alg]
    if fn is balanced_truncation:
        return balanced_truncation(sys_obj, order, kind, band,
                                   mode=cfg.solve_mode)
    if kind == "infinite":
        return fn(sys_obj, order, cfg=cfg)
    return fn(sys_obj, order, band, cfg=cfg)


@main.command("eval")
@click.argument("system_path", type=click.Path(exists=True, file_okay=False))
@click.option("--rom", "rom_path", type=click.Path(exists=True, file_okay=False),
              default=None, help="Evaluate the error norm against this ROM.")
@_time_band_opt
@_freq_band_opt
@click.option("--truncation", type=int, default=None)
@click.option("--mode", type=click.Choice(["auto", "direct", "fixed"]),
              default="auto", show_default=True)
@click.option("-o", "--out", "out_path", type=click.Path(dir_okay=False),
              default=None, help="Also write the value as a report CSV.")
@_guard
def cmd_eval(system_path, rom_path, time_band, freq_band, truncation, mode,
             out_path):
    """Evaluate an H2-type norm of a system or of a full/ROM error pair."""
    truncation = _default_truncation() if truncation is None else truncation
    if time_band is not None and freq_band is not None:
        raise ValidationError("give at most one of --time-band / --freq-band")
    if time_band is not None:
        kind, band = "time", TimeBand(*time_band)
    elif freq_band is not None:
        kind, band = "freq", FreqBand(*freq_band)
    else:
        kind, band = "infinite", None
    solve_mode = _mode_object(mode, truncation)
    sys_obj = load_system(system_path)
    if rom_path is None:
        norm_fn = {"infinite": h2_norm}.get(kind)
        if norm_fn is not None:
            value = norm_fn(sys_obj, mode=solve_mode)
        elif kind == "time":
            value = h2_time_limited(sys_obj, band, mode=solve_mode)
        else:
            value = h2_freq_limited(sys_obj, band, mode=solve_mode)
        label = _METRIC_BY_KIND[kind]
        iterations, converged, order = 0, True, sys_obj.order
        algorithm = "norm"
    else:
        rom = load_system(rom_path)
        value = error_norm(sys_obj, rom, kind, band, mode=solve_mode,
                           cross_check=False)
        label = _METRIC_BY_KIND[kind] + "_error"
        iterations, converged, order = 0, True, rom.order
        algorithm = "error"
    click.echo(f"{label} = {value:.12g}")
    if out_path is not None:
        lo, hi, unit = _band_fields(kind, band)
        write_report([ReportRow(
            algorithm=algorithm, r=order, band_lo=lo, band_hi=hi,
            band_unit=unit, error_metric=label, value=value,
            iterations=iterations, converged=converged,
        )], out_path)


@main.command("residuals")
@click.argument("system_path", type=click.Path(exists=True, file_okay=False))
@click.argument("rom_path", type=click.Path(exists=True, file_okay=False))
@_time_band_opt
@_freq_band_opt
@click.option("--mode", type=click.Choice(["auto", "direct", "fixed"]),
              default="auto", show_default=True)
@click.option("--truncation", type=int, default=None)
@click.option("-o", "--out", "out_path", type=click.Path(dir_okay=False),
              default=None)
@_guard
def cmd_residuals(system_path, rom_path, time_band, freq_band, mode,
                  truncation, out_path):
    """Print the four first-order optimality-condition residuals."""
    truncation = _default_truncation() if truncation is None else truncation
    solve_mode = _mode_object(mode, truncation)
    sys_obj = load_system(system_path)
    rom = load_system(rom_path)
    if time_band is not None and freq_band is None:
        kind, band = "time", TimeBand(*time_band)
        report = residuals_time(sys_obj, rom, band, mode=solve_mode)
    elif freq_band is not None and time_band is None:
        kind, band = "freq", FreqBand(*freq_band)
        report = residuals_freq(sys_obj, rom, band, mode=solve_mode)
    else:
        raise ValidationError("give exactly one of --time-band / --freq-band")
    names = ("cond_A", "cond_N", "cond_B", "cond_C")
    values = (report.cond_A, report.cond_N, report.cond_B, report.cond_C)
    for name, raw, norm in zip(names, values, report.normalized()):
        click.echo(f"{name}: raw = {raw:.12g}, normalized = {norm:.12g}")
    if out_path is not None:
        lo, hi, unit = _band_fields(kind, band)
        write_report([ReportRow(
            algorithm="residuals", r=rom.order, band_lo=lo, band_hi=hi,
            band_unit=unit, error_metric=name, value=raw,
            iterations=0, converged=True,
        ) for name, raw in zip(names, values)], out_path)


@main.command("simulate")
@click.argument("system_path", type=click.Path(exists=True, file_okay=False))
@click.option("--input", "input_expr", required=True,
              help='Input signal, e.g. "0.01*sin(5*t)".')
@click.option("--until", required=True, type=float)
@click.option("--step", type=float, default=None)
@click.option("--rom", "rom_path", type=click.Path(exists=True, file_okay=False),
              default=None)
@click.option("-o", "--out", "out_path", required=True,
              type=click.Path(dir_okay=False))
@_guard
def cmd_simulate(system_path, input_expr, until, step, rom_path, out_path):
    """Simulate from the zero state and write a trajectory CSV; with a ROM,
    also write the pointwise error and its log-error figure."""
    sys_obj = load_system(system_path)
    signal = parse_signal(input_expr)
    band = TimeBand(0.0, until)
    traj = simulate(sys_obj, signal, band=band, step=step)
    rom_traj = None
    if rom_path is not None:
        rom = load_system(rom_path)
        rom_traj = simulate(rom, signal, band=band, step=step)
    _write_trajectory(out_path, traj, rom_traj)
    if rom_traj is not None:
        from .figures import render_error_curves

        err = np.linalg.norm(traj.outputs - rom_traj.outputs, axis=1)
        fig_path = Path(out_path).with_suffix(".png")
        render_error_curves([("rom", traj.times, err)], fig_path,
                            title=f"u(t) = {input_expr}")
        click.echo(f"wrote {out_path} and {fig_path}")
    else:
        click.echo(f"wrote {out_path}")


def _write_trajectory(path, traj, rom_traj=None):
    import csv

    p = traj.outputs.shape[1]
    header = ["t"] + [f"y_{i + 1}" for i in range(p)]
    if rom_traj is not None:
        header += [f"yr_{i + 1}" for i in range(p)] + ["err"]
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, t in enumerate(traj.times):
            row = [f"{t:.12g}"] + [f"{v:.12g}" for v in traj.outputs[i]]
            if rom_traj is not None:
                diff = traj.outputs[i] - rom_traj.outputs[i]
                row += [f"{v:.12g}" for v in rom_traj.outputs[i]]
                row.append(f"{np.linalg.norm(diff):.12g}")
            writer.writerow(row)


_BENCHES = {
    "illustrative-freq": dict(
        system="illustrative7", r=1, kind="freq", band=(4.0, 6.0),
        algorithms=("bt", "flbt", "homora", "flhmora", "flphmora"),
        sim_until=10.0, sim_input="0.01*sin(5*t)",
    ),
    "illustrative-time": dict(
        system="illustrative7", r=3, kind="time", band=(0.0, 0.5),
        algorithms=("bt", "tlbt", "homora", "tlhmora", "tlphmora"),
        sim_until=0.5, sim_input="0.01*sin(5*t)",
    ),
    "heat-time": dict(
        system="heat23", r=1, kind="time", band=(0.5, 1.5),
        algorithms=("bt", "tlbt", "homora", "tlhmora", "tlphmora"),
        sim_until=1.5, sim_input="0.01*sin(1*t)", sim_steps=20000,
    ),
}


@main.command("bench")
@click.argument("name", type=click.Choice(sorted(_BENCHES)))
@click.option("--truncation", type=int, default=None)
@click.option("--tol", type=float, default=1e-5, show_default=True)
@click.option("-o", "--out", "out_path", required=True,
              type=click.Path(file_okay=False))
@_guard
def cmd_bench(name, truncation, tol, out_path):
    """Replay a benchmark protocol: table CSV, trajectory CSVs, and the
    log-error figure."""
    from .figures import render_error_curves

    truncation = _default_truncation() if truncation is None else truncation
    spec = _BENCHES[name]
    if spec["system"] == "illustrative7":
        sys_obj = illustrative_7()
    else:
        sys_obj = heat_transfer(23)
    kind = spec["kind"]
    band = (TimeBand(*spec["band"]) if kind == "time"
            else FreqBand(*spec["band"]))
    solve_mode = FixedPoint(max_sweeps=truncation)
    cfg = IterationConfig(tol=tol, solve_mode=solve_mode)
    out = Path(out_path)
    out.mkdir(parents=True, exist_ok=True)
    signal = parse_signal(spec["sim_input"])
    sim_band = TimeBand(0.0, spec["sim_until"])
    sim_step = spec["sim_until"] / spec.get("sim_steps", 2000)
    full_traj = simulate(sys_obj, signal, band=sim_band, step=sim_step)

    rows, curves = [], []
    any_nonconverged = False
    lo, hi, unit = band.lo, band.hi, _UNIT_BY_KIND[kind]
    for alg in spec["algorithms"]:
        alg_kind, _ = _BAND_ALGS[alg]
        alg_band = band if alg_kind == kind else None
        outcome = _run_algorithm(sys_obj, alg, spec["r"], alg_band, cfg)
        value = error_norm(sys_obj, outcome.rom, kind, band, mode=solve_mode,
                           cross_check=False)
        rows.append(ReportRow(
            algorithm=alg, r=spec["r"], band_lo=lo, band_hi=hi,
            band_unit=unit, error_metric=_METRIC_BY_KIND[kind], value=value,
            iterations=outcome.iterations, converged=outcome.converged,
        ))
        any_nonconverged |= not outcome.converged
        rom_traj = simulate(outcome.rom, signal, band=sim_band, step=sim_step)
        _write_trajectory(out / f"trajectory_{alg}.csv", full_traj, rom_traj)
        err = np.linalg.norm(full_traj.outputs - rom_traj.outputs, axis=1)
        curves.append((alg, full_traj.times, err))
    write_report(rows, out / "table.csv")
    render_error_curves(curves, out / "error_curves.png",
                        title=f"{name}, u(t) = {spec['sim_input']}")
    for row in rows:
        click.echo(f"{row.algorithm}: {row.error_metric} = {row.value:.12g}")
    click.echo(f"wrote {out / 'table.csv'} and {out / 'error_curves.png'}")
    if any_nonconverged:
        sys.exit(EXIT_NONCONVERGED)


if __name__ == "__main__":
    main()
