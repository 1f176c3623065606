"""Command-line entry point.

Subcommands: ``run`` (simulate a scenario and write curves, a comparison
table, a manifest and optional figures), ``presets`` (list the built-in
parameter sets) and ``validate`` (check a scenario file and echo derived
constants). Exit codes: 0 success, 2 validation error, 3 numerical
failure, 4 degraded statistics.
"""

from __future__ import annotations

import sys
from dataclasses import replace
from pathlib import Path

import click

from .bohmian import IntegrationError
from .ensemble import run_ensemble, worker_count
from .output import write_comparison, write_curve, write_manifest
from .quantum import TruncationError, evolve_full_quantum, jc_inversion
from .scenario import PRESETS, ScenarioError, load_scenario, preset_names, save_scenario

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_DEGRADED = 4


@click.group()
def main():
    """Rabi-model population inversion simulator."""


def _echo_derived(params) -> None:
    click.echo(f"scenario      {params.name}")
    click.echo(f"levels        {params.pair.minus.label()} -> {params.pair.plus.label()}")
    click.echo(f"alpha         {params.alpha:.6g}")
    click.echo(f"P             {params.pair.P:.6g}")
    click.echo(f"nu            {params.pair.nu:.6g}")
    click.echo(f"g             {params.g:.6g}   (g/nu = {params.g / params.pair.nu:.4g})")
    click.echo(f"<N>           {params.n_mean:.6g}")
    click.echo(f"atom_init     {params.atom_init}")
    click.echo(f"horizon 2gt   {params.t_max_2gt:.6g}  ({params.n_time} points)")
    click.echo(f"sampling      {params.n_samples} samples / {params.n_batches} batches, seed {params.seed}")


@main.command()
def presets():
    """List built-in scenario presets with their derived constants."""
    for name in preset_names():
        p = PRESETS[name]
        click.echo(
            f"{name:22s} {p.pair.minus.label()}-{p.pair.plus.label()}  "
            f"alpha={p.alpha:.6g}  g={p.g:.5g}  <N>={p.n_mean:g}  "
            f"init={p.atom_init}  2gt<={p.t_max_2gt:g}"
        )


@main.command()
@click.option("--scenario", "source", required=True, help="Scenario file or preset name.")
def validate(source):
    """Validate a scenario and echo its derived parameters."""
    try:
        params = load_scenario(source)
    except ScenarioError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    _echo_derived(params)


@main.command()
@click.option("--scenario", "scenario_file", default=None, help="Scenario YAML file.")
@click.option("--preset", default=None, help="Built-in preset name.")
@click.option("--methods", default=None, help="Comma-separated subset of jc,fullquantum,meanfield,bohmian.")
@click.option("--samples", type=int, default=None, help="Override sample count.")
@click.option("--batches", type=int, default=None, help="Override batch count.")
@click.option("--seed", type=int, default=None, help="Override master seed.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--plot/--no-plot", default=False, help="Render comparison figures from the tabular output.")
def run(scenario_file, preset, methods, samples, batches, seed, out_dir, plot):
    """Run a scenario and write tabular curves (plus optional figures)."""
    if (scenario_file is None) == (preset is None):
        click.echo("exactly one of --scenario / --preset is required", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        params = load_scenario(scenario_file or preset)
        overrides = {}
        if methods is not None:
            overrides["methods"] = tuple(m.strip() for m in methods.split(",") if m.strip())
        if samples is not None:
            overrides["n_samples"] = samples
        if batches is not None:
            overrides["n_batches"] = batches
        if seed is not None:
            overrides["seed"] = seed
        if overrides:
            params = replace(params, **overrides)
    except ScenarioError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    _echo_derived(params)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_scenario(params, out / "scenario.yaml")
    t_grid, two_g_t = params.time_grids()

    manifest = {
        "schema": "rabisim-manifest/1",
        "scenario": params.name,
        "seed": params.seed,
        "workers": worker_count(),
        "files": ["scenario.yaml"],
        "methods": {},
        "status": "ok",
    }
    curves = {}
    degraded = False
    try:
        for method in params.methods:
            click.echo(f"running {method} ...")
            if method == "jc":
                w = jc_inversion(params.g, params.n_mean, t_grid, atom_init=params.atom_init)
                curves[method] = (w, None, None)
                manifest["methods"][method] = {"deterministic": True}
            elif method == "fullquantum":
                res = evolve_full_quantum(
                    params.pair, params.g, params.coherent, params.atom_init, t_grid
                )
                curves[method] = (res.W, None, None)
                manifest["methods"][method] = {
                    "deterministic": True,
                    "n_max": res.n_max,
                    "max_norm_drift": res.max_norm_drift,
                }
            else:
                res = run_ensemble(params, method)
                curves[method] = (res.mean_W, res.ci_low, res.ci_high)
                manifest["methods"][method] = {
                    "n_samples": res.n_samples,
                    "n_batches": res.n_batches,
                    "flagged": res.flagged,
                    "degraded": res.degraded,
                }
                degraded = degraded or res.degraded
            mean, lo, hi = curves[method]
            f = write_curve(out / f"w_{method}.csv", t_grid, two_g_t, mean, lo, hi)
            manifest["files"].append(f.name)
    except (IntegrationError, TruncationError, ValueError) as exc:
        # keep partial outputs with a manifest recording the failure
        manifest["status"] = f"numerical failure: {exc}"
        write_manifest(out, manifest)
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)

    write_comparison(out / "comparison.csv", t_grid, two_g_t, curves)
    manifest["files"].append("comparison.csv")
    if plot:
        from .plotting import plot_comparison

        for f in plot_comparison(out, title=params.name):
            manifest["files"].append(f.name)
    if degraded:
        manifest["status"] = "degraded statistics"
    write_manifest(out, manifest)
    click.echo(f"wrote {out}")
    if degraded:
        click.echo("warning: degraded statistics (flagged trajectories above 1%)", err=True)
        sys.exit(EXIT_DEGRADED)


if __name__ == "__main__":
    main()
