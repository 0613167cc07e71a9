"""Command-line front end: synthesize test signals, analyze, inspect config.

Exit codes: 0 success, 2 usage errors, 3 data errors (unreadable input,
violated preconditions).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import io as sstio
from . import pipeline

DATA_ERROR_EXIT = 3


def _fail_data(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(DATA_ERROR_EXIT)


def _load_config(config_path, sets) -> dict:
    config = pipeline.default_config()
    if config_path:
        try:
            overrides = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            _fail_data(f"config file {config_path}: {exc}")
        try:
            config = pipeline.merge_config(config, overrides)
        except ValueError as exc:
            _fail_data(str(exc))
    for item in sets:
        if "=" not in item:
            raise click.UsageError(f"--set expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            config = pipeline.apply_setting(config, key, raw)
        except ValueError as exc:
            _fail_data(str(exc))
    return config


@click.group()
def main():
    """Time-frequency reassignment toolkit: transforms, ridges, inversion."""


@main.command()
@click.argument("name")
@click.option("--rate", type=float, default=None, help="Sample rate (preset default otherwise).")
@click.option("--duration", type=float, default=None, help="Duration in time units.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Output CSV path (default <name>.csv).")
def synthesize(name, rate, duration, out):
    """Write a named test signal (and its ground-truth IF when analytic)."""
    try:
        preset = pipeline.make_preset(name, rate, duration)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    out = Path(out) if out else Path(f"{name}.csv")
    sstio.write_signal_csv(preset.signal, out)
    click.echo(f"wrote {out} ({len(preset.signal)} samples at rate {preset.signal.sample_rate})")
    if preset.if_tracks is not None:
        if_path = out.with_name(out.stem + "_if.csv")
        times = preset.signal.times
        with open(if_path, "w", newline="") as fh:
            header = "time," + ",".join(f"if{k}" for k in range(len(preset.if_tracks)))
            fh.write(header + "\n")
            for i, t in enumerate(times):
                row = [repr(float(t))] + [repr(float(track[i])) for track in preset.if_tracks]
                fh.write(",".join(row) + "\n")
        click.echo(f"wrote {if_path}")
    if preset.report:
        click.echo(preset.report)


@main.command()
@click.argument("input_csv", type=click.Path(dir_okay=False))
@click.option("--outdir", type=click.Path(file_okay=False), default="analysis",
              help="Output directory.")
@click.option("--backend", type=click.Choice(["cwt", "stft", "both"]), default=None,
              help="Override the configured backend.")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="JSON config document.")
@click.option("--set", "sets", multiple=True, metavar="KEY=VALUE",
              help="Override one config entry (dotted path, JSON value).")
@click.option("--figures/--no-figures", default=True, help="Render PNG report figures.")
def analyze(input_csv, outdir, backend, config_path, sets, figures):
    """Run the transform/squeeze/ridge/reconstruct pipeline on a signal CSV."""
    config = _load_config(config_path, sets)
    if backend:
        config["backend"] = backend
    try:
        signal = sstio.read_signal_csv(input_csv)
    except (OSError, ValueError) as exc:
        _fail_data(str(exc))
    try:
        result = pipeline.run_analysis(signal, config)
        written = pipeline.write_outputs(result, outdir, figures=figures)
    except ValueError as exc:
        _fail_data(str(exc))
    for name, res in result.backends.items():
        click.echo(
            f"{name}: {len(res.ridge_set)} ridge(s), "
            f"dropped energy fraction {res.squeeze_report.dropped_fraction:.3g}"
        )
    click.echo(f"wrote {len(written)} files to {outdir}")


@main.command("config")
@click.option("--dump", is_flag=True, help="Print the default configuration.")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--set", "sets", multiple=True, metavar="KEY=VALUE")
def config_cmd(dump, config_path, sets):
    """Print the effective configuration as JSON."""
    if dump and not config_path and not sets:
        click.echo(json.dumps(pipeline.default_config(), sort_keys=True, indent=2))
        return
    config = _load_config(config_path, sets)
    try:
        config = pipeline.validate_config(config)
    except ValueError as exc:
        _fail_data(str(exc))
    click.echo(json.dumps(config, sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
