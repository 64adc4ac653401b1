"""Command-line front end.

    hybrident <point|sweep|figure|stability> --config FILE [--preset NAME]
              [--out PATH] [--format csv|json] [--svg PATH]

The config file holds flat ``key = value`` lines; ``#`` starts a comment.
Parameter keys are the ParameterSet field names. Additional keys:

    preset = fig2                 figure preset (figure command)
    sweep.<param> = v1, v2, ...   sweep axis (sweep command, at most two)
    r_grid = 0, 0.5, 1 | 0:3:0.05 squeezing grid (inclusive range form)
    pairs = cavity-spin, ...      subsystem pairs to report
    format = csv | json
    out = PATH
    plot = PATH                   SVG output
    y = EN_cs                     plotted column
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass, field

from . import dynamics, output, sweep
from .entanglement import PAIRS
from .errors import ConvergenceError, DomainError, HybridentError, NumericalError
from .model import ParameterSet

log = logging.getLogger("hybrident")

COMMANDS = ("point", "sweep", "figure", "stability")
_EXTRA_KEYS = ("preset", "r_grid", "pairs", "format", "out", "plot", "y", "command")


class ConfigError(HybridentError, ValueError):
    """Malformed or out-of-range configuration."""


@dataclass
class RunConfig:
    overrides: dict = field(default_factory=dict)
    command: str | None = None
    preset: str | None = None
    axes: tuple = ()
    r_grid: tuple | None = None
    pairs: tuple | None = None
    fmt: str = "csv"
    out: str | None = None
    plot: str | None = None
    y: str = "EN_cs"

    @property
    def parameters(self) -> ParameterSet:
        return ParameterSet().replace(**self.overrides)


def _number(text, key, lineno):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key}: malformed number {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"line {lineno}: {key}: value must be finite, got {text!r}")
    return value


def _number_list(text, key, lineno):
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"line {lineno}: {key}: range must be start:stop:step")
        start, stop, step = (_number(p, key, lineno) for p in parts)
        if step <= 0 or stop < start:
            raise ConfigError(f"line {lineno}: {key}: invalid range {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 10) for k in range(count))
    values = tuple(_number(p, key, lineno) for p in text.split(",") if p.strip())
    if not values:
        raise ConfigError(f"line {lineno}: {key}: empty value list")
    return values


def _valid_keys():
    return ParameterSet.field_names() + _EXTRA_KEYS + tuple(
        f"sweep.{n}" for n in ParameterSet.field_names() if n != "r"
    )


def parse_config(text) -> RunConfig:
    """Parse flat ``key = value`` config text into a RunConfig."""
    cfg = RunConfig()
    params = ParameterSet.field_names()
    axes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in params:
            number = _number(value, key, lineno)
            try:
                ParameterSet().replace(**{key: number})
            except DomainError as exc:
                raise ConfigError(f"line {lineno}: {exc}") from None
            cfg.overrides[key] = number
        elif key.startswith("sweep.") and key[6:] in params and key[6:] != "r":
            axes.append((key[6:], _number_list(value, key, lineno)))
        elif key == "r_grid":
            cfg.r_grid = _number_list(value, key, lineno)
        elif key == "pairs":
            pairs = tuple(p.strip() for p in value.split(",") if p.strip())
            bad = [p for p in pairs if p not in PAIRS]
            if bad or not pairs:
                raise ConfigError(f"line {lineno}: pairs: unknown {bad}; valid: {', '.join(PAIRS)}")
            cfg.pairs = pairs
        elif key == "format":
            if value not in ("csv", "json"):
                raise ConfigError(f"line {lineno}: format must be csv or json, got {value!r}")
            cfg.fmt = value
        elif key == "command":
            if value not in COMMANDS:
                raise ConfigError(f"line {lineno}: command must be one of {', '.join(COMMANDS)}")
            cfg.command = value
        elif key in ("preset", "out", "plot", "y"):
            setattr(cfg, key, value)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}; valid keys: {', '.join(_valid_keys())}")
    if len(axes) > 2:
        raise ConfigError("at most two sweep axes are supported")
    cfg.axes = tuple(axes)
    return cfg


def serialize_config(cfg: RunConfig) -> str:
    """Inverse of parse_config."""
    lines = [f"{k} = {v!r}" for k, v in cfg.overrides.items()]
    for name, values in cfg.axes:
        lines.append(f"sweep.{name} = {', '.join(repr(v) for v in values)}")
    if cfg.r_grid is not None:
        lines.append(f"r_grid = {', '.join(repr(v) for v in cfg.r_grid)}")
    if cfg.pairs is not None:
        lines.append(f"pairs = {', '.join(cfg.pairs)}")
    if cfg.command:
        lines.append(f"command = {cfg.command}")
    for key in ("preset", "out", "plot"):
        if getattr(cfg, key):
            lines.append(f"{key} = {getattr(cfg, key)}")
    if cfg.fmt != "csv":
        lines.append(f"format = {cfg.fmt}")
    if cfg.y != "EN_cs":
        lines.append(f"y = {cfg.y}")
    return "\n".join(lines) + "\n"


def _build_spec(cfg: RunConfig, command) -> sweep.SweepSpec:
    if command == "figure":
        if not cfg.preset:
            raise ConfigError("figure command needs a preset (--preset or 'preset =')")
        try:
            spec = sweep.figure_preset(cfg.preset, g_on=cfg.overrides.get("g_om", sweep.G_ON))
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        base = spec.base.replace(**{k: v for k, v in cfg.overrides.items() if k != "g_om"})
        return sweep.SweepSpec(
            base,
            spec.axes,
            r_grid=cfg.r_grid or spec.r_grid,
            pairs=cfg.pairs or spec.pairs,
            name=spec.name,
            metadata=spec.metadata,
        )
    if not cfg.axes:
        raise ConfigError("sweep command needs at least one 'sweep.<param> = ...' line")
    return sweep.SweepSpec(
        cfg.parameters,
        cfg.axes,
        r_grid=cfg.r_grid or sweep.R_GRID,
        pairs=cfg.pairs or sweep.ALL_PAIRS,
        name="custom",
    )


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def run(cfg: RunConfig, command):
    if command == "stability":
        stab = dynamics.check_stability(dynamics.build_drift(cfg.parameters))
        lines = [f"stable = {str(stab.stable).lower()}", f"max_real_part = {output.format_float(stab.max_real_part)}"]
        for ev in sorted(stab.eigenvalues, key=lambda z: (z.real, z.imag)):
            lines.append(f"eigenvalue = {output.format_float(ev.real)} {'+' if ev.imag >= 0 else '-'} "
                         f"{output.format_float(abs(ev.imag))}i")
        _write("\n".join(lines) + "\n", cfg.out)
        return 0

    if command == "point":
        rows = [sweep.run_point(cfg.parameters, cfg.pairs or sweep.ALL_PAIRS)]
        axes, base, preset, meta = (), cfg.parameters, "", {}
    else:
        spec = _build_spec(cfg, command)
        rows = sweep.run_sweep(spec)
        axes, base, preset, meta = spec.axes, spec.base, spec.name, spec.metadata

    emit = output.emit_json if cfg.fmt == "json" else output.emit_csv
    _write(emit(rows, axes, base=base, preset=preset, metadata=meta), cfg.out)
    if cfg.plot:
        group = axes[0][0] if axes else None
        svg = output.emit_svg(rows, "r", cfg.y, group)
        _write(svg, cfg.plot)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="hybrident", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--preset", help=f"figure preset: {', '.join(sweep.PRESET_NAMES)}")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), dest="fmt")
    parser.add_argument("--svg", help="also write an SVG plot to this path")
    parser.add_argument("--y", help="column to plot (default EN_cs)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        text = ""
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        cfg = parse_config(text)
        if args.preset:
            cfg.preset = args.preset
        if args.out:
            cfg.out = args.out
        if args.fmt:
            cfg.fmt = args.fmt
        if args.svg:
            cfg.plot = args.svg
        if args.y:
            cfg.y = args.y
        return run(cfg, args.command)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"hybrident: error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, ConvergenceError) as exc:
        print(f"hybrident: numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
