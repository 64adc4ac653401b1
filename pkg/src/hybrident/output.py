"""Serialization of sweep results: CSV, JSON and a small SVG line plot."""

from __future__ import annotations

import json
import math
from collections import OrderedDict
from xml.sax.saxutils import escape

import numpy as np

from .entanglement import PAIR_TAGS
from .errors import DomainError
from .sweep import PointReport

STATE_COLUMNS = (
    "stable",
    "max_re",
    "EN_cs",
    "EN_cm",
    "EN_ms",
    "duan_cs",
    "duan_cm",
    "duan_ms",
    "eta_cs",
    "eta_cm",
    "eta_ms",
    "EN_input",
)
_TAG_PAIR = {tag: pair for pair, tag in PAIR_TAGS.items()}


def format_float(x):
    """Fixed-point text with 12 significant digits."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0.000000000000"
    return np.format_float_positional(x, precision=12, unique=False, fractional=False, trim="k")


def columns(axis_names):
    return tuple(axis_names) + ("r",) + STATE_COLUMNS


def record(report: PointReport, axis_names=()):
    """Flat column -> value mapping of one report, in CSV column order."""
    p = report.parameters
    rec = OrderedDict((name, getattr(p, name)) for name in axis_names)
    rec["r"] = p.r
    rec["stable"] = report.stable
    rec["max_re"] = report.max_real_part
    for prefix, getter in (("EN", "log_neg"), ("duan", "duan_ratio"), ("eta", "eta_minus")):
        for tag in ("cs", "cm", "ms"):
            pair = _TAG_PAIR[tag]
            rec[f"{prefix}_{tag}"] = getattr(report, getter)(pair) if pair in report.pairs else math.nan
    rec["EN_input"] = report.input_log_neg
    return rec


def _metadata_lines(base=None, preset="", axes=(), extra=None):
    lines = [f"# preset: {preset or '-'}"]
    if axes:
        for name, values in axes:
            lines.append(f"# axis {name}: {', '.join(format_float(v) for v in values)}")
    if base is not None:
        for name, value in base.as_dict().items():
            lines.append(f"# base {name} = {format_float(value)}")
    for key, value in (extra or {}).items():
        if key != "preset":
            lines.append(f"# {key} = {value}")
    return lines


def emit_csv(rows, axes=(), base=None, preset="", metadata=None):
    """CSV text: '#' metadata block, header, one line per report in input order.

    ``axes`` is a sequence of ``(name, values)`` pairs or plain names.
    """
    axes = tuple(a if isinstance(a, tuple) else (a, ()) for a in axes)
    names = tuple(name for name, _ in axes)
    lines = _metadata_lines(base, preset, tuple(a for a in axes if a[1]), metadata)
    lines.append(",".join(columns(names)))
    for report in rows:
        rec = record(report, names)
        fields = []
        for key, value in rec.items():
            if key == "stable":
                fields.append("1" if value else "0")
            else:
                fields.append(format_float(value))
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def emit_json(rows, axes=(), base=None, preset="", metadata=None):
    names = tuple(a[0] if isinstance(a, tuple) else a for a in axes)

    def clean(v):
        if isinstance(v, bool):
            return v
        v = float(v)
        return v if math.isfinite(v) else None

    payload = {
        "preset": preset or None,
        "axes": list(names),
        "base": base.as_dict() if base is not None else None,
        "metadata": metadata or {},
        "rows": [{k: clean(v) for k, v in record(r, names).items()} for r in rows],
    }
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


# --- SVG ---------------------------------------------------------------

_W, _H = 640, 420
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 150, 30, 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _records(rows, group_by):
    out = []
    for row in rows:
        if isinstance(row, PointReport):
            out.append(record(row, (group_by,) if group_by else ()))
        else:
            out.append(dict(row))
    return out


def emit_svg(rows, x_axis="r", y_column="EN_cs", group_by=None, reference=None):
    """Standalone SVG with one polyline per value of ``group_by``.

    A dashed horizontal reference line is drawn at ``reference``; it defaults
    to 1 for Duan-ratio columns.
    """
    recs = _records(rows, group_by)
    if not recs:
        raise DomainError("no rows to plot")
    for col in (x_axis, y_column) + ((group_by,) if group_by else ()):
        if col not in recs[0]:
            raise DomainError(f"unknown column {col!r}; available: {', '.join(recs[0])}")
    if reference is None and y_column.startswith("duan"):
        reference = 1.0

    groups = OrderedDict()
    for rec in recs:
        key = rec[group_by] if group_by else None
        groups.setdefault(key, []).append((float(rec[x_axis]), float(rec[y_column])))

    xs = [x for pts in groups.values() for x, _ in pts]
    ys = [y for pts in groups.values() for _, y in pts if math.isfinite(y)]
    if reference is not None:
        ys.append(reference)
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def sx(x):
        return _LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return _TOP + (y_hi - y) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(x_lo, x_hi):
        x = sx(t)
        out.append(f'<line x1="{x:.2f}" y1="{_TOP + ph}" x2="{x:.2f}" y2="{_TOP + ph + 5}" stroke="black"/>')
        out.append(
            f'<text x="{x:.2f}" y="{_TOP + ph + 18}" font-size="11" text-anchor="middle">{t:g}</text>'
        )
    for t in _nice_ticks(y_lo, y_hi):
        y = sy(t)
        out.append(f'<line x1="{_LEFT - 5}" y1="{y:.2f}" x2="{_LEFT}" y2="{y:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{_LEFT - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{t:g}</text>'
        )
    out.append(
        f'<text x="{_LEFT + pw / 2:.2f}" y="{_H - 10}" font-size="13" text-anchor="middle">{escape(x_axis)}</text>'
    )
    out.append(
        f'<text x="16" y="{_TOP + ph / 2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {_TOP + ph / 2:.2f})">{escape(y_column)}</text>'
    )
    if reference is not None:
        y = sy(reference)
        out.append(
            f'<line class="reference" x1="{_LEFT}" y1="{y:.2f}" x2="{_LEFT + pw}" y2="{y:.2f}" '
            'stroke="black" stroke-dasharray="6,4"/>'
        )

    for i, (key, pts) in enumerate(groups.items()):
        color = _COLORS[i % len(_COLORS)]
        label = "all" if key is None else f"{group_by} = {key:g}"
        segments, current = [], []
        for x, y in sorted(pts):
            if math.isfinite(y):
                current.append((x, y))
            elif current:
                segments.append(current)
                current = []
        if current:
            segments.append(current)
        for seg in segments:
            if len(seg) == 1:
                x, y = seg[0]
                out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>')
            else:
                coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in seg)
                out.append(
                    f'<polyline data-group="{escape(label)}" points="{coords}" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>'
                )
        ly = _TOP + 16 * i + 10
        lx = _LEFT + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 25}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
