"""Depth-by-finesse sweeps of optimal bandwidth and line-centre efficiency.

An atlas cell holds the largest bandwidth reachable at a given depth and
finesse together with the comb extent achieving it. Cells are independent, so
sweeps may run on several processes; results do not depend on the worker
count.
"""

import csv
import hashlib
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bandwidth import optimize_delta0
from .contour import extract_contours
from .exceptions import AFCError, ConfigurationError
from .medium import CombDesign
from .response import analytic_backward, efficiency_at

__all__ = [
    "EfficiencyAtlas",
    "CenterMap",
    "axis_from_range",
    "generate_atlas",
    "center_map",
    "export_artifacts",
    "DEFAULT_D0_RANGE",
    "DEFAULT_F_RANGE",
    "CENTER_LEVELS",
    "contour_vertices",
    "to_json",
]

DEFAULT_D0_RANGE = (1.0, 60.0, 1.0)
DEFAULT_F_RANGE = (2.0, 15.0, 0.5)
DEFAULT_QM_LEVELS = tuple(round(0.1 * k, 10) for k in range(1, 21))
DEFAULT_DELTA0_LEVELS = tuple(round(0.1 * k, 10) for k in range(1, 21))
CENTER_LEVELS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)


def axis_from_range(start, stop, step):
    """Inclusive arithmetic axis ``start, start+step, ..., <= stop``."""
    start, stop, step = float(start), float(stop), float(step)
    if step <= 0 or stop < start:
        raise ConfigurationError(f"bad axis range {start}:{stop}:{step}")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(n), 12)


def _timestamp():
    # SOURCE_DATE_EPOCH pins the stamp for reproducible artifacts
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def _grid_seed(spec):
    blob = json.dumps(spec, sort_keys=True).encode()
    return int(hashlib.sha256(blob).hexdigest()[:8], 16)


@dataclass(frozen=True)
class EfficiencyAtlas:
    """Optimal bandwidth and comb extent over a depth-by-finesse grid.

    ``delta_qm_max[i, j]`` and ``delta0_opt[i, j]`` belong to
    ``(d0_axis[i], f_axis[j])``.
    """

    d0_axis: np.ndarray
    f_axis: np.ndarray
    eta_target: float
    delta_qm_max: np.ndarray
    delta0_opt: np.ndarray
    contours: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    kind = "atlas"

    def cells(self):
        for i, d0 in enumerate(self.d0_axis):
            for j, f in enumerate(self.f_axis):
                yield float(d0), float(f), float(self.delta_qm_max[i, j]), float(self.delta0_opt[i, j])


@dataclass(frozen=True)
class CenterMap:
    """Line-centre efficiency over a depth-by-finesse grid, with isolines."""

    d0_axis: np.ndarray
    f_axis: np.ndarray
    eta_center: np.ndarray
    contours: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    kind = "center-map"

    def cells(self):
        for i, d0 in enumerate(self.d0_axis):
            for j, f in enumerate(self.f_axis):
                yield float(d0), float(f), float(self.eta_center[i, j])


def _solve_cell(task):
    d0, f, eta_target, base, search, omega = task
    try:
        r = optimize_delta0(d0, f, eta_target, search=search, base=base, omega=omega)
        return r.delta_qm, r.delta0, r.flagged, r.grid_limited, None
    except (AFCError, ArithmeticError) as exc:
        return 0.0, float(search[0]), True, False, f"{type(exc).__name__}: {exc}"


def generate_atlas(d0_axis, f_axis, eta_target, base=None, search=(0.0, 2.5), omega=None,
                   threads=1, qm_levels=DEFAULT_QM_LEVELS, delta0_levels=DEFAULT_DELTA0_LEVELS):
    """Optimise the comb extent in every (depth, finesse) cell.

    Per-cell failures are recorded in ``meta["failures"]`` and leave the cell
    at zero bandwidth; they never abort the sweep.
    """
    d0_axis = np.asarray(d0_axis, dtype=float).ravel()
    f_axis = np.asarray(f_axis, dtype=float).ravel()
    if len(d0_axis) == 0 or len(f_axis) == 0:
        raise ConfigurationError("atlas axes must be non-empty")
    if not 0.0 < eta_target < 1.0:
        raise ConfigurationError(f"eta_target must lie in (0, 1), got {eta_target}")
    base = base or CombDesign()
    omega_t = None if omega is None else tuple(float(v) for v in omega)
    tasks = [(float(d0), float(f), float(eta_target), base, tuple(search), omega_t)
             for d0 in d0_axis for f in f_axis]
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=int(threads)) as pool:
            results = list(pool.map(_solve_cell, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    else:
        results = [_solve_cell(t) for t in tasks]

    shape = (len(d0_axis), len(f_axis))
    qm = np.array([r[0] for r in results]).reshape(shape)
    d0pt = np.array([r[1] for r in results]).reshape(shape)
    failures = [{"d0": t[0], "f": t[1], "error": r[4]} for t, r in zip(tasks, results) if r[4]]
    flagged = [{"d0": t[0], "f": t[1]} for t, r in zip(tasks, results) if r[2] and not r[4]]
    limited = [{"d0": t[0], "f": t[1]} for t, r in zip(tasks, results) if r[3]]

    contours = []
    if min(shape) >= 2:
        contours = (extract_contours(qm, qm_levels, d0_axis, f_axis, name="delta_qm")
                    + extract_contours(d0pt, delta0_levels, d0_axis, f_axis, name="delta0"))
    spec = {
        "d0_axis": [float(v) for v in d0_axis],
        "f_axis": [float(v) for v in f_axis],
        "eta_target": float(eta_target),
        "search": [float(v) for v in search],
        "grid": None if omega is None else {"start": omega_t[0], "stop": omega_t[-1], "points": len(omega_t)},
    }
    meta = {
        "version": __version__,
        "design": base.to_dict(),
        **spec,
        "grid_seed": _grid_seed(spec),
        "timestamp": _timestamp(),
        "failures": failures,
        "flagged_cells": flagged,
        "grid_limited_cells": limited,
    }
    return EfficiencyAtlas(d0_axis, f_axis, float(eta_target), qm, d0pt, contours, meta)


def center_map(d0_axis, f_axis, method="analytic", base=None, levels=CENTER_LEVELS):
    """Line-centre efficiency map.

    ``method="analytic"`` uses the closed form; ``method="srf"`` evaluates
    the full dispersion pipeline at w = 0 with the comb extent and toggles of
    `base`.
    """
    d0_axis = np.asarray(d0_axis, dtype=float).ravel()
    f_axis = np.asarray(f_axis, dtype=float).ravel()
    base = base or CombDesign()
    eta = np.empty((len(d0_axis), len(f_axis)))
    for i, d0 in enumerate(d0_axis):
        for j, f in enumerate(f_axis):
            if method == "analytic":
                eta[i, j] = analytic_backward(d0, f, kappa=base.kappa)
            elif method == "srf":
                eta[i, j] = efficiency_at(base.replace(d0=d0, finesse=f), [0.0])[0]
            else:
                raise ConfigurationError(f"unknown center-map method {method!r}")
    contours = extract_contours(eta, levels, d0_axis, f_axis, name="eta") if min(eta.shape) >= 2 else []
    meta = {
        "version": __version__,
        "method": method,
        "design": base.to_dict(),
        "d0_axis": [float(v) for v in d0_axis],
        "f_axis": [float(v) for v in f_axis],
        "levels": [float(v) for v in levels],
        "timestamp": _timestamp(),
    }
    return CenterMap(d0_axis, f_axis, eta, contours, meta)


def _num(v):
    return repr(float(v))


def _csv_text(obj):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(obj, EfficiencyAtlas):
        writer.writerow(["d0", "f", "delta_qm_max", "delta0_opt"])
    else:
        writer.writerow(["d0", "f", "eta_center"])
    for row in obj.cells():
        writer.writerow([_num(v) for v in row])
    return buf.getvalue()


def to_json(obj):
    """JSON document of an atlas or centre map, as written by `export_artifacts`."""
    if isinstance(obj, EfficiencyAtlas):
        body = {
            "kind": obj.kind,
            "eta_target": obj.eta_target,
            "d0_axis": [float(v) for v in obj.d0_axis],
            "f_axis": [float(v) for v in obj.f_axis],
            "delta_qm_max": obj.delta_qm_max.tolist(),
            "delta0_opt": obj.delta0_opt.tolist(),
        }
    else:
        body = {
            "kind": obj.kind,
            "d0_axis": [float(v) for v in obj.d0_axis],
            "f_axis": [float(v) for v in obj.f_axis],
            "eta_center": obj.eta_center.tolist(),
        }
    body["contours"] = [c.to_dict() for c in obj.contours]
    body["meta"] = obj.meta
    return json.dumps(body, indent=1, sort_keys=True) + "\n"


def _colour(t):
    # viridis-like ramp from dark blue to yellow, t in [0, 1]
    stops = np.array([[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]], float)
    t = min(max(float(t), 0.0), 1.0) * (len(stops) - 1)
    k = min(int(t), len(stops) - 2)
    c = stops[k] + (t - k) * (stops[k + 1] - stops[k])
    return "#%02x%02x%02x" % tuple(int(round(v)) for v in c)


def _svg_text(obj):
    width, height, margin = 640, 420, 60
    xs, ys = obj.d0_axis, obj.f_axis
    z = obj.delta_qm_max if isinstance(obj, EfficiencyAtlas) else obj.eta_center
    zmin, zmax = float(np.min(z)), float(np.max(z))
    span = zmax - zmin or 1.0
    x0, x1 = float(xs[0]), float(xs[-1])
    y0, y1 = float(ys[0]), float(ys[-1])
    pw, ph = width - 2 * margin, height - 2 * margin
    dx = (x1 - x0) or 1.0
    dy = (y1 - y0) or 1.0

    def px(x):
        return margin + (x - x0) / dx * pw

    def py(y):
        return height - margin - (y - y0) / dy * ph

    cw = pw / max(len(xs) - 1, 1)
    ch = ph / max(len(ys) - 1, 1)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for i, xv in enumerate(xs):
        for j, yv in enumerate(ys):
            t = (float(z[i, j]) - zmin) / span
            out.append(f'<rect x="{px(xv) - cw / 2:.3f}" y="{py(yv) - ch / 2:.3f}" width="{cw:.3f}" '
                       f'height="{ch:.3f}" fill="{_colour(t)}"/>')
    for c in obj.contours:
        colour = "red" if c.field == "delta0" else "black"
        dash = ' stroke-dasharray="4,3"' if c.field == "delta0" else ""
        d = " ".join(("M" if k == 0 else "L") + f"{px(p[0]):.3f},{py(p[1]):.3f}" for k, p in enumerate(c.points))
        if c.closed:
            d += " Z"
        out.append(f'<path d="{d}" fill="none" stroke="{colour}" stroke-width="1.2"{dash} '
                   f'data-field="{c.field}" data-level="{c.level:g}"/>')
    out.append(f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>')
    out.append(f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>')
    out.append(f'<text x="{width / 2}" y="{height - 15}" text-anchor="middle" font-size="14">'
               f'optical depth d0 ({x0:g} to {x1:g})</text>')
    out.append(f'<text x="18" y="{height / 2}" text-anchor="middle" font-size="14" '
               f'transform="rotate(-90 18 {height / 2})">finesse f ({y0:g} to {y1:g})</text>')
    if isinstance(obj, EfficiencyAtlas):
        title = (f"max bandwidth (linewidth units) at eta &gt;= {obj.eta_target:g}; "
                 f"red: optimal comb extent")
    else:
        title = f"line-centre efficiency ({obj.meta.get('method', '')})"
    out.append(f'<text x="{width / 2}" y="30" text-anchor="middle" font-size="15">{title}</text>')
    out.append(f'<text x="{width - margin}" y="{margin - 8}" text-anchor="end" font-size="11">'
               f'colour scale {zmin:.4g} to {zmax:.4g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


_WRITERS = {"csv": _csv_text, "json": to_json, "svg": _svg_text}


def export_artifacts(obj, out_dir, formats=("csv", "json", "svg"), stem=None):
    """Write an atlas or centre map as CSV, JSON and/or SVG; return the paths written."""
    unknown = set(formats) - set(_WRITERS)
    if unknown:
        raise ConfigurationError(f"unknown export format(s): {', '.join(sorted(unknown))}")
    if stem is None:
        stem = (f"atlas_eta{obj.eta_target:g}" if isinstance(obj, EfficiencyAtlas)
                else f"center_map_{obj.meta.get('method', 'analytic')}")
    paths = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        for fmt in formats:
            path = os.path.join(out_dir, f"{stem}.{fmt}")
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(_WRITERS[fmt](obj))
            paths.append(path)
    except OSError as exc:
        raise OSError(f"cannot write artifacts to {out_dir!r}: {exc}") from exc
    return paths


def contour_vertices(contours, field_name=None, level=None):
    """Concatenate the vertices of selected contours (helper for checks and plots)."""
    sel = [c for c in contours if (field_name is None or c.field == field_name)
           and (level is None or np.isclose(c.level, level))]
    if not sel:
        return np.empty((0, 2))
    return np.vstack([c.points for c in sel])

