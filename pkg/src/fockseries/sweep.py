"""Parameter sweeps over |alpha|, figure presets, and plot-script emission.

Grid points are independent pure evaluations; FOCKSERIES_THREADS > 1 runs
them on a thread pool, but rows are always written in grid order so output
bytes never depend on scheduling.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._version import __version__
from .entangle import BeamSplitterSetting, linear_entropy
from .errors import InvalidParameter, VacuumUndefined
from .output import (
    DISTRIBUTION_COLUMNS,
    SCALAR_COLUMNS,
    read_manifest,
    write_curve_csv,
    write_manifest,
)
from .series import (
    DEFAULT_REL_TOL,
    AdaptiveTruncation,
    FixedTruncation,
    TruncationPolicy,
    photon_distribution,
    photon_statistics,
    truncate,
)
from .states import penson_solomon_state

OBSERVABLES = ("mandel_q", "linear_entropy", "mean_n", "variance", "distribution")

# default grids: wide for photon statistics, shorter for entropy
# (the purity kernel is O(D^3))
DEFAULT_GRIDS = {
    "mandel_q": (0.0, 5.0, 201),
    "mean_n": (0.0, 5.0, 201),
    "variance": (0.0, 5.0, 201),
    "distribution": (0.0, 5.0, 201),
    "linear_entropy": (0.0, 3.0, 61),
}


def parse_policy(text: str) -> TruncationPolicy:
    """Parse ``adaptive``, ``adaptive:<tol>``, or ``fixed:<n>``."""
    kind, _, arg = text.strip().partition(":")
    if kind == "adaptive":
        if not arg:
            return AdaptiveTruncation()
        try:
            return AdaptiveTruncation(rel_tol=float(arg))
        except ValueError as exc:
            raise InvalidParameter(f"bad adaptive tolerance {arg!r}") from exc
    if kind == "fixed":
        try:
            return FixedTruncation(n_max=int(arg))
        except ValueError as exc:
            raise InvalidParameter(f"bad fixed cutoff {arg!r}") from exc
    raise InvalidParameter(f"policy must be adaptive[:<tol>] or fixed:<n>, got {text!r}")


def policy_label(policy: TruncationPolicy) -> str:
    # repr keeps the tolerance round-trippable through parse_policy
    if isinstance(policy, AdaptiveTruncation):
        return f"adaptive:{policy.rel_tol!r}"
    return f"fixed:{policy.n_max}"


@dataclass(frozen=True)
class SweepRequest:
    observable: str
    q: float
    k: int
    output_path: Path | str
    alpha_min: float = 0.0
    alpha_max: float = 5.0
    steps: int = 201
    policy: TruncationPolicy = field(default_factory=AdaptiveTruncation)
    theta: float = math.pi / 4.0

    def __post_init__(self) -> None:
        if self.observable not in OBSERVABLES:
            raise InvalidParameter(f"unknown observable {self.observable!r}")
        if not (0.0 <= self.alpha_min <= self.alpha_max):
            raise InvalidParameter("need 0 <= alpha_min <= alpha_max")
        if not isinstance(self.steps, int) or self.steps < 2:
            raise InvalidParameter(f"steps must be an integer >= 2, got {self.steps!r}")
        BeamSplitterSetting(self.theta)  # validates


def _grid(alpha_min: float, alpha_max: float, steps: int) -> list[float]:
    return [float(a) for a in np.linspace(alpha_min, alpha_max, steps)]


def _max_workers() -> int:
    raw = os.environ.get("FOCKSERIES_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _evaluate_point(req: SweepRequest, alpha: float) -> list[tuple]:
    """Rows for one grid point (several rows when observable=distribution)."""
    spec = penson_solomon_state(alpha, req.k, req.q)
    series = truncate(spec, req.policy)
    if req.observable == "distribution":
        return [(alpha, n_photon, prob, series.n_max, series.tail_bound_rel, series.converged)
                for n_photon, prob in photon_distribution(series)]
    if req.observable == "linear_entropy":
        result = linear_entropy(series, setting=BeamSplitterSetting(req.theta),
                                allow_unconverged=True)
        value = result.linear_entropy
        converged = result.converged
    else:
        try:
            stats = photon_statistics(series)
            value = getattr(stats, req.observable)
            converged = stats.converged
        except VacuumUndefined:
            # the row is still written: empty value cell, flagged unconverged
            value = None
            converged = False
    return [(alpha, value, series.n_max, series.tail_bound_rel, converged)]


def evaluate_sweep(req: SweepRequest) -> list[tuple]:
    alphas = _grid(req.alpha_min, req.alpha_max, req.steps)
    workers = _max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_point = list(pool.map(lambda a: _evaluate_point(req, a), alphas))
    else:
        per_point = [_evaluate_point(req, a) for a in alphas]
    return [row for rows in per_point for row in rows]


def _sweep_metadata(req: SweepRequest) -> dict:
    metadata = {
        "observable": req.observable,
        "q": float(req.q),
        "k": req.k,
        "policy": policy_label(req.policy),
        "tol": req.policy.rel_tol if isinstance(req.policy, AdaptiveTruncation) else DEFAULT_REL_TOL,
    }
    if req.observable == "linear_entropy":
        metadata["theta"] = float(req.theta)
    return metadata


def run_sweep(req: SweepRequest) -> Path:
    """Evaluate the grid and write the curve CSV; returns the written path."""
    rows = evaluate_sweep(req)
    columns = DISTRIBUTION_COLUMNS if req.observable == "distribution" else SCALAR_COLUMNS
    return write_curve_csv(req.output_path, _sweep_metadata(req), rows, columns)


# --- figure presets ---------------------------------------------------------

@dataclass(frozen=True)
class PresetCurve:
    filename: str
    label: str
    style: str
    width: int
    k: int
    policy: TruncationPolicy


@dataclass(frozen=True)
class Preset:
    name: str
    observable: str
    q: float
    curves: tuple[PresetCurve, ...]
    assumptions: dict = field(default_factory=dict)


def _fig1(name: str, q: float, ks: tuple[int, int, int]) -> Preset:
    styles = ("dashed", "dotted", "solid")
    curves = tuple(
        PresetCurve(filename=f"{name}_k{k}.csv", label=f"k={k}", style=style,
                    width=1, k=k, policy=AdaptiveTruncation())
        for k, style in zip(ks, styles))
    return Preset(name=name, observable="mandel_q", q=q, curves=curves)


def _fig2() -> Preset:
    styles = {100: "dotted", 200: "dashed", 400: "dot-dashed", 700: "solid"}
    curves = [
        PresetCurve(filename=f"fig2_nmax{n}.csv", label=f"n_max={n}", style=style,
                    width=1, k=3, policy=FixedTruncation(n_max=n))
        for n, style in styles.items()
    ]
    curves.append(PresetCurve(filename="fig2_adaptive.csv", label="adaptive reference",
                              style="solid", width=2, k=3, policy=AdaptiveTruncation()))
    return Preset(name="fig2", observable="mandel_q", q=0.5, curves=tuple(curves),
                  assumptions={"q": "0.5 assumed; the source figure caption does not state it"})


PRESETS = {
    "fig1-left": _fig1("fig1-left", 0.5, (1, 2, 3)),
    "fig1-right": _fig1("fig1-right", 0.8, (4, 6, 8)),
    "fig2": _fig2(),
}


def run_preset(name: str,
               out_dir: Path | str,
               steps: int | None = None,
               alpha_min: float | None = None,
               alpha_max: float | None = None) -> list[Path]:
    """Emit one CSV per preset curve plus a manifest recording every parameter."""
    if name not in PRESETS:
        raise InvalidParameter(f"unknown preset {name!r} (have {', '.join(sorted(PRESETS))})")
    preset = PRESETS[name]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lo, hi, n = DEFAULT_GRIDS[preset.observable]
    lo = lo if alpha_min is None else alpha_min
    hi = hi if alpha_max is None else alpha_max
    n = n if steps is None else steps

    written = []
    manifest_curves = []
    for curve in preset.curves:
        req = SweepRequest(observable=preset.observable, q=preset.q, k=curve.k,
                           output_path=out_dir / curve.filename,
                           alpha_min=lo, alpha_max=hi, steps=n, policy=curve.policy)
        written.append(run_sweep(req))
        manifest_curves.append({
            "file": curve.filename,
            "label": curve.label,
            "style": curve.style,
            "width": curve.width,
            "parameters": _sweep_metadata(req),
        })
    manifest = {
        "fockseries_version": __version__,
        "preset": preset.name,
        "observable": preset.observable,
        "q": preset.q,
        "alpha_min": lo,
        "alpha_max": hi,
        "steps": n,
        "assumptions": preset.assumptions,
        "curves": manifest_curves,
    }
    written.append(write_manifest(out_dir / "manifest.json", manifest))
    return written


# --- plot script ------------------------------------------------------------

_DASHTYPES = {"solid": 1, "dashed": 2, "dotted": 3, "dot-dashed": 4}
_YLABELS = {
    "mandel_q": "Mandel Q",
    "linear_entropy": "linear entropy S",
    "mean_n": "mean photon number",
    "variance": "photon-number variance",
}


def emit_plot_script(manifest_path: Path | str) -> Path:
    """Write a gnuplot script rendering the manifest's curves; convenience only."""
    manifest_path = Path(manifest_path)
    manifest = read_manifest(manifest_path)
    curves = manifest.get("curves", [])
    if not curves:
        raise InvalidParameter(f"{manifest_path}: manifest lists no curves")
    name = manifest.get("preset", "curves")
    observable = manifest.get("observable", "mandel_q")
    lines = [
        f"# fockseries v{__version__} plot script for {name}",
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set key bottom right",
        "set xlabel '|alpha|'",
        f"set ylabel '{_YLABELS.get(observable, observable)}'",
        "set grid",
        "set terminal pngcairo size 900,600",
        f"set output '{name}.png'",
    ]
    plot_parts = []
    for curve in curves:
        if not isinstance(curve, dict) or "file" not in curve or "label" not in curve:
            raise InvalidParameter(f"{manifest_path}: curve entries need 'file' and 'label'")
        dashtype = _DASHTYPES.get(curve.get("style", "solid"), 1)
        width = curve.get("width", 1)
        plot_parts.append(
            f"  '{curve['file']}' using 1:2 with lines lw {width} dashtype {dashtype}"
            f" title '{curve['label']}'")
    lines.append("plot \\")
    lines.append(", \\\n".join(plot_parts))
    script_path = manifest_path.parent / "plot.gp"
    script_path.write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
    return script_path
