"""Render sweep CSVs into the two standard figures.

Input is the experiment CLI's delimited output with the fixed header
``axis,arch,mean_sum_rate,std_err,n_trials,eta_rf_mean``.  The depth figure
draws the depth-independent architectures (fully digital and the three
comparators) as horizontal reference lines; everything else is a line with
+-1 standard-error bars.  Output is deterministic: fixed style, a pinned SVG
hash salt, and no timestamp metadata.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

EXPECTED_HEADER = ["axis", "arch", "mean_sum_rate", "std_err", "n_trials", "eta_rf_mean"]

# architectures that do not depend on the cascade depth
DEPTH_STATIC_ARCHS = frozenset({"FD", "FC1", "FC2", "Butler"})

DEFAULT_STYLES = {
    "FD": dict(color="#000000", linestyle="--", marker=""),
    "proposed-continuous": dict(color="#d62728", linestyle="-", marker="o"),
    "proposed-q6": dict(color="#1f77b4", linestyle="-", marker="s"),
    "proposed-q4": dict(color="#2ca02c", linestyle="-", marker="^"),
    "proposed-q2": dict(color="#9467bd", linestyle="-", marker="v"),
    "FC1": dict(color="#8c564b", linestyle=":", marker=""),
    "FC2": dict(color="#e377c2", linestyle=":", marker=""),
    "Butler": dict(color="#7f7f7f", linestyle="-.", marker=""),
}
FALLBACK_CYCLE = ("#17becf", "#bcbd22", "#ff7f0e", "#aec7e8", "#98df8a")

AXIS_LABELS = {
    "depth": ("Phase layers M", "Average sum-rate (bit/s/Hz)"),
    "power": ("Injected power (dBm)", "Average sum-rate (bit/s/Hz)"),
}


class SchemaError(ValueError):
    """CSV header does not match the sweep schema."""


@dataclass(frozen=True)
class FigureSpec:
    """One rendering job: which CSV, which figure kind, where to write."""

    csv_path: Path
    kind: str  # "depth" or "power"
    out_path: Path
    x_label: str | None = None
    y_label: str | None = None
    styles: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in AXIS_LABELS:
            raise ValueError(f"kind must be one of {sorted(AXIS_LABELS)}, got {self.kind!r}")


@dataclass(frozen=True)
class Series:
    """One architecture's curve in axis order."""

    arch: str
    axis: tuple[float, ...]
    mean: tuple[float, ...]
    std_err: tuple[float, ...]

    def is_flat(self, tolerance: float = 1e-9) -> bool:
        spread = max(self.mean) - min(self.mean)
        return spread <= tolerance * max(1.0, abs(self.mean[0]))


def load_series(csv_path: Path | str) -> list[Series]:
    """Parse the sweep CSV, preserving architecture order of first appearance."""
    with open(csv_path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{csv_path}: empty file, expected header {','.join(EXPECTED_HEADER)}")
        if header != EXPECTED_HEADER:
            raise SchemaError(
                f"{csv_path}: bad header {','.join(header)!r}, expected {','.join(EXPECTED_HEADER)!r}"
            )
        grouped: dict[str, list[tuple[float, float, float]]] = {}
        for row in reader:
            if len(row) != len(EXPECTED_HEADER):
                raise SchemaError(f"{csv_path}: row has {len(row)} fields: {row!r}")
            axis, arch = float(row[0]), row[1]
            grouped.setdefault(arch, []).append((axis, float(row[2]), float(row[3])))
    if not grouped:
        raise SchemaError(f"{csv_path}: no data rows")
    series = []
    for arch, points in grouped.items():
        series.append(
            Series(
                arch,
                tuple(p[0] for p in points),
                tuple(p[1] for p in points),
                tuple(p[2] for p in points),
            )
        )
    return series


def style_for(spec: FigureSpec, arch: str, fallback_index: int) -> dict:
    if arch in spec.styles:
        return spec.styles[arch]
    if arch in DEFAULT_STYLES:
        return DEFAULT_STYLES[arch]
    color = FALLBACK_CYCLE[fallback_index % len(FALLBACK_CYCLE)]
    return dict(color=color, linestyle="-", marker="d")


def drawn_as_horizontal(spec: FigureSpec, arch: str) -> bool:
    return spec.kind == "depth" and arch in DEPTH_STATIC_ARCHS


def build_figure(spec: FigureSpec, series: list[Series]):
    """Assemble the matplotlib figure; every series gets a legend entry."""
    plt.rcParams["svg.hashsalt"] = "uhbf-render"
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=150)
    handles = []
    fallback = 0
    for entry in series:
        style = style_for(spec, entry.arch, fallback)
        if entry.arch not in spec.styles and entry.arch not in DEFAULT_STYLES:
            fallback += 1
        if drawn_as_horizontal(spec, entry.arch):
            level = sum(entry.mean) / len(entry.mean)
            handles.append(
                ax.axhline(level, label=entry.arch, color=style["color"], linestyle=style["linestyle"], linewidth=1.4)
            )
        else:
            handles.append(
                ax.errorbar(
                    entry.axis,
                    entry.mean,
                    yerr=entry.std_err,
                    label=entry.arch,
                    color=style["color"],
                    linestyle=style["linestyle"],
                    marker=style["marker"],
                    markersize=4,
                    linewidth=1.4,
                    capsize=2.5,
                )
            )
    x_label, y_label = AXIS_LABELS[spec.kind]
    ax.set_xlabel(spec.x_label or x_label)
    ax.set_ylabel(spec.y_label or y_label)
    ax.grid(True, alpha=0.3)
    # explicit handles keep the legend in CSV appearance order
    ax.legend(handles=handles, loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> Path:
    """Read the CSV, draw the figure, and write the image file."""
    series = load_series(spec.csv_path)
    fig = build_figure(spec, series)
    out = Path(spec.out_path)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    # dropping the date stamp keeps SVG output reproducible byte-for-byte
    metadata = {"Date": None} if out.suffix.lower() == ".svg" else None
    fig.savefig(out, metadata=metadata)
    plt.close(fig)
    return out
