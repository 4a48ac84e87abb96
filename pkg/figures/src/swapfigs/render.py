"""Render concurrence-scan CSV files into publication-style line plots.

This is a viewer, not a calculator: every number comes from the CSV emitted
by the ``entswap`` CLI, nothing is recomputed here.  Each scan kind gets one
curve per parameter group in the caption styles solid/dashed/dotted, with
honest gaps wherever the concurrence cell is empty (channels with no events).
Output is deterministic: rendering the same CSV twice produces byte-identical
image files.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

# stable ids inside SVG output; without this matplotlib salts them per run
plt.rcParams["svg.hashsalt"] = "swapfigs"

DEFAULT_STYLES = ("solid", "dashed", "dotted")

KINDS = {
    "fig2": {"xlabel": "x = L/ct", "group_by": "z", "legend": "z = {}"},
    "fig3": {"xlabel": "z = ΩL/c", "group_by": "u", "legend": "Ωt = {}"},
    "fig4": {"xlabel": "φ (rad)", "group_by": None, "legend": None},
}

REQUIRED_COLUMNS = ("sweep_coord", "concurrence")


class FigureDataError(ValueError):
    """The CSV cannot be rendered as requested."""


@dataclass(frozen=True)
class FigureSpec:
    """What to render: which CSV, as which figure kind, to which image file."""

    csv_path: Path
    kind: str
    out_path: Path
    styles: tuple[str, ...] = DEFAULT_STYLES

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise FigureDataError(f"unknown figure kind {self.kind!r}; "
                                  f"expected one of {sorted(KINDS)}")
        if not self.styles:
            raise FigureDataError("at least one line style is required")


@dataclass
class ScanData:
    """Parsed CSV: metadata mapping plus one dict per data row."""

    meta: dict[str, str]
    columns: list[str]
    rows: list[dict[str, str]] = field(default_factory=list)


def load_scan(csv_path: Path) -> ScanData:
    """Read an entswap CSV: '#' metadata lines, a header line, data rows."""
    try:
        text = csv_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FigureDataError(f"cannot read {csv_path}: {exc}") from exc
    meta: dict[str, str] = {}
    columns: list[str] | None = None
    rows: list[dict[str, str]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line.lstrip("# ").partition("=")
            meta[key] = value
            continue
        cells = line.split(",")
        if columns is None:
            columns = cells
            continue
        if len(cells) != len(columns):
            raise FigureDataError(f"{csv_path}:{number}: expected {len(columns)} cells, "
                                  f"got {len(cells)}")
        rows.append(dict(zip(columns, cells)))
    if columns is None:
        raise FigureDataError(f"{csv_path}: no column header found")
    if not rows:
        raise FigureDataError(f"{csv_path}: no data rows")
    return ScanData(meta=meta, columns=columns, rows=rows)


def _check_compatible(spec: FigureSpec, data: ScanData) -> None:
    declared = data.meta.get("kind")
    if declared != spec.kind:
        raise FigureDataError(f"{spec.csv_path}: CSV declares kind={declared!r}, "
                              f"requested {spec.kind!r}")
    group_by = KINDS[spec.kind]["group_by"]
    needed = list(REQUIRED_COLUMNS) + ([group_by] if group_by else [])
    missing = [c for c in needed if c not in data.columns]
    if missing:
        raise FigureDataError(f"{spec.csv_path}: missing required columns {missing}; "
                              f"found {data.columns}")


def _group_rows(spec: FigureSpec, data: ScanData) -> list[tuple[str | None, list[dict]]]:
    group_by = KINDS[spec.kind]["group_by"]
    if group_by is None:
        return [(None, data.rows)]
    groups: dict[str, list[dict]] = {}
    for row in data.rows:
        groups.setdefault(row[group_by], []).append(row)
    return list(groups.items())


def build_figure(spec: FigureSpec, data: ScanData) -> "plt.Figure":
    """Assemble the matplotlib figure; raises FigureDataError on bad data."""
    _check_compatible(spec, data)
    settings = KINDS[spec.kind]
    groups = _group_rows(spec, data)

    if all(row["concurrence"] == "" for row in data.rows):
        raise FigureDataError(f"{spec.csv_path}: concurrence is empty in all "
                              f"{len(data.rows)} rows; nothing to plot")

    figure, axes = plt.subplots(figsize=(6.0, 4.0))
    for index, (label, rows) in enumerate(groups):
        if all(row["concurrence"] == "" for row in rows):
            name = f"{settings['group_by']}={label}" if label is not None else "the scan"
            raise FigureDataError(f"{spec.csv_path}: group {name} has no defined "
                                  f"concurrence in any of its {len(rows)} rows")
        xs = [float(row["sweep_coord"]) for row in rows]
        ys = [float(row["concurrence"]) if row["concurrence"] != "" else math.nan
              for row in rows]
        style = spec.styles[index % len(spec.styles)]
        legend = settings["legend"].format(label) if settings["legend"] else None
        axes.plot(xs, ys, color="black", linestyle=style, linewidth=1.2, label=legend)

    axes.set_xlabel(settings["xlabel"])
    axes.set_ylabel("concurrence")
    axes.set_ylim(0.0, 1.0)
    if settings["legend"]:
        axes.legend(frameon=False)
    figure.tight_layout()
    return figure


def render(spec: FigureSpec) -> Path:
    """Render a CSV to the image file named by the spec (format by extension)."""
    data = load_scan(spec.csv_path)
    figure = build_figure(spec, data)
    # a None date keeps SVG output free of wall-clock timestamps
    metadata = {"Date": None} if spec.out_path.suffix == ".svg" else None
    try:
        figure.savefig(spec.out_path, metadata=metadata)
    except OSError as exc:
        raise FigureDataError(f"cannot write {spec.out_path}: {exc}") from exc
    finally:
        plt.close(figure)
    return spec.out_path


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="swapfigs", description=__doc__.splitlines()[0])
    parser.add_argument("csv", help="scan CSV produced by the entswap CLI")
    parser.add_argument("--kind", required=True, choices=sorted(KINDS))
    parser.add_argument("--out", required=True, help="output image (.png or .svg)")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(csv_path=Path(args.csv), kind=args.kind, out_path=Path(args.out))
        render(spec)
    except FigureDataError as exc:
        print(f"swapfigs: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
