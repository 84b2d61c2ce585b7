"""Deterministic figures from ringrepeater CSV output.

Pure file-to-file transform: no physics is recomputed here, and identical
input produces byte-identical SVG (fixed style, fixed hash salt, no
timestamps embedded).

Plot kinds:
  curves  -- fusion-success sweeps: one solid curve per depth over photon
             loss, plus the standard-fusion reference as a dashed line.
  heatmap -- one panel per depth over (loss, error rate) cells; requires a
             complete rectangular grid.
  rates   -- secret key rate against distance, one curve per error rate,
             logarithmic rate axis.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "figplots"


class MissingColumnError(KeyError):
    """Input CSV lacks a required column."""


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple[str, ...]
    kind: str  # curves | heatmap | rates
    output: str
    logy: bool = False
    value_column: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("curves", "heatmap", "rates"):
            raise ValueError(f"unknown plot kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("need at least one input CSV")


def _read_csv(path: str, required: Sequence[str]) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        columns = reader.fieldnames or []
        for col in required:
            if col not in columns:
                raise MissingColumnError(col)
        return list(reader)


def _new_figure():
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=100)
    return fig, ax


def _save(fig, output: str) -> None:
    fig.savefig(output, metadata={"Date": None} if output.endswith(".svg") else None)
    plt.close(fig)


def _plot_curves(spec: PlotSpec) -> None:
    rows = []
    for path in spec.inputs:
        rows.extend(_read_csv(path, ("depth", "loss", "p_success", "p_standard_fusion")))
    depths = sorted({int(r["depth"]) for r in rows})
    fig, ax = _new_figure()
    for depth in depths:
        pts = sorted(
            ((float(r["loss"]), float(r["p_success"])) for r in rows
             if int(r["depth"]) == depth)
        )
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "-", label=f"N={depth}")
    reference = sorted({(float(r["loss"]), float(r["p_standard_fusion"])) for r in rows})
    ax.plot([p[0] for p in reference], [p[1] for p in reference], "--", color="k",
            label="standard fusion")
    ax.set_xlabel("photon loss (1 - eta)")
    ax.set_ylabel("logical fusion success probability")
    if spec.logy:
        ax.set_yscale("log")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, spec.output)


def _plot_heatmap(spec: PlotSpec) -> None:
    value_col = spec.value_column or "eps_cond"
    rows = []
    for path in spec.inputs:
        rows.extend(_read_csv(path, ("eta", "lambda", value_col)))
    etas = sorted({float(r["eta"]) for r in rows})
    lams = sorted({float(r["lambda"]) for r in rows})
    grid = {}
    for r in rows:
        grid[(float(r["eta"]), float(r["lambda"]))] = float(r[value_col])
    if len(grid) != len(etas) * len(lams):
        raise ValueError("heatmap requires a complete (eta, lambda) grid")
    data = [[grid[(eta, lam)] for eta in etas] for lam in lams]
    fig, ax = _new_figure()
    losses = [1.0 - e for e in reversed(etas)]
    data = [list(reversed(row)) for row in data]
    im = ax.imshow(
        data,
        origin="lower",
        aspect="auto",
        extent=(min(losses), max(losses) if len(losses) > 1 else min(losses) + 1e-6,
                min(lams), max(lams) if len(lams) > 1 else min(lams) + 1e-6),
    )
    fig.colorbar(im, ax=ax, label=value_col)
    ax.set_xlabel("photon loss (1 - eta)")
    ax.set_ylabel("physical error rate (lambda)")
    fig.tight_layout()
    _save(fig, spec.output)


def _plot_rates(spec: PlotSpec) -> None:
    rows = []
    for path in spec.inputs:
        rows.extend(_read_csv(path, ("L_km", "lambda", "R_hz")))
    lams = sorted({r["lambda"] for r in rows})
    fig, ax = _new_figure()
    for lam in lams:
        pts = sorted(
            ((float(r["L_km"]), float(r["R_hz"])) for r in rows
             if r["lambda"] == lam and r["R_hz"] not in ("", None))
        )
        if pts:
            ax.plot([p[0] for p in pts], [p[1] for p in pts], "-o", ms=3,
                    label=f"lambda={lam}")
    ax.set_xlabel("distance L (km)")
    ax.set_ylabel("secret key rate (Hz)")
    ax.set_yscale("log")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, spec.output)


def plot(spec: PlotSpec) -> str:
    """Render the figure described by the spec; returns the output path."""
    if spec.kind == "curves":
        _plot_curves(spec)
    elif spec.kind == "heatmap":
        _plot_heatmap(spec)
    else:
        _plot_rates(spec)
    return spec.output


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figplots", description="Plot ringrepeater CSV sweeps"
    )
    parser.add_argument("kind", choices=("curves", "heatmap", "rates"))
    parser.add_argument("inputs", nargs="+", help="input CSV file(s)")
    parser.add_argument("--out", required=True, help="output image (SVG or PNG)")
    parser.add_argument("--logy", action="store_true")
    parser.add_argument("--value-column", default=None,
                        help="heatmap value column (default eps_cond)")
    args = parser.parse_args(argv)
    spec = PlotSpec(
        inputs=tuple(args.inputs),
        kind=args.kind,
        output=args.out,
        logy=args.logy,
        value_column=args.value_column,
    )
    try:
        plot(spec)
    except MissingColumnError as exc:
        print(f"missing column: {exc.args[0]}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
