"""Deterministic CSV/JSON writers and matplotlib renderings of the datasets."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .datasets import Report  # noqa: E402

SIG_DIGITS = 9


def format_value(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return f"{value:.{SIG_DIGITS}g}"
    if hasattr(value, "item"):  # numpy scalar
        return format_value(value.item())
    return str(value)


def json_value(value):
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float):
        if not math.isfinite(value):
            return format_value(value)
        return float(f"{value:.{SIG_DIGITS}g}")
    return value


def header_lines(meta: dict) -> list[str]:
    return [f"{k}: {v}" for k, v in meta.items()]


def render_csv(report: Report, meta: dict) -> str:
    buf = io.StringIO()
    for line in header_lines(meta):
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    for i, table in enumerate(report.tables):
        if i:
            buf.write("\n")
        buf.write(f"# table: {table.name}\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def render_json(report: Report, meta: dict) -> str:
    doc = {
        "meta": meta,
        "tables": {t.name: [{c: json_value(v) for c, v in zip(t.columns, row)} for row in t.rows]
                   for t in report.tables},
        "summary": report.summary,
    }
    return json.dumps(doc, indent=2) + "\n"


def output_stem(subcommand: str, config_hash: str) -> str:
    return f"{subcommand}_{config_hash}"


def write_report(report: Report, out_dir, config_hash: str, meta: dict, fmt: str = "csv",
                 plots: bool = True) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = output_stem(report.subcommand, config_hash)
    text = render_csv(report, meta) if fmt == "csv" else render_json(report, meta)
    path = out / f"{stem}.{fmt}"
    path.write_text(text)
    written = [path]
    if plots and report.subcommand in PLOTTERS:
        png = out / f"{stem}.png"
        render_plot(report, png)
        written.append(png)
    return written


# ---------------------------------------------------------------------------
# plots


def _grouped(table, key, x, y):
    groups: dict = {}
    for rec in table.records():
        groups.setdefault(rec[key], ([], []))
        groups[rec[key]][0].append(rec[x])
        groups[rec[key]][1].append(rec[y])
    return groups


def _plot_budget(report, fig):
    ax = fig.add_subplot(111)
    for depth, (xs, ys) in _grouped(report.table("hyperfine drift dephasing"), "depth_mK",
                                    "intensity_drift", "T2_s").items():
        ax.loglog(xs, ys, label=f"|U| = {depth:g} mK")
    ax.set_xlabel("relative intensity drift")
    ax.set_ylabel("T2 (s)")
    ax.legend()


def _plot_gate(report, fig):
    t = report.table("optimum curve")
    x_col, p_col = t.columns[0], t.columns[1]
    ax1, ax2 = fig.add_subplot(211), fig.add_subplot(212)
    ax1.loglog(t.column(x_col), t.column(p_col), label=p_col)
    ax1.loglog(t.column(x_col), t.column("gate_time_us"), label="gate time (us)")
    ax1.legend()
    ax2.loglog(t.column(x_col), t.column("error"))
    ax2.set_xlabel(x_col.replace("_", " "))
    ax2.set_ylabel("minimum error")


def _plot_interactions(report, fig):
    ax1, ax2 = fig.add_subplot(121), fig.add_subplot(122)
    for n, (xs, ys) in _grouped(report.table("van der Waals potential"), "n",
                                "separation_um", "exact_MHz").items():
        ax1.semilogy(xs, ys, label=f"n = {n}")
    ax1.set_xlabel("R (um)")
    ax1.set_ylabel("shift / 2pi (MHz)")
    ax1.legend()
    for n, (xs, ys) in _grouped(report.table("field-mixed dipole shift"), "n",
                                "separation_um", "shift_MHz").items():
        ax2.semilogy(xs, ys, label=f"n = {n}")
    ax2.set_xlabel("R (um)")
    ax2.legend()


def _plot_lifetimes(report, fig):
    ax = fig.add_subplot(111)
    t = report.table("radiative lifetime")
    groups: dict = {}
    for rec in t.records():
        groups.setdefault((rec["L"], rec["temperature_K"]), ([], []))
        groups[(rec["L"], rec["temperature_K"])][0].append(rec["n"])
        groups[(rec["L"], rec["temperature_K"])][1].append(rec["lifetime_us"])
    for (L, temp), (xs, ys) in groups.items():
        ax.semilogy(xs, ys, "-" if temp == 0 else "--", label=f"{L}, {temp:g} K")
    ax.set_xlabel("n")
    ax.set_ylabel("lifetime (us)")
    ax.legend(ncol=2, fontsize="small")


def _plot_readout(report, fig):
    ax = fig.add_subplot(111)
    for b0, (xs, ys) in _grouped(report.table("detection error"), "background_per_s",
                                 "duration_us", "error").items():
        ax.semilogy(xs, ys, label=f"background {b0:g} /s")
    ax.set_xlabel("detection time (us)")
    ax.set_ylabel("measurement error")
    ax.legend()


def _plot_photoionization(report, fig):
    ax = fig.add_subplot(111)
    for n, (xs, ys) in _grouped(report.table("cross sections"), "n", "L", "sigma_cm2").items():
        ax.semilogy(range(len(xs)), ys, "o-", label=f"n = {n}")
        ax.set_xticks(range(len(xs)), xs)
    ax.set_xlabel("orbital angular momentum")
    ax.set_ylabel("cross section (cm^2)")
    ax.legend()


PLOTTERS = {
    "budget": _plot_budget,
    "gate-opt": _plot_gate,
    "interactions": _plot_interactions,
    "lifetimes": _plot_lifetimes,
    "readout": _plot_readout,
    "photoionization": _plot_photoionization,
}


def render_plot(report: Report, path) -> None:
    fig = plt.figure(figsize=(7, 5), dpi=100)
    try:
        PLOTTERS[report.subcommand](report, fig)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None})
    finally:
        plt.close(fig)
