"""SVG rendering of 1-F against N from sweep CSV rows.

Output is byte-stable for identical input: the SVG id salt is fixed and the
date metadata is dropped.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

CSV_HEADER = ["n", "twice_m", "fidelity", "one_minus_f", "scaled_constant"]


class MalformedCSV(ValueError):
    pass


@dataclass
class Series:
    label: str
    kind: str  # "parallel", "lowest" or "mixed"
    n: list[int]
    one_minus_f: list[float]


def read_sweep_rows(text: str) -> list[list[tuple[int, int, float]]]:
    """Split sweep CSV text into runs of rows with strictly increasing N.

    Repeated header lines are allowed, so concatenated sweeps parse as
    separate runs.
    """
    reader = csv.reader(io.StringIO(text))
    runs: list[list[tuple[int, int, float]]] = []
    current: list[tuple[int, int, float]] = []
    seen_header = False
    for lineno, row in enumerate(reader, 1):
        if not row or all(not cell.strip() for cell in row):
            continue
        cells = [c.strip() for c in row]
        if cells == CSV_HEADER:
            seen_header = True
            if current:
                runs.append(current)
                current = []
            continue
        if not seen_header:
            raise MalformedCSV(f"line {lineno}: expected header {','.join(CSV_HEADER)}")
        if len(cells) != len(CSV_HEADER):
            raise MalformedCSV(f"line {lineno}: expected {len(CSV_HEADER)} fields, got {len(cells)}")
        try:
            n, twice_m = int(cells[0]), int(cells[1])
            one_minus_f = float(cells[3])
        except ValueError as exc:
            raise MalformedCSV(f"line {lineno}: {exc}") from None
        if n < 1 or one_minus_f <= 0:
            raise MalformedCSV(f"line {lineno}: need n >= 1 and one_minus_f > 0")
        if current and n <= current[-1][0]:
            runs.append(current)
            current = []
        current.append((n, twice_m, one_minus_f))
    if current:
        runs.append(current)
    if not runs:
        raise MalformedCSV("no data rows")
    return runs


def classify(run) -> Series:
    if all(tm == n for n, tm, _ in run):
        kind, label = "parallel", "m = j (parallel spins)"
    elif all(tm == n % 2 for n, tm, _ in run):
        kind, label = "lowest", "lowest m (optimal)"
    else:
        kind, label = "mixed", "other m"
    return Series(label, kind, [r[0] for r in run], [r[2] for r in run])


def series_from_csv(texts) -> list[Series]:
    out = []
    for text in texts:
        out.extend(classify(run) for run in read_sweep_rows(text))
    return out


_STYLE = {
    "parallel": dict(marker="o", markerfacecolor="white", markeredgecolor="black"),
    "lowest": dict(marker="o", markerfacecolor="black", markeredgecolor="black"),
    "mixed": dict(marker="s", markerfacecolor="gray", markeredgecolor="black"),
}


def render_svg(series: list[Series], path) -> None:
    with plt.rc_context({"svg.hashsalt": "spinpointer", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for i, s in enumerate(series):
            (line,) = ax.plot(s.n, s.one_minus_f, linestyle="none", markersize=5,
                              label=s.label, **_STYLE[s.kind])
            line.set_gid(f"series{i}-{s.kind}")
        ax.set_yscale("log")
        ax.set_xlabel("N")
        ax.set_ylabel("1 - F")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
