"""Rendering of feature tables, result tables and ROC plots.

Everything here returns text so callers control when files are written.
Numbers in CSV files use ``repr`` and round-trip exactly.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence
from xml.sax.saxutils import escape

from .evaluation import EvalSummary, RocPoint
from .features import FEATURE_NAMES, LabeledExample

DISPLAY_NAMES = {"rf": "RF", "sgd": "SGD", "svm": "SVM", "knn": "KNN"}
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def round_half_away(x: float, places: int = 2) -> str:
    q = Decimal(1).scaleb(-places)
    d = Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP)
    return f"{d:.{places}f}"


def features_csv(examples: Sequence[LabeledExample]) -> str:
    rows = [",".join(["student_id", "exam", *FEATURE_NAMES, "percent", "label"])]
    for e in sorted(examples, key=lambda e: (e.student_id, e.exam.order)):
        values = [repr(float(v)) for v in e.features]
        rows.append(",".join([e.student_id, e.exam.value, *values, repr(float(e.percent)), "1" if e.label else "0"]))
    return "\n".join(rows) + "\n"


def results_markdown(summary: EvalSummary, settings: str = "") -> str:
    names = list(summary.results)
    header = "| | " + " | ".join(DISPLAY_NAMES.get(n, n) for n in names) + " |"
    rule = "|---|" + "---|" * len(names)
    cells = [
        f"{round_half_away(summary[n].mean_auc)} ({round_half_away(summary[n].std_auc)})" for n in names
    ]
    row = "| ROC-AUC | " + " | ".join(cells) + " |"
    lines = [
        "# Pooled leave-one-student-out ROC-AUC",
        "",
        f"Mean (population std) over {summary.repetitions} repetitions, base seed {summary.base_seed}.",
        "",
        header,
        rule,
        row,
        "",
    ]
    if settings:
        lines += ["## Settings", "", "```", settings.rstrip("\n"), "```", ""]
    return "\n".join(lines)


def results_csv(summary: EvalSummary) -> str:
    reps = summary.repetitions
    rows = [",".join(["classifier", "mean_auc", "std_auc", *(f"rep_{r + 1}" for r in range(reps))])]
    for name, res in summary.results.items():
        rows.append(",".join([name, repr(res.mean_auc), repr(res.std_auc), *(repr(float(a)) for a in res.rep_aucs)]))
    return "\n".join(rows) + "\n"


def roc_csv(curve: Sequence[RocPoint]) -> str:
    rows = ["threshold,fpr,tpr"]
    rows += [f"{p.threshold!r},{p.false_positive_rate!r},{p.true_positive_rate!r}" for p in curve]
    return "\n".join(rows) + "\n"


# plot geometry, in SVG user units
WIDTH, HEIGHT = 800, 600
LEFT, RIGHT, TOP, BOTTOM = 90, 770, 40, 530


def plot_x(fpr: float) -> float:
    return LEFT + fpr * (RIGHT - LEFT)


def plot_y(tpr: float) -> float:
    return BOTTOM - tpr * (BOTTOM - TOP)


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def roc_svg(curves: dict[str, Sequence[RocPoint]], aucs: dict[str, float] | None = None) -> str:
    """ROC curves on shared axes with a chance diagonal and a legend."""
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{RIGHT - LEFT}" height="{BOTTOM - TOP}" fill="none" stroke="black"/>',
    ]
    for i in range(11):
        v = i / 10
        x, y = _fmt(plot_x(v)), _fmt(plot_y(v))
        out.append(f'<line x1="{x}" y1="{BOTTOM}" x2="{x}" y2="{BOTTOM + 6}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{BOTTOM + 22}" font-size="13" text-anchor="middle">{v:.1f}</text>')
        out.append(f'<line x1="{LEFT - 6}" y1="{y}" x2="{LEFT}" y2="{y}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 10}" y="{y}" font-size="13" text-anchor="end" dominant-baseline="middle">{v:.1f}</text>')
    out.append(f'<text x="{(LEFT + RIGHT) / 2}" y="{HEIGHT - 20}" font-size="15" text-anchor="middle">False positive rate</text>')
    out.append(
        f'<text x="25" y="{(TOP + BOTTOM) / 2}" font-size="15" text-anchor="middle" '
        f'transform="rotate(-90 25 {(TOP + BOTTOM) / 2})">True positive rate</text>'
    )
    out.append(
        f'<line x1="{_fmt(plot_x(0))}" y1="{_fmt(plot_y(0))}" x2="{_fmt(plot_x(1))}" y2="{_fmt(plot_y(1))}" '
        'stroke="gray" stroke-dasharray="6,4"/>'
    )
    for i, (name, curve) in enumerate(curves.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_fmt(plot_x(p.false_positive_rate))},{_fmt(plot_y(p.true_positive_rate))}" for p in curve)
        out.append(
            f'<polyline data-classifier="{escape(name)}" points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        label = DISPLAY_NAMES.get(name, name)
        if aucs and name in aucs:
            label += f" (AUC {round_half_away(aucs[name])})"
        ly = TOP + 300 + 24 * i
        out.append(f'<line x1="{RIGHT - 200}" y1="{ly}" x2="{RIGHT - 170}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{RIGHT - 160}" y="{ly}" font-size="14" dominant-baseline="middle">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
