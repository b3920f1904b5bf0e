"""Offline dashboard report: the monthly deals chart as a PNG plus the same
numbers as CSV, for sharing outside the browser UI."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .analytics import deals_chart, totals
from .domain import Timestamp, render_money
from .store import Store


def write_report(store: Store, out_dir: Path, months: int, now: Timestamp) -> list[Path]:
    """Render deals-chart.png, deals-chart.csv, and totals.csv into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    points = deals_chart(store, months, now)
    counts = totals(store)

    chart_csv = out_dir / "deals-chart.csv"
    with open(chart_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["month", "revenue_cents", "expenditure_cents"])
        for point in points:
            writer.writerow([point.month, point.revenue, point.expenditure])

    totals_csv = out_dir / "totals.csv"
    with open(totals_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["companies", "contacts", "deals"])
        writer.writerow([counts.companies, counts.contacts, counts.deals])

    png = out_dir / "deals-chart.png"
    labels = [p.month for p in points]
    revenue = [p.revenue / 100 for p in points]
    expenditure = [p.expenditure / 100 for p in points]
    fig, ax = plt.subplots(figsize=(max(6, len(points) * 0.9), 4))
    x = range(len(points))
    width = 0.4
    ax.bar([i - width / 2 for i in x], revenue, width=width, label="Revenue (won)", color="#2563eb")
    ax.bar(
        [i + width / 2 for i in x], expenditure, width=width,
        label="Expenditure (lost)", color="#f97316",
    )
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("USD")
    total_revenue = sum(p.revenue for p in points)
    ax.set_title(f"Deals by month (revenue {render_money(total_revenue)} over window)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png, dpi=120)
    plt.close(fig)
    return [png, chart_csv, totals_csv]
