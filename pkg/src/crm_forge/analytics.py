"""Dashboard aggregations: entity totals, the monthly revenue/expenditure
deals chart, upcoming events, and the latest-activities feed.

Revenue is the value of WON deals and expenditure the value of LOST deals,
bucketed by the UTC calendar month of ``closed_at``; open deals contribute
nothing. All sums are exact integer cents.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domain import Activity, CalendarEvent, DealStage, Timestamp
from .errors import BadWindow
from .store import Store

MAX_CHART_MONTHS = 36


@dataclass(frozen=True)
class Totals:
    companies: int
    contacts: int
    deals: int


@dataclass(frozen=True)
class ChartPoint:
    month: str  # YYYY-MM
    revenue: int  # cents, WON deals closed that month
    expenditure: int  # cents, LOST deals closed that month


def totals(store: Store) -> Totals:
    return Totals(
        companies=store.count("company"),
        contacts=store.count("contact"),
        deals=store.count("deal"),
    )


def _month_index(key: str) -> int:
    year, month = key.split("-")
    return int(year) * 12 + (int(month) - 1)


def _month_key(index: int) -> str:
    year, month = divmod(index, 12)
    return f"{year:04d}-{month + 1:02d}"


def deals_chart(store: Store, months: int, now: Timestamp) -> list[ChartPoint]:
    """The ``months`` calendar months ending at month(now), ascending, with
    zero-valued months present rather than omitted."""
    if not 1 <= months <= MAX_CHART_MONTHS:
        raise BadWindow(f"months must be in 1..{MAX_CHART_MONTHS}, got {months}")
    end = _month_index(now.month_key())
    window = [_month_key(i) for i in range(end - months + 1, end + 1)]
    revenue = {key: 0 for key in window}
    expenditure = {key: 0 for key in window}
    for deal in store.all("deal"):
        if deal.closed_at is None:
            continue
        key = deal.closed_at.month_key()
        if key not in revenue:
            continue
        if deal.stage == DealStage.WON:
            revenue[key] += deal.value
        elif deal.stage == DealStage.LOST:
            expenditure[key] += deal.value
    return [ChartPoint(month=key, revenue=revenue[key], expenditure=expenditure[key]) for key in window]


def upcoming_events(store: Store, limit: int, now: Timestamp) -> list[CalendarEvent]:
    """Events still in progress or ahead of ``now``, soonest first."""
    if not 1 <= limit <= 50:
        raise BadWindow(f"limit must be in 1..50, got {limit}")
    pending = [e for e in store.all("event") if e.ends_at > now]
    pending.sort(key=lambda e: (e.starts_at.epoch_ms, e.id))
    return pending[:limit]


def latest_activities(store: Store, limit: int) -> list[Activity]:
    """Highest-seq activities, most recent first."""
    if not 1 <= limit <= 100:
        raise BadWindow(f"limit must be in 1..100, got {limit}")
    return store.latest_activities(limit)
