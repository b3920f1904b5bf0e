/**
 * Dashboard analytics state with a live activity feed: the initial query
 * paints the page, then ACTIVITY subscription events stream in. Event
 * application is idempotent by seq, so replays and refetch races are safe.
 */

import { ApiClient } from "../api/client.js";
import { ACTIVITY_SUBSCRIPTION, DASHBOARD } from "../api/documents.js";
import type {
  ActivityEvent,
  CalendarEventRow,
  ChartPoint,
  Totals,
} from "../api/types.js";
import { WsClient } from "../api/ws.js";

const FEED_LIMIT = 10;

export class DashboardStore {
  totals: Totals | null = null;
  chart: ChartPoint[] = [];
  events: CalendarEventRow[] = [];
  feed: ActivityEvent[] = []; // seq descending
  onChange: (() => void) | null = null;
  private unsubscribe: (() => void) | null = null;

  async load(api: ApiClient, months = 7): Promise<void> {
    const data = await api.request<{
      totals: Totals;
      dealsChart: ChartPoint[];
      upcomingEvents: CalendarEventRow[];
      latestActivities: ActivityEvent[];
    }>(DASHBOARD, { months });
    this.totals = data.totals;
    this.chart = data.dealsChart;
    this.events = data.upcomingEvents;
    this.feed = data.latestActivities;
    this.onChange?.();
  }

  /** Merge one pushed activity; counters update without a reload. */
  applyActivity(activity: ActivityEvent): void {
    if (this.feed.some((a) => a.seq === activity.seq)) return;
    this.feed = [activity, ...this.feed].sort((a, b) => b.seq - a.seq).slice(0, FEED_LIMIT);
    if (this.totals && activity.verb === "CREATE") {
      if (activity.entityKind === "COMPANY") this.totals.companies += 1;
      if (activity.entityKind === "CONTACT") this.totals.contacts += 1;
      if (activity.entityKind === "DEAL") this.totals.deals += 1;
    }
    if (this.totals && activity.verb === "DELETE") {
      if (activity.entityKind === "COMPANY") this.totals.companies -= 1;
      if (activity.entityKind === "CONTACT") this.totals.contacts -= 1;
      if (activity.entityKind === "DEAL") this.totals.deals -= 1;
    }
    this.onChange?.();
  }

  startLiveFeed(ws: WsClient): void {
    this.stopLiveFeed();
    this.unsubscribe = ws.subscribe(ACTIVITY_SUBSCRIPTION, {
      next: (data: { activityCreated: ActivityEvent }) => this.applyActivity(data.activityCreated),
    });
  }

  stopLiveFeed(): void {
    this.unsubscribe?.();
    this.unsubscribe = null;
  }
}
