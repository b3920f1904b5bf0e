import { AppContext } from "../context.js";
import { DashboardStore } from "../state/dashboard.js";
import { clear, el } from "../ui/dom.js";
import { formatInstant, formatMoney, formatMonth } from "../ui/format.js";

const SVG_NS = "http://www.w3.org/2000/svg";

/** Two-series monthly bar chart as inline SVG; no chart library needed. */
function renderChart(store: DashboardStore): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  const width = 640;
  const height = 220;
  const pad = 28;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "deals-chart");
  svg.setAttribute("role", "img");
  svg.setAttribute("aria-label", "Monthly revenue and expenditure");
  const points = store.chart;
  const peak = Math.max(1, ...points.map((p) => Math.max(p.revenue, p.expenditure)));
  const slot = (width - pad * 2) / Math.max(points.length, 1);
  const barWidth = Math.min(22, slot / 2.5);
  points.forEach((point, index) => {
    const baseX = pad + index * slot + slot / 2;
    const scale = (value: number) => ((height - pad * 2) * value) / peak;
    const bars: [number, string, string][] = [
      [point.revenue, "bar-revenue", `revenue ${formatMoney(point.revenue)}`],
      [point.expenditure, "bar-expenditure", `expenditure ${formatMoney(point.expenditure)}`],
    ];
    bars.forEach(([value, cls, label], series) => {
      const barHeight = scale(value);
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(baseX + (series === 0 ? -barWidth : 1)));
      rect.setAttribute("y", String(height - pad - barHeight));
      rect.setAttribute("width", String(barWidth));
      rect.setAttribute("height", String(barHeight));
      rect.setAttribute("class", cls);
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `${formatMonth(point.month)}: ${label}`;
      rect.append(title);
      svg.append(rect);
    });
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(baseX));
    text.setAttribute("y", String(height - 8));
    text.setAttribute("class", "chart-label");
    text.setAttribute("text-anchor", "middle");
    text.textContent = point.month.slice(2);
    svg.append(text);
  });
  return svg;
}

export function renderDashboardPage(root: HTMLElement, ctx: AppContext): () => void {
  const store = new DashboardStore();
  const container = el("main", { class: "page dashboard-page" });
  clear(root);
  root.append(container);

  const paint = () => {
    clear(container);
    const totals = store.totals;
    container.append(
      el("h1", {}, "Dashboard"),
      el(
        "section",
        { class: "totals-cards" },
        el("div", { class: "card stat", "data-stat": "companies" },
          el("span", { class: "stat-value" }, String(totals?.companies ?? "–")),
          el("span", { class: "stat-label" }, "Companies")),
        el("div", { class: "card stat", "data-stat": "contacts" },
          el("span", { class: "stat-value" }, String(totals?.contacts ?? "–")),
          el("span", { class: "stat-label" }, "Contacts")),
        el("div", { class: "card stat", "data-stat": "deals" },
          el("span", { class: "stat-value" }, String(totals?.deals ?? "–")),
          el("span", { class: "stat-label" }, "Deals in pipeline")),
      ),
      el(
        "section",
        { class: "dashboard-grid" },
        el(
          "div",
          { class: "card chart-card" },
          el("h2", {}, "Deals: revenue vs expenditure"),
          renderChart(store),
          el(
            "p",
            { class: "chart-legend" },
            el("span", { class: "legend-revenue" }, "revenue (won)"),
            " ",
            el("span", { class: "legend-expenditure" }, "expenditure (lost)"),
          ),
        ),
        el(
          "div",
          { class: "card" },
          el("h2", {}, "Upcoming events"),
          store.events.length
            ? el(
                "ul",
                { class: "event-list" },
                ...store.events.map((event) =>
                  el(
                    "li",
                    {},
                    el("span", { class: `event-dot event-${event.color}` }),
                    el("strong", {}, event.title),
                    el("span", { class: "muted" }, ` ${formatInstant(event.startsAt)}`),
                  ),
                ),
              )
            : el("p", { class: "muted" }, "Nothing scheduled."),
        ),
        el(
          "div",
          { class: "card" },
          el("h2", {}, "Latest activities"),
          el(
            "ul",
            { class: "feed", "data-testid": "activity-feed" },
            ...store.feed.map((activity) =>
              el(
                "li",
                { "data-seq": String(activity.seq) },
                el("span", { class: `verb verb-${activity.verb.toLowerCase()}` }, activity.verb),
                ` ${activity.summary} `,
                el("span", { class: "muted" }, formatInstant(activity.at)),
              ),
            ),
          ),
        ),
      ),
    );
  };

  store.onChange = paint;
  paint();
  store
    .load(ctx.api)
    .then(() => store.startLiveFeed(ctx.ws))
    .catch(() => {
      clear(container);
      container.append(
        el("div", { class: "banner error" },
          "Could not load the dashboard. ",
          el("a", { href: "#/", onclick: () => window.location.reload() }, "Retry")),
      );
    });
  return () => store.stopLiveFeed();
}
