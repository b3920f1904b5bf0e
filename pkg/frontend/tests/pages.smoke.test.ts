// @vitest-environment happy-dom
/**
 * Rendering smoke tests over stubbed API data: every page mounts and shows
 * its key elements at phone (360px) and desktop (1440px) widths, and the
 * stylesheet actually carries breakpoints for both.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api/client.js";
import type { WsClient } from "../src/api/ws.js";
import type { AppContext } from "../src/context.js";
import { renderBoardPage } from "../src/pages/board.js";
import { renderCompaniesPage } from "../src/pages/companies.js";
import { renderDashboardPage } from "../src/pages/dashboard.js";
import { renderLoginPage } from "../src/pages/login.js";
import { renderSettingsPage } from "../src/pages/settings.js";
import { SessionStore, memoryTokenStorage } from "../src/state/session.js";
import type { Role } from "../src/api/types.js";

const USERS = {
  admin: { id: "u-admin", name: "Alex", email: "a@x.test", role: "ADMIN" as Role },
  viewer: { id: "u-viewer", name: "Riley", email: "v@x.test", role: "VIEWER" as Role },
};

const CANNED: Record<string, unknown> = {
  Dashboard: {
    totals: { companies: 7, contacts: 14, deals: 21 },
    dealsChart: [
      { month: "2024-01", revenue: 1000000, expenditure: 500000 },
      { month: "2024-02", revenue: 2000000, expenditure: 1000000 },
    ],
    upcomingEvents: [
      { id: "e1", title: "Quarterly planning", startsAt: "2024-01-02T00:00:00.000Z", endsAt: "2024-01-02T01:00:00.000Z", color: "red" },
    ],
    latestActivities: [
      { seq: 60, verb: "CREATE", entityKind: "TASK", summary: 'created task "Onboard"', at: "2024-01-01T00:00:00.000Z" },
    ],
  },
  Companies: {
    companies: [
      {
        id: "c1", name: "Walker - Harris", industry: "Logistics", country: "US",
        totalRevenue: 100000000, openDealsAmount: 67277000,
        salesOwnerId: "u-owner", salesOwner: { id: "u-owner", name: "Jordan" },
      },
    ],
  },
  Board: {
    taskStages: [
      { id: "s1", title: "TODO", position: 0 },
      { id: "s2", title: "IN_PROGRESS", position: 1 },
    ],
    tasks: [
      { id: "t1", title: "First card", stageId: "s1", rank: "b", assigneeIds: ["u-admin"], updatedAt: "2024-01-01T00:00:00.000Z" },
      { id: "t2", title: "Second card", stageId: "s1", rank: "c", assigneeIds: [], updatedAt: "2024-01-01T00:00:00.000Z" },
    ],
  },
};

function stubApi(): ApiClient {
  const fetchImpl = (async (_url: any, init: any) => {
    const body = JSON.parse(init.body);
    const name = /(query|mutation|subscription)\s+(\w+)/.exec(body.query)?.[2] ?? "";
    const data = CANNED[name] ?? {};
    return { ok: true, status: 200, json: async () => ({ data }), text: async () => "" };
  }) as unknown as typeof fetch;
  return new ApiClient({ baseUrl: "http://stub", getToken: () => "token", fetchImpl });
}

const stubWs = { subscribe: () => () => undefined, connect: () => undefined, close: () => undefined } as unknown as WsClient;

function makeCtx(role: keyof typeof USERS): AppContext {
  const session = new SessionStore(memoryTokenStorage());
  session.currentUser = USERS[role];
  return { api: stubApi(), ws: stubWs, session, navigate: () => undefined };
}

const settle = () => new Promise((resolve) => setTimeout(resolve, 20));

function root(): HTMLElement {
  const node = document.createElement("div");
  document.body.append(node);
  return node;
}

describe.each([360, 1440])("pages at %dpx", (width) => {
  beforeEach(() => {
    (window as any).innerWidth = width;
    document.body.replaceChildren();
  });

  it("login page renders its form", () => {
    renderLoginPage(root(), makeCtx("viewer"));
    expect(document.querySelector("input[name=email]")).toBeTruthy();
    expect(document.querySelector("input[name=password]")).toBeTruthy();
    expect(document.querySelector("button.primary")!.textContent).toBe("Sign in");
  });

  it("dashboard renders cards, chart, events, and feed", async () => {
    const stop = renderDashboardPage(root(), makeCtx("admin"));
    await settle();
    const stats = [...document.querySelectorAll(".stat-value")].map((n) => n.textContent);
    expect(stats).toEqual(["7", "14", "21"]);
    expect(document.querySelectorAll("svg.deals-chart rect").length).toBe(4);
    expect(document.querySelector(".event-list")!.textContent).toContain("Quarterly planning");
    expect(document.querySelector("[data-testid=activity-feed]")!.textContent).toContain(
      'created task "Onboard"',
    );
    stop();
  });

  it("companies table shows the row with actions for admins", async () => {
    renderCompaniesPage(root(), makeCtx("admin"));
    await settle();
    const row = document.querySelector("tr[data-company='Walker - Harris']")!;
    expect(row.textContent).toContain("$672,770.00");
    expect(row.querySelectorAll("td.actions a, td.actions button").length).toBe(2);
    expect(document.querySelector("[data-testid=search-name]")).toBeTruthy();
    expect(document.querySelector("[data-testid=search-amount]")).toBeTruthy();
  });

  it("companies table hides actions from viewers", async () => {
    renderCompaniesPage(root(), makeCtx("viewer"));
    await settle();
    const row = document.querySelector("tr[data-company='Walker - Harris']")!;
    expect(row.querySelectorAll("td.actions a, td.actions button").length).toBe(0);
    expect(document.querySelector(".page-head a.button")).toBeNull(); // no New company
  });

  it("board renders lanes with rank-ordered cards", async () => {
    const stop = renderBoardPage(root(), makeCtx("admin"));
    await settle();
    const lanes = document.querySelectorAll(".lane");
    expect(lanes.length).toBe(3); // two stages + backlog
    const cards = [...document.querySelectorAll("[data-stage=s1] .board-card strong")].map(
      (n) => n.textContent,
    );
    expect(cards).toEqual(["First card", "Second card"]);
    stop();
  });

  it("settings form carries the four profile fields", () => {
    renderSettingsPage(root(), makeCtx("viewer"));
    for (const field of ["name", "email", "jobTitle", "phone"]) {
      expect(document.querySelector(`input[name=${field}]`), field).toBeTruthy();
    }
  });
});

describe("responsive stylesheet", () => {
  it("declares breakpoints covering 360px and 1440px layouts", () => {
    const css = readFileSync(join(__dirname, "..", "styles.css"), "utf-8");
    expect(css).toContain("@media (max-width: 640px)");
    expect(css).toContain("@media (min-width: 1200px)");
    expect(css).toContain("grid-template-columns: 1fr;");
  });
});
