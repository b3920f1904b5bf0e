/**
 * End-to-end behavior over the real backend: live dashboard feed, company
 * search, and two-client kanban convergence under concurrent drags.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { ApiClient } from "../src/api/client.js";
import { BOARD } from "../src/api/documents.js";
import type { TaskRow, TaskStageRow } from "../src/api/types.js";
import { WsClient, type WsLike } from "../src/api/ws.js";
import { BoardStore } from "../src/state/board.js";
import { CompaniesStore } from "../src/state/companies.js";
import { DashboardStore } from "../src/state/dashboard.js";
import { SessionStore, memoryTokenStorage } from "../src/state/session.js";
import { formatMoney } from "../src/ui/format.js";
import { ADMIN, OWNER, startBackend, type Backend } from "./backend.js";

let backend: Backend;

const nodeWsFactory = (url: string, protocols: string[]): WsLike =>
  new WebSocket(url, protocols) as unknown as WsLike;

interface Client {
  api: ApiClient;
  ws: WsClient;
  session: SessionStore;
}

async function makeClient(credentials: { email: string; password: string }): Promise<Client> {
  const session = new SessionStore(memoryTokenStorage());
  const api = new ApiClient({ baseUrl: backend.baseUrl, getToken: () => session.token });
  await session.login(api, credentials.email, credentials.password);
  const ws = new WsClient(backend.wsUrl, () => session.token, nodeWsFactory);
  return { api, ws, session };
}

async function until(check: () => boolean, timeoutMs: number, label: string): Promise<number> {
  const started = Date.now();
  for (;;) {
    if (check()) return Date.now() - started;
    if (Date.now() - started > timeoutMs) {
      throw new Error(`timed out after ${timeoutMs}ms waiting for ${label}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

beforeAll(async () => {
  backend = await startBackend();
}, 30_000);

afterAll(async () => {
  await backend.stop();
});

describe("companies search", () => {
  it("renders the seeded walker row with its exact amount", async () => {
    const client = await makeClient(ADMIN);
    const store = new CompaniesStore();
    await store.applySearch(client.api, { nameContains: "walker", minOpenDealsAmountCents: null });
    expect(store.rows).toHaveLength(1);
    const row = store.rows[0]!;
    expect(row.name).toBe("Walker - Harris");
    expect(formatMoney(row.openDealsAmount)).toBe("$672,770.00");
    client.ws.close();
  });
});

describe("live dashboard feed", () => {
  it("gains an entry within a second when another client mutates", async () => {
    const watcher = await makeClient(ADMIN);
    const actor = await makeClient(OWNER);
    const dashboard = new DashboardStore();
    await dashboard.load(watcher.api);
    dashboard.startLiveFeed(watcher.ws);
    // Give the subscription a beat to attach before mutating.
    await new Promise((resolve) => setTimeout(resolve, 150));
    const companiesBefore = dashboard.totals!.companies;

    const owners = await new CompaniesStore().fetchOwners(actor.api);
    await new CompaniesStore().create(actor.api, {
      name: "Feed Probe Co",
      salesOwnerId: owners.find((o) => o.role === "SALES_OWNER")!.id,
    });
    const waited = await until(
      () => dashboard.feed[0]?.summary === 'created company "Feed Probe Co"',
      1_000,
      "feed entry",
    );
    expect(waited).toBeLessThanOrEqual(1_000);
    expect(dashboard.totals!.companies).toBe(companiesBefore + 1);
    dashboard.stopLiveFeed();
    watcher.ws.close();
    actor.ws.close();
  });
});

describe("two-client kanban convergence", () => {
  it("concurrent drags of the same card converge both clients to server order", async () => {
    const alpha = await makeClient(ADMIN);
    const beta = await makeClient(ADMIN);

    const boardAlpha = new BoardStore();
    const boardBeta = new BoardStore();
    await boardAlpha.load(alpha.api);
    await boardBeta.load(beta.api);
    boardAlpha.startLiveUpdates(alpha.ws);
    boardBeta.startLiveUpdates(beta.ws);
    await new Promise((resolve) => setTimeout(resolve, 150));

    const stages = boardAlpha.stages;
    expect(stages.length).toBeGreaterThanOrEqual(4);
    const card = boardAlpha.lane(stages[0]!.id)[0]!;

    // Both clients drag the same card somewhere else at the same time.
    const results = await Promise.allSettled([
      boardAlpha.move(alpha.api, card.id, stages[1]!.id, 0),
      boardBeta.move(beta.api, card.id, stages[2]!.id, 0),
    ]);
    expect(results.every((r) => r.status === "fulfilled")).toBe(true);

    // Server truth, via a third observer.
    const observer = await makeClient(ADMIN);
    const serverBoard = await observer.api.request<{ taskStages: TaskStageRow[]; tasks: TaskRow[] }>(
      BOARD,
    );
    const serverOrder = (stageId: string | null) =>
      serverBoard.tasks
        .filter((t) => t.stageId === stageId)
        .sort((a, b) => (a.rank < b.rank ? -1 : 1))
        .map((t) => t.id);

    const lanes: (string | null)[] = [...stages.map((s) => s.id), null];
    const converged = (board: BoardStore) =>
      lanes.every(
        (lane) => JSON.stringify(board.lane(lane).map((t) => t.id)) === JSON.stringify(serverOrder(lane)),
      );

    const waited = await until(() => converged(boardAlpha) && converged(boardBeta), 1_000, "convergence");
    expect(waited).toBeLessThanOrEqual(1_000);

    // The card sits in exactly one lane, the winner's target.
    const finalLane = serverBoard.tasks.find((t) => t.id === card.id)!.stageId;
    expect([stages[1]!.id, stages[2]!.id]).toContain(finalLane);

    boardAlpha.stopLiveUpdates();
    boardBeta.stopLiveUpdates();
    alpha.ws.close();
    beta.ws.close();
    observer.ws.close();
  });

  it("a move from one client animates into the other within a second", async () => {
    const mover = await makeClient(ADMIN);
    const watcher = await makeClient(ADMIN);
    const moverBoard = new BoardStore();
    const watcherBoard = new BoardStore();
    await moverBoard.load(mover.api);
    await watcherBoard.load(watcher.api);
    watcherBoard.startLiveUpdates(watcher.ws);
    await new Promise((resolve) => setTimeout(resolve, 150));

    const stages = moverBoard.stages;
    const lane = moverBoard.lane(stages[3]!.id);
    const card = lane[lane.length - 1]!;
    await moverBoard.move(mover.api, card.id, stages[0]!.id, 0);

    const waited = await until(
      () => watcherBoard.lane(stages[0]!.id)[0]?.id === card.id,
      1_000,
      "remote move",
    );
    expect(waited).toBeLessThanOrEqual(1_000);
    watcherBoard.stopLiveUpdates();
    mover.ws.close();
    watcher.ws.close();
  });
});
