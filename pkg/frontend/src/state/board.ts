/**
 * Kanban board state. Cards order by their fractional-index rank (plain
 * string comparison). Drags apply optimistically and the TASK subscription
 * reconciles every client to the server's order; the server stays the source
 * of truth, so concurrent moves converge.
 */

import { ApiClient } from "../api/client.js";
import {
  BOARD,
  BOARD_ACTIVITY_SUBSCRIPTION,
  CREATE_TASK,
  DELETE_TASK,
  MOVE_TASK,
  TASK_SUBSCRIPTION,
} from "../api/documents.js";
import type { TaskRow, TaskStageRow } from "../api/types.js";
import { rankBetween } from "./rank.js";
import { WsClient } from "../api/ws.js";

export const BACKLOG: null = null;

export class BoardStore {
  stages: TaskStageRow[] = [];
  private cards = new Map<string, TaskRow>();
  onChange: (() => void) | null = null;
  private unsubscribe: (() => void) | null = null;

  async load(api: ApiClient): Promise<void> {
    const data = await api.request<{ taskStages: TaskStageRow[]; tasks: TaskRow[] }>(BOARD);
    this.stages = [...data.taskStages].sort((a, b) => a.position - b.position);
    this.cards = new Map(data.tasks.map((t) => [t.id, t]));
    this.onChange?.();
  }

  /** Cards of one lane (stage id or null for the backlog), rank order. */
  lane(stageId: string | null): TaskRow[] {
    const rows = [...this.cards.values()].filter((t) => t.stageId === stageId);
    rows.sort((a, b) => (a.rank < b.rank ? -1 : a.rank > b.rank ? 1 : 0));
    return rows;
  }

  card(id: string): TaskRow | undefined {
    return this.cards.get(id);
  }

  get cardCount(): number {
    return this.cards.size;
  }

  upsert(card: TaskRow): void {
    this.cards.set(card.id, card);
    this.onChange?.();
  }

  removeCard(id: string): void {
    if (this.cards.delete(id)) this.onChange?.();
  }

  /**
   * The neighbor pair a drop between lane positions maps to. ``position`` is
   * the index in the target lane after removing the dragged card.
   */
  neighborsAt(stageId: string | null, position: number, draggedId: string): {
    afterTaskId: string | null;
    beforeTaskId: string | null;
  } {
    const lane = this.lane(stageId).filter((t) => t.id !== draggedId);
    const clamped = Math.max(0, Math.min(position, lane.length));
    return {
      afterTaskId: clamped > 0 ? lane[clamped - 1]!.id : null,
      beforeTaskId: clamped < lane.length ? lane[clamped]!.id : null,
    };
  }

  /** True when a drop would leave the card exactly where it is; the page
   * skips the mutation entirely for these. ``position`` indexes the lane
   * with the dragged card removed. */
  isNoopMove(cardId: string, stageId: string | null, position: number): boolean {
    const card = this.cards.get(cardId);
    if (!card || card.stageId !== stageId) return false;
    const lane = this.lane(stageId);
    const currentIndex = lane.findIndex((t) => t.id === cardId);
    const clamped = Math.max(0, Math.min(position, lane.length - 1));
    return clamped === currentIndex;
  }

  /**
   * Optimistic move: the card takes a provisional rank between its new
   * neighbors immediately; the server's taskChanged event then overwrites
   * with the authoritative rank.
   */
  async move(
    api: ApiClient,
    cardId: string,
    stageId: string | null,
    position: number,
  ): Promise<void> {
    const card = this.cards.get(cardId);
    if (!card) return;
    const { afterTaskId, beforeTaskId } = this.neighborsAt(stageId, position, cardId);
    const lo = afterTaskId ? this.cards.get(afterTaskId)!.rank : null;
    const hi = beforeTaskId ? this.cards.get(beforeTaskId)!.rank : null;
    const provisional = rankBetween(lo, hi);
    const before = { ...card };
    this.upsert({ ...card, stageId, rank: provisional });
    try {
      const data = await api.request<{ moveTask: TaskRow }>(MOVE_TASK, {
        id: cardId,
        toStageId: stageId,
        beforeTaskId,
        afterTaskId,
      });
      this.upsert(data.moveTask);
    } catch (error) {
      this.upsert(before); // snap back on Forbidden or any failure
      throw error;
    }
  }

  async create(api: ApiClient, input: Record<string, unknown>): Promise<void> {
    const data = await api.request<{ createTask: TaskRow }>(CREATE_TASK, { input });
    await this.load(api); // pick up full card fields
    void data;
  }

  async remove(api: ApiClient, id: string): Promise<void> {
    await api.request(DELETE_TASK, { id });
    this.removeCard(id);
  }

  startLiveUpdates(ws: WsClient): void {
    this.stopLiveUpdates();
    // Deletions arrive on the activity stream (the task stream carries the
    // final card snapshot, which must not resurrect a removed card).
    const deleted = new Set<string>();
    const stopTasks = ws.subscribe(TASK_SUBSCRIPTION, {
      next: (data: { taskChanged: TaskRow }) => {
        if (!deleted.has(data.taskChanged.id)) this.upsert(data.taskChanged);
      },
    });
    const stopActivities = ws.subscribe(BOARD_ACTIVITY_SUBSCRIPTION, {
      next: (data: { activityCreated: { verb: string; entityKind: string; entityId: string } }) => {
        const activity = data.activityCreated;
        if (activity.verb === "DELETE" && activity.entityKind === "TASK") {
          deleted.add(activity.entityId);
          this.removeCard(activity.entityId);
        }
      },
    });
    this.unsubscribe = () => {
      stopTasks();
      stopActivities();
    };
  }

  stopLiveUpdates(): void {
    this.unsubscribe?.();
    this.unsubscribe = null;
  }
}
