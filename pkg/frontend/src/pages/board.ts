import { GqlRequestError, type TaskRow } from "../api/types.js";
import { AppContext } from "../context.js";
import { BoardStore } from "../state/board.js";
import { clear, el, toast } from "../ui/dom.js";
import { formatInstant } from "../ui/format.js";

/**
 * Kanban board with HTML5 drag-and-drop. Drops issue one moveTask mutation
 * carrying both neighbor ids; placement is optimistic and the task
 * subscription reconciles every client to the server's order.
 */
export function renderBoardPage(root: HTMLElement, ctx: AppContext): () => void {
  const store = new BoardStore();
  const container = el("main", { class: "page board-page" });
  clear(root);
  root.append(container);
  let draggedId: string | null = null;

  const dropIndex = (laneNode: HTMLElement, clientY: number): number => {
    const cards = [...laneNode.querySelectorAll<HTMLElement>(".board-card")].filter(
      (node) => node.dataset["taskId"] !== draggedId,
    );
    let index = cards.length;
    for (let i = 0; i < cards.length; i += 1) {
      const rect = cards[i]!.getBoundingClientRect();
      if (clientY < rect.top + rect.height / 2) {
        index = i;
        break;
      }
    }
    return index;
  };

  const renderCard = (task: TaskRow) => {
    const canMove = ctx.session.canMutate(null, task.assigneeIds);
    const card = el(
      "div",
      {
        class: "board-card" + (canMove ? " draggable" : ""),
        "data-task-id": task.id,
        draggable: canMove,
        ondragstart: (event: DragEvent) => {
          draggedId = task.id;
          event.dataTransfer?.setData("text/plain", task.id);
        },
        ondragend: () => {
          draggedId = null;
        },
      },
      el("strong", {}, task.title),
      task.description ? el("p", { class: "muted" }, task.description) : null,
      task.dueDate ? el("span", { class: "due" }, `due ${formatInstant(task.dueDate)}`) : null,
      task.assigneeIds.length
        ? el("span", { class: "assignees" }, `${task.assigneeIds.length} assignee(s)`)
        : null,
    );
    return card;
  };

  const renderLane = (stageId: string | null, title: string) => {
    const cards = store.lane(stageId);
    const list = el(
      "div",
      {
        class: "lane-cards",
        "data-stage": stageId ?? "backlog",
        ondragover: (event: DragEvent) => event.preventDefault(),
        ondrop: async (event: DragEvent) => {
          event.preventDefault();
          const cardId = event.dataTransfer?.getData("text/plain") || draggedId;
          if (!cardId) return;
          const position = dropIndex(list, event.clientY);
          if (store.isNoopMove(cardId, stageId, position)) return; // no mutation for same spot
          try {
            await store.move(ctx.api, cardId, stageId, position);
          } catch (err) {
            toast(err instanceof GqlRequestError ? err.message : "move failed", "error");
          }
        },
      },
      ...cards.map(renderCard),
    );
    return el(
      "section",
      { class: "lane" },
      el("h2", {}, `${title} `, el("span", { class: "muted" }, String(cards.length))),
      list,
    );
  };

  const paint = () => {
    clear(container);
    const lanes = [
      ...store.stages.map((stage) => renderLane(stage.id, stage.title)),
      renderLane(null, "UNASSIGNED"),
    ];
    container.append(
      el(
        "div",
        { class: "page-head" },
        el("h1", {}, "Task board"),
        ctx.session.canCreate()
          ? el(
              "button",
              {
                class: "primary",
                onclick: async () => {
                  const title = window.prompt("Task title");
                  if (!title) return;
                  try {
                    await store.create(ctx.api, { title, stageId: store.stages[0]?.id ?? null });
                  } catch (err) {
                    toast(err instanceof GqlRequestError ? err.message : "create failed", "error");
                  }
                },
              },
              "New task",
            )
          : null,
      ),
      el("div", { class: "board-lanes" }, ...lanes),
    );
  };

  store.onChange = paint;
  paint();
  store
    .load(ctx.api)
    .then(() => store.startLiveUpdates(ctx.ws))
    .catch(() => {
      clear(container);
      container.append(el("div", { class: "banner error" }, "Could not load the board."));
    });
  return () => store.stopLiveUpdates();
}
