import { GqlRequestError, type CompanyRow } from "../api/types.js";
import { AppContext } from "../context.js";
import { CompaniesStore } from "../state/companies.js";
import { clear, confirmDialog, el, toast } from "../ui/dom.js";
import { formatMoney, parseMoneyInput } from "../ui/format.js";

export function renderCompaniesPage(root: HTMLElement, ctx: AppContext): void {
  const store = new CompaniesStore();
  const container = el("main", { class: "page companies-page" });
  clear(root);
  root.append(container);

  const nameInput = el("input", {
    type: "search",
    placeholder: "name contains…",
    "data-testid": "search-name",
  });
  const amountInput = el("input", {
    type: "text",
    placeholder: "open deals ≥ $…",
    "data-testid": "search-amount",
  });

  const runSearch = () =>
    store
      .applySearch(ctx.api, {
        nameContains: nameInput.value,
        minOpenDealsAmountCents: parseMoneyInput(amountInput.value),
      })
      .catch(() => toast("Search failed", "error"));

  const paint = () => {
    clear(container);
    const canCreate = ctx.session.canCreate();
    container.append(
      el(
        "div",
        { class: "page-head" },
        el("h1", {}, "Companies"),
        canCreate
          ? el("a", { class: "button primary", href: "#/companies/new" }, "New company")
          : null,
      ),
      el(
        "div",
        { class: "search-row" },
        nameInput,
        amountInput,
        el("button", { onclick: runSearch }, "Search"),
      ),
      el(
        "table",
        { class: "data-table", "data-testid": "companies-table" },
        el(
          "thead",
          {},
          el(
            "tr",
            {},
            el("th", {}, "Company Title"),
            el("th", {}, "Open deals amount"),
            el("th", {}, "Sales owner"),
            el("th", {}, "Actions"),
          ),
        ),
        el(
          "tbody",
          {},
          ...store.rows.map((row) => renderRow(row)),
        ),
      ),
      el(
        "div",
        { class: "pager" },
        el("button", { onclick: () => store.prevPage(ctx.api), disabled: store.offset === 0 }, "Prev"),
        el("span", { class: "muted" }, ` page ${store.offset / store.pageSize + 1} `),
        el("button", { onclick: () => store.nextPage(ctx.api), disabled: !store.hasMore }, "Next"),
      ),
    );
  };

  const renderRow = (row: CompanyRow) => {
    const canMutate = ctx.session.canMutate(row.salesOwnerId);
    return el(
      "tr",
      { "data-company": row.name },
      el("td", {}, row.name),
      el("td", { class: "amount" }, formatMoney(row.openDealsAmount)),
      el("td", {}, row.salesOwner?.name ?? ""),
      el(
        "td",
        { class: "actions" },
        canMutate
          ? el("a", { class: "button", href: `#/companies/${row.id}/edit` }, "Edit")
          : null,
        canMutate
          ? el(
              "button",
              {
                class: "danger",
                onclick: async () => {
                  if (!confirmDialog(`Delete ${row.name}? Its contacts and deals go with it.`)) return;
                  try {
                    await store.remove(ctx.api, row.id);
                    toast(`Deleted ${row.name}`);
                  } catch (err) {
                    toast(err instanceof GqlRequestError ? err.message : "delete failed", "error");
                  }
                },
              },
              "Delete",
            )
          : null,
      ),
    );
  };

  store.onChange = paint;
  paint();
  store.load(ctx.api).catch(() => {
    clear(container);
    container.append(el("div", { class: "banner error" }, "Could not load companies."));
  });
}
