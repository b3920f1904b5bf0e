import { GqlRequestError, type User } from "../api/types.js";
import { AppContext } from "../context.js";
import { CompaniesStore } from "../state/companies.js";
import { clear, el, toast } from "../ui/dom.js";
import { formatMoney, parseMoneyInput } from "../ui/format.js";

/** Create and edit share one form; edit mode loads current values. */
export function renderCompanyFormPage(
  root: HTMLElement,
  ctx: AppContext,
  companyId: string | null,
): void {
  const store = new CompaniesStore();
  const container = el("main", { class: "page form-page" });
  clear(root);
  root.append(container);
  container.append(el("p", { class: "muted" }, "Loading…"));

  void (async () => {
    let owners: User[] = [];
    let current: Awaited<ReturnType<CompaniesStore["fetchOne"]>> = null;
    try {
      owners = await store.fetchOwners(ctx.api);
      if (companyId) current = await store.fetchOne(ctx.api, companyId);
    } catch {
      clear(container);
      container.append(el("div", { class: "banner error" }, "Could not load the form."));
      return;
    }
    if (companyId && !current) {
      clear(container);
      container.append(el("div", { class: "banner error" }, "Company not found."));
      return;
    }

    const name = el("input", { type: "text", name: "name", required: true });
    name.value = current?.name ?? "";
    const ownerSelect = el("select", { name: "salesOwner" });
    for (const owner of owners) {
      const option = el("option", { value: owner.id }, `${owner.name} (${owner.role})`);
      if (owner.id === current?.salesOwnerId) option.selected = true;
      ownerSelect.append(option);
    }
    const industry = el("input", { type: "text", name: "industry" });
    industry.value = current?.industry ?? "";
    const revenue = el("input", { type: "text", name: "totalRevenue", placeholder: "$0.00" });
    revenue.value = current?.totalRevenue != null ? formatMoney(current.totalRevenue) : "";
    const country = el("input", { type: "text", name: "country", placeholder: "US" });
    country.value = current?.country ?? "";

    const fieldErrors: Record<string, HTMLElement> = {
      name: el("p", { class: "form-error" }),
      salesOwnerId: el("p", { class: "form-error" }),
      industry: el("p", { class: "form-error" }),
      total_revenue: el("p", { class: "form-error" }),
      country: el("p", { class: "form-error" }),
    };
    const formError = el("p", { class: "form-error", role: "alert" });

    const form = el(
      "form",
      {
        class: "entity-form",
        onsubmit: async (event: SubmitEvent) => {
          event.preventDefault();
          for (const node of Object.values(fieldErrors)) node.textContent = "";
          formError.textContent = "";
          const input: Record<string, unknown> = {
            name: name.value,
            salesOwnerId: ownerSelect.value,
            industry: industry.value || null,
            totalRevenue: parseMoneyInput(revenue.value),
            country: country.value || null,
          };
          try {
            if (companyId) {
              await store.update(ctx.api, companyId, input);
              toast("Company updated");
            } else {
              await store.create(ctx.api, input);
              toast("Company created");
            }
            ctx.navigate("/companies");
          } catch (err) {
            if (err instanceof GqlRequestError) {
              const violations = err.violations();
              if (violations.length) {
                // Field-level violations render inline; other values stay put.
                for (const violation of violations) {
                  (fieldErrors[violation.field] ?? formError).textContent = violation.message;
                }
              } else {
                formError.textContent = err.message;
              }
            } else {
              formError.textContent = "request failed";
            }
          }
        },
      },
      el("h1", {}, companyId ? "Edit company" : "Create company lead"),
      el("label", {}, "Company name", name, fieldErrors["name"]!),
      el("label", {}, "Sales owner", ownerSelect, fieldErrors["salesOwnerId"]!),
      el("label", {}, "Industry", industry, fieldErrors["industry"]!),
      el("label", {}, "Total revenue", revenue, fieldErrors["total_revenue"]!),
      el("label", {}, "Country (ISO alpha-2)", country, fieldErrors["country"]!),
      formError,
      el(
        "div",
        { class: "form-actions" },
        el("button", { type: "submit", class: "primary" }, companyId ? "Save" : "Create"),
        el("a", { class: "button", href: "#/companies" }, "Cancel"),
      ),
    );
    clear(container);
    container.append(form);
  })();
}
