/**
 * Hash router. Unauthenticated visits to any app page bounce to /login; the
 * session store's change hook re-routes when a token expires mid-session.
 */

import { AppContext } from "./context.js";
import { renderBoardPage } from "./pages/board.js";
import { renderCompaniesPage } from "./pages/companies.js";
import { renderCompanyFormPage } from "./pages/companyForm.js";
import { renderDashboardPage } from "./pages/dashboard.js";
import { renderLoginPage, renderRegisterPage } from "./pages/login.js";
import { renderSettingsPage } from "./pages/settings.js";
import { clear, el } from "./ui/dom.js";

type Cleanup = (() => void) | void;

function renderShell(root: HTMLElement, ctx: AppContext, route: string): HTMLElement {
  clear(root);
  const links: [string, string][] = [
    ["/", "Dashboard"],
    ["/companies", "Companies"],
    ["/board", "Board"],
    ["/settings", "Settings"],
  ];
  const nav = el(
    "nav",
    { class: "top-nav" },
    el("span", { class: "brand" }, "crm-forge"),
    ...links.map(([href, label]) =>
      el(
        "a",
        { href: `#${href}`, class: route === href ? "active" : "" },
        label,
      ),
    ),
    el(
      "button",
      {
        class: "logout",
        onclick: async () => {
          await ctx.session.logout(ctx.api).catch(() => undefined);
          ctx.navigate("/login");
        },
      },
      "Log out",
    ),
  );
  const outlet = el("div", { class: "outlet" });
  root.append(nav, outlet);
  return outlet;
}

export function startRouter(root: HTMLElement, ctx: AppContext): void {
  let cleanup: Cleanup;

  const route = () => {
    if (typeof cleanup === "function") cleanup();
    cleanup = undefined;
    const hash = window.location.hash.replace(/^#/, "") || "/";
    const anonymous = hash === "/login" || hash === "/register";
    if (!ctx.session.isAuthenticated && !anonymous) {
      window.location.hash = "#/login";
      return;
    }
    if (hash === "/login") {
      renderLoginPage(root, ctx);
      return;
    }
    if (hash === "/register") {
      renderRegisterPage(root, ctx);
      return;
    }
    const outlet = renderShell(root, ctx, hash);
    const editMatch = /^\/companies\/([0-9a-f-]{36})\/edit$/.exec(hash);
    if (hash === "/") cleanup = renderDashboardPage(outlet, ctx);
    else if (hash === "/companies") renderCompaniesPage(outlet, ctx);
    else if (hash === "/companies/new") renderCompanyFormPage(outlet, ctx, null);
    else if (editMatch) renderCompanyFormPage(outlet, ctx, editMatch[1]!);
    else if (hash === "/board") cleanup = renderBoardPage(outlet, ctx);
    else if (hash === "/settings") renderSettingsPage(outlet, ctx);
    else {
      clear(outlet);
      outlet.append(el("p", { class: "muted" }, "Page not found."));
    }
  };

  window.addEventListener("hashchange", route);
  ctx.session.onChange = () => {
    if (!ctx.session.isAuthenticated) {
      window.location.hash = "#/login";
    }
  };
  route();
}
