import { GqlRequestError } from "../api/types.js";
import { AppContext } from "../context.js";
import { clear, el, toast } from "../ui/dom.js";

export function renderLoginPage(root: HTMLElement, ctx: AppContext): void {
  clear(root);
  const email = el("input", { type: "email", name: "email", placeholder: "you@company.test", required: true });
  const password = el("input", { type: "password", name: "password", placeholder: "password", required: true });
  const error = el("p", { class: "form-error", role: "alert" });

  const form = el(
    "form",
    {
      class: "auth-form",
      onsubmit: async (event: SubmitEvent) => {
        event.preventDefault();
        error.textContent = "";
        try {
          await ctx.session.login(ctx.api, email.value, password.value);
          ctx.navigate("/");
        } catch (err) {
          error.textContent = err instanceof GqlRequestError ? err.message : "login failed";
        }
      },
    },
    el("h1", {}, "Sign in"),
    el("label", {}, "Email", email),
    el("label", {}, "Password", password),
    error,
    el("button", { type: "submit", class: "primary" }, "Sign in"),
    el(
      "p",
      { class: "auth-links" },
      el("a", { href: "#/register" }, "Create an account"),
      " · ",
      el(
        "a",
        {
          href: "#",
          onclick: async (event: Event) => {
            event.preventDefault();
            if (!email.value) {
              error.textContent = "enter your email first, then request recovery";
              return;
            }
            await ctx.session.startRecovery(ctx.api, email.value);
            toast("If that account exists, a recovery token was issued.");
          },
        },
        "Forgot password",
      ),
    ),
  );
  root.append(el("main", { class: "auth-page" }, form));
}

export function renderRegisterPage(root: HTMLElement, ctx: AppContext): void {
  clear(root);
  const name = el("input", { type: "text", name: "name", required: true });
  const email = el("input", { type: "email", name: "email", required: true });
  const password = el("input", { type: "password", name: "password", required: true });
  const error = el("p", { class: "form-error", role: "alert" });
  const form = el(
    "form",
    {
      class: "auth-form",
      onsubmit: async (event: SubmitEvent) => {
        event.preventDefault();
        error.textContent = "";
        try {
          await ctx.session.signup(ctx.api, name.value, email.value, password.value);
          toast("Account created; sign in to continue.");
          ctx.navigate("/login");
        } catch (err) {
          error.textContent = err instanceof GqlRequestError ? err.message : "signup failed";
        }
      },
    },
    el("h1", {}, "Create account"),
    el("label", {}, "Name", name),
    el("label", {}, "Email", email),
    el("label", {}, "Password (8+ characters)", password),
    error,
    el("button", { type: "submit", class: "primary" }, "Sign up"),
    el("p", { class: "auth-links" }, el("a", { href: "#/login" }, "Back to sign in")),
  );
  root.append(el("main", { class: "auth-page" }, form));
}
