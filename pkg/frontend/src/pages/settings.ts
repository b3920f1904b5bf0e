import { GqlRequestError } from "../api/types.js";
import { AppContext } from "../context.js";
import { clear, el, toast } from "../ui/dom.js";

/** Account settings: the four profile fields, self-service for every role. */
export function renderSettingsPage(root: HTMLElement, ctx: AppContext): void {
  const container = el("main", { class: "page form-page" });
  clear(root);
  root.append(container);
  const user = ctx.session.currentUser;
  if (!user) {
    container.append(el("p", { class: "muted" }, "No session."));
    return;
  }
  const name = el("input", { type: "text", name: "name" });
  name.value = user.name;
  const email = el("input", { type: "email", name: "email" });
  email.value = user.email;
  const jobTitle = el("input", { type: "text", name: "jobTitle" });
  jobTitle.value = user.jobTitle ?? "";
  const phone = el("input", { type: "tel", name: "phone" });
  phone.value = user.phone ?? "";
  const emailError = el("p", { class: "form-error" });
  const formError = el("p", { class: "form-error", role: "alert" });

  container.append(
    el(
      "form",
      {
        class: "entity-form",
        onsubmit: async (event: SubmitEvent) => {
          event.preventDefault();
          emailError.textContent = "";
          formError.textContent = "";
          try {
            await ctx.session.updateProfile(ctx.api, {
              name: name.value,
              email: email.value,
              jobTitle: jobTitle.value,
              phone: phone.value,
            });
            toast("Profile saved");
          } catch (err) {
            if (err instanceof GqlRequestError && err.code() === "EMAIL_TAKEN") {
              emailError.textContent = err.message;
            } else {
              formError.textContent = err instanceof Error ? err.message : "save failed";
            }
          }
        },
      },
      el("h1", {}, "Account Settings"),
      el("p", { class: "muted" }, `Signed in as ${user.email} (${user.role})`),
      el("label", {}, "Name", name),
      el("label", {}, "Email", email, emailError),
      el("label", {}, "Job title", jobTitle),
      el("label", {}, "Phone", phone),
      formError,
      el("button", { type: "submit", class: "primary" }, "Save"),
    ),
  );
}
