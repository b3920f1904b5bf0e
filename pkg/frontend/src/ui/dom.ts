/** Pure DOM composition helpers; pages render by replacing a root's children. */

type Attrs = Record<string, string | boolean | ((event: any) => void)>;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  ...children: (Node | string | null | undefined)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === "function") {
      node.addEventListener(key.replace(/^on/, "").toLowerCase(), value);
    } else if (typeof value === "boolean") {
      if (value) node.setAttribute(key, "");
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    if (child == null) continue;
    node.append(child instanceof Node ? child : document.createTextNode(child));
  }
  return node;
}

export function clear(root: HTMLElement): void {
  root.replaceChildren();
}

let toastHost: HTMLElement | null = null;

export function toast(message: string, tone: "ok" | "error" = "ok"): void {
  if (!toastHost || !toastHost.isConnected) {
    toastHost = el("div", { class: "toast-host" });
    document.body.append(toastHost);
  }
  const item = el("div", { class: `toast toast-${tone}` }, message);
  toastHost.append(item);
  setTimeout(() => item.remove(), 4000);
}

export function confirmDialog(message: string): boolean {
  return window.confirm(message);
}
