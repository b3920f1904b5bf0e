import { ApiClient } from "./api/client.js";
import { WsClient } from "./api/ws.js";
import { startRouter } from "./router.js";
import { SessionStore, browserTokenStorage } from "./state/session.js";

declare global {
  interface Window {
    CRMFORGE_API_URL?: string;
  }
}

export function bootstrap(root: HTMLElement): void {
  const baseUrl = window.CRMFORGE_API_URL ?? "http://127.0.0.1:8080";
  const session = new SessionStore(browserTokenStorage());
  const api = new ApiClient({
    baseUrl,
    getToken: () => session.token,
    onUnauthenticated: () => session.clear(),
  });
  const ws = new WsClient(api.wsUrl, () => session.token);
  const navigate = (route: string) => {
    window.location.hash = `#${route}`;
  };
  const ctx = { api, ws, session, navigate };

  const start = () => startRouter(root, ctx);
  if (session.isAuthenticated) {
    // Validate the stored token before painting authenticated chrome.
    session
      .loadCurrentUser(api)
      .catch(() => session.clear())
      .finally(start);
  } else {
    start();
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  bootstrap(document.getElementById("app")!);
}
