import { ApiClient } from "./api/client.js";
import { WsClient } from "./api/ws.js";
import { SessionStore } from "./state/session.js";

/** Everything a page needs, threaded by the router. */
export interface AppContext {
  api: ApiClient;
  ws: WsClient;
  session: SessionStore;
  navigate: (route: string) => void;
}
