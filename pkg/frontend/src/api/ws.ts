/**
 * Minimal graphql-transport-ws client: one connection multiplexes every
 * subscription on the page. The WebSocket constructor is injectable so tests
 * can run under node with the `ws` package.
 */

export interface WsLike {
  send(data: string): void;
  close(code?: number): void;
  addEventListener(type: "open" | "message" | "close" | "error", handler: (event: any) => void): void;
}

export type WsFactory = (url: string, subprotocols: string[]) => WsLike;

export interface SubscriptionHandler {
  next: (data: any) => void;
  error?: (messages: { message: string }[]) => void;
}

interface Pending {
  query: string;
  variables?: Record<string, unknown>;
  handler: SubscriptionHandler;
}

export class WsClient {
  private socket: WsLike | null = null;
  private acked = false;
  private counter = 0;
  private readonly subscriptions = new Map<string, Pending>();
  private readonly queue: string[] = [];
  onClose: ((code: number) => void) | null = null;

  constructor(
    private readonly url: string,
    private readonly getToken: () => string | null,
    private readonly factory: WsFactory = (u, protocols) => new WebSocket(u, protocols) as unknown as WsLike,
  ) {}

  connect(): void {
    if (this.socket) return;
    const socket = this.factory(this.url, ["graphql-transport-ws"]);
    this.socket = socket;
    socket.addEventListener("open", () => {
      socket.send(JSON.stringify({ type: "connection_init", payload: { token: this.getToken() } }));
    });
    socket.addEventListener("message", (event: { data: unknown }) => {
      this.handle(JSON.parse(String(event.data)));
    });
    socket.addEventListener("close", (event: { code?: number }) => {
      this.socket = null;
      this.acked = false;
      this.onClose?.(event.code ?? 1000);
    });
  }

  private handle(frame: { type: string; id?: string; payload?: any }): void {
    switch (frame.type) {
      case "connection_ack": {
        this.acked = true;
        for (const message of this.queue.splice(0)) this.socket?.send(message);
        break;
      }
      case "next": {
        const sub = frame.id ? this.subscriptions.get(frame.id) : undefined;
        if (sub && frame.payload?.data) sub.handler.next(frame.payload.data);
        break;
      }
      case "error": {
        const sub = frame.id ? this.subscriptions.get(frame.id) : undefined;
        if (sub) {
          sub.handler.error?.(frame.payload ?? []);
          if (frame.id) this.subscriptions.delete(frame.id);
        }
        break;
      }
      case "complete": {
        if (frame.id) this.subscriptions.delete(frame.id);
        break;
      }
      case "ping": {
        this.socket?.send(JSON.stringify({ type: "pong" }));
        break;
      }
      default:
        break;
    }
  }

  subscribe(query: string, handler: SubscriptionHandler, variables?: Record<string, unknown>): () => void {
    this.connect();
    const id = `s${++this.counter}`;
    this.subscriptions.set(id, { query, variables, handler });
    const message = JSON.stringify({ id, type: "subscribe", payload: { query, variables } });
    if (this.acked) {
      this.socket?.send(message);
    } else {
      this.queue.push(message);
    }
    return () => {
      if (this.subscriptions.delete(id) && this.acked) {
        this.socket?.send(JSON.stringify({ id, type: "complete" }));
      }
    };
  }

  close(): void {
    this.socket?.close(1000);
    this.socket = null;
    this.acked = false;
    this.subscriptions.clear();
  }
}
