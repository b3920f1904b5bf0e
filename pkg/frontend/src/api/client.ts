/**
 * GraphQL-over-HTTP client. Auth failures never throw silently: an
 * UNAUTHENTICATED response clears the session via the handler the app
 * installs (which redirects to the login page).
 */

import { GqlRequestError, type GqlErrorShape } from "./types.js";

export interface ApiClientOptions {
  baseUrl: string;
  getToken: () => string | null;
  onUnauthenticated?: () => void;
  fetchImpl?: typeof fetch;
}

export class ApiClient {
  private readonly fetchImpl: typeof fetch;

  constructor(private readonly options: ApiClientOptions) {
    this.fetchImpl = options.fetchImpl ?? fetch.bind(globalThis);
  }

  get baseUrl(): string {
    return this.options.baseUrl;
  }

  get wsUrl(): string {
    return this.options.baseUrl.replace(/^http/, "ws") + "/graphql";
  }

  async request<T>(query: string, variables?: Record<string, unknown>): Promise<T> {
    const headers: Record<string, string> = { "content-type": "application/json" };
    const token = this.options.getToken();
    if (token) headers["authorization"] = `Bearer ${token}`;
    const response = await this.fetchImpl(`${this.options.baseUrl}/graphql`, {
      method: "POST",
      headers,
      body: JSON.stringify({ query, variables: variables ?? {} }),
    });
    if (!response.ok) {
      throw new Error(`HTTP ${response.status} from /graphql`);
    }
    const payload = (await response.json()) as { data?: T; errors?: GqlErrorShape[] };
    if (payload.errors && payload.errors.length > 0) {
      const error = new GqlRequestError(payload.errors);
      if (error.code() === "UNAUTHENTICATED") {
        this.options.onUnauthenticated?.();
      }
      throw error;
    }
    return payload.data as T;
  }

  async schemaSdl(): Promise<string> {
    const response = await this.fetchImpl(`${this.options.baseUrl}/schema.graphql`);
    if (!response.ok) throw new Error(`HTTP ${response.status} from /schema.graphql`);
    return response.text();
  }
}
