/**
 * Client session: the opaque bearer token lives in session-scoped storage
 * (never in URLs) and is dropped on logout or any UNAUTHENTICATED response.
 */

import { ApiClient } from "../api/client.js";
import { LOGIN, LOGOUT, ME, SIGNUP, START_RECOVERY, UPDATE_PROFILE } from "../api/documents.js";
import type { User } from "../api/types.js";

export interface TokenStorage {
  get(): string | null;
  set(token: string | null): void;
}

export function browserTokenStorage(key = "crmforge.token"): TokenStorage {
  return {
    get: () => window.sessionStorage.getItem(key),
    set: (token) => {
      if (token === null) window.sessionStorage.removeItem(key);
      else window.sessionStorage.setItem(key, token);
    },
  };
}

export function memoryTokenStorage(): TokenStorage {
  let value: string | null = null;
  return { get: () => value, set: (token) => (value = token) };
}

export class SessionStore {
  currentUser: User | null = null;
  onChange: (() => void) | null = null;

  constructor(private readonly storage: TokenStorage) {}

  get token(): string | null {
    return this.storage.get();
  }

  get isAuthenticated(): boolean {
    return this.storage.get() !== null;
  }

  clear(): void {
    this.storage.set(null);
    this.currentUser = null;
    this.onChange?.();
  }

  async login(api: ApiClient, email: string, password: string): Promise<User> {
    const data = await api.request<{ login: { token: string; user: User } }>(LOGIN, {
      email,
      password,
    });
    this.storage.set(data.login.token);
    this.currentUser = data.login.user;
    this.onChange?.();
    return data.login.user;
  }

  async signup(api: ApiClient, name: string, email: string, password: string): Promise<void> {
    await api.request(SIGNUP, { name, email, password });
  }

  async startRecovery(api: ApiClient, email: string): Promise<void> {
    await api.request(START_RECOVERY, { email });
  }

  async loadCurrentUser(api: ApiClient): Promise<User | null> {
    const data = await api.request<{ me: User | null }>(ME);
    this.currentUser = data.me;
    this.onChange?.();
    return data.me;
  }

  async updateProfile(
    api: ApiClient,
    fields: { name?: string; email?: string; jobTitle?: string; phone?: string },
  ): Promise<User> {
    const data = await api.request<{ updateProfile: User }>(UPDATE_PROFILE, fields);
    this.currentUser = data.updateProfile;
    this.onChange?.();
    return data.updateProfile;
  }

  async logout(api: ApiClient): Promise<void> {
    try {
      await api.request(LOGOUT);
    } finally {
      this.clear();
    }
  }

  /** Capability probe for RBAC-aware rendering (mirrors the server matrix). */
  canMutate(resourceOwnerId?: string | null, assigneeIds?: string[]): boolean {
    const user = this.currentUser;
    if (!user) return false;
    if (user.role === "ADMIN") return true;
    if (user.role === "VIEWER") return false;
    if (assigneeIds) return assigneeIds.includes(user.id);
    return resourceOwnerId != null && resourceOwnerId === user.id;
  }

  canCreate(): boolean {
    const role = this.currentUser?.role;
    return role === "ADMIN" || role === "SALES_OWNER";
  }
}
