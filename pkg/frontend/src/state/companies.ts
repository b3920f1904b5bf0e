/**
 * Companies table state: per-field search (name contains, open amount at
 * least), paging, and CRUD calls. The server owns filtering; this store just
 * tracks inputs and rows.
 */

import { ApiClient } from "../api/client.js";
import {
  COMPANIES,
  COMPANY,
  CREATE_COMPANY,
  DELETE_COMPANY,
  UPDATE_COMPANY,
  USERS,
} from "../api/documents.js";
import type { CompanyRow, User } from "../api/types.js";

export interface CompanySearch {
  nameContains: string;
  minOpenDealsAmountCents: number | null;
}

export class CompaniesStore {
  rows: CompanyRow[] = [];
  search: CompanySearch = { nameContains: "", minOpenDealsAmountCents: null };
  offset = 0;
  pageSize = 10;
  hasMore = false;
  onChange: (() => void) | null = null;

  async load(api: ApiClient): Promise<void> {
    const filter: Record<string, unknown> = {};
    if (this.search.nameContains.trim()) filter["nameContains"] = this.search.nameContains.trim();
    if (this.search.minOpenDealsAmountCents !== null) {
      filter["minOpenDealsAmount"] = this.search.minOpenDealsAmountCents;
    }
    // Ask for one extra row to know whether a next page exists.
    const data = await api.request<{ companies: CompanyRow[] }>(COMPANIES, {
      filter,
      page: {
        offset: this.offset,
        limit: this.pageSize + 1,
        sortField: "name",
        sortDir: "ASC",
      },
    });
    this.hasMore = data.companies.length > this.pageSize;
    this.rows = data.companies.slice(0, this.pageSize);
    this.onChange?.();
  }

  async nextPage(api: ApiClient): Promise<void> {
    if (!this.hasMore) return;
    this.offset += this.pageSize;
    await this.load(api);
  }

  async prevPage(api: ApiClient): Promise<void> {
    if (this.offset === 0) return;
    this.offset = Math.max(0, this.offset - this.pageSize);
    await this.load(api);
  }

  async applySearch(api: ApiClient, search: CompanySearch): Promise<void> {
    this.search = search;
    this.offset = 0;
    await this.load(api);
  }

  async fetchOne(api: ApiClient, id: string): Promise<CompanyRow | null> {
    const data = await api.request<{ company: CompanyRow | null }>(COMPANY, { id });
    return data.company;
  }

  /** Sales-owner dropdown candidates: only non-VIEWER users may own. */
  async fetchOwners(api: ApiClient): Promise<User[]> {
    const data = await api.request<{ users: User[] }>(USERS);
    return data.users.filter((u) => u.role !== "VIEWER");
  }

  async create(api: ApiClient, input: Record<string, unknown>): Promise<void> {
    await api.request(CREATE_COMPANY, { input });
    await this.load(api);
  }

  async update(api: ApiClient, id: string, input: Record<string, unknown>): Promise<void> {
    await api.request(UPDATE_COMPANY, { id, input });
    await this.load(api);
  }

  async remove(api: ApiClient, id: string): Promise<void> {
    await api.request(DELETE_COMPANY, { id });
    await this.load(api);
  }
}
