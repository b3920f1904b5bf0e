/** Shapes of the server's entities as they appear on the wire. */

export type Role = "ADMIN" | "SALES_OWNER" | "VIEWER";

export interface User {
  id: string;
  name: string;
  email: string;
  role: Role;
  jobTitle?: string | null;
  phone?: string | null;
}

export interface CompanyRow {
  id: string;
  name: string;
  industry?: string | null;
  country?: string | null;
  totalRevenue?: number | null; // cents
  openDealsAmount: number; // cents
  salesOwnerId: string;
  salesOwner?: { id: string; name: string } | null;
}

export interface ActivityEvent {
  seq: number;
  verb: string;
  entityKind: string;
  summary: string;
  at: string;
  actorId?: string;
}

export interface ChartPoint {
  month: string;
  revenue: number;
  expenditure: number;
}

export interface CalendarEventRow {
  id: string;
  title: string;
  startsAt: string;
  endsAt: string;
  color: string;
}

export interface Totals {
  companies: number;
  contacts: number;
  deals: number;
}

export interface TaskStageRow {
  id: string;
  title: string;
  position: number;
}

export interface TaskRow {
  id: string;
  title: string;
  description?: string | null;
  stageId: string | null;
  rank: string;
  dueDate?: string | null;
  assigneeIds: string[];
  updatedAt: string;
}

export interface GqlErrorShape {
  message: string;
  path?: (string | number)[];
  extensions?: { code?: string; violations?: { field: string; message: string }[] };
}

export class GqlRequestError extends Error {
  constructor(public errors: GqlErrorShape[]) {
    super(errors.map((e) => e.message).join("; ") || "GraphQL request failed");
  }

  code(): string | undefined {
    return this.errors[0]?.extensions?.code;
  }

  violations(): { field: string; message: string }[] {
    return this.errors[0]?.extensions?.violations ?? [];
  }
}
