"""The service behind the GraphQL resolvers: session-gated CRUD over the
store, with an RBAC check and exactly one audit activity per successful
mutation. Committed activities flow to the optional ``publisher`` hook, which
the websocket hub uses for fan-out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .. import analytics
from ..auth import Action, AuthService, authorize
from ..domain import (
    Activity,
    ActivityVerb,
    CalendarEvent,
    Company,
    CompanyDraft,
    Contact,
    Deal,
    DealStage,
    EntityKind,
    EVENT_COLORS,
    Role,
    TaskCard,
    Timestamp,
    UserAccount,
    Violation,
    is_open_stage,
    new_id,
    open_deals_amount,
    replace,
    validate_company,
)
from ..errors import Forbidden, NotFound, Unauthenticated, ValidationFailed
from ..rank import rank_between
from ..store import AppendActivity, Delete, Filter, FilterOp, Page, Put, SortDir, Store

# publisher(activity, task_payload): task_payload is the full card for
# TASK-kind activities (the pre-delete card for deletions), else None.
Publisher = Callable[[Activity, Optional[TaskCard]], None]


@dataclass
class RequestContext:
    service: "CrmService"
    token: Optional[str] = None
    actor: Optional[UserAccount] = None

    def require_actor(self) -> UserAccount:
        if self.actor is None:
            raise Unauthenticated()
        return self.actor


def _check_length(name: str, value: Optional[str], limit: int, violations: list) -> None:
    if value is not None and len(value) > limit:
        violations.append(
            Violation(name, "max-length", f"{name} must be at most {limit} characters")
        )


def _require_title(value: str, violations: list, field_name: str = "title") -> None:
    if not value or not value.strip():
        violations.append(Violation(field_name, "non-empty", f"{field_name} must be non-empty"))
    elif len(value) > 200:
        violations.append(
            Violation(field_name, "max-length", f"{field_name} must be at most 200 characters")
        )


class CrmService:
    def __init__(
        self,
        store: Store,
        clock: Callable[[], Timestamp] = Timestamp.now,
        publisher: Optional[Publisher] = None,
    ):
        self.store = store
        self.clock = clock
        self.publisher = publisher
        self.auth = AuthService(store, clock=clock)

    # ------------------------------------------------------------------
    # plumbing

    def authenticate(self, token: Optional[str]) -> Optional[UserAccount]:
        return self.auth.authenticate(token)

    def _publish_since(self, pre_seq: int, task_payload: Optional[TaskCard] = None) -> None:
        if self.publisher is None:
            return
        for activity in self.store.activities_after(pre_seq, limit=10_000):
            payload = task_payload if activity.entity_kind == EntityKind.TASK else None
            self.publisher(activity, payload)

    def _commit(self, txn: list, task_payload: Optional[TaskCard] = None) -> None:
        pre = self.store.last_seq
        self.store.commit(txn)
        self._publish_since(pre, task_payload)

    def _activity(
        self, actor: UserAccount, verb: ActivityVerb, kind: EntityKind, entity_id: str, summary: str
    ) -> AppendActivity:
        return AppendActivity(
            Activity(
                seq=0,
                actor_id=actor.id,
                verb=verb,
                entity_kind=kind,
                entity_id=entity_id,
                summary=summary,
                at=self.clock(),
            )
        )

    def _authorize(
        self,
        actor: UserAccount,
        action: Action,
        kind: EntityKind,
        owner_id: Optional[str] = None,
    ) -> None:
        if not authorize(actor, action, kind, owner_id):
            raise Forbidden(f"{actor.role.value} may not {action.value} this {kind.value.lower()}")

    def _company_owner(self, company_id: str) -> Optional[str]:
        company = self.store.get("company", company_id)
        return company.sales_owner_id if company else None

    def _task_owner(self, actor: UserAccount, task: TaskCard) -> Optional[str]:
        # Ownership of a card means being one of its assignees.
        return actor.id if actor.id in task.assignee_ids else None

    def _users_by_id(self) -> dict[str, UserAccount]:
        return {u.id: u for u in self.store.all("user")}

    def _query_all(
        self,
        kind: str,
        filters: list[Filter],
        sort_field: Optional[str] = None,
        sort_dir: SortDir = SortDir.DESC,
    ) -> list:
        rows: list = []
        offset = 0
        while True:
            chunk, total = self.store.query(
                kind, filters, Page(offset=offset, limit=100, sort_field=sort_field, sort_dir=sort_dir)
            )
            rows.extend(chunk)
            offset += len(chunk)
            if offset >= total or not chunk:
                return rows

    # ------------------------------------------------------------------
    # auth-facing mutations (publishing wrapped around AuthService commits)

    def signup(self, name: str, email: str, password: str) -> UserAccount:
        pre = self.store.last_seq
        user = self.auth.signup(name, email, password)
        self._publish_since(pre)
        return user

    def login(self, email: str, password: str) -> dict:
        pre = self.store.last_seq
        session, user = self.auth.login(email, password)
        self._publish_since(pre)
        return {"token": session.token, "user": user}

    def logout(self, ctx: RequestContext) -> bool:
        ctx.require_actor()
        pre = self.store.last_seq
        result = self.auth.logout(ctx.token)
        self._publish_since(pre)
        return result

    def start_recovery(self, email: str) -> bool:
        self.auth.start_recovery(email)
        return True

    def complete_recovery(self, token: str, new_password: str) -> bool:
        pre = self.store.last_seq
        self.auth.complete_recovery(token, new_password)
        self._publish_since(pre)
        return True

    def update_profile(self, ctx: RequestContext, **fields) -> UserAccount:
        actor = ctx.require_actor()
        pre = self.store.last_seq
        user = self.auth.update_profile(actor, **fields)
        self._publish_since(pre)
        return user

    # ------------------------------------------------------------------
    # queries

    def me(self, ctx: RequestContext) -> Optional[UserAccount]:
        return ctx.actor

    def users(self, ctx: RequestContext) -> list[UserAccount]:
        ctx.require_actor()
        return self._query_all("user", [], sort_field="created_at", sort_dir=SortDir.ASC)

    def companies(
        self, ctx: RequestContext, filter_input: Optional[dict] = None, page_input: Optional[dict] = None
    ) -> list[Company]:
        ctx.require_actor()
        filter_input = filter_input or {}
        page_input = page_input or {}
        filters = []
        if filter_input.get("nameContains") is not None:
            filters.append(Filter("name", FilterOp.CONTAINS, filter_input["nameContains"]))
        if filter_input.get("industry") is not None:
            filters.append(Filter("industry", FilterOp.EQ, filter_input["industry"]))
        if filter_input.get("country") is not None:
            filters.append(Filter("country", FilterOp.EQ, filter_input["country"]))
        sort_field = page_input.get("sortField")
        if sort_field is not None:
            from ..gql.execute import snake_case

            sort_field = snake_case(sort_field)
        direction = SortDir(page_input.get("sortDir", "DESC"))
        rows = self._query_all("company", filters, sort_field=sort_field, sort_dir=direction)
        min_amount = filter_input.get("minOpenDealsAmount")
        if min_amount is not None:
            deals = self.store.all("deal")
            rows = [c for c in rows if open_deals_amount(c.id, deals) >= min_amount]
        offset = max(page_input.get("offset", 0), 0)
        limit = min(max(page_input.get("limit", 10), 1), 100)
        return rows[offset : offset + limit]

    def company(self, ctx: RequestContext, company_id: str) -> Optional[Company]:
        ctx.require_actor()
        return self.store.get("company", company_id)

    def contacts(self, ctx: RequestContext) -> list[Contact]:
        ctx.require_actor()
        return self._query_all("contact", [])

    def deals(self, ctx: RequestContext) -> list[Deal]:
        ctx.require_actor()
        return self._query_all("deal", [])

    def totals(self, ctx: RequestContext) -> analytics.Totals:
        ctx.require_actor()
        return analytics.totals(self.store)

    def deals_chart(self, ctx: RequestContext, months: int) -> list[analytics.ChartPoint]:
        ctx.require_actor()
        return analytics.deals_chart(self.store, months, now=self.clock())

    def upcoming_events(self, ctx: RequestContext, limit: int) -> list[CalendarEvent]:
        ctx.require_actor()
        return analytics.upcoming_events(self.store, limit, now=self.clock())

    def latest_activities(self, ctx: RequestContext, limit: int) -> list[Activity]:
        ctx.require_actor()
        return analytics.latest_activities(self.store, limit)

    def task_stages(self, ctx: RequestContext) -> list:
        ctx.require_actor()
        return self._query_all("task_stage", [], sort_field="position", sort_dir=SortDir.ASC)

    def tasks(self, ctx: RequestContext) -> list[TaskCard]:
        ctx.require_actor()
        return self._query_all("task", [], sort_field="rank", sort_dir=SortDir.ASC)

    # ------------------------------------------------------------------
    # company mutations

    def create_company(self, ctx: RequestContext, payload: dict) -> Company:
        actor = ctx.require_actor()
        self._authorize(actor, Action.CREATE, EntityKind.COMPANY)
        draft = CompanyDraft(
            name=payload["name"],
            sales_owner_id=payload["salesOwnerId"],
            industry=payload.get("industry"),
            total_revenue=payload.get("totalRevenue"),
            country=payload.get("country"),
        )
        violations = validate_company(draft, self._users_by_id())
        if violations:
            raise ValidationFailed(violations)
        now = self.clock()
        company = Company(
            id=new_id(),
            name=draft.name.strip(),
            sales_owner_id=draft.sales_owner_id,
            industry=draft.industry,
            total_revenue=draft.total_revenue,
            country=draft.country,
            created_at=now,
            updated_at=now,
        )
        self._commit(
            [
                Put("company", company),
                self._activity(
                    actor, ActivityVerb.CREATE, EntityKind.COMPANY, company.id,
                    f'created company "{company.name}"',
                ),
            ]
        )
        return company

    def update_company(self, ctx: RequestContext, company_id: str, patch: dict) -> Company:
        actor = ctx.require_actor()
        company = self.store.get("company", company_id)
        if company is None:
            raise NotFound("company not found")
        self._authorize(actor, Action.UPDATE, EntityKind.COMPANY, company.sales_owner_id)
        draft = CompanyDraft(
            name=patch.get("name", company.name),
            sales_owner_id=patch.get("salesOwnerId", company.sales_owner_id),
            industry=patch.get("industry", company.industry),
            total_revenue=patch.get("totalRevenue", company.total_revenue),
            country=patch.get("country", company.country),
        )
        violations = validate_company(draft, self._users_by_id())
        if violations:
            raise ValidationFailed(violations)
        updated = replace(
            company,
            name=draft.name.strip(),
            sales_owner_id=draft.sales_owner_id,
            industry=draft.industry,
            total_revenue=draft.total_revenue,
            country=draft.country,
            updated_at=self.clock(),
        )
        self._commit(
            [
                Put("company", updated),
                self._activity(
                    actor, ActivityVerb.UPDATE, EntityKind.COMPANY, updated.id,
                    f'updated company "{updated.name}"',
                ),
            ]
        )
        return updated

    def delete_company(self, ctx: RequestContext, company_id: str) -> bool:
        actor = ctx.require_actor()
        company = self.store.get("company", company_id)
        if company is None:
            raise NotFound("company not found")
        self._authorize(actor, Action.DELETE, EntityKind.COMPANY, company.sales_owner_id)
        txn: list = []
        for deal in self.store.all("deal"):
            if deal.company_id == company_id:
                txn.append(Delete("deal", deal.id))
        for contact in self.store.all("contact"):
            if contact.company_id == company_id:
                txn.append(Delete("contact", contact.id))
        txn.append(Delete("company", company_id))
        txn.append(
            self._activity(
                actor, ActivityVerb.DELETE, EntityKind.COMPANY, company_id,
                f'deleted company "{company.name}"',
            )
        )
        self._commit(txn)
        return True

    # ------------------------------------------------------------------
    # contact mutations

    def create_contact(self, ctx: RequestContext, payload: dict) -> Contact:
        actor = ctx.require_actor()
        self._authorize(actor, Action.CREATE, EntityKind.CONTACT)
        company = self.store.get("company", payload["companyId"])
        if company is None:
            raise NotFound("company not found")
        violations: list = []
        _require_title(payload["name"], violations, "name")
        _check_length("email", payload.get("email"), 200, violations)
        _check_length("phone", payload.get("phone"), 32, violations)
        if violations:
            raise ValidationFailed(violations)
        contact = Contact(
            id=new_id(),
            company_id=company.id,
            name=payload["name"].strip(),
            email=payload.get("email"),
            phone=payload.get("phone"),
            created_at=self.clock(),
        )
        self._commit(
            [
                Put("contact", contact),
                self._activity(
                    actor, ActivityVerb.CREATE, EntityKind.CONTACT, contact.id,
                    f'created contact "{contact.name}"',
                ),
            ]
        )
        return contact

    def update_contact(self, ctx: RequestContext, contact_id: str, patch: dict) -> Contact:
        actor = ctx.require_actor()
        contact = self.store.get("contact", contact_id)
        if contact is None:
            raise NotFound("contact not found")
        self._authorize(
            actor, Action.UPDATE, EntityKind.CONTACT, self._company_owner(contact.company_id)
        )
        updated = replace(
            contact,
            name=patch.get("name", contact.name),
            email=patch.get("email", contact.email),
            phone=patch.get("phone", contact.phone),
        )
        violations: list = []
        _require_title(updated.name, violations, "name")
        _check_length("phone", updated.phone, 32, violations)
        if violations:
            raise ValidationFailed(violations)
        self._commit(
            [
                Put("contact", updated),
                self._activity(
                    actor, ActivityVerb.UPDATE, EntityKind.CONTACT, updated.id,
                    f'updated contact "{updated.name}"',
                ),
            ]
        )
        return updated

    def delete_contact(self, ctx: RequestContext, contact_id: str) -> bool:
        actor = ctx.require_actor()
        contact = self.store.get("contact", contact_id)
        if contact is None:
            raise NotFound("contact not found")
        self._authorize(
            actor, Action.DELETE, EntityKind.CONTACT, self._company_owner(contact.company_id)
        )
        self._commit(
            [
                Delete("contact", contact_id),
                self._activity(
                    actor, ActivityVerb.DELETE, EntityKind.CONTACT, contact_id,
                    f'deleted contact "{contact.name}"',
                ),
            ]
        )
        return True

    # ------------------------------------------------------------------
    # deal mutations

    def create_deal(self, ctx: RequestContext, payload: dict) -> Deal:
        actor = ctx.require_actor()
        self._authorize(actor, Action.CREATE, EntityKind.DEAL)
        company = self.store.get("company", payload["companyId"])
        if company is None:
            raise NotFound("company not found")
        violations: list = []
        _require_title(payload["title"], violations)
        if payload["value"] < 0:
            violations.append(Violation("value", "non-negative", "deal value must not be negative"))
        if violations:
            raise ValidationFailed(violations)
        stage = DealStage(payload.get("stage", DealStage.NEW.value))
        now = self.clock()
        deal = Deal(
            id=new_id(),
            company_id=company.id,
            title=payload["title"].strip(),
            value=payload["value"],
            stage=stage,
            created_at=now,
            updated_at=now,
            closed_at=None if is_open_stage(stage) else now,
        )
        self._commit(
            [
                Put("deal", deal),
                self._activity(
                    actor, ActivityVerb.CREATE, EntityKind.DEAL, deal.id,
                    f'created deal "{deal.title}"',
                ),
            ]
        )
        return deal

    def update_deal(self, ctx: RequestContext, deal_id: str, patch: dict) -> Deal:
        actor = ctx.require_actor()
        deal = self.store.get("deal", deal_id)
        if deal is None:
            raise NotFound("deal not found")
        self._authorize(actor, Action.UPDATE, EntityKind.DEAL, self._company_owner(deal.company_id))
        title = patch.get("title", deal.title)
        value = patch.get("value", deal.value)
        stage = DealStage(patch["stage"]) if patch.get("stage") is not None else deal.stage
        violations: list = []
        _require_title(title, violations)
        if value < 0:
            violations.append(Violation("value", "non-negative", "deal value must not be negative"))
        if violations:
            raise ValidationFailed(violations)
        now = self.clock()
        if is_open_stage(stage):
            closed_at = None
        elif stage == deal.stage:
            closed_at = deal.closed_at
        else:
            closed_at = now
        updated = replace(
            deal,
            title=title.strip(),
            value=value,
            stage=stage,
            closed_at=closed_at,
            updated_at=now,
        )
        self._commit(
            [
                Put("deal", updated),
                self._activity(
                    actor, ActivityVerb.UPDATE, EntityKind.DEAL, updated.id,
                    f'updated deal "{updated.title}"',
                ),
            ]
        )
        return updated

    def delete_deal(self, ctx: RequestContext, deal_id: str) -> bool:
        actor = ctx.require_actor()
        deal = self.store.get("deal", deal_id)
        if deal is None:
            raise NotFound("deal not found")
        self._authorize(actor, Action.DELETE, EntityKind.DEAL, self._company_owner(deal.company_id))
        self._commit(
            [
                Delete("deal", deal_id),
                self._activity(
                    actor, ActivityVerb.DELETE, EntityKind.DEAL, deal_id,
                    f'deleted deal "{deal.title}"',
                ),
            ]
        )
        return True

    # ------------------------------------------------------------------
    # events

    def create_event(self, ctx: RequestContext, payload: dict) -> CalendarEvent:
        actor = ctx.require_actor()
        self._authorize(actor, Action.CREATE, EntityKind.EVENT)
        violations: list = []
        _require_title(payload["title"], violations)
        color = payload.get("color", "blue")
        if color not in EVENT_COLORS:
            violations.append(
                Violation("color", "palette", f"color must be one of {', '.join(EVENT_COLORS)}")
            )
        starts_at, ends_at = payload["startsAt"], payload["endsAt"]
        if not starts_at < ends_at:
            violations.append(Violation("endsAt", "after-start", "event must end after it starts"))
        if violations:
            raise ValidationFailed(violations)
        event = CalendarEvent(
            id=new_id(),
            title=payload["title"].strip(),
            starts_at=starts_at,
            ends_at=ends_at,
            color=color,
            created_at=self.clock(),
        )
        self._commit(
            [
                Put("event", event),
                self._activity(
                    actor, ActivityVerb.CREATE, EntityKind.EVENT, event.id,
                    f'created event "{event.title}"',
                ),
            ]
        )
        return event

    # ------------------------------------------------------------------
    # tasks

    def _last_rank_in_stage(self, stage_id: Optional[str]) -> Optional[str]:
        ranks = [t.rank for t in self.store.all("task") if t.stage_id == stage_id]
        return max(ranks) if ranks else None

    def _validate_task_refs(self, stage_id, assignee_ids) -> list[Violation]:
        violations: list = []
        if stage_id is not None and self.store.get("task_stage", stage_id) is None:
            violations.append(Violation("stageId", "exists", "stage does not exist"))
        users = self._users_by_id()
        for assignee in assignee_ids:
            if assignee not in users:
                violations.append(Violation("assigneeIds", "exists", f"unknown user {assignee}"))
        return violations

    def create_task(self, ctx: RequestContext, payload: dict) -> TaskCard:
        actor = ctx.require_actor()
        self._authorize(actor, Action.CREATE, EntityKind.TASK)
        stage_id = payload.get("stageId")
        assignee_ids = frozenset(payload.get("assigneeIds", ()))
        violations: list = []
        _require_title(payload["title"], violations)
        _check_length("description", payload.get("description"), 4000, violations)
        violations.extend(self._validate_task_refs(stage_id, assignee_ids))
        if violations:
            raise ValidationFailed(violations)
        now = self.clock()
        task = TaskCard(
            id=new_id(),
            title=payload["title"].strip(),
            rank=rank_between(self._last_rank_in_stage(stage_id), None),
            stage_id=stage_id,
            assignee_ids=assignee_ids,
            due_date=payload.get("dueDate"),
            description=payload.get("description"),
            created_at=now,
            updated_at=now,
        )
        self._commit(
            [
                Put("task", task),
                self._activity(
                    actor, ActivityVerb.CREATE, EntityKind.TASK, task.id,
                    f'created task "{task.title}"',
                ),
            ],
            task_payload=task,
        )
        return task

    def update_task(self, ctx: RequestContext, task_id: str, patch: dict) -> TaskCard:
        actor = ctx.require_actor()
        task = self.store.get("task", task_id)
        if task is None:
            raise NotFound("task not found")
        self._authorize(actor, Action.UPDATE, EntityKind.TASK, self._task_owner(actor, task))
        assignee_ids = (
            frozenset(patch["assigneeIds"]) if patch.get("assigneeIds") is not None
            else task.assignee_ids
        )
        title = patch.get("title", task.title)
        description = patch.get("description", task.description)
        violations: list = []
        _require_title(title, violations)
        _check_length("description", description, 4000, violations)
        violations.extend(self._validate_task_refs(None, assignee_ids))
        if violations:
            raise ValidationFailed(violations)
        updated = replace(
            task,
            title=title.strip(),
            description=description,
            due_date=patch.get("dueDate", task.due_date),
            assignee_ids=assignee_ids,
            updated_at=self.clock(),
        )
        self._commit(
            [
                Put("task", updated),
                self._activity(
                    actor, ActivityVerb.UPDATE, EntityKind.TASK, updated.id,
                    f'updated task "{updated.title}"',
                ),
            ],
            task_payload=updated,
        )
        return updated

    def move_task(
        self,
        ctx: RequestContext,
        task_id: str,
        to_stage_id: Optional[str] = None,
        before_task_id: Optional[str] = None,
        after_task_id: Optional[str] = None,
    ) -> TaskCard:
        """Reposition a card: the new rank lands between its ``after`` and
        ``before`` neighbors inside the target stage (None = backlog)."""
        actor = ctx.require_actor()
        task = self.store.get("task", task_id)
        if task is None:
            raise NotFound("task not found")
        self._authorize(actor, Action.MOVE, EntityKind.TASK, self._task_owner(actor, task))
        if to_stage_id is not None and self.store.get("task_stage", to_stage_id) is None:
            raise NotFound("target stage not found")

        def neighbor_rank(neighbor_id: Optional[str]) -> Optional[str]:
            if neighbor_id is None:
                return None
            neighbor = self.store.get("task", neighbor_id)
            if neighbor is None:
                raise NotFound(f"neighbor task {neighbor_id} not found")
            if neighbor.stage_id != to_stage_id:
                raise NotFound("neighbor task is not in the target stage")
            return neighbor.rank

        lo = neighbor_rank(after_task_id)
        hi = neighbor_rank(before_task_id)
        if lo is None and hi is None:
            occupied = [
                t.rank for t in self.store.all("task")
                if t.stage_id == to_stage_id and t.id != task_id
            ]
            lo = max(occupied) if occupied else None
        moved = replace(
            task,
            stage_id=to_stage_id,
            rank=rank_between(lo, hi),
            updated_at=self.clock(),
        )
        self._commit(
            [
                Put("task", moved),
                self._activity(
                    actor, ActivityVerb.MOVE, EntityKind.TASK, moved.id,
                    f'moved task "{moved.title}"',
                ),
            ],
            task_payload=moved,
        )
        return moved

    def delete_task(self, ctx: RequestContext, task_id: str) -> bool:
        actor = ctx.require_actor()
        task = self.store.get("task", task_id)
        if task is None:
            raise NotFound("task not found")
        self._authorize(actor, Action.DELETE, EntityKind.TASK, self._task_owner(actor, task))
        self._commit(
            [
                Delete("task", task_id),
                self._activity(
                    actor, ActivityVerb.DELETE, EntityKind.TASK, task_id,
                    f'deleted task "{task.title}"',
                ),
            ],
            task_payload=task,
        )
        return True

    # ------------------------------------------------------------------
    # computed helpers used by resolvers

    def open_deals_amount_for(self, company_id: str) -> int:
        return open_deals_amount(company_id, self.store.all("deal"))
