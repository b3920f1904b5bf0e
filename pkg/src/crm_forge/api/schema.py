"""The served GraphQL schema and its resolver table.

Money is integer USD cents on the wire in both directions; DateTime is an
RFC 3339 UTC string with millisecond precision. Every resolver receives the
per-request context and delegates to the service layer.
"""

from __future__ import annotations

from typing import Any

from ..domain import Timestamp
from ..gql import (
    ArgDef,
    EnumType,
    FieldDef,
    InputObjectType,
    ObjectType,
    ScalarType,
    Schema,
    list_of,
    ref,
)
from ..gql.ast import IntValue, StringValue
from ..gql.schema import builtin_scalars

SUBSCRIPTION_TOPICS = {
    "activityCreated": "ACTIVITY",
    "taskChanged": "TASK",
    "notification": "NOTIFICATION",
}


def _serialize_money(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"cannot serialize {value!r} as Money cents")
    return value


def _coerce_money(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"expected Money as integer cents, got {value!r}")
    return value


def _serialize_datetime(value: Any) -> str:
    if isinstance(value, Timestamp):
        return value.render()
    raise ValueError(f"cannot serialize {value!r} as DateTime")


def _coerce_datetime(value: Any) -> Timestamp:
    if not isinstance(value, str):
        raise ValueError(f"expected an RFC 3339 DateTime string, got {value!r}")
    return Timestamp.parse(value)


def build_schema() -> Schema:
    return Schema(
        types=[
            *builtin_scalars(),
            ScalarType(
                "Money",
                serialize=_serialize_money,
                coerce_input=_coerce_money,
                literal_kinds=(IntValue,),
                description="USD amount as exact integer cents",
            ),
            ScalarType(
                "DateTime",
                serialize=_serialize_datetime,
                coerce_input=_coerce_datetime,
                literal_kinds=(StringValue,),
                description="RFC 3339 UTC instant with millisecond precision",
            ),
            EnumType("Role", values=("ADMIN", "SALES_OWNER", "VIEWER")),
            EnumType(
                "DealStage",
                values=("NEW", "FOLLOW_UP", "UNDER_REVIEW", "NEGOTIATION", "WON", "LOST"),
            ),
            EnumType("ActivityVerb", values=("CREATE", "UPDATE", "DELETE", "MOVE", "LOGIN")),
            EnumType(
                "ActivityEntityKind",
                values=("COMPANY", "CONTACT", "DEAL", "TASK", "EVENT", "USER"),
            ),
            EnumType("SortDir", values=("ASC", "DESC")),
            ObjectType(
                "User",
                fields={
                    "id": FieldDef(ref("ID", non_null=True)),
                    "name": FieldDef(ref("String", non_null=True)),
                    "email": FieldDef(ref("String", non_null=True)),
                    "jobTitle": FieldDef(ref("String")),
                    "phone": FieldDef(ref("String")),
                    "role": FieldDef(ref("Role", non_null=True)),
                    "createdAt": FieldDef(ref("DateTime", non_null=True)),
                },
            ),
            ObjectType(
                "Company",
                fields={
                    "id": FieldDef(ref("ID", non_null=True)),
                    "name": FieldDef(ref("String", non_null=True)),
                    "salesOwnerId": FieldDef(ref("ID", non_null=True)),
                    "salesOwner": FieldDef(ref("User")),
                    "industry": FieldDef(ref("String")),
                    "totalRevenue": FieldDef(ref("Money")),
                    "country": FieldDef(ref("String")),
                    "openDealsAmount": FieldDef(ref("Money", non_null=True)),
                    "createdAt": FieldDef(ref("DateTime", non_null=True)),
                    "updatedAt": FieldDef(ref("DateTime", non_null=True)),
                },
            ),
            ObjectType(
                "Contact",
                fields={
                    "id": FieldDef(ref("ID", non_null=True)),
                    "companyId": FieldDef(ref("ID", non_null=True)),
                    "company": FieldDef(ref("Company")),
                    "name": FieldDef(ref("String", non_null=True)),
                    "email": FieldDef(ref("String")),
                    "phone": FieldDef(ref("String")),
                    "createdAt": FieldDef(ref("DateTime", non_null=True)),
                },
            ),
            ObjectType(
                "Deal",
                fields={
                    "id": FieldDef(ref("ID", non_null=True)),
                    "companyId": FieldDef(ref("ID", non_null=True)),
                    "company": FieldDef(ref("Company")),
                    "title": FieldDef(ref("String", non_null=True)),
                    "value": FieldDef(ref("Money", non_null=True)),
                    "stage": FieldDef(ref("DealStage", non_null=True)),
                    "closedAt": FieldDef(ref("DateTime")),
                    "createdAt": FieldDef(ref("DateTime", non_null=True)),
                    "updatedAt": FieldDef(ref("DateTime", non_null=True)),
                },
            ),
            ObjectType(
                "CalendarEvent",
                fields={
                    "id": FieldDef(ref("ID", non_null=True)),
                    "title": FieldDef(ref("String", non_null=True)),
                    "startsAt": FieldDef(ref("DateTime", non_null=True)),
                    "endsAt": FieldDef(ref("DateTime", non_null=True)),
                    "color": FieldDef(ref("String", non_null=True)),
                    "createdAt": FieldDef(ref("DateTime", non_null=True)),
                },
            ),
            ObjectType(
                "Activity",
                fields={
                    "seq": FieldDef(ref("Int", non_null=True)),
                    "actorId": FieldDef(ref("ID", non_null=True)),
                    "verb": FieldDef(ref("ActivityVerb", non_null=True)),
                    "entityKind": FieldDef(ref("ActivityEntityKind", non_null=True)),
                    "entityId": FieldDef(ref("ID", non_null=True)),
                    "summary": FieldDef(ref("String", non_null=True)),
                    "at": FieldDef(ref("DateTime", non_null=True)),
                },
            ),
            ObjectType(
                "TaskStage",
                fields={
                    "id": FieldDef(ref("ID", non_null=True)),
                    "title": FieldDef(ref("String", non_null=True)),
                    "position": FieldDef(ref("Int", non_null=True)),
                },
            ),
            ObjectType(
                "Task",
                fields={
                    "id": FieldDef(ref("ID", non_null=True)),
                    "title": FieldDef(ref("String", non_null=True)),
                    "description": FieldDef(ref("String")),
                    "stageId": FieldDef(ref("ID")),
                    "rank": FieldDef(ref("String", non_null=True)),
                    "assigneeIds": FieldDef(list_of(ref("ID", non_null=True), non_null=True)),
                    "assignees": FieldDef(list_of(ref("User", non_null=True), non_null=True)),
                    "dueDate": FieldDef(ref("DateTime")),
                    "createdAt": FieldDef(ref("DateTime", non_null=True)),
                    "updatedAt": FieldDef(ref("DateTime", non_null=True)),
                },
            ),
            ObjectType(
                "Totals",
                fields={
                    "companies": FieldDef(ref("Int", non_null=True)),
                    "contacts": FieldDef(ref("Int", non_null=True)),
                    "deals": FieldDef(ref("Int", non_null=True)),
                },
            ),
            ObjectType(
                "ChartPoint",
                fields={
                    "month": FieldDef(ref("String", non_null=True)),
                    "revenue": FieldDef(ref("Money", non_null=True)),
                    "expenditure": FieldDef(ref("Money", non_null=True)),
                },
            ),
            ObjectType(
                "AuthPayload",
                fields={
                    "token": FieldDef(ref("String", non_null=True)),
                    "user": FieldDef(ref("User", non_null=True)),
                },
            ),
            InputObjectType(
                "PageInput",
                fields={
                    "offset": ArgDef(ref("Int"), default=0),
                    "limit": ArgDef(ref("Int"), default=10),
                    "sortField": ArgDef(ref("String")),
                    "sortDir": ArgDef(ref("SortDir"), default="DESC"),
                },
            ),
            InputObjectType(
                "CompanyFilter",
                fields={
                    "nameContains": ArgDef(ref("String")),
                    "industry": ArgDef(ref("String")),
                    "country": ArgDef(ref("String")),
                    "minOpenDealsAmount": ArgDef(ref("Money")),
                },
            ),
            InputObjectType(
                "CompanyInput",
                fields={
                    "name": ArgDef(ref("String", non_null=True)),
                    "salesOwnerId": ArgDef(ref("ID", non_null=True)),
                    "industry": ArgDef(ref("String")),
                    "totalRevenue": ArgDef(ref("Money")),
                    "country": ArgDef(ref("String")),
                },
            ),
            InputObjectType(
                "CompanyPatch",
                fields={
                    "name": ArgDef(ref("String")),
                    "salesOwnerId": ArgDef(ref("ID")),
                    "industry": ArgDef(ref("String")),
                    "totalRevenue": ArgDef(ref("Money")),
                    "country": ArgDef(ref("String")),
                },
            ),
            InputObjectType(
                "ContactInput",
                fields={
                    "companyId": ArgDef(ref("ID", non_null=True)),
                    "name": ArgDef(ref("String", non_null=True)),
                    "email": ArgDef(ref("String")),
                    "phone": ArgDef(ref("String")),
                },
            ),
            InputObjectType(
                "ContactPatch",
                fields={
                    "name": ArgDef(ref("String")),
                    "email": ArgDef(ref("String")),
                    "phone": ArgDef(ref("String")),
                },
            ),
            InputObjectType(
                "DealInput",
                fields={
                    "companyId": ArgDef(ref("ID", non_null=True)),
                    "title": ArgDef(ref("String", non_null=True)),
                    "value": ArgDef(ref("Money", non_null=True)),
                    "stage": ArgDef(ref("DealStage"), default="NEW"),
                },
            ),
            InputObjectType(
                "DealPatch",
                fields={
                    "title": ArgDef(ref("String")),
                    "value": ArgDef(ref("Money")),
                    "stage": ArgDef(ref("DealStage")),
                },
            ),
            InputObjectType(
                "EventInput",
                fields={
                    "title": ArgDef(ref("String", non_null=True)),
                    "startsAt": ArgDef(ref("DateTime", non_null=True)),
                    "endsAt": ArgDef(ref("DateTime", non_null=True)),
                    "color": ArgDef(ref("String"), default="blue"),
                },
            ),
            InputObjectType(
                "TaskInput",
                fields={
                    "title": ArgDef(ref("String", non_null=True)),
                    "stageId": ArgDef(ref("ID")),
                    "assigneeIds": ArgDef(list_of(ref("ID", non_null=True)), default=()),
                    "dueDate": ArgDef(ref("DateTime")),
                    "description": ArgDef(ref("String")),
                },
            ),
            InputObjectType(
                "TaskPatch",
                fields={
                    "title": ArgDef(ref("String")),
                    "description": ArgDef(ref("String")),
                    "dueDate": ArgDef(ref("DateTime")),
                    "assigneeIds": ArgDef(list_of(ref("ID", non_null=True))),
                },
            ),
            ObjectType(
                "Query",
                fields={
                    "me": FieldDef(ref("User")),
                    "users": FieldDef(list_of(ref("User", non_null=True), non_null=True)),
                    "companies": FieldDef(
                        list_of(ref("Company", non_null=True), non_null=True),
                        args={
                            "filter": ArgDef(ref("CompanyFilter")),
                            "page": ArgDef(ref("PageInput")),
                        },
                    ),
                    "company": FieldDef(ref("Company"), args={"id": ArgDef(ref("ID", non_null=True))}),
                    "contacts": FieldDef(list_of(ref("Contact", non_null=True), non_null=True)),
                    "deals": FieldDef(list_of(ref("Deal", non_null=True), non_null=True)),
                    "totals": FieldDef(ref("Totals", non_null=True)),
                    "dealsChart": FieldDef(
                        list_of(ref("ChartPoint", non_null=True), non_null=True),
                        args={"months": ArgDef(ref("Int", non_null=True))},
                    ),
                    "upcomingEvents": FieldDef(
                        list_of(ref("CalendarEvent", non_null=True), non_null=True),
                        args={"limit": ArgDef(ref("Int"), default=5)},
                    ),
                    "latestActivities": FieldDef(
                        list_of(ref("Activity", non_null=True), non_null=True),
                        args={"limit": ArgDef(ref("Int"), default=10)},
                    ),
                    "taskStages": FieldDef(list_of(ref("TaskStage", non_null=True), non_null=True)),
                    "tasks": FieldDef(list_of(ref("Task", non_null=True), non_null=True)),
                },
            ),
            ObjectType(
                "Mutation",
                fields={
                    "signup": FieldDef(
                        ref("User", non_null=True),
                        args={
                            "name": ArgDef(ref("String", non_null=True)),
                            "email": ArgDef(ref("String", non_null=True)),
                            "password": ArgDef(ref("String", non_null=True)),
                        },
                    ),
                    "login": FieldDef(
                        ref("AuthPayload", non_null=True),
                        args={
                            "email": ArgDef(ref("String", non_null=True)),
                            "password": ArgDef(ref("String", non_null=True)),
                        },
                    ),
                    "logout": FieldDef(ref("Boolean", non_null=True)),
                    "startRecovery": FieldDef(
                        ref("Boolean", non_null=True),
                        args={"email": ArgDef(ref("String", non_null=True))},
                    ),
                    "completeRecovery": FieldDef(
                        ref("Boolean", non_null=True),
                        args={
                            "token": ArgDef(ref("String", non_null=True)),
                            "newPassword": ArgDef(ref("String", non_null=True)),
                        },
                    ),
                    "updateProfile": FieldDef(
                        ref("User", non_null=True),
                        args={
                            "name": ArgDef(ref("String")),
                            "email": ArgDef(ref("String")),
                            "jobTitle": ArgDef(ref("String")),
                            "phone": ArgDef(ref("String")),
                        },
                    ),
                    "createCompany": FieldDef(
                        ref("Company", non_null=True),
                        args={"input": ArgDef(ref("CompanyInput", non_null=True))},
                    ),
                    "updateCompany": FieldDef(
                        ref("Company", non_null=True),
                        args={
                            "id": ArgDef(ref("ID", non_null=True)),
                            "input": ArgDef(ref("CompanyPatch", non_null=True)),
                        },
                    ),
                    "deleteCompany": FieldDef(
                        ref("Boolean", non_null=True), args={"id": ArgDef(ref("ID", non_null=True))}
                    ),
                    "createContact": FieldDef(
                        ref("Contact", non_null=True),
                        args={"input": ArgDef(ref("ContactInput", non_null=True))},
                    ),
                    "updateContact": FieldDef(
                        ref("Contact", non_null=True),
                        args={
                            "id": ArgDef(ref("ID", non_null=True)),
                            "input": ArgDef(ref("ContactPatch", non_null=True)),
                        },
                    ),
                    "deleteContact": FieldDef(
                        ref("Boolean", non_null=True), args={"id": ArgDef(ref("ID", non_null=True))}
                    ),
                    "createDeal": FieldDef(
                        ref("Deal", non_null=True),
                        args={"input": ArgDef(ref("DealInput", non_null=True))},
                    ),
                    "updateDeal": FieldDef(
                        ref("Deal", non_null=True),
                        args={
                            "id": ArgDef(ref("ID", non_null=True)),
                            "input": ArgDef(ref("DealPatch", non_null=True)),
                        },
                    ),
                    "deleteDeal": FieldDef(
                        ref("Boolean", non_null=True), args={"id": ArgDef(ref("ID", non_null=True))}
                    ),
                    "createEvent": FieldDef(
                        ref("CalendarEvent", non_null=True),
                        args={"input": ArgDef(ref("EventInput", non_null=True))},
                    ),
                    "createTask": FieldDef(
                        ref("Task", non_null=True),
                        args={"input": ArgDef(ref("TaskInput", non_null=True))},
                    ),
                    "updateTask": FieldDef(
                        ref("Task", non_null=True),
                        args={
                            "id": ArgDef(ref("ID", non_null=True)),
                            "input": ArgDef(ref("TaskPatch", non_null=True)),
                        },
                    ),
                    "moveTask": FieldDef(
                        ref("Task", non_null=True),
                        args={
                            "id": ArgDef(ref("ID", non_null=True)),
                            "toStageId": ArgDef(ref("ID")),
                            "beforeTaskId": ArgDef(ref("ID")),
                            "afterTaskId": ArgDef(ref("ID")),
                        },
                    ),
                    "deleteTask": FieldDef(
                        ref("Boolean", non_null=True), args={"id": ArgDef(ref("ID", non_null=True))}
                    ),
                },
            ),
            ObjectType(
                "Subscription",
                fields={
                    "activityCreated": FieldDef(ref("Activity", non_null=True)),
                    "taskChanged": FieldDef(ref("Task", non_null=True)),
                    "notification": FieldDef(ref("Activity", non_null=True)),
                },
            ),
        ],
        query_type="Query",
        mutation_type="Mutation",
        subscription_type="Subscription",
    )


def build_resolvers() -> dict:
    """Resolver table keyed by type then field; plain data fields fall back to
    the default camelCase-to-snake_case resolver."""

    def store_of(ctx):
        return ctx.service.store

    return {
        "Query": {
            "me": lambda p, a, ctx: ctx.service.me(ctx),
            "users": lambda p, a, ctx: ctx.service.users(ctx),
            "companies": lambda p, a, ctx: ctx.service.companies(
                ctx, a.get("filter"), a.get("page")
            ),
            "company": lambda p, a, ctx: ctx.service.company(ctx, a["id"]),
            "contacts": lambda p, a, ctx: ctx.service.contacts(ctx),
            "deals": lambda p, a, ctx: ctx.service.deals(ctx),
            "totals": lambda p, a, ctx: ctx.service.totals(ctx),
            "dealsChart": lambda p, a, ctx: ctx.service.deals_chart(ctx, a["months"]),
            "upcomingEvents": lambda p, a, ctx: ctx.service.upcoming_events(ctx, a["limit"]),
            "latestActivities": lambda p, a, ctx: ctx.service.latest_activities(ctx, a["limit"]),
            "taskStages": lambda p, a, ctx: ctx.service.task_stages(ctx),
            "tasks": lambda p, a, ctx: ctx.service.tasks(ctx),
        },
        "Mutation": {
            "signup": lambda p, a, ctx: ctx.service.signup(a["name"], a["email"], a["password"]),
            "login": lambda p, a, ctx: ctx.service.login(a["email"], a["password"]),
            "logout": lambda p, a, ctx: ctx.service.logout(ctx),
            "startRecovery": lambda p, a, ctx: ctx.service.start_recovery(a["email"]),
            "completeRecovery": lambda p, a, ctx: ctx.service.complete_recovery(
                a["token"], a["newPassword"]
            ),
            "updateProfile": lambda p, a, ctx: ctx.service.update_profile(
                ctx,
                name=a.get("name"),
                email=a.get("email"),
                job_title=a.get("jobTitle"),
                phone=a.get("phone"),
            ),
            "createCompany": lambda p, a, ctx: ctx.service.create_company(ctx, a["input"]),
            "updateCompany": lambda p, a, ctx: ctx.service.update_company(ctx, a["id"], a["input"]),
            "deleteCompany": lambda p, a, ctx: ctx.service.delete_company(ctx, a["id"]),
            "createContact": lambda p, a, ctx: ctx.service.create_contact(ctx, a["input"]),
            "updateContact": lambda p, a, ctx: ctx.service.update_contact(ctx, a["id"], a["input"]),
            "deleteContact": lambda p, a, ctx: ctx.service.delete_contact(ctx, a["id"]),
            "createDeal": lambda p, a, ctx: ctx.service.create_deal(ctx, a["input"]),
            "updateDeal": lambda p, a, ctx: ctx.service.update_deal(ctx, a["id"], a["input"]),
            "deleteDeal": lambda p, a, ctx: ctx.service.delete_deal(ctx, a["id"]),
            "createEvent": lambda p, a, ctx: ctx.service.create_event(ctx, a["input"]),
            "createTask": lambda p, a, ctx: ctx.service.create_task(ctx, a["input"]),
            "updateTask": lambda p, a, ctx: ctx.service.update_task(ctx, a["id"], a["input"]),
            "moveTask": lambda p, a, ctx: ctx.service.move_task(
                ctx, a["id"], a.get("toStageId"), a.get("beforeTaskId"), a.get("afterTaskId")
            ),
            "deleteTask": lambda p, a, ctx: ctx.service.delete_task(ctx, a["id"]),
        },
        "Company": {
            "salesOwner": lambda company, a, ctx: store_of(ctx).get("user", company.sales_owner_id),
            "openDealsAmount": lambda company, a, ctx: ctx.service.open_deals_amount_for(company.id),
        },
        "Contact": {
            "company": lambda contact, a, ctx: store_of(ctx).get("company", contact.company_id),
        },
        "Deal": {
            "company": lambda deal, a, ctx: store_of(ctx).get("company", deal.company_id),
        },
        "Task": {
            "assigneeIds": lambda task, a, ctx: sorted(task.assignee_ids),
            "assignees": lambda task, a, ctx: [
                u for u in (store_of(ctx).get("user", uid) for uid in sorted(task.assignee_ids)) if u
            ],
        },
    }
