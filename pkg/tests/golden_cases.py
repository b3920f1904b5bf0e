"""Golden corpus for the served schema: every case runs against a freshly
seeded store with a fixed clock, so responses are byte-stable. Mutation cases
select no random identifiers (created ids are random; seed ids are not).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from crm_forge.domain import derived_id

DEFAULT_NOW = "2024-07-15T12:00:00.000Z"

WALKER_ID = derived_id("company:Walker - Harris")
JOHNS_ID = derived_id("company:Johns Inc")
TODO_STAGE_ID = derived_id("task_stage:TODO")
TASK_B_ID = derived_id("task:Follow up with Walker - Harris")  # rank "b" in TODO
TASK_C_ID = derived_id("task:Prepare Q1 pipeline report")  # rank "c" in TODO
TASK_D_ID = derived_id("task:Update contact records")  # rank "d" in TODO
IN_REVIEW_TASK_ID = derived_id("task:Clean up duplicate leads")  # rank "b" in IN_REVIEW
OWNER_ID = derived_id("user:owner")
MISSING_ID = "00000000-0000-0000-0000-000000000000"


@dataclass
class GoldenCase:
    name: str
    query: str
    actor: Optional[str] = "admin"  # seed user slug or None for anonymous
    variables: dict = field(default_factory=dict)
    operation_name: Optional[str] = None
    now: str = DEFAULT_NOW
    max_depth: int = 15


def build_cases() -> list[GoldenCase]:
    return [
        # --- plain queries -------------------------------------------------
        GoldenCase("totals", "{ totals { companies contacts deals } }"),
        GoldenCase("demo_company_table", "{ companies { name openDealsAmount } }"),
        GoldenCase(
            "company_search_contains",
            '{ companies(filter: {nameContains: "walker"}) { name openDealsAmount } }',
        ),
        GoldenCase(
            "company_min_amount_filter",
            "{ companies(filter: {minOpenDealsAmount: 50000000}) { name } }",
        ),
        GoldenCase(
            "company_paging_and_sort",
            '{ companies(page: {offset: 2, limit: 3, sortField: "name", sortDir: ASC}) { name } }',
        ),
        GoldenCase(
            "company_by_id_nested_owner",
            '{ company(id: "%s") { name industry country totalRevenue salesOwner { name role email } } }'
            % WALKER_ID,
        ),
        GoldenCase("company_unknown_id", '{ company(id: "%s") { name } }' % MISSING_ID),
        GoldenCase(
            "contacts_nested_company",
            "{ contacts { name email company { name } } }",
        ),
        GoldenCase(
            "deals_with_stage",
            "{ deals { title value stage closedAt } }",
        ),
        GoldenCase("deals_chart_seven_months", "{ dealsChart(months: 7) { month revenue expenditure } }"),
        GoldenCase(
            "deals_chart_empty_window",
            "{ dealsChart(months: 2) { month revenue expenditure } }",
            now="2030-06-01T00:00:00.000Z",
        ),
        GoldenCase(
            "upcoming_events_at_anchor",
            "{ upcomingEvents(limit: 3) { title startsAt endsAt color } }",
            now="2024-01-01T00:00:00.000Z",
        ),
        GoldenCase("latest_activities", "{ latestActivities(limit: 5) { seq verb entityKind summary at } }"),
        GoldenCase("task_stages", "{ taskStages { title position } }"),
        GoldenCase("tasks_with_ranks", "{ tasks { title rank stageId dueDate } }"),
        GoldenCase("me_admin", "{ me { name email role jobTitle phone } }"),
        GoldenCase("me_viewer", "{ me { name role } }", actor="viewer"),
        GoldenCase("me_anonymous", "{ me { name } }", actor=None),
        GoldenCase("users_list", "{ users { name email role } }"),
        GoldenCase(
            "aliases_and_typename",
            '{ __typename counts: totals { __typename c: companies } first: companies(page: {limit: 1, sortField: "name", sortDir: ASC}) { label: name } }',
        ),
        GoldenCase(
            "variables_company_filter",
            "query Find($f: CompanyFilter) { companies(filter: $f) { name } }",
            variables={"f": {"nameContains": "inc"}},
        ),
        GoldenCase(
            "variable_default_used",
            "query Chart($m: Int! = 7) { dealsChart(months: $m) { month revenue } }",
        ),
        GoldenCase(
            "operation_name_selection",
            "query A { totals { companies } }\n\nquery B { totals { deals } }",
            operation_name="B",
        ),
        GoldenCase(
            "assignees_resolution",
            '{ tasks { title assignees { name } } }',
        ),
        GoldenCase(
            "multi_root_dashboard",
            "{ totals { companies } dealsChart(months: 1) { month revenue } latestActivities(limit: 1) { seq } }",
        ),
        # --- auth gates ----------------------------------------------------
        GoldenCase("unauthenticated_totals", "{ totals { companies } }", actor=None),
        GoldenCase(
            "viewer_delete_forbidden",
            'mutation { deleteCompany(id: "%s") }' % WALKER_ID,
            actor="viewer",
        ),
        # --- lexer errors ----------------------------------------------------
        GoldenCase("lex_unterminated_string", '{ companies(filter: {nameContains: "oops) { name } }'),
        GoldenCase("lex_illegal_character", "{ totals { companies % } }"),
        # --- parse errors ----------------------------------------------------
        GoldenCase("parse_fragment_unsupported", "{ ...frag }"),
        GoldenCase("parse_directive_unsupported", "{ totals @skip { companies } }"),
        GoldenCase("parse_empty_selection", "{ }"),
        GoldenCase("parse_missing_colon", "query($x Int) { totals { companies } }"),
        # --- validation errors ----------------------------------------------
        GoldenCase("validate_unknown_root_field", "{ bogus }"),
        GoldenCase("validate_unknown_nested_field", "{ companies { bogus } }"),
        GoldenCase("validate_leaf_with_selection", "{ totals { companies { x } } }"),
        GoldenCase("validate_composite_without_selection", "{ companies }"),
        GoldenCase("validate_unknown_argument", "{ totals(nope: 1) { companies } }"),
        GoldenCase("validate_missing_required_argument", "{ dealsChart { month } }"),
        GoldenCase("validate_bad_enum_literal", '{ companies(page: {sortDir: SIDEWAYS}) { name } }'),
        GoldenCase(
            "validate_undeclared_variable",
            "query($x: Int!) { dealsChart(months: $y) { month } }",
        ),
        GoldenCase(
            "validate_depth_exceeded",
            "{ contacts { company { salesOwner { name } } } }",
            max_depth=3,
        ),
        # --- execution-time request errors -----------------------------------
        GoldenCase(
            "exec_operation_name_required",
            "query A { totals { companies } }\n\nquery B { totals { deals } }",
        ),
        GoldenCase(
            "exec_operation_not_found",
            "query A { totals { companies } }",
            operation_name="Z",
        ),
        GoldenCase(
            "exec_variable_coercion_string_for_int",
            "query($n: Int!) { dealsChart(months: $n) { month } }",
            variables={"n": "5"},
        ),
        GoldenCase(
            "exec_missing_required_variable",
            "query($n: Int!) { dealsChart(months: $n) { month } }",
        ),
        GoldenCase("exec_subscription_over_http", "subscription { activityCreated { seq } }"),
        # --- resolver errors --------------------------------------------------
        GoldenCase(
            "resolver_not_found",
            'mutation { updateCompany(id: "%s", input: {industry: "X"}) { id } }' % MISSING_ID,
        ),
        GoldenCase(
            "resolver_validation_failed",
            'mutation { createCompany(input: {name: "  ", salesOwnerId: "%s", country: "USAA"}) { id } }'
            % OWNER_ID,
        ),
        GoldenCase(
            "resolver_bad_window",
            "{ dealsChart(months: 99) { month } }",
        ),
        # --- mutations (happy paths, volatile ids excluded) -------------------
        GoldenCase(
            "mutation_create_company",
            'mutation { createCompany(input: {name: "Golden Co", salesOwnerId: "%s", industry: "Testing", totalRevenue: 123456, country: "US"}) { name industry totalRevenue country createdAt } }'
            % OWNER_ID,
        ),
        GoldenCase(
            "mutation_update_company",
            'mutation { updateCompany(id: "%s", input: {industry: "Refit"}) { name industry updatedAt } }'
            % JOHNS_ID,
        ),
        GoldenCase("mutation_delete_company", 'mutation { deleteCompany(id: "%s") }' % JOHNS_ID),
        GoldenCase(
            "mutation_move_task_between_adjacent",
            'mutation { moveTask(id: "%s", toStageId: "%s", afterTaskId: "%s", beforeTaskId: "%s") { rank title } }'
            % (IN_REVIEW_TASK_ID, TODO_STAGE_ID, TASK_B_ID, TASK_C_ID),
        ),
        GoldenCase(
            "mutation_create_task_backlog",
            'mutation { createTask(input: {title: "Golden card"}) { title rank stageId createdAt } }',
        ),
        GoldenCase(
            "mutation_login_wrong_password",
            'mutation { login(email: "admin@crm-forge.test", password: "wrong") { token } }',
            actor=None,
        ),
        GoldenCase(
            "mutation_login_unknown_email",
            'mutation { login(email: "ghost@crm-forge.test", password: "wrong") { token } }',
            actor=None,
        ),
        GoldenCase(
            "mutation_signup_weak_password",
            'mutation { signup(name: "G", email: "g@x.test", password: "short") { id } }',
            actor=None,
        ),
        GoldenCase(
            "mutation_signup_ok",
            'mutation { signup(name: "Golden Person", email: "golden@x.test", password: "long-enough-pw") { name role createdAt } }',
            actor=None,
        ),
        GoldenCase(
            "mutation_update_profile",
            'mutation { updateProfile(jobTitle: "Golden Title") { name jobTitle } }',
            actor="viewer",
        ),
    ]


def run_case(case: GoldenCase):
    """Execute one golden case against a fresh seeded store."""
    from crm_forge.api import build_resolvers, build_schema
    from crm_forge.api.service import CrmService, RequestContext
    from crm_forge.domain import Timestamp
    from crm_forge.gql import run
    from crm_forge.seed import build_seed_fixture
    from crm_forge.store import Store

    store = Store(None)
    info = build_seed_fixture(store)
    now = Timestamp.parse(case.now)
    service = CrmService(store, clock=lambda: now)
    actor = None
    if case.actor is not None:
        actor_id = {"admin": info.admin_id, "owner": info.owner_id, "viewer": info.viewer_id}[case.actor]
        actor = store.get("user", actor_id)
    ctx = RequestContext(service=service, token=None, actor=actor)
    return run(
        case.query,
        build_schema(),
        build_resolvers(),
        variables=case.variables,
        operation_name=case.operation_name,
        context=ctx,
        max_depth=case.max_depth,
    )
