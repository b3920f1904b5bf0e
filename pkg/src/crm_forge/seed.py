"""Deterministic demo dataset.

Identifiers derive from a fixed namespace and every timestamp hangs off the
2024-01-01 anchor, so seeding an empty store twice produces byte-identical
snapshots. The seven companies and their open-deal amounts mirror the demo
company table shipped with the dashboard.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .auth import make_credential_record
from .domain import (
    Activity,
    ActivityVerb,
    CalendarEvent,
    Company,
    Contact,
    DEFAULT_TASK_STAGES,
    Deal,
    DealStage,
    EntityKind,
    EVENT_COLORS,
    OPEN_STAGES,
    Role,
    TaskCard,
    TaskStage,
    Timestamp,
    UserAccount,
    derived_id,
)
from .store import AppendActivity, Mutation, Put, SeedOnNonEmptyStore, Store

ANCHOR = Timestamp.parse("2024-01-01T00:00:00.000Z")

SEED_USERS = (
    # (slug, name, email, job title, phone, role, documented password)
    ("admin", "Alex Morgan", "admin@crm-forge.test", "Administrator", "+1-555-0100", Role.ADMIN, "admin-pass-2024"),
    ("owner", "Jordan Lee", "owner@crm-forge.test", "Lead Handler", "+1-555-0101", Role.SALES_OWNER, "owner-pass-2024"),
    ("viewer", "Riley Chen", "viewer@crm-forge.test", "Analyst", "+1-555-0102", Role.VIEWER, "viewer-pass-2024"),
)

# (company name, open deals amount in cents)
DEMO_COMPANIES = (
    ("Walker - Harris", 67_277_000),
    ("Johns Inc", 41_303_100),
    ("Macejkovic, Bayer and Bergnaum", 38_109_200),
    ("Leuschke - Pfeffer", 37_536_900),
    ("Friesen, Jaskolski and Gibson", 54_298_300),
    ("Block - Stanton", 32_424_200),
    ("Pollich - McClure", 44_760_200),
)

_INDUSTRIES = ("Logistics", "Finance", "Manufacturing", "Retail", "Healthcare", "Energy", "Software")
_COUNTRIES = ("US", "GB", "DE", "FR", "CA", "AU", "NL")

_CONTACT_NAMES = (
    "Noah Ward", "Mia Sutton", "Liam Poole", "Ella Frost", "Owen Hale",
    "Ivy Marsh", "Eli Burke", "Ruth Lane", "Max Snow", "Ada Wolfe",
    "Leo Quinn", "Zoe Hart", "Ian Cross", "Amy Reed",
)

_EVENT_TITLES = ("Quarterly planning", "Sales sync", "Product demo", "Board review", "Team offsite")

_TASK_TITLES = (
    "Follow up with Walker - Harris",
    "Prepare Q1 pipeline report",
    "Update contact records",
    "Draft proposal for Johns Inc",
    "Review lost deals",
    "Schedule product demo",
    "Clean up duplicate leads",
    "Plan outreach campaign",
    "Renew Block - Stanton contract",
    "Onboard new sales hire",
)

# cards per default stage, in stage order
_TASK_DISTRIBUTION = (3, 3, 2, 2)
_RANK_SEQUENCE = "bcdefghijklm"


@dataclass
class SeedInfo:
    admin_id: str
    owner_id: str
    viewer_id: str
    company_ids: list[str]
    stage_ids: list[str]
    last_seq: int


def _seed_salt(email: str) -> bytes:
    return hashlib.sha256(b"crm-forge-seed-salt:" + email.encode("utf-8")).digest()[:16]


def _slug(name: str) -> str:
    return "".join(ch for ch in name.lower().replace(" ", "-") if ch.isalnum() or ch == "-")


def build_seed_fixture(store: Store) -> SeedInfo:
    """Populate an empty store with the deterministic demo dataset.

    Raises SeedOnNonEmptyStore when any data already exists.
    """
    if not store.is_empty:
        raise SeedOnNonEmptyStore("seed requires an empty store")

    txn: list[Mutation] = []

    def created(actor_id: str, kind: EntityKind, entity_id: str, summary: str) -> None:
        txn.append(
            AppendActivity(
                Activity(
                    seq=0,
                    actor_id=actor_id,
                    verb=ActivityVerb.CREATE,
                    entity_kind=kind,
                    entity_id=entity_id,
                    summary=summary,
                    at=ANCHOR,
                )
            )
        )

    users: dict[str, UserAccount] = {}
    for slug, name, email, job_title, phone, role, password in SEED_USERS:
        user = UserAccount(
            id=derived_id(f"user:{slug}"),
            name=name,
            email=email,
            role=role,
            password_hash=make_credential_record(password, salt=_seed_salt(email)),
            created_at=ANCHOR,
            job_title=job_title,
            phone=phone,
        )
        users[slug] = user
        txn.append(Put("user", user))
    admin = users["admin"]
    owner = users["owner"]
    for user in users.values():
        created(admin.id, EntityKind.USER, user.id, f'created user account "{user.name}"')

    stage_ids = []
    for title, position in DEFAULT_TASK_STAGES:
        stage = TaskStage(id=derived_id(f"task_stage:{title}"), title=title, position=position)
        stage_ids.append(stage.id)
        txn.append(Put("task_stage", stage))

    company_ids = []
    for idx, (name, open_amount) in enumerate(DEMO_COMPANIES):
        company = Company(
            id=derived_id(f"company:{name}"),
            name=name,
            sales_owner_id=owner.id,
            created_at=ANCHOR,
            updated_at=ANCHOR,
            industry=_INDUSTRIES[idx],
            total_revenue=(idx + 1) * 100_000_000,
            country=_COUNTRIES[idx],
        )
        company_ids.append(company.id)
        txn.append(Put("company", company))
        created(admin.id, EntityKind.COMPANY, company.id, f'created company "{name}"')

        closed_at = Timestamp.parse(f"2024-{idx + 1:02d}-15T00:00:00.000Z")
        deals = (
            Deal(
                id=derived_id(f"deal:{name}:open"),
                company_id=company.id,
                title=f"{name} opportunity",
                value=open_amount,
                stage=OPEN_STAGES[idx % len(OPEN_STAGES)],
                created_at=ANCHOR,
                updated_at=ANCHOR,
            ),
            Deal(
                id=derived_id(f"deal:{name}:won"),
                company_id=company.id,
                title=f"{name} renewal",
                value=(idx + 1) * 1_000_000,
                stage=DealStage.WON,
                created_at=ANCHOR,
                updated_at=closed_at,
                closed_at=closed_at,
            ),
            Deal(
                id=derived_id(f"deal:{name}:lost"),
                company_id=company.id,
                title=f"{name} pilot",
                value=(idx + 1) * 500_000,
                stage=DealStage.LOST,
                created_at=ANCHOR,
                updated_at=closed_at,
                closed_at=closed_at,
            ),
        )
        for deal in deals:
            txn.append(Put("deal", deal))
            created(admin.id, EntityKind.DEAL, deal.id, f'created deal "{deal.title}"')

    for idx, (name, _) in enumerate(DEMO_COMPANIES):
        for j in range(2):
            contact_name = _CONTACT_NAMES[idx * 2 + j]
            contact = Contact(
                id=derived_id(f"contact:{name}:{j}"),
                company_id=company_ids[idx],
                name=contact_name,
                created_at=ANCHOR,
                email=f"{_slug(contact_name)}@{_slug(name)}.example",
                phone=f"+1-555-02{idx * 2 + j:02d}",
            )
            txn.append(Put("contact", contact))
            created(admin.id, EntityKind.CONTACT, contact.id, f'created contact "{contact.name}"')

    for i, title in enumerate(_EVENT_TITLES):
        starts = ANCHOR.add_days(i + 1)
        event = CalendarEvent(
            id=derived_id(f"event:{title}"),
            title=title,
            starts_at=starts,
            ends_at=starts.add_hours(1),
            color=EVENT_COLORS[i % len(EVENT_COLORS)],
            created_at=ANCHOR,
        )
        txn.append(Put("event", event))
        created(admin.id, EntityKind.EVENT, event.id, f'created event "{title}"')

    assignee_cycle = (
        frozenset({owner.id}),
        frozenset({admin.id}),
        frozenset({owner.id, admin.id}),
        frozenset(),
    )
    task_index = 0
    for stage_pos, count in enumerate(_TASK_DISTRIBUTION):
        for slot in range(count):
            title = _TASK_TITLES[task_index]
            task = TaskCard(
                id=derived_id(f"task:{title}"),
                title=title,
                rank=_RANK_SEQUENCE[slot],
                created_at=ANCHOR,
                updated_at=ANCHOR,
                stage_id=stage_ids[stage_pos],
                assignee_ids=assignee_cycle[task_index % len(assignee_cycle)],
                due_date=ANCHOR.add_days(task_index + 2) if task_index % 2 == 0 else None,
                description=f"Seed card {task_index + 1}" if task_index % 3 == 0 else None,
            )
            txn.append(Put("task", task))
            created(admin.id, EntityKind.TASK, task.id, f'created task "{title}"')
            task_index += 1

    last_seq = store.commit(txn)
    return SeedInfo(
        admin_id=admin.id,
        owner_id=owner.id,
        viewer_id=users["viewer"].id,
        company_ids=company_ids,
        stage_ids=stage_ids,
        last_seq=last_seq,
    )
