"""Core CRM entity types, validation, and shared value helpers.

Everything in this module is a plain value: entities are dataclasses with
explicit JSON codecs (``to_record`` / ``from_record``), money is integer USD
cents, and timestamps are millisecond-precision UTC instants. Mutation
serialization lives in the store, not here.
"""

from __future__ import annotations

import calendar
import re
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from functools import total_ordering
from typing import Iterable, Mapping, Optional

ID_RE = re.compile(r"^[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}$")
EMAIL_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")

# Seed identifiers are uuid5-derived from this namespace so repeated seeding
# is byte-identical.
SEED_NAMESPACE = uuid.uuid5(uuid.NAMESPACE_URL, "urn:crm-forge:seed")


def new_id() -> str:
    """Random 128-bit identifier in canonical hyphenated-hex form."""
    return str(uuid.uuid4())


def derived_id(name: str) -> str:
    """Deterministic identifier for seed fixtures (stable across runs)."""
    return str(uuid.uuid5(SEED_NAMESPACE, name))


def is_id(value: str) -> bool:
    return bool(ID_RE.match(value))


# ---------------------------------------------------------------------------
# Money: integer USD cents, rendered as $#,##0.00


def render_money(cents: int) -> str:
    sign = "-" if cents < 0 else ""
    magnitude = abs(cents)
    return f"{sign}${magnitude // 100:,}.{magnitude % 100:02d}"


_MONEY_RE = re.compile(r"^(-?)\$([0-9][0-9,]*)\.([0-9]{2})$")


def parse_money(text: str) -> int:
    m = _MONEY_RE.match(text)
    if not m:
        raise ValueError(f"not a money string: {text!r}")
    sign, dollars, cents = m.groups()
    value = int(dollars.replace(",", "")) * 100 + int(cents)
    return -value if sign else value


# ---------------------------------------------------------------------------
# Timestamp: UTC instant with millisecond precision


@total_ordering
@dataclass(frozen=True)
class Timestamp:
    """UTC instant stored as epoch milliseconds; renders as RFC 3339 with a
    ``Z`` suffix and exactly three fractional digits."""

    epoch_ms: int

    _RE = re.compile(
        r"^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})\.(\d{3})Z$"
    )

    @classmethod
    def parse(cls, text: str) -> "Timestamp":
        m = cls._RE.match(text)
        if not m:
            raise ValueError(f"not an RFC 3339 millisecond timestamp: {text!r}")
        y, mo, d, h, mi, s, ms = (int(g) for g in m.groups())
        secs = calendar.timegm((y, mo, d, h, mi, s))
        return cls(secs * 1000 + ms)

    @classmethod
    def from_datetime(cls, dt: datetime) -> "Timestamp":
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return cls(int(dt.timestamp() * 1000))

    @classmethod
    def now(cls) -> "Timestamp":
        return cls.from_datetime(datetime.now(timezone.utc))

    def render(self) -> str:
        secs, ms = divmod(self.epoch_ms, 1000)
        dt = datetime.fromtimestamp(secs, tz=timezone.utc)
        return dt.strftime("%Y-%m-%dT%H:%M:%S") + f".{ms:03d}Z"

    def add_ms(self, delta_ms: int) -> "Timestamp":
        return Timestamp(self.epoch_ms + delta_ms)

    def add_hours(self, hours: int) -> "Timestamp":
        return self.add_ms(hours * 3_600_000)

    def add_days(self, days: int) -> "Timestamp":
        return self.add_ms(days * 86_400_000)

    def month_key(self) -> str:
        """Calendar month in UTC, as ``YYYY-MM``."""
        secs, _ = divmod(self.epoch_ms, 1000)
        dt = datetime.fromtimestamp(secs, tz=timezone.utc)
        return f"{dt.year:04d}-{dt.month:02d}"

    def __lt__(self, other: "Timestamp") -> bool:
        return self.epoch_ms < other.epoch_ms

    def __str__(self) -> str:
        return self.render()


# ---------------------------------------------------------------------------
# Closed enumerations


class Role(str, Enum):
    ADMIN = "ADMIN"
    SALES_OWNER = "SALES_OWNER"
    VIEWER = "VIEWER"


class DealStage(str, Enum):
    NEW = "NEW"
    FOLLOW_UP = "FOLLOW_UP"
    UNDER_REVIEW = "UNDER_REVIEW"
    NEGOTIATION = "NEGOTIATION"
    WON = "WON"
    LOST = "LOST"


OPEN_STAGES = (DealStage.NEW, DealStage.FOLLOW_UP, DealStage.UNDER_REVIEW, DealStage.NEGOTIATION)
CLOSED_STAGES = (DealStage.WON, DealStage.LOST)


def is_open_stage(stage: DealStage) -> bool:
    return stage not in CLOSED_STAGES


class ActivityVerb(str, Enum):
    CREATE = "CREATE"
    UPDATE = "UPDATE"
    DELETE = "DELETE"
    MOVE = "MOVE"
    LOGIN = "LOGIN"


class EntityKind(str, Enum):
    COMPANY = "COMPANY"
    CONTACT = "CONTACT"
    DEAL = "DEAL"
    TASK = "TASK"
    EVENT = "EVENT"
    USER = "USER"


EVENT_COLORS = (
    "red", "orange", "yellow", "green", "teal", "blue", "purple", "pink",
)

ISO_COUNTRY_RE = re.compile(r"^[A-Z]{2}$")


# ---------------------------------------------------------------------------
# Entities


@dataclass
class UserAccount:
    id: str
    name: str
    email: str  # stored lowercase
    role: Role
    password_hash: dict  # opaque credential record, see auth module
    created_at: Timestamp
    job_title: Optional[str] = None
    phone: Optional[str] = None

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "email": self.email,
            "role": self.role.value,
            "password_hash": self.password_hash,
            "created_at": self.created_at.render(),
            "job_title": self.job_title,
            "phone": self.phone,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "UserAccount":
        return cls(
            id=rec["id"],
            name=rec["name"],
            email=rec["email"],
            role=Role(rec["role"]),
            password_hash=rec["password_hash"],
            created_at=Timestamp.parse(rec["created_at"]),
            job_title=rec.get("job_title"),
            phone=rec.get("phone"),
        )


@dataclass
class Company:
    id: str
    name: str
    sales_owner_id: str
    created_at: Timestamp
    updated_at: Timestamp
    industry: Optional[str] = None
    total_revenue: Optional[int] = None  # cents
    country: Optional[str] = None  # ISO 3166-1 alpha-2

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "sales_owner_id": self.sales_owner_id,
            "created_at": self.created_at.render(),
            "updated_at": self.updated_at.render(),
            "industry": self.industry,
            "total_revenue": self.total_revenue,
            "country": self.country,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Company":
        return cls(
            id=rec["id"],
            name=rec["name"],
            sales_owner_id=rec["sales_owner_id"],
            created_at=Timestamp.parse(rec["created_at"]),
            updated_at=Timestamp.parse(rec["updated_at"]),
            industry=rec.get("industry"),
            total_revenue=rec.get("total_revenue"),
            country=rec.get("country"),
        )


@dataclass
class Contact:
    id: str
    company_id: str
    name: str
    created_at: Timestamp
    email: Optional[str] = None
    phone: Optional[str] = None

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "company_id": self.company_id,
            "name": self.name,
            "created_at": self.created_at.render(),
            "email": self.email,
            "phone": self.phone,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Contact":
        return cls(
            id=rec["id"],
            company_id=rec["company_id"],
            name=rec["name"],
            created_at=Timestamp.parse(rec["created_at"]),
            email=rec.get("email"),
            phone=rec.get("phone"),
        )


@dataclass
class Deal:
    id: str
    company_id: str
    title: str
    value: int  # cents, >= 0
    stage: DealStage
    created_at: Timestamp
    updated_at: Timestamp
    closed_at: Optional[Timestamp] = None  # present iff stage is WON or LOST

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "company_id": self.company_id,
            "title": self.title,
            "value": self.value,
            "stage": self.stage.value,
            "created_at": self.created_at.render(),
            "updated_at": self.updated_at.render(),
            "closed_at": self.closed_at.render() if self.closed_at else None,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Deal":
        closed = rec.get("closed_at")
        return cls(
            id=rec["id"],
            company_id=rec["company_id"],
            title=rec["title"],
            value=rec["value"],
            stage=DealStage(rec["stage"]),
            created_at=Timestamp.parse(rec["created_at"]),
            updated_at=Timestamp.parse(rec["updated_at"]),
            closed_at=Timestamp.parse(closed) if closed else None,
        )


@dataclass
class CalendarEvent:
    id: str
    title: str
    starts_at: Timestamp
    ends_at: Timestamp
    color: str
    created_at: Timestamp

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "starts_at": self.starts_at.render(),
            "ends_at": self.ends_at.render(),
            "color": self.color,
            "created_at": self.created_at.render(),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "CalendarEvent":
        return cls(
            id=rec["id"],
            title=rec["title"],
            starts_at=Timestamp.parse(rec["starts_at"]),
            ends_at=Timestamp.parse(rec["ends_at"]),
            color=rec["color"],
            created_at=Timestamp.parse(rec["created_at"]),
        )


@dataclass
class Activity:
    """Append-only audit event. ``seq`` is assigned by the store at commit."""

    seq: int
    actor_id: str
    verb: ActivityVerb
    entity_kind: EntityKind
    entity_id: str
    summary: str
    at: Timestamp

    def to_record(self) -> dict:
        return {
            "seq": self.seq,
            "actor_id": self.actor_id,
            "verb": self.verb.value,
            "entity_kind": self.entity_kind.value,
            "entity_id": self.entity_id,
            "summary": self.summary,
            "at": self.at.render(),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Activity":
        return cls(
            seq=rec["seq"],
            actor_id=rec["actor_id"],
            verb=ActivityVerb(rec["verb"]),
            entity_kind=EntityKind(rec["entity_kind"]),
            entity_id=rec["entity_id"],
            summary=rec["summary"],
            at=Timestamp.parse(rec["at"]),
        )


@dataclass
class TaskStage:
    id: str
    title: str
    position: int

    def to_record(self) -> dict:
        return {"id": self.id, "title": self.title, "position": self.position}

    @classmethod
    def from_record(cls, rec: dict) -> "TaskStage":
        return cls(id=rec["id"], title=rec["title"], position=rec["position"])


DEFAULT_TASK_STAGES = (("TODO", 0), ("IN_PROGRESS", 1), ("IN_REVIEW", 2), ("DONE", 3))


@dataclass
class TaskCard:
    id: str
    title: str
    rank: str  # fractional-index string, unique within stage_id
    created_at: Timestamp
    updated_at: Timestamp
    stage_id: Optional[str] = None  # absent = unassigned backlog
    assignee_ids: frozenset[str] = field(default_factory=frozenset)
    description: Optional[str] = None
    due_date: Optional[Timestamp] = None

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "rank": self.rank,
            "created_at": self.created_at.render(),
            "updated_at": self.updated_at.render(),
            "stage_id": self.stage_id,
            "assignee_ids": sorted(self.assignee_ids),
            "description": self.description,
            "due_date": self.due_date.render() if self.due_date else None,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "TaskCard":
        due = rec.get("due_date")
        return cls(
            id=rec["id"],
            title=rec["title"],
            rank=rec["rank"],
            created_at=Timestamp.parse(rec["created_at"]),
            updated_at=Timestamp.parse(rec["updated_at"]),
            stage_id=rec.get("stage_id"),
            assignee_ids=frozenset(rec.get("assignee_ids", ())),
            description=rec.get("description"),
            due_date=Timestamp.parse(due) if due else None,
        )


@dataclass
class Session:
    token: str  # 256-bit random, base64url
    user_id: str
    created_at: Timestamp
    expires_at: Timestamp  # created_at + 24h

    def to_record(self) -> dict:
        return {
            "token": self.token,
            "user_id": self.user_id,
            "created_at": self.created_at.render(),
            "expires_at": self.expires_at.render(),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Session":
        return cls(
            token=rec["token"],
            user_id=rec["user_id"],
            created_at=Timestamp.parse(rec["created_at"]),
            expires_at=Timestamp.parse(rec["expires_at"]),
        )


@dataclass
class RecoveryToken:
    token: str
    user_id: str
    expires_at: Timestamp  # minted_at + 1h
    used: bool = False

    def to_record(self) -> dict:
        return {
            "token": self.token,
            "user_id": self.user_id,
            "expires_at": self.expires_at.render(),
            "used": self.used,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "RecoveryToken":
        return cls(
            token=rec["token"],
            user_id=rec["user_id"],
            expires_at=Timestamp.parse(rec["expires_at"]),
            used=rec["used"],
        )


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str
    message: str

    def to_payload(self) -> dict:
        return {"field": self.field, "rule": self.rule, "message": self.message}


@dataclass
class CompanyDraft:
    """A company before it has an identity; what create/update forms submit."""

    name: str
    sales_owner_id: str
    industry: Optional[str] = None
    total_revenue: Optional[int] = None
    country: Optional[str] = None


def validate_company(
    draft: CompanyDraft, users_by_id: Mapping[str, UserAccount] | None = None
) -> list[Violation]:
    """Check every Company invariant; violations are data, not errors.

    ``users_by_id`` supplies the referential context for the sales-owner rule;
    passing None skips that check (pure-shape validation).
    """
    violations: list[Violation] = []
    name = draft.name.strip() if isinstance(draft.name, str) else ""
    if not name:
        violations.append(Violation("name", "non-empty", "name must be non-empty after trimming"))
    elif len(name) > 200:
        violations.append(Violation("name", "max-length", "name must be at most 200 characters"))
    if users_by_id is not None:
        owner = users_by_id.get(draft.sales_owner_id)
        if owner is None:
            violations.append(
                Violation("sales_owner_id", "exists", "sales owner must be an existing user")
            )
        elif owner.role == Role.VIEWER:
            violations.append(
                Violation("sales_owner_id", "non-viewer", "sales owner must not have the VIEWER role")
            )
    if draft.country is not None and not ISO_COUNTRY_RE.match(draft.country):
        violations.append(
            Violation("country", "iso-3166-alpha-2", "country must be an ISO 3166-1 alpha-2 code")
        )
    if draft.total_revenue is not None and draft.total_revenue < 0:
        violations.append(
            Violation("total_revenue", "non-negative", "total revenue must not be negative")
        )
    if draft.industry is not None and len(draft.industry) > 200:
        violations.append(
            Violation("industry", "max-length", "industry must be at most 200 characters")
        )
    return violations


def open_deals_amount(company_id: str, deals: Iterable[Deal]) -> int:
    """Sum of ``value`` over the company's open-stage deals, in cents."""
    return sum(
        d.value for d in deals if d.company_id == company_id and is_open_stage(d.stage)
    )


__all__ = [
    "Activity",
    "ActivityVerb",
    "CalendarEvent",
    "Company",
    "CompanyDraft",
    "Contact",
    "DEFAULT_TASK_STAGES",
    "Deal",
    "DealStage",
    "EMAIL_RE",
    "EVENT_COLORS",
    "EntityKind",
    "ID_RE",
    "OPEN_STAGES",
    "Role",
    "SEED_NAMESPACE",
    "TaskCard",
    "TaskStage",
    "Timestamp",
    "UserAccount",
    "Violation",
    "derived_id",
    "is_id",
    "is_open_stage",
    "new_id",
    "open_deals_amount",
    "parse_money",
    "render_money",
    "replace",
    "validate_company",
]
