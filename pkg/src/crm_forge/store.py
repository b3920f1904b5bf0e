"""Embedded persistent store: per-kind collections, filtered/sorted/paged
queries, serialized transactional commits, an append-only activity log, and
durability via a write-ahead log plus snapshots.

Durability format under ``data_dir``:

* ``wal.log`` -- one JSON record per committed transaction, one per line,
  each ``{"seq": <last activity seq>, "txn": [<mutation>, ...]}``.
* ``snapshot.json`` -- full state dump, written atomically (temp + rename).

The WAL is replayed in full on open; replay is idempotent (puts are whole
record upserts, deletes of absent keys are no-ops, activities already covered
by the snapshot are skipped by seq), so a crash between snapshot write and
WAL truncation is harmless.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Iterable, Optional, Union

from .domain import (
    Activity,
    CalendarEvent,
    Company,
    Contact,
    Deal,
    RecoveryToken,
    Role,
    Session,
    TaskCard,
    TaskStage,
    Timestamp,
    UserAccount,
)

FORMAT_VERSION = 1

WAL_FILE = "wal.log"
SNAPSHOT_FILE = "snapshot.json"


class StoreError(Exception):
    pass


class IntegrityViolation(StoreError):
    pass


class StorageFailure(StoreError):
    pass


class VersionMismatch(StoreError):
    pass


class UnknownField(StoreError):
    pass


class BadOperator(StoreError):
    pass


class SeedOnNonEmptyStore(StoreError):
    pass


# kind -> (entity class, storage-key attribute)
ENTITY_KINDS: dict[str, tuple[type, str]] = {
    "user": (UserAccount, "id"),
    "company": (Company, "id"),
    "contact": (Contact, "id"),
    "deal": (Deal, "id"),
    "event": (CalendarEvent, "id"),
    "task": (TaskCard, "id"),
    "task_stage": (TaskStage, "id"),
    "session": (Session, "token"),
    "recovery_token": (RecoveryToken, "token"),
}

# Field type tags drive which filter operators are legal per field.
_T_TEXT = "text"
_T_MONEY = "money"
_T_TS = "timestamp"
_T_INT = "int"
_T_ID = "id"
_T_BOOL = "bool"

QUERYABLE_FIELDS: dict[str, dict[str, str]] = {
    "user": {
        "id": _T_ID, "name": _T_TEXT, "email": _T_TEXT, "role": _T_TEXT,
        "job_title": _T_TEXT, "phone": _T_TEXT, "created_at": _T_TS,
    },
    "company": {
        "id": _T_ID, "name": _T_TEXT, "sales_owner_id": _T_ID,
        "industry": _T_TEXT, "total_revenue": _T_MONEY, "country": _T_TEXT,
        "created_at": _T_TS, "updated_at": _T_TS,
    },
    "contact": {
        "id": _T_ID, "company_id": _T_ID, "name": _T_TEXT, "email": _T_TEXT,
        "phone": _T_TEXT, "created_at": _T_TS,
    },
    "deal": {
        "id": _T_ID, "company_id": _T_ID, "title": _T_TEXT, "value": _T_MONEY,
        "stage": _T_TEXT, "closed_at": _T_TS, "created_at": _T_TS, "updated_at": _T_TS,
    },
    "event": {
        "id": _T_ID, "title": _T_TEXT, "starts_at": _T_TS, "ends_at": _T_TS,
        "color": _T_TEXT, "created_at": _T_TS,
    },
    "task": {
        "id": _T_ID, "title": _T_TEXT, "description": _T_TEXT, "stage_id": _T_ID,
        "due_date": _T_TS, "rank": _T_TEXT, "created_at": _T_TS, "updated_at": _T_TS,
    },
    "task_stage": {"id": _T_ID, "title": _T_TEXT, "position": _T_INT},
    "session": {
        "token": _T_ID, "user_id": _T_ID, "created_at": _T_TS, "expires_at": _T_TS,
    },
    "recovery_token": {
        "token": _T_ID, "user_id": _T_ID, "expires_at": _T_TS, "used": _T_BOOL,
    },
}

# Default sort field when a Page does not name one.
_DEFAULT_SORT: dict[str, str] = {
    "task_stage": "position",
    "session": "created_at",
    "recovery_token": "expires_at",
}


class FilterOp(str, Enum):
    EQ = "EQ"
    CONTAINS = "CONTAINS"
    GTE = "GTE"
    LTE = "LTE"
    IN = "IN"


class SortDir(str, Enum):
    ASC = "ASC"
    DESC = "DESC"


@dataclass(frozen=True)
class Filter:
    field: str
    op: FilterOp
    value: Any


@dataclass(frozen=True)
class Page:
    offset: int = 0
    limit: int = 10
    sort_field: Optional[str] = None
    sort_dir: SortDir = SortDir.DESC


# --- transaction mutations --------------------------------------------------


@dataclass(frozen=True)
class Put:
    kind: str
    entity: Any


@dataclass(frozen=True)
class Delete:
    kind: str
    key: str


@dataclass(frozen=True)
class AppendActivity:
    activity: Activity  # seq is assigned at commit; incoming value is ignored


Mutation = Union[Put, Delete, AppendActivity]


@dataclass
class Snapshot:
    format_version: int
    entities: dict[str, list[dict]]
    activity_log: list[dict]
    next_seq: int

    def to_bytes(self) -> bytes:
        doc = {
            "format_version": self.format_version,
            "next_seq": self.next_seq,
            "entities": self.entities,
            "activity_log": self.activity_log,
        }
        return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def _normalize(value: Any) -> Any:
    """Collapse field values to comparable primitives for filtering/sorting."""
    if isinstance(value, Timestamp):
        return value.epoch_ms
    if isinstance(value, Enum):
        return value.value
    return value


def _normalize_filter_value(value: Any, type_tag: str) -> Any:
    if type_tag == _T_TS and isinstance(value, str):
        return Timestamp.parse(value).epoch_ms
    return _normalize(value)


class Store:
    """Single-writer embedded store. Pass ``data_dir=None`` for an ephemeral
    in-memory instance (tests, fixtures); otherwise commits are durable before
    they return."""

    def __init__(self, data_dir: Optional[Path] = None):
        self._data_dir = Path(data_dir) if data_dir is not None else None
        self._collections: dict[str, dict[str, Any]] = {k: {} for k in ENTITY_KINDS}
        self._activity_log: list[Activity] = []
        self._next_seq = 1
        self._lock = threading.RLock()
        self._wal_fh = None
        if self._data_dir is not None:
            try:
                self._data_dir.mkdir(parents=True, exist_ok=True)
                self._recover()
                self._wal_fh = open(self._wal_path, "ab")
            except OSError as exc:
                raise StorageFailure(f"cannot open data dir {self._data_dir}: {exc}") from exc

    # --- paths ---------------------------------------------------------

    @property
    def data_dir(self) -> Optional[Path]:
        return self._data_dir

    @property
    def _wal_path(self) -> Path:
        assert self._data_dir is not None
        return self._data_dir / WAL_FILE

    @property
    def _snapshot_path(self) -> Path:
        assert self._data_dir is not None
        return self._data_dir / SNAPSHOT_FILE

    # --- recovery ------------------------------------------------------

    def _recover(self) -> None:
        if self._snapshot_path.exists():
            snap = load_snapshot_file(self._snapshot_path)
            self._install_snapshot(snap)
        if self._wal_path.exists():
            self._replay_wal(self._wal_path)

    def _install_snapshot(self, snap: Snapshot) -> None:
        self._collections = {k: {} for k in ENTITY_KINDS}
        for kind, records in snap.entities.items():
            if kind not in ENTITY_KINDS:
                raise StorageFailure(f"snapshot contains unknown kind {kind!r}")
            cls, key_attr = ENTITY_KINDS[kind]
            for rec in records:
                entity = cls.from_record(rec)
                self._collections[kind][getattr(entity, key_attr)] = entity
        self._activity_log = [Activity.from_record(r) for r in snap.activity_log]
        self._next_seq = snap.next_seq

    def _replay_wal(self, path: Path) -> None:
        with open(path, "rb") as fh:
            lines = fh.read().split(b"\n")
        # Drop a trailing empty segment from the final newline.
        if lines and lines[-1] == b"":
            lines.pop()
        for i, raw in enumerate(lines):
            try:
                record = json.loads(raw.decode("utf-8"))
                txn = record["txn"]
            except (ValueError, KeyError) as exc:
                if i == len(lines) - 1:
                    # Torn final write from a crash; the txn never committed.
                    break
                raise StorageFailure(f"corrupt WAL record at line {i + 1}: {exc}") from exc
            self._apply_wal_txn(txn)

    def _apply_wal_txn(self, txn: list[dict]) -> None:
        for mut in txn:
            op = mut.get("op")
            if op == "put":
                kind = mut["kind"]
                cls, key_attr = ENTITY_KINDS[kind]
                entity = cls.from_record(mut["record"])
                self._collections[kind][getattr(entity, key_attr)] = entity
            elif op == "delete":
                self._collections[mut["kind"]].pop(mut["key"], None)
            elif op == "activity":
                activity = Activity.from_record(mut["record"])
                if activity.seq >= self._next_seq:
                    self._activity_log.append(activity)
                    self._next_seq = activity.seq + 1
            else:
                raise StorageFailure(f"unknown WAL mutation op {op!r}")

    # --- commit --------------------------------------------------------

    def commit(self, txn: list[Mutation]) -> int:
        """Apply a transaction all-or-nothing, durable before return.

        Returns the highest assigned activity seq (unchanged for txns that
        append no activity)."""
        with self._lock:
            if not txn:
                return self._next_seq - 1
            self._check_integrity(txn)
            seq = self._next_seq
            encoded: list[dict] = []
            applied: list[Mutation] = []
            for mut in txn:
                if isinstance(mut, Put):
                    if mut.kind not in ENTITY_KINDS:
                        raise IntegrityViolation(f"unknown entity kind {mut.kind!r}")
                    encoded.append({"op": "put", "kind": mut.kind, "record": mut.entity.to_record()})
                    applied.append(mut)
                elif isinstance(mut, Delete):
                    if mut.kind not in ENTITY_KINDS:
                        raise IntegrityViolation(f"unknown entity kind {mut.kind!r}")
                    encoded.append({"op": "delete", "kind": mut.kind, "key": mut.key})
                    applied.append(mut)
                elif isinstance(mut, AppendActivity):
                    stamped = Activity(
                        seq=seq,
                        actor_id=mut.activity.actor_id,
                        verb=mut.activity.verb,
                        entity_kind=mut.activity.entity_kind,
                        entity_id=mut.activity.entity_id,
                        summary=mut.activity.summary,
                        at=mut.activity.at,
                    )
                    seq += 1
                    encoded.append({"op": "activity", "record": stamped.to_record()})
                    applied.append(AppendActivity(stamped))
                else:
                    raise IntegrityViolation(f"unknown mutation type {type(mut).__name__}")
            last_seq = seq - 1
            self._write_wal_record({"seq": last_seq, "txn": encoded})
            for mut in applied:
                if isinstance(mut, Put):
                    _, key_attr = ENTITY_KINDS[mut.kind]
                    self._collections[mut.kind][getattr(mut.entity, key_attr)] = mut.entity
                elif isinstance(mut, Delete):
                    self._collections[mut.kind].pop(mut.key, None)
                else:
                    self._activity_log.append(mut.activity)
            self._next_seq = seq
            return last_seq

    def _write_wal_record(self, record: dict) -> None:
        if self._wal_fh is None:
            return
        line = (json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")
        try:
            self._wal_fh.write(line)
            self._wal_fh.flush()
            os.fsync(self._wal_fh.fileno())
        except OSError as exc:
            raise StorageFailure(f"WAL append failed: {exc}") from exc

    # --- integrity -----------------------------------------------------

    def _check_integrity(self, txn: list[Mutation]) -> None:
        """Validate the post-txn state against the pre-state plus overlay."""
        overlay: dict[str, dict[str, Any]] = {}

        def coll(kind: str) -> dict[str, Any]:
            if kind not in overlay:
                overlay[kind] = dict(self._collections.get(kind, {}))
            return overlay[kind]

        for mut in txn:
            if isinstance(mut, Put):
                if mut.kind not in ENTITY_KINDS:
                    raise IntegrityViolation(f"unknown entity kind {mut.kind!r}")
                _, key_attr = ENTITY_KINDS[mut.kind]
                coll(mut.kind)[getattr(mut.entity, key_attr)] = mut.entity
            elif isinstance(mut, Delete):
                if mut.kind not in ENTITY_KINDS:
                    raise IntegrityViolation(f"unknown entity kind {mut.kind!r}")
                coll(mut.kind).pop(mut.key, None)

        def view(kind: str) -> dict[str, Any]:
            return overlay.get(kind, self._collections[kind])

        users = view("user")
        companies = view("company")
        stages = view("task_stage")

        emails_seen: dict[str, str] = {}
        for user in users.values():
            lowered = user.email.lower()
            other = emails_seen.get(lowered)
            if other is not None and other != user.id:
                raise IntegrityViolation(f"email {user.email!r} is not unique")
            emails_seen[lowered] = user.id

        for company in companies.values():
            owner = users.get(company.sales_owner_id)
            if owner is None:
                raise IntegrityViolation(
                    f"company {company.name!r} references missing sales owner {company.sales_owner_id}"
                )
            if owner.role == Role.VIEWER:
                raise IntegrityViolation(
                    f"company {company.name!r} sales owner must not be a VIEWER"
                )

        for contact in view("contact").values():
            if contact.company_id not in companies:
                raise IntegrityViolation(
                    f"contact {contact.name!r} references missing company {contact.company_id}"
                )

        for deal in view("deal").values():
            if deal.company_id not in companies:
                raise IntegrityViolation(
                    f"deal {deal.title!r} references missing company {deal.company_id}"
                )

        ranks_seen: dict[tuple[Optional[str], str], str] = {}
        for task in view("task").values():
            if task.stage_id is not None and task.stage_id not in stages:
                raise IntegrityViolation(
                    f"task {task.title!r} references missing stage {task.stage_id}"
                )
            for assignee in task.assignee_ids:
                if assignee not in users:
                    raise IntegrityViolation(
                        f"task {task.title!r} references missing assignee {assignee}"
                    )
            rank_key = (task.stage_id, task.rank)
            other = ranks_seen.get(rank_key)
            if other is not None and other != task.id:
                raise IntegrityViolation(
                    f"duplicate rank {task.rank!r} within stage {task.stage_id}"
                )
            ranks_seen[rank_key] = task.id

        for session in view("session").values():
            if session.user_id not in users:
                raise IntegrityViolation("session references missing user")
        for token in view("recovery_token").values():
            if token.user_id not in users:
                raise IntegrityViolation("recovery token references missing user")

    # --- reads ---------------------------------------------------------

    def get(self, kind: str, key: str) -> Any:
        if kind not in ENTITY_KINDS:
            raise UnknownField(f"unknown entity kind {kind!r}")
        with self._lock:
            return self._collections[kind].get(key)

    def all(self, kind: str) -> list[Any]:
        if kind not in ENTITY_KINDS:
            raise UnknownField(f"unknown entity kind {kind!r}")
        with self._lock:
            return list(self._collections[kind].values())

    def count(self, kind: str) -> int:
        with self._lock:
            return len(self._collections[kind])

    @property
    def is_empty(self) -> bool:
        with self._lock:
            return self._next_seq == 1 and all(not c for c in self._collections.values())

    @property
    def last_seq(self) -> int:
        return self._next_seq - 1

    def query(
        self, kind: str, filters: Iterable[Filter] = (), page: Page = Page()
    ) -> tuple[list[Any], int]:
        """Conjunction of filters, stable sort (ties by storage key ascending),
        then paging. The returned total ignores paging."""
        if kind not in QUERYABLE_FIELDS:
            raise UnknownField(f"unknown entity kind {kind!r}")
        fields = QUERYABLE_FIELDS[kind]
        _, key_attr = ENTITY_KINDS[kind]
        compiled = [self._compile_filter(kind, f, fields) for f in filters]
        rows = self.all(kind)
        for predicate in compiled:
            rows = [r for r in rows if predicate(r)]
        sort_field = page.sort_field or _DEFAULT_SORT.get(kind, "created_at")
        if sort_field not in fields:
            raise UnknownField(f"unknown sort field {sort_field!r} for {kind}")
        rows.sort(key=lambda r: getattr(r, key_attr))
        reverse = page.sort_dir == SortDir.DESC

        def sort_key(row: Any) -> tuple:
            value = _normalize(getattr(row, sort_field))
            # Missing values sort as smallest; reverse sorting is stable, so
            # ties keep the storage-key-ascending order from the first pass.
            return (0, 0) if value is None else (1, value)

        rows.sort(key=sort_key, reverse=reverse)
        total = len(rows)
        offset = max(page.offset, 0)
        limit = min(max(page.limit, 1), 100)
        return rows[offset : offset + limit], total

    def _compile_filter(
        self, kind: str, flt: Filter, fields: dict[str, str]
    ) -> Callable[[Any], bool]:
        if flt.field not in fields:
            raise UnknownField(f"unknown field {flt.field!r} for {kind}")
        tag = fields[flt.field]
        name = flt.field
        if flt.op == FilterOp.EQ:
            wanted = _normalize_filter_value(flt.value, tag)
            return lambda row: _normalize(getattr(row, name)) == wanted
        if flt.op == FilterOp.CONTAINS:
            if tag != _T_TEXT:
                raise BadOperator(f"CONTAINS requires a text field, {name} is {tag}")
            needle = str(flt.value).lower()
            return lambda row: (
                getattr(row, name) is not None and needle in str(getattr(row, name)).lower()
            )
        if flt.op in (FilterOp.GTE, FilterOp.LTE):
            if tag not in (_T_MONEY, _T_TS, _T_INT):
                raise BadOperator(f"{flt.op.value} requires an ordered field, {name} is {tag}")
            bound = _normalize_filter_value(flt.value, tag)
            if flt.op == FilterOp.GTE:
                return lambda row: (
                    _normalize(getattr(row, name)) is not None
                    and _normalize(getattr(row, name)) >= bound
                )
            return lambda row: (
                _normalize(getattr(row, name)) is not None
                and _normalize(getattr(row, name)) <= bound
            )
        if flt.op == FilterOp.IN:
            if not isinstance(flt.value, (list, tuple, set, frozenset)):
                raise BadOperator("IN requires a list value")
            wanted_set = {_normalize_filter_value(v, tag) for v in flt.value}
            return lambda row: _normalize(getattr(row, name)) in wanted_set
        raise BadOperator(f"unsupported operator {flt.op!r}")

    def activities_after(self, seq: int, limit: int = 100) -> list[Activity]:
        """Activities with seq strictly greater than ``seq``, ascending."""
        with self._lock:
            # The log is contiguous from seq 1, so the slice starts at index `seq`.
            start = max(seq, 0)
            return self._activity_log[start : start + max(limit, 0)]

    def latest_activities(self, limit: int) -> list[Activity]:
        with self._lock:
            if limit <= 0:
                return []
            return list(reversed(self._activity_log[-limit:]))

    # --- snapshots -----------------------------------------------------

    def snapshot(self) -> Snapshot:
        with self._lock:
            entities = {}
            for kind in sorted(ENTITY_KINDS):
                _, key_attr = ENTITY_KINDS[kind]
                rows = sorted(self._collections[kind].values(), key=lambda e: getattr(e, key_attr))
                entities[kind] = [e.to_record() for e in rows]
            return Snapshot(
                format_version=FORMAT_VERSION,
                entities=entities,
                activity_log=[a.to_record() for a in self._activity_log],
                next_seq=self._next_seq,
            )

    def snapshot_save(self, path: Optional[Path] = None) -> Path:
        """Write a snapshot atomically. With no explicit path, writes to the
        data dir and truncates the WAL (its txns are now in the snapshot)."""
        in_place = path is None
        if in_place:
            if self._data_dir is None:
                raise StorageFailure("in-memory store has no snapshot path")
            path = self._snapshot_path
        data = self.snapshot().to_bytes()
        _atomic_write(Path(path), data)
        if in_place and self._wal_fh is not None:
            with self._lock:
                self._wal_fh.close()
                _atomic_write(self._wal_path, b"")
                self._wal_fh = open(self._wal_path, "ab")
        return Path(path)

    def close(self) -> None:
        if self._wal_fh is not None:
            self._wal_fh.close()
            self._wal_fh = None


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except OSError as exc:
        raise StorageFailure(f"atomic write to {path} failed: {exc}") from exc


def load_snapshot_file(path: Path) -> Snapshot:
    try:
        with open(path, "rb") as fh:
            doc = json.loads(fh.read().decode("utf-8"))
    except OSError as exc:
        raise StorageFailure(f"cannot read snapshot {path}: {exc}") from exc
    except ValueError as exc:
        raise StorageFailure(f"corrupt snapshot {path}: {exc}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise StorageFailure(f"snapshot {path} is missing format_version")
    if doc["format_version"] != FORMAT_VERSION:
        raise VersionMismatch(
            f"snapshot format {doc['format_version']} != supported {FORMAT_VERSION}"
        )
    try:
        return Snapshot(
            format_version=doc["format_version"],
            entities=doc["entities"],
            activity_log=doc["activity_log"],
            next_seq=doc["next_seq"],
        )
    except KeyError as exc:
        raise StorageFailure(f"snapshot {path} is missing field {exc}") from exc


def store_from_snapshot_file(path: Path) -> Store:
    """Load a snapshot written by ``snapshot_save`` into a fresh in-memory store."""
    snap = load_snapshot_file(path)
    store = Store(None)
    store._install_snapshot(snap)
    return store


def replace_ranks_txn(store: Store, rank_maker: Callable[[int], list[str]]) -> list[Mutation]:
    """Rebalance maintenance: one Put per task whose rank changes, assigning
    ``rank_maker(n)`` values in the existing order within each stage."""
    from dataclasses import replace as dc_replace

    by_stage: dict[Optional[str], list] = {}
    for task in store.all("task"):
        by_stage.setdefault(task.stage_id, []).append(task)
    txn: list[Mutation] = []
    for tasks in by_stage.values():
        tasks.sort(key=lambda t: t.rank)
        for task, fresh in zip(tasks, rank_maker(len(tasks))):
            if task.rank != fresh:
                txn.append(Put("task", dc_replace(task, rank=fresh)))
    return txn
