"""Authentication, session management, password recovery, and the RBAC
decision function.

Passwords are hashed with salted PBKDF2-HMAC-SHA256 (120k iterations); session
and recovery tokens are 256-bit random base64url strings stored server-side so
revocation is a plain delete. Recovery tokens surface through a local outbox
file instead of mail delivery, keeping tests hermetic.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Optional

from .domain import (
    EMAIL_RE,
    Activity,
    ActivityVerb,
    EntityKind,
    RecoveryToken,
    Role,
    Session,
    Timestamp,
    UserAccount,
    Violation,
    new_id,
    replace,
)
from .errors import (
    EmailTaken,
    Forbidden,
    InvalidCredentials,
    InvalidToken,
    ValidationFailed,
    WeakPassword,
)
from .store import AppendActivity, Delete, Put, Store

PBKDF2_ITERATIONS = 120_000
SCHEME_ID = "pbkdf2-sha256"

SESSION_TTL_HOURS = 24
RECOVERY_TTL_HOURS = 1
MIN_PASSWORD_LENGTH = 8

OUTBOX_FILE = "recovery-outbox.jsonl"


def make_credential_record(password: str, salt: Optional[bytes] = None) -> dict:
    """Salted, iterated credential record; never stores plaintext."""
    if salt is None:
        salt = secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, PBKDF2_ITERATIONS)
    return {
        "scheme_id": SCHEME_ID,
        "iterations": PBKDF2_ITERATIONS,
        "salt": salt.hex(),
        "hash": digest.hex(),
    }


def verify_password(password: str, record: dict) -> bool:
    if record.get("scheme_id") != SCHEME_ID:
        return False
    digest = hashlib.pbkdf2_hmac(
        "sha256", password.encode("utf-8"), bytes.fromhex(record["salt"]), record["iterations"]
    )
    return hmac.compare_digest(digest.hex(), record["hash"])


def new_token() -> str:
    """256-bit random value as a base64url string."""
    return secrets.token_urlsafe(32)


# ---------------------------------------------------------------------------
# RBAC


class Action(str, Enum):
    READ = "READ"
    CREATE = "CREATE"
    UPDATE = "UPDATE"
    DELETE = "DELETE"
    MOVE = "MOVE"


class Decision(str, Enum):
    ALLOW = "ALLOW"
    DENY = "DENY"
    OWNED_ONLY = "OWNED_ONLY"


_CREATABLE_BY_SALES_OWNER = {
    EntityKind.COMPANY,
    EntityKind.CONTACT,
    EntityKind.DEAL,
    EntityKind.TASK,
    EntityKind.EVENT,
}


def rbac_decision(role: Role, action: Action, kind: EntityKind) -> Decision:
    """The total RBAC matrix: every (role, action, kind) resolves."""
    if role == Role.ADMIN:
        return Decision.ALLOW
    if action == Action.READ:
        return Decision.ALLOW
    if role == Role.VIEWER:
        return Decision.DENY
    # SALES_OWNER
    if action == Action.CREATE:
        return Decision.ALLOW if kind in _CREATABLE_BY_SALES_OWNER else Decision.DENY
    return Decision.OWNED_ONLY


def authorize(
    actor: UserAccount,
    action: Action,
    resource_kind: EntityKind,
    resource_owner_id: Optional[str] = None,
) -> bool:
    """Pure allow/deny decision. Ownership semantics per kind: companies own
    by sales_owner_id, contacts and deals by the owning company's sales owner,
    tasks by assignee membership, users by themselves; events are ownerless."""
    decision = rbac_decision(actor.role, action, resource_kind)
    if decision == Decision.ALLOW:
        return True
    if decision == Decision.DENY:
        return False
    return resource_owner_id is not None and resource_owner_id == actor.id


# ---------------------------------------------------------------------------
# Auth service


def _validate_profile_fields(
    name: Optional[str], email: Optional[str], job_title: Optional[str], phone: Optional[str]
) -> list[Violation]:
    violations = []
    if name is not None:
        if not name.strip():
            violations.append(Violation("name", "non-empty", "name must be non-empty"))
        elif len(name) > 120:
            violations.append(Violation("name", "max-length", "name must be at most 120 characters"))
    if email is not None and not EMAIL_RE.match(email):
        violations.append(Violation("email", "format", "email must look like an address"))
    if job_title is not None and len(job_title) > 120:
        violations.append(
            Violation("job_title", "max-length", "job title must be at most 120 characters")
        )
    if phone is not None and len(phone) > 32:
        violations.append(Violation("phone", "max-length", "phone must be at most 32 characters"))
    return violations


@dataclass
class OutboxEntry:
    email: str
    token: str
    expires_at: Timestamp

    def to_record(self) -> dict:
        return {"email": self.email, "token": self.token, "expires_at": self.expires_at.render()}


class AuthService:
    """Signup/login/logout, recovery, and profile updates over a store.

    ``clock`` is injectable for deterministic tests. Recovery tokens are
    appended to ``<data_dir>/recovery-outbox.jsonl`` when the store is
    durable, and always kept on ``self.outbox`` for inspection.
    """

    def __init__(self, store: Store, clock: Callable[[], Timestamp] = Timestamp.now):
        self.store = store
        self.clock = clock
        self.outbox: list[OutboxEntry] = []

    # --- helpers ---------------------------------------------------------

    def _find_user_by_email(self, email: str) -> Optional[UserAccount]:
        lowered = email.lower()
        for user in self.store.all("user"):
            if user.email == lowered:
                return user
        return None

    def authenticate(self, token: Optional[str]) -> Optional[UserAccount]:
        """Resolve a bearer token to a live user; expired sessions never
        authenticate."""
        if not token:
            return None
        session = self.store.get("session", token)
        if session is None or session.expires_at <= self.clock():
            return None
        return self.store.get("user", session.user_id)

    def _user_activity(
        self, actor_id: str, verb: ActivityVerb, user_id: str, summary: str
    ) -> AppendActivity:
        return AppendActivity(
            Activity(
                seq=0,
                actor_id=actor_id,
                verb=verb,
                entity_kind=EntityKind.USER,
                entity_id=user_id,
                summary=summary,
                at=self.clock(),
            )
        )

    # --- operations ------------------------------------------------------

    def signup(self, name: str, email: str, password: str) -> UserAccount:
        if len(password) < MIN_PASSWORD_LENGTH:
            raise WeakPassword()
        violations = _validate_profile_fields(name, email, None, None)
        if violations:
            raise ValidationFailed(violations)
        if self._find_user_by_email(email) is not None:
            raise EmailTaken()
        now = self.clock()
        user = UserAccount(
            id=new_id(),
            name=name,
            email=email.lower(),
            role=Role.VIEWER,
            password_hash=make_credential_record(password),
            created_at=now,
        )
        self.store.commit(
            [
                Put("user", user),
                self._user_activity(
                    user.id, ActivityVerb.CREATE, user.id, f'created user account "{user.name}"'
                ),
            ]
        )
        return user

    def login(self, email: str, password: str) -> tuple[Session, UserAccount]:
        user = self._find_user_by_email(email)
        if user is None:
            # Burn comparable work so unknown email and wrong password are
            # indistinguishable in shape and roughly in timing.
            verify_password(password, make_credential_record("decoy-password"))
            raise InvalidCredentials()
        if not verify_password(password, user.password_hash):
            raise InvalidCredentials()
        now = self.clock()
        session = Session(
            token=new_token(),
            user_id=user.id,
            created_at=now,
            expires_at=now.add_hours(SESSION_TTL_HOURS),
        )
        self.store.commit(
            [
                Put("session", session),
                self._user_activity(user.id, ActivityVerb.LOGIN, user.id, "logged in"),
            ]
        )
        return session, user

    def logout(self, token: str) -> bool:
        session = self.store.get("session", token)
        if session is None:
            return False
        self.store.commit(
            [
                Delete("session", token),
                self._user_activity(
                    session.user_id, ActivityVerb.LOGIN, session.user_id, "logged out"
                ),
            ]
        )
        return True

    def start_recovery(self, email: str) -> None:
        """Always succeeds from the caller's point of view; a token is minted
        only for known accounts and surfaces via the outbox."""
        user = self._find_user_by_email(email)
        if user is None:
            return
        token = RecoveryToken(
            token=new_token(),
            user_id=user.id,
            expires_at=self.clock().add_hours(RECOVERY_TTL_HOURS),
        )
        self.store.commit([Put("recovery_token", token)])
        entry = OutboxEntry(email=user.email, token=token.token, expires_at=token.expires_at)
        self.outbox.append(entry)
        if self.store.data_dir is not None:
            path = Path(self.store.data_dir) / OUTBOX_FILE
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry.to_record(), sort_keys=True) + "\n")

    def complete_recovery(self, token: str, new_password: str) -> None:
        record = self.store.get("recovery_token", token)
        if record is None or record.used or record.expires_at <= self.clock():
            raise InvalidToken()
        if len(new_password) < MIN_PASSWORD_LENGTH:
            raise WeakPassword()
        user = self.store.get("user", record.user_id)
        if user is None:
            raise InvalidToken()
        updated_user = replace(user, password_hash=make_credential_record(new_password))
        txn = [
            Put("user", updated_user),
            Put("recovery_token", replace(record, used=True)),
        ]
        # Password reset revokes every live session of the user.
        for session in self.store.all("session"):
            if session.user_id == user.id:
                txn.append(Delete("session", session.token))
        txn.append(
            self._user_activity(user.id, ActivityVerb.UPDATE, user.id, "reset password")
        )
        self.store.commit(txn)

    def update_profile(
        self,
        actor: UserAccount,
        name: Optional[str] = None,
        email: Optional[str] = None,
        job_title: Optional[str] = None,
        phone: Optional[str] = None,
        role: Optional[Role] = None,
    ) -> UserAccount:
        """Self-service account settings. Only the four profile fields are
        mutable by the owner; a role change requires ADMIN."""
        if role is not None and actor.role != Role.ADMIN:
            raise Forbidden("role changes require an administrator")
        violations = _validate_profile_fields(name, email, job_title, phone)
        if violations:
            raise ValidationFailed(violations)
        updated = actor
        if name is not None:
            updated = replace(updated, name=name)
        if email is not None:
            lowered = email.lower()
            existing = self._find_user_by_email(lowered)
            if existing is not None and existing.id != actor.id:
                raise EmailTaken()
            updated = replace(updated, email=lowered)
        if job_title is not None:
            updated = replace(updated, job_title=job_title)
        if phone is not None:
            updated = replace(updated, phone=phone)
        if role is not None:
            updated = replace(updated, role=role)
        self.store.commit(
            [
                Put("user", updated),
                self._user_activity(
                    actor.id, ActivityVerb.UPDATE, actor.id, f'updated profile "{updated.name}"'
                ),
            ]
        )
        return updated
