"""Fan-out hub for websocket subscriptions.

All hub methods run on the server's event loop (mutations execute in async
handlers, so publication happens post-commit on the same thread, preserving
store seq order per connection). Each connection owns a bounded frame queue;
overflow closes the socket with code 4408 rather than buffering unboundedly.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import dataclass, field
from typing import Any, Optional

from ..domain import Activity, EntityKind, TaskCard
from ..gql import SubscriptionPlan

QUEUE_LIMIT = 1024

TOPIC_ACTIVITY = "ACTIVITY"
TOPIC_TASK = "TASK"
TOPIC_NOTIFICATION = "NOTIFICATION"

CLOSE_PROTOCOL_ERROR = 4400
CLOSE_UNAUTHENTICATED = 4401
CLOSE_OVERFLOW = 4408
CLOSE_DUPLICATE_ID = 4409


@dataclass
class Subscription:
    id: str
    topic: str
    plan: SubscriptionPlan


@dataclass(eq=False)  # identity semantics so connections live in a set
class Connection:
    user_id: str
    queue: asyncio.Queue = field(default_factory=lambda: asyncio.Queue(maxsize=QUEUE_LIMIT))
    subscriptions: dict[str, Subscription] = field(default_factory=dict)
    overflowed: bool = False
    on_overflow: Optional[Any] = None  # zero-arg callable, invoked once

    def enqueue(self, frame: dict) -> bool:
        """Queue a frame for the writer task; False signals overflow."""
        if self.overflowed:
            return False
        try:
            self.queue.put_nowait(frame)
            return True
        except asyncio.QueueFull:
            self.overflowed = True
            if self.on_overflow is not None:
                self.on_overflow()
            return False


class SubscriptionHub:
    def __init__(self) -> None:
        self.connections: set[Connection] = set()

    def register(self, connection: Connection) -> None:
        self.connections.add(connection)

    def unregister(self, connection: Connection) -> None:
        self.connections.discard(connection)

    def add_subscription(self, connection: Connection, sub: Subscription) -> bool:
        if sub.id in connection.subscriptions:
            return False
        connection.subscriptions[sub.id] = sub
        return True

    def remove_subscription(self, connection: Connection, sub_id: str) -> None:
        connection.subscriptions.pop(sub_id, None)

    def publish(self, activity: Activity, task_payload: Optional[TaskCard] = None) -> None:
        """Deliver one committed activity to every matching live subscription.

        ACTIVITY gets every event, NOTIFICATION everything by other actors,
        and TASK fires with the full card when the entity is a task."""
        for connection in list(self.connections):
            for sub in list(connection.subscriptions.values()):
                if sub.topic == TOPIC_ACTIVITY:
                    event: Any = activity
                elif sub.topic == TOPIC_NOTIFICATION:
                    if connection.user_id == activity.actor_id:
                        continue
                    event = activity
                elif sub.topic == TOPIC_TASK:
                    if activity.entity_kind != EntityKind.TASK or task_payload is None:
                        continue
                    event = task_payload
                else:
                    continue
                payload = sub.plan.project(event)
                connection.enqueue({"id": sub.id, "type": "next", "payload": payload})


def frame_bytes(frame: dict) -> str:
    return json.dumps(frame, ensure_ascii=False, separators=(",", ":"))
