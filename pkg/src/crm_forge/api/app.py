"""HTTP and websocket service boundary.

Routes: ``POST /graphql`` (JSON request/response; 400 only for malformed
bodies, auth failures ride inside GraphQL ``errors``), ``GET /healthz``,
``GET /schema.graphql`` (SDL text), and the ``graphql-transport-ws``
subprotocol on ``GET /graphql`` upgrades.

Close codes: 4400 protocol error (including subscribe before init and
duplicate init), 4401 unauthenticated, 4408 slow-consumer overflow, 4409
duplicate subscription id.
"""

from __future__ import annotations

import asyncio
import json
import logging
from typing import Optional

from starlette.applications import Starlette
from starlette.middleware import Middleware
from starlette.middleware.cors import CORSMiddleware
from starlette.requests import Request
from starlette.responses import JSONResponse, PlainTextResponse
from starlette.routing import Route, WebSocketRoute
from starlette.websockets import WebSocket, WebSocketDisconnect

from ..domain import Timestamp
from ..gql import (
    GqlError,
    GqlResponse,
    LexError,
    MultipleRootFields,
    OperationNotFound,
    ParseError,
    UnknownSubscriptionField,
    VariableCoercionError,
    parse_source,
    render_sdl,
    resolve_subscription,
    run,
    validate,
)
from ..store import Store
from .hub import (
    CLOSE_DUPLICATE_ID,
    CLOSE_OVERFLOW,
    CLOSE_PROTOCOL_ERROR,
    CLOSE_UNAUTHENTICATED,
    Connection,
    Subscription,
    SubscriptionHub,
    frame_bytes,
)
from .schema import SUBSCRIPTION_TOPICS, build_resolvers, build_schema
from .service import CrmService, RequestContext

log = logging.getLogger("crm_forge.api")

WS_SUBPROTOCOL = "graphql-transport-ws"


def create_app(
    store: Store,
    clock=Timestamp.now,
    cors_allowlist: Optional[list[str]] = None,
    max_query_depth: int = 15,
) -> Starlette:
    schema = build_schema()
    resolvers = build_resolvers()
    hub = SubscriptionHub()
    service = CrmService(store, clock=clock, publisher=hub.publish)
    sdl = render_sdl(schema)

    def make_context(token: Optional[str]) -> RequestContext:
        return RequestContext(service=service, token=token, actor=service.authenticate(token))

    def bearer_token(request) -> Optional[str]:
        header = request.headers.get("authorization", "")
        if header.lower().startswith("bearer "):
            return header[7:].strip()
        return None

    async def graphql_http(request: Request):
        try:
            body = json.loads(await request.body())
            if not isinstance(body, dict) or not isinstance(body.get("query"), str):
                raise ValueError("body must be a JSON object with a string 'query'")
            variables = body.get("variables") or {}
            if not isinstance(variables, dict):
                raise ValueError("'variables' must be a JSON object")
        except ValueError as exc:
            return JSONResponse(
                {"errors": [{"message": f"malformed request body: {exc}"}]}, status_code=400
            )
        response = run(
            body["query"],
            schema,
            resolvers,
            variables=variables,
            operation_name=body.get("operationName"),
            context=make_context(bearer_token(request)),
            max_depth=max_query_depth,
        )
        return JSONResponse(response.to_payload())

    async def healthz(request: Request):
        return JSONResponse({"status": "ok", "seq": store.last_seq})

    async def schema_text(request: Request):
        return PlainTextResponse(sdl, media_type="text/plain; charset=utf-8")

    async def graphql_ws(websocket: WebSocket) -> None:
        offered = websocket.scope.get("subprotocols", [])
        await websocket.accept(subprotocol=WS_SUBPROTOCOL if WS_SUBPROTOCOL in offered else None)
        if WS_SUBPROTOCOL not in offered:
            await websocket.close(code=CLOSE_PROTOCOL_ERROR)
            return

        connection: Optional[Connection] = None
        writer: Optional[asyncio.Task] = None

        async def shutdown(code: Optional[int]) -> None:
            if connection is not None:
                hub.unregister(connection)
            if writer is not None:
                writer.cancel()
            if code is not None:
                try:
                    await websocket.close(code=code)
                except RuntimeError:
                    pass  # already closed by the peer

        async def write_loop(conn: Connection) -> None:
            while True:
                frame = await conn.queue.get()
                await websocket.send_text(frame_bytes(frame))

        try:
            while True:
                raw = await websocket.receive_text()
                try:
                    message = json.loads(raw)
                    msg_type = message["type"]
                except (ValueError, TypeError, KeyError):
                    await shutdown(CLOSE_PROTOCOL_ERROR)
                    return
                if msg_type == "connection_init":
                    if connection is not None:
                        await shutdown(CLOSE_PROTOCOL_ERROR)
                        return
                    token = (message.get("payload") or {}).get("token")
                    actor = service.authenticate(token)
                    if actor is None:
                        await shutdown(CLOSE_UNAUTHENTICATED)
                        return
                    connection = Connection(user_id=actor.id)
                    connection.on_overflow = lambda: asyncio.ensure_future(
                        shutdown(CLOSE_OVERFLOW)
                    )
                    hub.register(connection)
                    writer = asyncio.ensure_future(write_loop(connection))
                    await websocket.send_text(frame_bytes({"type": "connection_ack"}))
                elif msg_type == "subscribe":
                    if connection is None:
                        await shutdown(CLOSE_PROTOCOL_ERROR)
                        return
                    sub_id = message.get("id")
                    if not isinstance(sub_id, str):
                        await shutdown(CLOSE_PROTOCOL_ERROR)
                        return
                    if sub_id in connection.subscriptions:
                        await shutdown(CLOSE_DUPLICATE_ID)
                        return
                    payload = message.get("payload") or {}
                    error_frame = _try_subscribe(connection, sub_id, payload)
                    if error_frame is not None:
                        connection.enqueue(error_frame)
                elif msg_type == "complete":
                    if connection is not None and isinstance(message.get("id"), str):
                        hub.remove_subscription(connection, message["id"])
                elif msg_type == "ping":
                    await websocket.send_text(frame_bytes({"type": "pong"}))
                elif msg_type == "pong":
                    pass
                else:
                    await shutdown(CLOSE_PROTOCOL_ERROR)
                    return
        except WebSocketDisconnect:
            await shutdown(None)

    def _try_subscribe(connection: Connection, sub_id: str, payload: dict) -> Optional[dict]:
        """Register a subscription; returns an error frame on failure."""
        query = payload.get("query")
        if not isinstance(query, str):
            return {"id": sub_id, "type": "error", "payload": [{"message": "missing query"}]}
        try:
            doc = parse_source(query)
        except (LexError, ParseError) as exc:
            return {"id": sub_id, "type": "error", "payload": [{"message": exc.message}]}
        violations = validate(doc, schema, max_depth=max_query_depth)
        if violations:
            return {
                "id": sub_id,
                "type": "error",
                "payload": [{"message": v.message} for v in violations],
            }
        try:
            plan = resolve_subscription(
                doc,
                schema,
                SUBSCRIPTION_TOPICS,
                resolvers,
                variables=payload.get("variables") or {},
                operation_name=payload.get("operationName"),
            )
        except (
            MultipleRootFields,
            UnknownSubscriptionField,
            OperationNotFound,
            VariableCoercionError,
        ) as exc:
            return {"id": sub_id, "type": "error", "payload": [{"message": str(exc)}]}
        hub.add_subscription(connection, Subscription(id=sub_id, topic=plan.topic, plan=plan))
        return None

    middleware = []
    if cors_allowlist:
        middleware.append(
            Middleware(
                CORSMiddleware,
                allow_origins=cors_allowlist,
                allow_methods=["*"],
                allow_headers=["*"],
            )
        )

    app = Starlette(
        routes=[
            Route("/graphql", graphql_http, methods=["POST"]),
            Route("/healthz", healthz, methods=["GET"]),
            Route("/schema.graphql", schema_text, methods=["GET"]),
            WebSocketRoute("/graphql", graphql_ws),
        ],
        middleware=middleware,
    )
    app.state.store = store
    app.state.service = service
    app.state.hub = hub
    app.state.schema = schema
    return app
