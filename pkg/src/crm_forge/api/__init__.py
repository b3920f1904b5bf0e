from .service import CrmService, RequestContext
from .schema import build_schema, build_resolvers, SUBSCRIPTION_TOPICS
from .app import create_app

__all__ = [
    "CrmService",
    "RequestContext",
    "SUBSCRIPTION_TOPICS",
    "build_resolvers",
    "build_schema",
    "create_app",
]
