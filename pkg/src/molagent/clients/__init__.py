"""Networked backends: compound lookup, web search, reaction prediction, chat."""

from molagent.clients.cache import ResponseCache
from molagent.clients.chat import (
    ChatBackend,
    ChatError,
    ChatExchange,
    HttpChatBackend,
    RemoteChatError,
    RuleChatBackend,
    ScriptedChatBackend,
    ScriptExhausted,
    apply_stop,
)
from molagent.clients.fixtures import FixtureMissing, FixtureStore
from molagent.clients.pubchem import (
    CompoundRecord,
    EmptyContext,
    NotFound,
    PubChemClient,
    normalize_query,
)
from molagent.clients.reaction import BackendUnavailable, InvalidRemoteOutput, ReactionClient
from molagent.clients.transport import (
    NetworkError,
    OfflineViolation,
    RateLimited,
    RateLimiter,
    http_request,
    is_offline,
    request_count,
    set_offline,
)
from molagent.clients.websearch import NoResults, WebSearchClient

__all__ = [
    "BackendUnavailable",
    "ChatBackend",
    "ChatError",
    "ChatExchange",
    "CompoundRecord",
    "EmptyContext",
    "FixtureMissing",
    "FixtureStore",
    "HttpChatBackend",
    "InvalidRemoteOutput",
    "NetworkError",
    "NoResults",
    "NotFound",
    "OfflineViolation",
    "PubChemClient",
    "RateLimited",
    "RateLimiter",
    "ReactionClient",
    "RemoteChatError",
    "ResponseCache",
    "RuleChatBackend",
    "ScriptExhausted",
    "ScriptedChatBackend",
    "WebSearchClient",
    "apply_stop",
    "http_request",
    "is_offline",
    "normalize_query",
    "request_count",
    "set_offline",
]
