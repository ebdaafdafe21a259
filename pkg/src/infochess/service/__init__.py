"""Interactive play service: sessions, wire schema, HTTP/websocket app."""

from .sessions import Session, SessionManager
from .wire import PROTOCOL_VERSION

__all__ = ["Session", "SessionManager", "PROTOCOL_VERSION"]
