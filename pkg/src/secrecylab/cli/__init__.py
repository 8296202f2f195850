"""Command-line interface for secrecylab."""

from .handlers import BaseHandler, HANDLERS
from .middleware import LoggingMiddleware
from .main import build_parser, main

__all__ = ["BaseHandler", "HANDLERS", "LoggingMiddleware", "build_parser", "main"]
