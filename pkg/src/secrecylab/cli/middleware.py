"""Command logging middleware."""

import logging
import time
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional, Tuple

logger = logging.getLogger(__name__)


class LoggingMiddleware:
    """Times each command and keeps a log of outcomes."""

    def __init__(self, log_function: Optional[Callable[[str], None]] = None):
        self.log_function = log_function or logger.info
        self._command_log: List[Dict[str, Any]] = []

    def log_command(self, command: str, status: int, duration_ms: float) -> None:
        """Record one finished command."""
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "command": command,
            "status": status,
            "duration_ms": duration_ms,
        }
        self._command_log.append(entry)
        self.log_function(f"{command} -> exit {status} ({duration_ms:.2f}ms)")

    def run(self, command: str, func: Callable[[], Tuple[int, Any]]) -> Tuple[int, Any]:
        """Call func, which returns (exit status, payload), and log its timing."""
        started = time.perf_counter()
        status, payload = func()
        self.log_command(command, status, (time.perf_counter() - started) * 1000.0)
        return status, payload

    def get_recent_commands(self, limit: int = 100) -> List[Dict[str, Any]]:
        return self._command_log[-limit:]

    def get_command_stats(self) -> Dict[str, Any]:
        """Get command statistics."""
        if not self._command_log:
            return {
                "total_commands": 0,
                "avg_duration_ms": 0,
                "failure_rate": 0,
            }

        total = len(self._command_log)
        durations = [c["duration_ms"] for c in self._command_log]
        failures = len([c for c in self._command_log if c["status"] != 0])

        return {
            "total_commands": total,
            "avg_duration_ms": sum(durations) / total,
            "min_duration_ms": min(durations),
            "max_duration_ms": max(durations),
            "failure_rate": failures / total,
        }

    def clear_log(self) -> int:
        count = len(self._command_log)
        self._command_log = []
        return count
