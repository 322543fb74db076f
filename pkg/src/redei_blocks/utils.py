from __future__ import annotations

import os
import sys
import time
from dataclasses import dataclass
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from loguru import logger


@dataclass
class ToolkitEnv:
    """Runtime limits and presentation settings."""
    max_group_order: int = 4096
    lattice_cap: int = 256
    aut_cap: int = 512
    cap_nodes: int = 100_000_000
    cap_seconds: float = 600.0
    log_level: str = "INFO"
    json_indent: int = 2


def strtobool(value: Optional[str], default: bool = True) -> bool:
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "y", "on"}


def _read_int(name: str, default: int) -> int:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"Invalid {name}: {raw!r} is not an integer")
    if value < 0:
        raise ValueError(f"Invalid {name}: must be non-negative, got {value}")
    return value


def read_env() -> ToolkitEnv:
    """Read toolkit limits from the environment (a .env file is honored)."""
    load_dotenv()

    seconds_raw = os.environ.get("REDEI_CAP_SECONDS", "").strip()
    try:
        cap_seconds = float(seconds_raw) if seconds_raw else 600.0
    except ValueError:
        raise ValueError(f"Invalid REDEI_CAP_SECONDS: {seconds_raw!r} is not a number")

    log_level = (os.environ.get("REDEI_LOG_LEVEL") or "INFO").strip().upper()
    if log_level not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}:
        raise ValueError(f"Invalid REDEI_LOG_LEVEL: {log_level}")

    return ToolkitEnv(
        max_group_order=_read_int("REDEI_MAX_ORDER", 4096),
        lattice_cap=_read_int("REDEI_LATTICE_CAP", 256),
        aut_cap=_read_int("REDEI_AUT_CAP", 512),
        cap_nodes=_read_int("REDEI_CAP_NODES", 100_000_000),
        cap_seconds=cap_seconds,
        log_level=log_level,
        json_indent=_read_int("REDEI_JSON_INDENT", 2),
    )


_global_env: Optional[ToolkitEnv] = None


def get_env() -> ToolkitEnv:
    """Get or create the global toolkit configuration."""
    global _global_env

    if _global_env is None:
        _global_env = read_env()

    return _global_env


def reset_env() -> None:
    """Reset the global toolkit configuration (for testing)."""
    global _global_env
    _global_env = None


def configure_logging(level: Optional[str] = None) -> None:
    """Route loguru output to stderr at the configured level."""
    logger.remove()
    logger.add(sys.stderr, level=level or get_env().log_level)


def now_ms() -> int:
    return int(time.time() * 1000)


def two_adic_valuation(n: int) -> int:
    """Exponent of 2 in a nonzero integer."""
    if n == 0:
        raise ValueError("2-adic valuation of 0 is undefined")
    n = abs(n)
    return (n & -n).bit_length() - 1


def odd_part(n: int) -> int:
    n = abs(n)
    if n == 0:
        return 0
    return n >> two_adic_valuation(n)


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def format_error(message: str, context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Format an error response with context."""
    error_response = {
        "error": True,
        "message": message,
        "timestamp": time.time()
    }

    if context:
        error_response["context"] = context

    return error_response
