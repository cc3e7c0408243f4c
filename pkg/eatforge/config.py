"""Run configuration for the command line harness.

Values come from command line flags, falling back to the environment
(optionally populated from a `.env` file) and then to built-in defaults.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv

log = logging.getLogger("eatforge.config")

DEFAULT_CAP = 10**6
DEFAULT_ROUNDS = 8
DEFAULT_BOUND = 1000

CAP_ENV = "EATFORGE_CAP"
ROUNDS_ENV = "EATFORGE_ROUNDS"
BOUND_ENV = "EATFORGE_BOUND"


def load_environment(env_file: Path | None = None) -> None:
    """Load a `.env` file without overriding variables already set."""
    path = env_file if env_file is not None else Path.cwd() / ".env"
    if path.exists():
        log.debug("loading environment from %s", path)
        load_dotenv(path, override=False)


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        log.warning("ignoring non-integer %s=%r", name, raw)
        return default


def default_cap() -> int:
    """Element cap, overridable via EATFORGE_CAP."""
    return _env_int(CAP_ENV, DEFAULT_CAP)


def default_rounds() -> int:
    """Round budget, overridable via EATFORGE_ROUNDS."""
    return _env_int(ROUNDS_ENV, DEFAULT_ROUNDS)


def default_bound() -> int:
    """Search bound, overridable via EATFORGE_BOUND."""
    return _env_int(BOUND_ENV, DEFAULT_BOUND)


@dataclass(frozen=True)
class RunConfig:
    """Settings for one CLI invocation."""

    subcommand: str
    inputs: tuple[Path, ...] = ()
    rounds: int = DEFAULT_ROUNDS
    bound: int = DEFAULT_BOUND
    cap: int = DEFAULT_CAP
    out: Path | None = None
    debug: bool = False
    extra: dict[str, str] = field(default_factory=dict[str, str])

    def __post_init__(self) -> None:
        """Reject negative budgets."""
        for name in ("rounds", "bound", "cap"):
            if getattr(self, name) < 0:
                msg = f"{name} must be nonnegative, got {getattr(self, name)}"
                raise ValueError(msg)

    def missing_inputs(self) -> list[Path]:
        """Return input paths that do not exist."""
        return [p for p in self.inputs if not p.exists()]
