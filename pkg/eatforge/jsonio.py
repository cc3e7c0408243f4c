"""Deterministic JSON helpers built on orjson.

orjson holds integers in 64 bits. Wider integers, such as list codes of
long lists, are written as their decimal strings.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import orjson

if TYPE_CHECKING:
    from pathlib import Path

# JSON-compatible value types (PEP 695 type statements)
type JSONPrimitive = str | int | float | bool | None
type JSONValue = JSONPrimitive | list[JSONValue] | dict[str, JSONValue]

_DUMP_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2
_NATIVE_INTS = range(-(2**63), 2**64)


def widen(data: JSONValue) -> JSONValue:
    """Replace integers outside the 64-bit range by decimal strings."""
    if isinstance(data, int):
        return data if data in _NATIVE_INTS else str(data)
    if isinstance(data, list):
        return [widen(item) for item in data]
    if isinstance(data, dict):
        return {key: widen(value) for key, value in data.items()}
    return data


def _dump(data: JSONValue, option: int) -> str:
    try:
        return orjson.dumps(data, option=option).decode()
    except orjson.JSONEncodeError:
        return orjson.dumps(widen(data), option=option).decode()


def dumps(data: JSONValue) -> str:
    """Serialize to sorted, indented JSON text.

    Args:
        data: JSON-compatible value. Integers that do not fit 64 bits are
            written as decimal strings.

    Returns:
        JSON string, byte-identical for equal inputs.

    """
    return _dump(data, _DUMP_OPTIONS)


def dumps_line(data: JSONValue) -> str:
    """Serialize to a single sorted JSON line."""
    return _dump(data, orjson.OPT_SORT_KEYS)


def loads(text: str | bytes) -> JSONValue:
    """Parse JSON text."""
    result: JSONValue = orjson.loads(text)
    return result


def load_path(path: Path) -> JSONValue:
    """Read and parse a JSON file."""
    return loads(path.read_bytes())
