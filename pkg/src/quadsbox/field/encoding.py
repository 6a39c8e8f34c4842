"""
Hex serialization of field elements and coefficient tuples.
"""

from __future__ import annotations

from typing import Tuple

from ..errors import FieldDomainError
from .field_spec import FieldSpec


def hex_width(n: int) -> int:
    return (n + 3) // 4


def element_to_hex(spec: FieldSpec, x: int) -> str:
    """Lowercase hex, most significant nibble first, zero padded to the field width."""
    return format(spec.check(x), f"0{hex_width(spec.n)}x")


def element_from_hex(spec: FieldSpec, text: str) -> int:
    """Parse a hex element.

    Raises:
        FieldDomainError: If the text is not hex or the value is out of range
    """
    cleaned = text.strip().lower()
    if cleaned.startswith("0x"):
        cleaned = cleaned[2:]
    try:
        value = int(cleaned, 16)
    except ValueError:
        raise FieldDomainError(f"'{text}' is not a hex field element")
    return spec.check(value)


def tuple_to_text(spec: FieldSpec, values: Tuple[int, int, int, int]) -> str:
    return ":".join(element_to_hex(spec, v) for v in values)


def tuple_from_text(spec: FieldSpec, text: str) -> Tuple[int, int, int, int]:
    """Parse "c0:c1:c2:c3".

    Raises:
        FieldDomainError: If there are not exactly four hex parts
    """
    parts = text.split(":")
    if len(parts) != 4:
        raise FieldDomainError(f"Expected four ':'-separated hex elements, got '{text}'")
    c0, c1, c2, c3 = (element_from_hex(spec, part) for part in parts)
    return c0, c1, c2, c3
