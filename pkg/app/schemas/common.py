"""
Shared field types for MEV-ACE Lab schemas.

Byte fields validate from hex strings (JSON documents) or raw bytes (Python
callers) and serialize back to lowercase hex in JSON mode. Ratios accept
"1/10", integers or Fraction values and serialize as "n/d" strings.
"""

from fractions import Fraction
from typing import Annotated, Any, Optional

from pydantic import Field
from pydantic_core import core_schema

DIGEST_SIZE = 32
MAX_SLOT = 2**64 - 1


def _to_bytes(value: Any, length: Optional[int]) -> bytes:
    if isinstance(value, str):
        try:
            value = bytes.fromhex(value)
        except ValueError as exc:
            raise ValueError(f"invalid hex string: {exc}") from exc
    elif isinstance(value, (bytearray, memoryview)):
        value = bytes(value)
    if not isinstance(value, bytes):
        raise ValueError("expected bytes or a hex string")
    if length is not None and len(value) != length:
        raise ValueError(f"expected {length} bytes, got {len(value)}")
    return value


class _HexBytes:
    """Pydantic annotation for byte strings carried as hex in JSON."""

    def __init__(self, length: Optional[int] = None):
        self.length = length

    def __get_pydantic_core_schema__(self, source_type, handler):
        length = self.length
        return core_schema.no_info_plain_validator_function(
            lambda value: _to_bytes(value, length),
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda value: value.hex(), when_used="json"
            ),
        )


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("expected a ratio")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"invalid ratio '{value}'") from exc
    raise ValueError("expected a ratio such as '1/10'")


class _Ratio:
    """Pydantic annotation for exact rationals."""

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        return core_schema.no_info_plain_validator_function(
            _to_fraction,
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda value: f"{value.numerator}/{value.denominator}", when_used="json"
            ),
        )


HexBytes = Annotated[bytes, _HexBytes()]
Digest = Annotated[bytes, _HexBytes(DIGEST_SIZE)]
Ratio = Annotated[Fraction, _Ratio]
SlotNumber = Annotated[int, Field(ge=0, le=MAX_SLOT)]
TokenAmount = Annotated[int, Field(ge=0)]
