"""
Pydantic schemas for economic identities and the slashing ledger.
"""
from enum import Enum
from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field, SecretBytes, field_validator

from .common import Digest, HexBytes, Ratio, SlotNumber, TokenAmount


class SchemeId(str, Enum):
    """Signature scheme identifiers."""

    MOCK = "mock"
    ED25519 = "ed25519"


class Role(str, Enum):
    USER = "user"
    PRODUCER = "producer"


class SlashReason(str, Enum):
    NON_OPENING = "non_opening"
    INVALID_BEHAVIOR = "invalid_behavior"
    PRODUCER_INVALID_BLOCK = "producer_invalid_block"


class RootEntropy(BaseModel):
    """Identity root (REV). Kept as a secret; never part of a public message."""

    model_config = ConfigDict(frozen=True)

    rev: SecretBytes

    @field_validator("rev")
    @classmethod
    def _check_length(cls, value: SecretBytes) -> SecretBytes:
        if len(value.get_secret_value()) != 32:
            raise ValueError("root entropy must be 32 bytes")
        return value

    @classmethod
    def from_bytes(cls, rev: bytes) -> "RootEntropy":
        return cls(rev=SecretBytes(rev))


class SlashEvent(BaseModel):
    """A single bond reduction recorded in the registry history."""

    model_config = ConfigDict(frozen=True)

    idcom: Digest
    slot: SlotNumber
    fraction: Ratio
    amount: TokenAmount
    reason: SlashReason


class IdentityRecord(BaseModel):
    """
    A registered economic identity.

    ``idcom`` is the hash of ``verification_key``; ``per_slot_commit_count``
    tracks quota usage for the registry view that holds the record.
    """

    idcom: Digest
    verification_key: HexBytes
    scheme_id: SchemeId
    role: Role = Role.USER
    bond: TokenAmount
    deposited: TokenAmount
    active: bool = True
    per_slot_commit_count: Dict[int, int] = Field(default_factory=dict)
    slash_history: List[SlashEvent] = Field(default_factory=list)


class RegistrySnapshot(BaseModel):
    """Structured-text form of a registry, used for scenario setup and audits."""

    identities: List[IdentityRecord] = Field(default_factory=list)
    total_deposits: TokenAmount = 0
    total_slashed: TokenAmount = 0
