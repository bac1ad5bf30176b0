"""
Pydantic schemas for signatures, commitments, openings and receipt certificates.
"""
from enum import IntEnum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field

from .common import Digest, HexBytes, SlotNumber
from .identity import SchemeId


class DomainTag(IntEnum):
    """Single-byte domain tags; COMMIT stands for "commit", OPEN for "open"."""

    COMMIT = 0x01
    OPEN = 0x02


class CanonicalMessage(BaseModel):
    model_config = ConfigDict(frozen=True)

    domain_tag: DomainTag
    idcom: Digest
    commitment: Digest
    slot: SlotNumber


class Signature(BaseModel):
    model_config = ConfigDict(frozen=True)

    data: HexBytes
    scheme_id: SchemeId


class CommitmentRef(BaseModel):
    """(idcom, c, slot) key that links openings back to commitments."""

    model_config = ConfigDict(frozen=True)

    idcom: Digest
    c: Digest
    slot: SlotNumber

    @property
    def key(self) -> Tuple[bytes, bytes]:
        return (self.idcom, self.c)


class Commitment(BaseModel):
    model_config = ConfigDict(frozen=True)

    idcom: Digest
    c: Digest
    slot: SlotNumber
    user_sig: Signature

    @property
    def ref(self) -> CommitmentRef:
        return CommitmentRef(idcom=self.idcom, c=self.c, slot=self.slot)


class OpeningSecret(BaseModel):
    """Transaction and nonce retained by the user until the opening window."""

    model_config = ConfigDict(frozen=True)

    tx: HexBytes
    r: Digest
    idcom: Digest
    slot: SlotNumber


class Receipt(BaseModel):
    """A validator signature over a canonical commit or open message."""

    model_config = ConfigDict(frozen=True)

    validator_id: int = Field(..., ge=0)
    sig: Signature


class CommitReceipt(Receipt):
    pass


class OpenReceipt(Receipt):
    pass


class CommitCertificate(BaseModel):
    """Commitment plus receipts from at least q_c distinct validators (R^C)."""

    model_config = ConfigDict(frozen=True)

    commitment: Commitment
    receipts: Tuple[CommitReceipt, ...]

    @property
    def key(self) -> Tuple[bytes, bytes]:
        return (self.commitment.idcom, self.commitment.c)

    @property
    def signer_ids(self) -> Tuple[int, ...]:
        return tuple(receipt.validator_id for receipt in self.receipts)


class OpenCertificate(BaseModel):
    """Opening plus receipts from at least q_o distinct validators (R^O)."""

    model_config = ConfigDict(frozen=True)

    secret: OpeningSecret
    commit_cert_ref: CommitmentRef
    receipts: Tuple[OpenReceipt, ...]

    @property
    def key(self) -> Tuple[bytes, bytes]:
        return self.commit_cert_ref.key

    @property
    def signer_ids(self) -> Tuple[int, ...]:
        return tuple(receipt.validator_id for receipt in self.receipts)


class ValidatorInfo(BaseModel):
    model_config = ConfigDict(frozen=True)

    validator_id: int = Field(..., ge=0)
    verification_key: HexBytes
    scheme_id: SchemeId


class ValidatorSet(BaseModel):
    """Public receipt keys of the validator committee."""

    model_config = ConfigDict(frozen=True)

    members: Tuple[ValidatorInfo, ...]

    def get(self, validator_id: int):
        for member in self.members:
            if member.validator_id == validator_id:
                return member
        return None

    def __len__(self) -> int:
        return len(self.members)
