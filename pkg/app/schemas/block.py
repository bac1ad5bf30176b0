"""
Pydantic schemas for execution lists, blocks, omission proofs and verdicts.
"""
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from .certificates import CommitCertificate, CommitmentRef, OpenCertificate, OpeningSecret
from .common import Digest, HexBytes, SlotNumber
from .ordering import AdmissibleSet, OrderingBundle


class ExecutedTx(BaseModel):
    model_config = ConfigDict(frozen=True)

    position: int = Field(..., ge=0)
    entry_index: int = Field(..., ge=0)
    tx: HexBytes
    idcom: Digest
    c: Digest


class SkippedEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    position: int = Field(..., ge=0)
    entry_index: int = Field(..., ge=0)
    idcom: Digest
    c: Digest


class ExecutionList(BaseModel):
    model_config = ConfigDict(frozen=True)

    slot: SlotNumber
    ordered_txs: Tuple[ExecutedTx, ...] = ()
    skipped: Tuple[SkippedEntry, ...] = ()

    def skipped_refs(self) -> Tuple[CommitmentRef, ...]:
        """Skipped entries in canonical admissible-set order."""
        ordered = sorted(self.skipped, key=lambda entry: entry.entry_index)
        return tuple(CommitmentRef(idcom=entry.idcom, c=entry.c, slot=self.slot) for entry in ordered)


class Block(BaseModel):
    model_config = ConfigDict(frozen=True)

    slot: SlotNumber
    prev_block_hash: Digest
    bundle: OrderingBundle
    admissible: AdmissibleSet
    execution_list: ExecutionList
    open_certificates: Tuple[OpenCertificate, ...] = ()
    penalized: Tuple[CommitmentRef, ...] = ()
    producer_id: Digest


class OmissionKind(str, Enum):
    COMMIT_OMISSION = "commit_omission"
    EXECUTION_OMISSION = "execution_omission"


class OmissionProof(BaseModel):
    """Portable certificate evidence that a block omitted a mandatory entry."""

    model_config = ConfigDict(frozen=True)

    kind: OmissionKind
    commit_cert: CommitCertificate
    open_cert: Optional[OpenCertificate] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "OmissionProof":
        if self.kind == OmissionKind.COMMIT_OMISSION and self.open_cert is not None:
            raise ValueError("commit omission proofs carry no opening")
        if self.kind == OmissionKind.EXECUTION_OMISSION and self.open_cert is None:
            raise ValueError("execution omission proofs carry the opening and its certificate")
        return self

    @property
    def opening(self) -> Optional[OpeningSecret]:
        return self.open_cert.secret if self.open_cert is not None else None

    @property
    def slot(self) -> int:
        return self.commit_cert.commitment.slot


class Violation(str, Enum):
    BAD_ORDERING = "BadOrdering"
    COMMIT_OMITTED = "CommitOmitted"
    EXECUTION_OMITTED = "ExecutionOmitted"
    EXTRA_ENTRY = "ExtraEntry"
    BAD_CERTIFICATE = "BadCertificate"
    WRONG_PENALTIES = "WrongPenalties"


class BlockVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    violations: Tuple[Violation, ...] = ()

    @computed_field
    @property
    def valid(self) -> bool:
        return not self.violations
