"""
Pydantic schemas for the VDF, the admissible set and the execution permutation.
"""
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .certificates import CommitCertificate
from .common import Digest, SlotNumber


class VdfParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    delay_T: int = Field(..., ge=1)
    checkpoint_interval: int = Field(..., ge=1)

    @property
    def proof_length(self) -> int:
        return -(-self.delay_T // self.checkpoint_interval)


class VdfOutput(BaseModel):
    model_config = ConfigDict(frozen=True)

    y: Digest
    proof: Tuple[Digest, ...]


class AdmissibleSet(BaseModel):
    """Certified commitments of one slot, sorted by (idcom, c)."""

    model_config = ConfigDict(frozen=True)

    slot: SlotNumber
    entries: Tuple[CommitCertificate, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def index_of(self, idcom: bytes, c: bytes) -> int:
        """Position of (idcom, c) in the canonical order, or -1."""
        for index, entry in enumerate(self.entries):
            if entry.commitment.idcom == idcom and entry.commitment.c == c:
                return index
        return -1


class Permutation(BaseModel):
    """``mapping[p]`` is the admissible-set index executed at position ``p``."""

    model_config = ConfigDict(frozen=True)

    mapping: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_bijection(self) -> "Permutation":
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError("permutation mapping must be a bijection on [m]")
        return self

    def __len__(self) -> int:
        return len(self.mapping)


class OrderingBundle(BaseModel):
    """Published ordering material: root, VDF input/output/proof and permutation."""

    model_config = ConfigDict(frozen=True)

    set_root: Digest
    vdf_input: Digest
    seed: Digest
    vdf_proof: Tuple[Digest, ...]
    permutation: Permutation
