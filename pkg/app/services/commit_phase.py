"""
Commit phase: user-side commitment creation, validator admission checks,
receipt issuance and threshold certificate aggregation.
"""

import logging
import secrets
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import BadSignatureError, InsufficientReceiptsError, PastCutoffError, QuotaExceededError
from ..schemas.certificates import (
    CommitCertificate,
    Commitment,
    CommitReceipt,
    OpeningSecret,
    Receipt,
    ValidatorSet,
)
from ..schemas.params import ProtocolParams
from .codec import commit_message, commitment_hash
from .identity import IdentityRegistry
from .signatures import SigningKey, sign, verify

logger = logging.getLogger(__name__)

NonceSource = Callable[[int], bytes]


class SlotClock(BaseModel):
    """Abstract clock reading: slot number and tick within the slot."""

    model_config = ConfigDict(frozen=True)

    slot: int = Field(..., ge=0)
    tick: int = Field(..., ge=0)


@dataclass(frozen=True)
class ValidatorCredentials:
    """A validator's receipt-signing key."""

    validator_id: int
    signing_key: SigningKey


def make_commitment(
    signing_key: SigningKey,
    idcom: bytes,
    tx: bytes,
    slot: int,
    nonce_source: NonceSource = secrets.token_bytes,
) -> Tuple[Commitment, OpeningSecret]:
    """Sample a nonce, hash the commitment and sign the canonical commit message."""
    r = nonce_source(32)
    c = commitment_hash(tx, r, idcom, slot)
    user_sig = sign(signing_key, commit_message(idcom, c, slot))
    commitment = Commitment(idcom=idcom, c=c, slot=slot, user_sig=user_sig)
    return commitment, OpeningSecret(tx=tx, r=r, idcom=idcom, slot=slot)


def validator_check_commitment(
    registry: IdentityRegistry,
    commitment: Commitment,
    clock: SlotClock,
    params: ProtocolParams,
    validator: ValidatorCredentials,
) -> CommitReceipt:
    """
    Admit a commitment and sign a receipt.

    Checks run in a fixed order: registration and bond floor, signature,
    quota, cutoff.
    Quota is consumed only once every check has passed.
    """
    record = registry.require_bonded(commitment.idcom, params)

    message = commit_message(commitment.idcom, commitment.c, commitment.slot)
    if not verify(record.verification_key, message, commitment.user_sig, record.scheme_id):
        raise BadSignatureError(details={"idcom": commitment.idcom.hex()})

    if registry.quota_used(commitment.idcom, commitment.slot) >= params.quota_l:
        raise QuotaExceededError(commitment.idcom.hex(), commitment.slot, params.quota_l)

    if commitment.slot != clock.slot or clock.tick >= params.slot_budget.commit_cutoff:
        raise PastCutoffError(
            "Commit cutoff has passed",
            {"slot": clock.slot, "tick": clock.tick, "commitment_slot": commitment.slot},
        )

    registry.consume_quota(commitment.idcom, commitment.slot, params)
    logger.debug(f"Validator {validator.validator_id} admitted {commitment.c.hex()[:12]}")
    return CommitReceipt(validator_id=validator.validator_id, sig=sign(validator.signing_key, message))


def collect_valid_receipts(
    receipts: Iterable[Receipt],
    message: bytes,
    validator_set: ValidatorSet,
) -> List[Receipt]:
    """
    Keep one verifying receipt per validator, sorted by validator id.

    Invalid receipts and receipts from unknown validators are dropped rather
    than failing the bundle, so a Byzantine validator cannot poison it.
    """
    kept = {}
    for receipt in receipts:
        if receipt.validator_id in kept:
            continue
        member = validator_set.get(receipt.validator_id)
        if member is None:
            continue
        if verify(member.verification_key, message, receipt.sig, member.scheme_id):
            kept[receipt.validator_id] = receipt
    return [kept[validator_id] for validator_id in sorted(kept)]


def aggregate_commit_certificate(
    commitment: Commitment,
    receipts: Iterable[CommitReceipt],
    params: ProtocolParams,
    validator_set: ValidatorSet,
) -> CommitCertificate:
    """Bundle at least q_c distinct valid receipts into R^C."""
    message = commit_message(commitment.idcom, commitment.c, commitment.slot)
    valid = collect_valid_receipts(receipts, message, validator_set)
    if len(valid) < params.q_c:
        raise InsufficientReceiptsError(len(valid), params.q_c, {"c": commitment.c.hex()})
    return CommitCertificate(commitment=commitment, receipts=tuple(valid))


def verify_commit_certificate(
    cert: CommitCertificate,
    params: ProtocolParams,
    validator_set: ValidatorSet,
    registry: Optional[IdentityRegistry] = None,
) -> bool:
    """
    Re-check a certificate: every receipt distinct and valid, at least q_c of
    them, and (with a registry) the user signature under the registered key.
    """
    commitment = cert.commitment
    message = commit_message(commitment.idcom, commitment.c, commitment.slot)
    ids = [receipt.validator_id for receipt in cert.receipts]
    if len(set(ids)) != len(ids):
        return False
    if len(collect_valid_receipts(cert.receipts, message, validator_set)) != len(ids) or len(ids) < params.q_c:
        return False
    if registry is not None:
        record = registry.get(commitment.idcom)
        if record is None:
            return False
        if not verify(record.verification_key, message, commitment.user_sig, record.scheme_id):
            return False
    return True
