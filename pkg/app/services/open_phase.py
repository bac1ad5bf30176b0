"""
Open phase: opening verification, opening receipt certificates, execution-list
assembly and non-opening penalties.
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

from ..exceptions import (
    HashMismatchError,
    IdentityInactiveError,
    InsufficientReceiptsError,
    InvalidInputError,
    NoMatchingCommitmentError,
    PastCutoffError,
    WindowNotOpenError,
)
from ..schemas.block import ExecutedTx, ExecutionList, SkippedEntry
from ..schemas.certificates import CommitmentRef, OpenCertificate, OpeningSecret, OpenReceipt, ValidatorSet
from ..schemas.identity import SlashEvent, SlashReason
from ..schemas.ordering import AdmissibleSet, OrderingBundle
from ..schemas.params import ProtocolParams
from .codec import commitment_hash, open_message
from .commit_phase import SlotClock, ValidatorCredentials, collect_valid_receipts
from .identity import IdentityRegistry
from .signatures import sign

logger = logging.getLogger(__name__)


def validator_check_opening(
    admissible: AdmissibleSet,
    secret: OpeningSecret,
    clock: SlotClock,
    params: ProtocolParams,
    registry: IdentityRegistry,
    validator: ValidatorCredentials,
) -> OpenReceipt:
    """Verify c = H(tx | r | idcom | s) against the admissible set and sign an open receipt."""
    budget = params.slot_budget
    if secret.slot != clock.slot or clock.tick >= budget.open_cutoff:
        raise PastCutoffError("Opening cutoff has passed", {"slot": clock.slot, "tick": clock.tick})
    if clock.tick < budget.open_start:
        raise WindowNotOpenError("Opening window is not open yet", {"tick": clock.tick, "opens": budget.open_start})

    if secret.slot != admissible.slot:
        raise NoMatchingCommitmentError(details={"idcom": secret.idcom.hex(), "slot": secret.slot})
    candidates = [entry.commitment.c for entry in admissible.entries if entry.commitment.idcom == secret.idcom]
    if not candidates:
        raise NoMatchingCommitmentError(details={"idcom": secret.idcom.hex(), "slot": secret.slot})

    c = commitment_hash(secret.tx, secret.r, secret.idcom, secret.slot)
    if c not in candidates:
        raise HashMismatchError(details={"idcom": secret.idcom.hex()})

    record = registry.get(secret.idcom)
    if record is None or not record.active:
        raise IdentityInactiveError(secret.idcom.hex())

    message = open_message(secret.idcom, c, secret.slot)
    logger.debug(f"Validator {validator.validator_id} accepted opening {c.hex()[:12]}")
    return OpenReceipt(validator_id=validator.validator_id, sig=sign(validator.signing_key, message))


def aggregate_open_certificate(
    secret: OpeningSecret,
    receipts: Iterable[OpenReceipt],
    params: ProtocolParams,
    validator_set: ValidatorSet,
) -> OpenCertificate:
    """Bundle at least q_o distinct valid receipts into R^O."""
    c = commitment_hash(secret.tx, secret.r, secret.idcom, secret.slot)
    valid = collect_valid_receipts(receipts, open_message(secret.idcom, c, secret.slot), validator_set)
    if len(valid) < params.q_o:
        raise InsufficientReceiptsError(len(valid), params.q_o, {"c": c.hex()})
    return OpenCertificate(
        secret=secret,
        commit_cert_ref=CommitmentRef(idcom=secret.idcom, c=c, slot=secret.slot),
        receipts=tuple(valid),
    )


def verify_open_certificate(cert: OpenCertificate, params: ProtocolParams, validator_set: ValidatorSet) -> bool:
    """Binding of the secret to the referenced commitment plus q_o distinct valid receipts."""
    secret, ref = cert.secret, cert.commit_cert_ref
    if (secret.idcom, secret.slot) != (ref.idcom, ref.slot):
        return False
    if commitment_hash(secret.tx, secret.r, secret.idcom, secret.slot) != ref.c:
        return False
    ids = [receipt.validator_id for receipt in cert.receipts]
    if len(set(ids)) != len(ids) or len(ids) < params.q_o:
        return False
    message = open_message(ref.idcom, ref.c, ref.slot)
    return len(collect_valid_receipts(cert.receipts, message, validator_set)) == len(ids)


def build_execution_list(
    bundle: OrderingBundle,
    admissible: AdmissibleSet,
    open_certs: Iterable[OpenCertificate],
) -> ExecutionList:
    """
    Walk the permutation; opened entries are executed, the rest skipped.

    Every opening certificate must reference an admissible entry and bind to
    its commitment hash.
    """
    by_key: Dict[Tuple[bytes, bytes], OpenCertificate] = {}
    index = {entry.key: position for position, entry in enumerate(admissible.entries)}
    for cert in open_certs:
        ref = cert.commit_cert_ref
        if ref.slot != admissible.slot or ref.key not in index:
            raise InvalidInputError("opening certificate references an entry outside the admissible set",
                                    {"idcom": ref.idcom.hex(), "c": ref.c.hex()})
        secret = cert.secret
        if commitment_hash(secret.tx, secret.r, secret.idcom, secret.slot) != ref.c:
            raise InvalidInputError("opening certificate does not bind to its commitment", {"c": ref.c.hex()})
        by_key.setdefault(ref.key, cert)

    if len(bundle.permutation) != len(admissible):
        raise InvalidInputError("permutation size does not match the admissible set",
                                {"m": len(admissible), "permutation": len(bundle.permutation)})

    ordered: List[ExecutedTx] = []
    skipped: List[SkippedEntry] = []
    for position, entry_index in enumerate(bundle.permutation.mapping):
        commitment = admissible.entries[entry_index].commitment
        cert = by_key.get((commitment.idcom, commitment.c))
        if cert is not None:
            ordered.append(ExecutedTx(position=position, entry_index=entry_index, tx=cert.secret.tx,
                                      idcom=commitment.idcom, c=commitment.c))
        else:
            skipped.append(SkippedEntry(position=position, entry_index=entry_index,
                                        idcom=commitment.idcom, c=commitment.c))
    return ExecutionList(slot=admissible.slot, ordered_txs=tuple(ordered), skipped=tuple(skipped))


def apply_non_opening_penalties(
    registry: IdentityRegistry,
    execution_list: ExecutionList,
    params: ProtocolParams,
    refs: Optional[Iterable[CommitmentRef]] = None,
) -> List[SlashEvent]:
    """
    One delta_user slash per skipped entry, in canonical admissible-set order.

    ``refs`` overrides the skipped set (used when a finalized block names its
    penalized entries explicitly).
    """
    targets = list(refs) if refs is not None else list(execution_list.skipped_refs())
    events = [
        registry.slash(ref.idcom, params.delta_user, SlashReason.NON_OPENING, execution_list.slot)
        for ref in targets
    ]
    if events:
        logger.info(f"Slot {execution_list.slot}: {len(events)} non-opening penalties applied")
    return events
