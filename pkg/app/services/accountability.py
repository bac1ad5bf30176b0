"""
Accountability: omission proofs, block validity and producer slashing.

Omission proofs are self-contained: verifying one needs only the validator
public keys, the protocol parameters and the block it accuses.
"""

import logging
from typing import Dict, Iterable, List, Mapping, Optional

from ..exceptions import InsufficientReceiptsError, InvalidInputError, MalformedProofError
from ..schemas.block import Block, BlockVerdict, ExecutionList, OmissionKind, OmissionProof, Violation
from ..schemas.certificates import CommitCertificate, OpenCertificate, ValidatorSet
from ..schemas.identity import SlashEvent, SlashReason
from ..schemas.params import ProtocolParams
from .codec import commit_message, open_message
from .commit_phase import collect_valid_receipts, verify_commit_certificate
from .identity import IdentityRegistry
from .open_phase import build_execution_list, verify_open_certificate
from .ordering import is_canonical, verify_ordering
from .vdf import make_vdf_params

logger = logging.getLogger(__name__)


def make_omission_proof(
    kind: OmissionKind,
    commit_cert: CommitCertificate,
    params: ProtocolParams,
    validator_set: ValidatorSet,
    open_cert: Optional[OpenCertificate] = None,
) -> OmissionProof:
    """
    Package certificate evidence into a portable omission proof.

    The certificates must already verify: a commit certificate short of q_c
    valid receipts raises InsufficientReceiptsError, any other defect raises
    MalformedProofError.
    """
    if kind == OmissionKind.COMMIT_OMISSION and open_cert is not None:
        raise MalformedProofError("commit omission proofs carry no opening")
    if kind == OmissionKind.EXECUTION_OMISSION and open_cert is None:
        raise MalformedProofError("execution omission proofs need the opening and its certificate")

    commitment = commit_cert.commitment
    valid = collect_valid_receipts(
        commit_cert.receipts, commit_message(commitment.idcom, commitment.c, commitment.slot), validator_set
    )
    if len(valid) < params.q_c:
        raise InsufficientReceiptsError(len(valid), params.q_c, {"c": commitment.c.hex()})
    if not verify_commit_certificate(commit_cert, params, validator_set):
        raise MalformedProofError("commit certificate does not verify")

    if open_cert is not None:
        if open_cert.commit_cert_ref.key != commit_cert.key or open_cert.commit_cert_ref.slot != commitment.slot:
            raise MalformedProofError("opening certificate references another commitment")
        ref = open_cert.commit_cert_ref
        valid = collect_valid_receipts(open_cert.receipts, open_message(ref.idcom, ref.c, ref.slot), validator_set)
        if len(valid) < params.q_o:
            raise InsufficientReceiptsError(len(valid), params.q_o, {"c": ref.c.hex()})
        if not verify_open_certificate(open_cert, params, validator_set):
            raise MalformedProofError("opening certificate does not verify")

    return OmissionProof(kind=kind, commit_cert=commit_cert, open_cert=open_cert)


def verify_omission_proof(
    proof: OmissionProof,
    block: Block,
    params: ProtocolParams,
    validator_set: ValidatorSet,
) -> bool:
    """True iff the proof shows that ``block`` left out a mandatory entry."""
    if proof.slot != block.slot:
        return False
    if not verify_commit_certificate(proof.commit_cert, params, validator_set):
        return False
    commitment = proof.commit_cert.commitment
    included = block.admissible.index_of(commitment.idcom, commitment.c) >= 0

    if proof.kind == OmissionKind.COMMIT_OMISSION:
        return not included

    open_cert = proof.open_cert
    if open_cert is None or open_cert.commit_cert_ref.key != proof.commit_cert.key:
        return False
    if not verify_open_certificate(open_cert, params, validator_set):
        return False
    executed = any(
        item.idcom == commitment.idcom and item.c == commitment.c and item.tx == open_cert.secret.tx
        for item in block.execution_list.ordered_txs
    )
    return included and not executed


def _add(violations: List[Violation], violation: Violation) -> None:
    if violation not in violations:
        violations.append(violation)


def _compare_execution(actual: ExecutionList, expected: ExecutionList, violations: List[Violation]) -> None:
    actual_items = {(item.idcom, item.c): item for item in actual.ordered_txs}
    expected_items = {(item.idcom, item.c): item for item in expected.ordered_txs}
    extra = [key for key, item in actual_items.items() if key not in expected_items or expected_items[key].tx != item.tx]
    missing = [key for key in expected_items if key not in actual_items]
    if extra or len(actual_items) != len(actual.ordered_txs):
        _add(violations, Violation.EXTRA_ENTRY)
    if missing:
        _add(violations, Violation.EXECUTION_OMITTED)
    if not extra and not missing and actual != expected:
        _add(violations, Violation.BAD_ORDERING)


def verify_block(
    block: Block,
    prev_block_hash: bytes,
    params: ProtocolParams,
    validator_set: ValidatorSet,
    pending_proofs: Iterable[OmissionProof] = (),
    registry: Optional[IdentityRegistry] = None,
) -> BlockVerdict:
    """
    Full validity check run independently by every honest validator.

    Checks certificates, canonical form, ordering, the execution list
    against the presented openings, pending omission proofs and the
    penalized set, collecting every violation found.
    """
    violations: List[Violation] = []
    admissible = block.admissible

    if not all(verify_commit_certificate(cert, params, validator_set, registry) for cert in admissible.entries):
        _add(violations, Violation.BAD_CERTIFICATE)
    valid_openings = []
    for cert in block.open_certificates:
        if verify_open_certificate(cert, params, validator_set):
            valid_openings.append(cert)
        else:
            _add(violations, Violation.BAD_CERTIFICATE)

    per_identity: Dict[bytes, int] = {}
    for cert in admissible.entries:
        per_identity[cert.commitment.idcom] = per_identity.get(cert.commitment.idcom, 0) + 1
    if any(count > params.quota_l for count in per_identity.values()):
        _add(violations, Violation.EXTRA_ENTRY)

    if admissible.slot != block.slot or block.execution_list.slot != block.slot or not is_canonical(admissible):
        _add(violations, Violation.BAD_ORDERING)

    ordering = verify_ordering(block.bundle, admissible, prev_block_hash, make_vdf_params(params.vdf_delay_T))
    if not ordering:
        _add(violations, Violation.BAD_ORDERING)
    else:
        try:
            expected = build_execution_list(block.bundle, admissible, valid_openings)
        except InvalidInputError:
            _add(violations, Violation.EXTRA_ENTRY)
        else:
            _compare_execution(block.execution_list, expected, violations)

    for proof in pending_proofs:
        if verify_omission_proof(proof, block, params, validator_set):
            if proof.kind == OmissionKind.COMMIT_OMISSION:
                _add(violations, Violation.COMMIT_OMITTED)
            else:
                _add(violations, Violation.EXECUTION_OMITTED)

    if tuple(block.penalized) != block.execution_list.skipped_refs():
        _add(violations, Violation.WRONG_PENALTIES)

    verdict = BlockVerdict(violations=tuple(violations))
    if not verdict.valid:
        logger.debug(f"Block for slot {block.slot} fails with {[v.value for v in verdict.violations]}")
    return verdict


def slash_producer(
    registry: IdentityRegistry,
    producer_id: bytes,
    params: ProtocolParams,
    verdict: BlockVerdict,
    slot: int,
) -> Optional[SlashEvent]:
    """Slash delta_prod of the producer bond when the block is invalid."""
    if verdict.valid:
        return None
    event = registry.slash(producer_id, params.delta_prod, SlashReason.PRODUCER_INVALID_BLOCK, slot)
    logger.warning(f"Producer {producer_id.hex()[:12]} slashed {event.amount} for an invalid block at slot {slot}")
    return event


def tally_votes(votes: Mapping[int, bool], params: ProtocolParams) -> bool:
    """A block finalizes iff at least 2f+1 validators accept it."""
    return sum(1 for accepted in votes.values() if accepted) >= params.quorum
