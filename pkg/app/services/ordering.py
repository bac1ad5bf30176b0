"""
Ordering phase: canonical admissible set, VDF input, delayed seed and the
seeded Fisher-Yates execution permutation.

Randomness stream: block_k = H(seed | k) for k = 0, 1, ... (k as 8-byte
big-endian), each block read as four successive 8-byte big-endian words.
At shuffle step i (from m-1 down to 1) a word w is accepted only if
w < floor(2^64 / (i+1)) * (i+1), and then j = w mod (i+1).
"""

import logging
import struct
from enum import Enum
from typing import Iterable, Iterator, Optional

from pydantic import BaseModel, ConfigDict

from ..exceptions import InvalidInputError
from ..schemas.certificates import CommitCertificate
from ..schemas.ordering import AdmissibleSet, OrderingBundle, Permutation, VdfOutput, VdfParams
from .codec import encode_commit_certificate, merkle_root, sha256, u64
from .vdf import vdf_eval, vdf_verify

logger = logging.getLogger(__name__)

WORD_SPACE = 2**64


class OrderingFailure(str, Enum):
    ROOT_MISMATCH = "root_mismatch"
    INPUT_MISMATCH = "input_mismatch"
    VDF_INVALID = "vdf_invalid"
    PERMUTATION_MISMATCH = "permutation_mismatch"


class OrderingVerification(BaseModel):
    model_config = ConfigDict(frozen=True)

    valid: bool
    reason: Optional[OrderingFailure] = None

    def __bool__(self) -> bool:
        return self.valid


def _normalized(cert: CommitCertificate) -> CommitCertificate:
    receipts = tuple(sorted(cert.receipts, key=lambda receipt: receipt.validator_id))
    return cert if receipts == cert.receipts else cert.model_copy(update={"receipts": receipts})


def canonicalize(certificates: Iterable[CommitCertificate], slot: int) -> AdmissibleSet:
    """
    Sort certificates by (idcom, c) and drop duplicate pairs.

    When two certificates share (idcom, c), the one whose normalized
    encoding sorts first is kept.
    """
    chosen = {}
    for cert in certificates:
        if cert.commitment.slot != slot:
            raise InvalidInputError(
                "certificate belongs to another slot",
                {"expected": slot, "found": cert.commitment.slot},
            )
        cert = _normalized(cert)
        current = chosen.get(cert.key)
        if current is None or encode_commit_certificate(cert) < encode_commit_certificate(current):
            chosen[cert.key] = cert
    return AdmissibleSet(slot=slot, entries=tuple(chosen[key] for key in sorted(chosen)))


def is_canonical(admissible: AdmissibleSet) -> bool:
    keys = [entry.key for entry in admissible.entries]
    if any(entry.commitment.slot != admissible.slot for entry in admissible.entries):
        return False
    return all(keys[i] < keys[i + 1] for i in range(len(keys) - 1)) and all(
        entry.receipts == tuple(sorted(entry.receipts, key=lambda receipt: receipt.validator_id))
        for entry in admissible.entries
    )


def set_root(admissible: AdmissibleSet) -> bytes:
    return merkle_root([encode_commit_certificate(entry) for entry in admissible.entries])


def derive_vdf_input(prev_block_hash: bytes, root: bytes, slot: int) -> bytes:
    """x_s = H(prev_block_hash | root | slot)."""
    return sha256(prev_block_hash + root + u64(slot))


def _words(seed: bytes) -> Iterator[int]:
    counter = 0
    while True:
        block = sha256(seed + u64(counter))
        yield from struct.unpack(">4Q", block)
        counter += 1


def derive_permutation(seed: bytes, m: int) -> Permutation:
    """Seeded Fisher-Yates with rejection sampling over the pinned word stream."""
    if m < 0:
        raise InvalidInputError("permutation size must be non-negative", {"m": m})
    mapping = list(range(m))
    words = _words(seed)
    for i in range(m - 1, 0, -1):
        bound = i + 1
        limit = (WORD_SPACE // bound) * bound
        word = next(words)
        while word >= limit:
            word = next(words)
        j = word % bound
        mapping[i], mapping[j] = mapping[j], mapping[i]
    return Permutation(mapping=tuple(mapping))


def produce_ordering(admissible: AdmissibleSet, prev_block_hash: bytes, vdf_params: VdfParams) -> OrderingBundle:
    """Alg. order: root, VDF input, delayed seed, permutation."""
    root = set_root(admissible)
    x = derive_vdf_input(prev_block_hash, root, admissible.slot)
    output = vdf_eval(vdf_params, x)
    permutation = derive_permutation(output.y, len(admissible))
    logger.debug(f"Slot {admissible.slot}: ordered {len(admissible)} entries, seed {output.y.hex()[:12]}")
    return OrderingBundle(
        set_root=root,
        vdf_input=x,
        seed=output.y,
        vdf_proof=output.proof,
        permutation=permutation,
    )


def verify_ordering(
    bundle: OrderingBundle,
    admissible: AdmissibleSet,
    prev_block_hash: bytes,
    vdf_params: VdfParams,
) -> OrderingVerification:
    """Recompute root, VDF input, VDF proof and permutation; report the first mismatch."""
    root = set_root(admissible)
    if bundle.set_root != root:
        return OrderingVerification(valid=False, reason=OrderingFailure.ROOT_MISMATCH)
    x = derive_vdf_input(prev_block_hash, root, admissible.slot)
    if bundle.vdf_input != x:
        return OrderingVerification(valid=False, reason=OrderingFailure.INPUT_MISMATCH)
    if not bundle.vdf_proof or not vdf_verify(vdf_params, x, VdfOutput(y=bundle.seed, proof=bundle.vdf_proof)):
        return OrderingVerification(valid=False, reason=OrderingFailure.VDF_INVALID)
    if bundle.permutation != derive_permutation(bundle.seed, len(admissible)):
        return OrderingVerification(valid=False, reason=OrderingFailure.PERMUTATION_MISMATCH)
    return OrderingVerification(valid=True)
