"""
Canonical byte encodings and hashing.

Every message that is signed or hashed goes through this module. Layouts are
fixed-width big-endian; the only variable-length protocol field (tx) always
carries an 8-byte length prefix.

Canonical message (73 bytes):
    tag(1) | idcom(32) | commitment(32) | slot(8)

Signature:
    scheme(1) | length(2) | data

Commit certificate:
    message(COMMIT) | user signature | count(2) | count x (validator_id(2) | signature)

Open certificate:
    message(OPEN) | tx_len(8) | tx | r(32) | idcom(32) | slot(8) | count(2) | receipts

Omission proof:
    kind(1) | commit certificate | open certificate (execution omission only)

Receipts are always written sorted by validator_id.
"""

import hashlib
import struct
from typing import List, Sequence, Tuple

from ..exceptions import DecodeError
from ..schemas.block import Block, ExecutionList, OmissionKind, OmissionProof
from ..schemas.certificates import (
    CanonicalMessage,
    CommitCertificate,
    Commitment,
    CommitmentRef,
    CommitReceipt,
    DomainTag,
    OpenCertificate,
    OpeningSecret,
    OpenReceipt,
    Signature,
)
from ..schemas.common import DIGEST_SIZE
from ..schemas.identity import SchemeId

MESSAGE_SIZE = 1 + DIGEST_SIZE + DIGEST_SIZE + 8

LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"

_SCHEME_CODES = {SchemeId.MOCK: 0x01, SchemeId.ED25519: 0x02}
_SCHEMES_BY_CODE = {code: scheme for scheme, code in _SCHEME_CODES.items()}
_KIND_CODES = {OmissionKind.COMMIT_OMISSION: 0x01, OmissionKind.EXECUTION_OMISSION: 0x02}
_KINDS_BY_CODE = {code: kind for kind, code in _KIND_CODES.items()}


def sha256(data: bytes) -> bytes:
    """SHA-256 digest of ``data``."""
    return hashlib.sha256(data).digest()


def u64(value: int) -> bytes:
    return struct.pack(">Q", value)


def _fixed(value: bytes, size: int, name: str) -> bytes:
    if len(value) != size:
        raise ValueError(f"{name} must be {size} bytes, got {len(value)}")
    return value


def encode_message(msg: CanonicalMessage) -> bytes:
    """Encode a (tag, idcom, commitment, slot) message into its 73-byte form."""
    return (
        bytes([int(msg.domain_tag)])
        + _fixed(msg.idcom, DIGEST_SIZE, "idcom")
        + _fixed(msg.commitment, DIGEST_SIZE, "commitment")
        + u64(msg.slot)
    )


def commit_message(idcom: bytes, c: bytes, slot: int) -> bytes:
    return encode_message(CanonicalMessage(domain_tag=DomainTag.COMMIT, idcom=idcom, commitment=c, slot=slot))


def open_message(idcom: bytes, c: bytes, slot: int) -> bytes:
    return encode_message(CanonicalMessage(domain_tag=DomainTag.OPEN, idcom=idcom, commitment=c, slot=slot))


def commitment_hash(tx: bytes, r: bytes, idcom: bytes, slot: int) -> bytes:
    """c = H(len(tx) | tx | r | idcom | slot)."""
    return sha256(
        u64(len(tx)) + tx + _fixed(r, DIGEST_SIZE, "nonce") + _fixed(idcom, DIGEST_SIZE, "idcom") + u64(slot)
    )


def merkle_root(leaves: Sequence[bytes]) -> bytes:
    """
    Binary Merkle root over leaves already in canonical order.

    Leaf hash is H(0x00 | leaf), interior nodes are H(0x01 | left | right),
    an odd node is promoted unchanged, and the empty tree hashes to H(0x00).
    """
    if not leaves:
        return sha256(LEAF_PREFIX)
    level = [sha256(LEAF_PREFIX + leaf) for leaf in leaves]
    while len(level) > 1:
        parents = [sha256(NODE_PREFIX + level[i] + level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            parents.append(level[-1])
        level = parents
    return level[0]


def encode_signature(sig: Signature) -> bytes:
    return bytes([_SCHEME_CODES[sig.scheme_id]]) + struct.pack(">H", len(sig.data)) + sig.data


def _encode_receipts(receipts) -> bytes:
    ordered = sorted(receipts, key=lambda receipt: receipt.validator_id)
    body = b"".join(struct.pack(">H", receipt.validator_id) + encode_signature(receipt.sig) for receipt in ordered)
    return struct.pack(">H", len(ordered)) + body


def encode_commit_certificate(cert: CommitCertificate) -> bytes:
    commitment = cert.commitment
    return (
        commit_message(commitment.idcom, commitment.c, commitment.slot)
        + encode_signature(commitment.user_sig)
        + _encode_receipts(cert.receipts)
    )


def encode_opening(secret: OpeningSecret) -> bytes:
    return u64(len(secret.tx)) + secret.tx + secret.r + secret.idcom + u64(secret.slot)


def encode_open_certificate(cert: OpenCertificate) -> bytes:
    ref = cert.commit_cert_ref
    return open_message(ref.idcom, ref.c, ref.slot) + encode_opening(cert.secret) + _encode_receipts(cert.receipts)


def encode_omission_proof(proof: OmissionProof) -> bytes:
    out = bytes([_KIND_CODES[proof.kind]]) + encode_commit_certificate(proof.commit_cert)
    if proof.open_cert is not None:
        out += encode_open_certificate(proof.open_cert)
    return out


def proof_id(proof: OmissionProof) -> bytes:
    """Content identifier of an omission proof."""
    return sha256(encode_omission_proof(proof))


class _Reader:
    """Cursor over a canonical byte string."""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int) -> bytes:
        end = self.offset + size
        if end > len(self.data):
            raise DecodeError("unexpected end of data", {"offset": self.offset, "wanted": size})
        chunk = self.data[self.offset:end]
        self.offset = end
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u64(self) -> int:
        return struct.unpack(">Q", self.take(8))[0]

    def message(self, tag: DomainTag) -> Tuple[bytes, bytes, int]:
        found = self.u8()
        if found != int(tag):
            raise DecodeError(f"expected domain tag {int(tag)}, found {found}")
        return self.take(DIGEST_SIZE), self.take(DIGEST_SIZE), self.u64()

    def signature(self) -> Signature:
        code = self.u8()
        if code not in _SCHEMES_BY_CODE:
            raise DecodeError(f"unknown signature scheme code {code}")
        return Signature(data=self.take(self.u16()), scheme_id=_SCHEMES_BY_CODE[code])

    def receipts(self, receipt_type) -> Tuple:
        return tuple(receipt_type(validator_id=self.u16(), sig=self.signature()) for _ in range(self.u16()))

    def done(self) -> None:
        if self.offset != len(self.data):
            raise DecodeError("trailing bytes after canonical encoding")


def _read_commit_certificate(reader: _Reader) -> CommitCertificate:
    idcom, c, slot = reader.message(DomainTag.COMMIT)
    commitment = Commitment(idcom=idcom, c=c, slot=slot, user_sig=reader.signature())
    return CommitCertificate(commitment=commitment, receipts=reader.receipts(CommitReceipt))


def _read_open_certificate(reader: _Reader) -> OpenCertificate:
    idcom, c, slot = reader.message(DomainTag.OPEN)
    tx = reader.take(reader.u64())
    secret = OpeningSecret(tx=tx, r=reader.take(DIGEST_SIZE), idcom=reader.take(DIGEST_SIZE), slot=reader.u64())
    return OpenCertificate(
        secret=secret,
        commit_cert_ref=CommitmentRef(idcom=idcom, c=c, slot=slot),
        receipts=reader.receipts(OpenReceipt),
    )


def decode_omission_proof(data: bytes) -> OmissionProof:
    """Inverse of encode_omission_proof; raises DecodeError on malformed input."""
    reader = _Reader(data)
    code = reader.u8()
    if code not in _KINDS_BY_CODE:
        raise DecodeError(f"unknown omission kind code {code}")
    kind = _KINDS_BY_CODE[code]
    commit_cert = _read_commit_certificate(reader)
    open_cert = _read_open_certificate(reader) if kind == OmissionKind.EXECUTION_OMISSION else None
    reader.done()
    return OmissionProof(kind=kind, commit_cert=commit_cert, open_cert=open_cert)


def encode_execution_list(execution_list: ExecutionList) -> bytes:
    out: List[bytes] = [u64(execution_list.slot), struct.pack(">I", len(execution_list.ordered_txs))]
    for item in execution_list.ordered_txs:
        out.append(struct.pack(">II", item.position, item.entry_index) + item.idcom + item.c + u64(len(item.tx)) + item.tx)
    out.append(struct.pack(">I", len(execution_list.skipped)))
    for entry in execution_list.skipped:
        out.append(struct.pack(">II", entry.position, entry.entry_index) + entry.idcom + entry.c)
    return b"".join(out)


def block_hash(block: Block) -> bytes:
    """Header hash used as prev_block_hash by the next slot."""
    return sha256(
        u64(block.slot)
        + block.prev_block_hash
        + block.bundle.set_root
        + block.bundle.seed
        + sha256(encode_execution_list(block.execution_list))
        + block.producer_id
    )
