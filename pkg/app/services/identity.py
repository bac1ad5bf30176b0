"""
Identity service: authentication-key derivation, the bonded identity registry,
per-slot quota tracking and the slashing ledger.
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Union

from ..config import get_auth_context
from ..exceptions import (
    DuplicateIdentityError,
    InsufficientBondError,
    NotRegisteredError,
    QuotaExceededError,
    ValidationError,
)
from ..schemas.identity import (
    IdentityRecord,
    RegistrySnapshot,
    Role,
    RootEntropy,
    SchemeId,
    SlashEvent,
    SlashReason,
)
from ..schemas.params import ProtocolParams
from .codec import sha256, u64
from .signatures import SigningKey, get_scheme

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AuthKeyPair:
    signing_key: SigningKey
    verification_key: bytes


def derive_auth_keypair(
    rev: RootEntropy,
    context: Optional[str] = None,
    scheme_id: Union[SchemeId, str] = SchemeId.ED25519,
) -> AuthKeyPair:
    """
    Derive a context-isolated authentication key pair from an identity root.

    seed = H(rev | len(context) | context); the key pair is generated
    deterministically from the seed under the chosen signature scheme.
    """
    if context is None:
        context = get_auth_context()
    if not context:
        raise ValidationError("derivation context must be non-empty", field="context")
    label = context.encode("utf-8")
    seed = sha256(rev.rev.get_secret_value() + u64(len(label)) + label)
    signing_key, verification_key = get_scheme(scheme_id).keypair_from_seed(seed)
    return AuthKeyPair(signing_key=signing_key, verification_key=verification_key)


def compute_idcom(verification_key: bytes) -> bytes:
    """idcom = H(vk)."""
    return sha256(verification_key)


def required_bond(role: Role, params: ProtocolParams) -> int:
    """Bond floor an identity must hold to act: b_prod for producers, d_stake otherwise."""
    return params.b_prod if role == Role.PRODUCER else params.d_stake


class IdentityRegistry:
    """
    Bonded identity registry.

    A single logical state machine: every mutation goes through one lock, and
    validators work on their own copies (see ``copy``) as local views.
    """

    def __init__(self):
        self._records: Dict[bytes, IdentityRecord] = {}
        self._lock = threading.RLock()
        self.total_deposits = 0
        self.total_slashed = 0

    def __contains__(self, idcom: bytes) -> bool:
        return idcom in self._records

    def __len__(self) -> int:
        return len(self._records)

    def get(self, idcom: bytes) -> Optional[IdentityRecord]:
        return self._records.get(idcom)

    def records(self) -> List[IdentityRecord]:
        return list(self._records.values())

    def register(
        self,
        verification_key: bytes,
        bond: int,
        params: ProtocolParams,
        scheme_id: SchemeId = SchemeId.ED25519,
        role: Role = Role.USER,
    ) -> IdentityRecord:
        """Lock a bond and activate a new identity."""
        idcom = compute_idcom(verification_key)
        required = required_bond(role, params)
        with self._lock:
            if idcom in self._records:
                raise DuplicateIdentityError(idcom.hex())
            if bond < required or bond <= 0:
                raise InsufficientBondError(bond, max(required, 1), {"idcom": idcom.hex()})
            record = IdentityRecord(
                idcom=idcom,
                verification_key=verification_key,
                scheme_id=scheme_id,
                role=role,
                bond=bond,
                deposited=bond,
            )
            self._records[idcom] = record
            self.total_deposits += bond
        logger.debug(f"Registered {role.value} identity {idcom.hex()[:12]} with bond {bond}")
        return record

    def require_active(self, idcom: bytes) -> IdentityRecord:
        record = self._records.get(idcom)
        if record is None or not record.active:
            raise NotRegisteredError(idcom.hex())
        return record

    def require_bonded(self, idcom: bytes, params: ProtocolParams) -> IdentityRecord:
        """Active identity whose bond is still at or above its role's floor."""
        record = self.require_active(idcom)
        required = required_bond(record.role, params)
        if record.bond < required:
            raise InsufficientBondError(record.bond, required, {"idcom": idcom.hex()})
        return record

    def quota_used(self, idcom: bytes, slot: int) -> int:
        record = self._records.get(idcom)
        return record.per_slot_commit_count.get(slot, 0) if record else 0

    def consume_quota(self, idcom: bytes, slot: int, params: ProtocolParams) -> int:
        """Count one more commitment for (idcom, slot); returns the new count."""
        with self._lock:
            record = self.require_bonded(idcom, params)
            used = record.per_slot_commit_count.get(slot, 0)
            if used >= params.quota_l:
                raise QuotaExceededError(idcom.hex(), slot, params.quota_l)
            record.per_slot_commit_count[slot] = used + 1
            return used + 1

    def slash(self, idcom: bytes, fraction: Fraction, reason: SlashReason, slot: int) -> SlashEvent:
        """Burn floor(fraction x current bond); deactivates the identity at zero."""
        fraction = Fraction(fraction)
        if not (Fraction(0) < fraction <= Fraction(1)):
            raise ValidationError(f"slash fraction must be in (0, 1], got {fraction}", field="fraction")
        with self._lock:
            record = self._records.get(idcom)
            if record is None:
                raise NotRegisteredError(idcom.hex())
            amount = record.bond * fraction.numerator // fraction.denominator
            record.bond -= amount
            if record.bond == 0:
                record.active = False
            event = SlashEvent(idcom=idcom, slot=slot, fraction=fraction, amount=amount, reason=reason)
            record.slash_history.append(event)
            self.total_slashed += amount
        logger.info(f"Slashed {idcom.hex()[:12]} by {amount} ({reason.value}) at slot {slot}")
        return event

    def top_up(self, idcom: bytes, amount: int) -> IdentityRecord:
        """Lock ``amount`` more on an existing identity and reactivate it."""
        if amount <= 0:
            raise ValidationError(f"top-up must be positive, got {amount}", field="amount")
        with self._lock:
            record = self._records.get(idcom)
            if record is None:
                raise NotRegisteredError(idcom.hex())
            record.bond += amount
            record.deposited += amount
            record.active = True
            self.total_deposits += amount
        logger.debug(f"Re-bonded {idcom.hex()[:12]} with {amount}")
        return record

    @property
    def locked_total(self) -> int:
        return sum(record.bond for record in self._records.values())

    def check_conservation(self) -> bool:
        """Locked bonds plus cumulative slashes equal cumulative deposits."""
        return self.locked_total + self.total_slashed == self.total_deposits

    def slash_events(self) -> List[SlashEvent]:
        return [event for record in self._records.values() for event in record.slash_history]

    def copy(self) -> "IdentityRegistry":
        clone = IdentityRegistry()
        clone._records = {idcom: record.model_copy(deep=True) for idcom, record in self._records.items()}
        clone.total_deposits = self.total_deposits
        clone.total_slashed = self.total_slashed
        return clone

    def snapshot(self) -> RegistrySnapshot:
        return RegistrySnapshot(
            identities=[record.model_copy(deep=True) for record in self._records.values()],
            total_deposits=self.total_deposits,
            total_slashed=self.total_slashed,
        )

    @classmethod
    def from_snapshot(cls, snapshot: RegistrySnapshot) -> "IdentityRegistry":
        registry = cls()
        for record in snapshot.identities:
            if compute_idcom(record.verification_key) != record.idcom:
                raise ValidationError("idcom does not match the verification key", field="idcom")
            registry._records[record.idcom] = record.model_copy(deep=True)
        registry.total_deposits = snapshot.total_deposits
        registry.total_slashed = snapshot.total_slashed
        return registry

    def export_json(self) -> str:
        return self.snapshot().model_dump_json(indent=2)

    @classmethod
    def import_json(cls, document: str) -> "IdentityRegistry":
        return cls.from_snapshot(RegistrySnapshot.model_validate_json(document))

    def idcoms(self) -> Iterable[bytes]:
        return self._records.keys()
