"""
Archive persistence for registries and slot outcomes.
"""

import logging
from fractions import Fraction
from typing import List

from sqlalchemy.orm import Session

from ..exceptions import ValidationError
from ..models import IdentityRow, SlashEventRow, SlotOutcomeRow
from ..schemas.identity import IdentityRecord, RegistrySnapshot, SlashEvent
from ..schemas.scenario import SlotOutcome
from ..services.identity import IdentityRegistry

logger = logging.getLogger(__name__)


def save_registry(db: Session, registry: IdentityRegistry, run_label: str) -> int:
    """Replace the archived registry of ``run_label``; returns the identity count."""
    for stale in db.query(IdentityRow).filter(IdentityRow.run_label == run_label).all():
        db.delete(stale)
    db.flush()
    for record in registry.records():
        row = IdentityRow(
            run_label=run_label,
            idcom=record.idcom.hex(),
            verification_key=record.verification_key.hex(),
            scheme_id=record.scheme_id.value,
            role=record.role.value,
            bond=record.bond,
            deposited=record.deposited,
            active=record.active,
            per_slot_commit_count={str(slot): count for slot, count in record.per_slot_commit_count.items()},
        )
        for sequence, event in enumerate(record.slash_history):
            row.slash_events.append(
                SlashEventRow(
                    sequence=sequence,
                    slot=event.slot,
                    fraction=f"{event.fraction.numerator}/{event.fraction.denominator}",
                    amount=event.amount,
                    reason=event.reason.value,
                )
            )
        db.add(row)
    db.commit()
    logger.info(f"Archived {len(registry)} identities for run '{run_label}'")
    return len(registry)


def load_registry(db: Session, run_label: str) -> IdentityRegistry:
    """
    Rebuild a registry from the archive.

    Deposit and slash totals are recomputed from the rows, so the rebuilt
    registry satisfies conservation iff the archived one did.
    """
    rows = db.query(IdentityRow).filter(IdentityRow.run_label == run_label).order_by(IdentityRow.id).all()
    if not rows:
        raise ValidationError(f"no archived registry for run '{run_label}'", field="run_label")
    records = []
    for row in rows:
        history = [
            SlashEvent(
                idcom=row.idcom,
                slot=event.slot,
                fraction=Fraction(event.fraction),
                amount=event.amount,
                reason=event.reason,
            )
            for event in row.slash_events
        ]
        records.append(
            IdentityRecord(
                idcom=row.idcom,
                verification_key=row.verification_key,
                scheme_id=row.scheme_id,
                role=row.role,
                bond=row.bond,
                deposited=row.deposited,
                active=row.active,
                per_slot_commit_count={int(slot): count for slot, count in (row.per_slot_commit_count or {}).items()},
                slash_history=history,
            )
        )
    snapshot = RegistrySnapshot(
        identities=records,
        total_deposits=sum(record.deposited for record in records),
        total_slashed=sum(event.amount for record in records for event in record.slash_history),
    )
    return IdentityRegistry.from_snapshot(snapshot)


def record_slot_outcome(db: Session, run_label: str, outcome: SlotOutcome, commit: bool = True) -> SlotOutcomeRow:
    row = SlotOutcomeRow(
        run_label=run_label,
        slot=outcome.slot,
        strategy=outcome.strategy,
        finalized=outcome.finalized,
        block_hash=outcome.block_hash.hex() if outcome.block_hash else None,
        violations=[violation.value for violation in outcome.verdict.violations],
        producer_payoff=outcome.producer_payoff,
        measured_mev=outcome.measured_mev,
        slashed_total=sum(event.amount for event in outcome.slash_events),
        admissible_size=len(outcome.block.admissible),
    )
    db.add(row)
    if commit:
        db.commit()
        db.refresh(row)
    return row


def list_slot_outcomes(db: Session, run_label: str) -> List[SlotOutcomeRow]:
    return (
        db.query(SlotOutcomeRow)
        .filter(SlotOutcomeRow.run_label == run_label)
        .order_by(SlotOutcomeRow.id)
        .all()
    )
