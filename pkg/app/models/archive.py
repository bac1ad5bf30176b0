"""
SQLAlchemy models for the run archive: registry identities, their slash
history and per-slot outcome summaries, grouped by run label.
"""

from __future__ import annotations

from datetime import datetime, timezone

from sqlalchemy import JSON, Boolean, Column, DateTime, ForeignKey, Integer, String, UniqueConstraint
from sqlalchemy.orm import relationship

from ..database import Base

UTC = timezone.utc


class IdentityRow(Base):
    __tablename__ = "identities"
    __table_args__ = (UniqueConstraint("run_label", "idcom", name="uq_identity_run_idcom"),)

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_label = Column(String(128), nullable=False, index=True)
    idcom = Column(String(64), nullable=False, index=True)
    verification_key = Column(String(256), nullable=False)
    scheme_id = Column(String(16), nullable=False)
    role = Column(String(16), nullable=False, default="user")
    bond = Column(Integer, nullable=False)
    deposited = Column(Integer, nullable=False)
    active = Column(Boolean, default=True, nullable=False)
    # slot number (as string key) -> commitments admitted
    per_slot_commit_count = Column(JSON, default=dict)

    created_at = Column(DateTime, default=lambda: datetime.now(UTC))

    slash_events = relationship(
        "SlashEventRow",
        back_populates="identity",
        cascade="all, delete-orphan",
        order_by="SlashEventRow.sequence",
    )

    def __repr__(self):
        return f"<IdentityRow(run='{self.run_label}', idcom='{self.idcom[:12]}', bond={self.bond})>"


class SlashEventRow(Base):
    __tablename__ = "slash_events"

    id = Column(Integer, primary_key=True, autoincrement=True)
    identity_id = Column(Integer, ForeignKey("identities.id", ondelete="CASCADE"), nullable=False, index=True)
    sequence = Column(Integer, nullable=False)
    slot = Column(Integer, nullable=False, index=True)
    fraction = Column(String(64), nullable=False)  # "n/d"
    amount = Column(Integer, nullable=False)
    reason = Column(String(32), nullable=False)

    identity = relationship("IdentityRow", back_populates="slash_events")


class SlotOutcomeRow(Base):
    __tablename__ = "slot_outcomes"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_label = Column(String(128), nullable=False, index=True)
    slot = Column(Integer, nullable=False)
    strategy = Column(String(64), nullable=False)
    finalized = Column(Boolean, nullable=False)
    block_hash = Column(String(64), nullable=True)
    violations = Column(JSON, default=list)
    producer_payoff = Column(Integer, nullable=False)
    measured_mev = Column(Integer, nullable=False)
    slashed_total = Column(Integer, nullable=False, default=0)
    admissible_size = Column(Integer, nullable=False)

    created_at = Column(DateTime, default=lambda: datetime.now(UTC))
