"""
MEV-ACE Lab models package.

This package contains the SQLAlchemy models of the run archive.
"""

from .archive import IdentityRow, SlashEventRow, SlotOutcomeRow

__all__ = [
    "IdentityRow",
    "SlashEventRow",
    "SlotOutcomeRow",
]
