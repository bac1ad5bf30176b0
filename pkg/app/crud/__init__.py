"""
Archive persistence helpers. Every function takes an open Session.
"""

from .registry import list_slot_outcomes, load_registry, record_slot_outcome, save_registry

__all__ = ["save_registry", "load_registry", "record_slot_outcome", "list_slot_outcomes"]
