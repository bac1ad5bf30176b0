"""
Custom exceptions for MEV-ACE Lab.

This module defines custom exception classes for consistent error handling
across the protocol services. Every protocol rejection carries a stable
``code`` so the simulator can assert on exact failure causes.
"""

from typing import Any, Dict, Optional


class MevAceException(Exception):
    """Base exception class for MEV-ACE Lab."""

    code = "error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class NotRegisteredError(MevAceException):
    """Raised when an identity is unknown or inactive."""

    code = "not_registered"

    def __init__(self, idcom: str, details: Optional[Dict[str, Any]] = None):
        message = f"Identity '{idcom}' is not registered or not active"
        super().__init__(message, details)


class DuplicateIdentityError(MevAceException):
    """Raised when trying to register an idcom twice."""

    code = "duplicate_identity"

    def __init__(self, idcom: str, details: Optional[Dict[str, Any]] = None):
        message = f"Identity '{idcom}' already registered"
        super().__init__(message, details)


class InsufficientBondError(MevAceException):
    """Raised when a registration bond is below the required minimum."""

    code = "insufficient_bond"

    def __init__(self, bond: int, required: int, details: Optional[Dict[str, Any]] = None):
        message = f"Bond {bond} is below the required {required}"
        super().__init__(message, details)


class BadSignatureError(MevAceException):
    """Raised when a user signature does not verify under the registered key."""

    code = "bad_signature"

    def __init__(self, message: str = "Signature verification failed", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class QuotaExceededError(MevAceException):
    """Raised when an identity has used its per-slot commitment quota."""

    code = "quota_exceeded"

    def __init__(self, idcom: str, slot: int, quota: int, details: Optional[Dict[str, Any]] = None):
        message = f"Identity '{idcom}' reached quota {quota} for slot {slot}"
        super().__init__(message, details)


class PastCutoffError(MevAceException):
    """Raised when a message arrives after its phase cutoff."""

    code = "past_cutoff"

    def __init__(self, message: str = "Phase cutoff has passed", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class WindowNotOpenError(MevAceException):
    """Raised when a message arrives before its phase window opens."""

    code = "window_not_open"

    def __init__(self, message: str = "Phase window is not open yet", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class InsufficientReceiptsError(MevAceException):
    """Raised when fewer than the threshold of distinct valid receipts remain."""

    code = "insufficient_receipts"

    def __init__(self, valid: int, threshold: int, details: Optional[Dict[str, Any]] = None):
        message = f"Only {valid} distinct valid receipts, threshold is {threshold}"
        super().__init__(message, details)


class NoMatchingCommitmentError(MevAceException):
    """Raised when an opening has no admissible commitment for its identity and slot."""

    code = "no_matching_commitment"

    def __init__(self, message: str = "No admissible commitment matches the opening", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class HashMismatchError(MevAceException):
    """Raised when an opening does not hash to the committed value."""

    code = "hash_mismatch"

    def __init__(self, message: str = "Opening does not match the commitment hash", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class IdentityInactiveError(MevAceException):
    """Raised when an opening belongs to an identity that is no longer active."""

    code = "identity_inactive"

    def __init__(self, idcom: str, details: Optional[Dict[str, Any]] = None):
        message = f"Identity '{idcom}' is no longer active and slashable"
        super().__init__(message, details)


class MalformedProofError(MevAceException):
    """Raised when an omission proof has an invalid shape."""

    code = "malformed_proof"

    def __init__(self, message: str = "Malformed omission proof", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class InvalidInputError(MevAceException):
    """Raised when an operation receives structurally invalid input."""

    code = "invalid_input"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class DecodeError(MevAceException):
    """Raised when a canonical byte encoding cannot be decoded."""

    code = "decode_error"

    def __init__(self, message: str = "Malformed canonical encoding", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)


class ConfigError(MevAceException):
    """Raised when a scenario or parameter document is invalid."""

    code = "config_error"

    def __init__(self, message: str, field: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        if field:
            message = f"Configuration error in field '{field}': {message}"
        super().__init__(message, details)


class ValidationError(MevAceException):
    """Raised when data validation fails."""

    code = "validation_error"

    def __init__(self, message: str, field: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        if field:
            message = f"Validation error in field '{field}': {message}"
        super().__init__(message, details)
