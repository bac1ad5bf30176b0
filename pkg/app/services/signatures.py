"""
Signature schemes for authentication keys and validator receipts.

Two interchangeable instantiations sit behind one interface:

* ``MockDeterministicScheme`` - NOT SECURE. The verification key is a hash
  of the seed and the signature is an HMAC keyed by the verification key, so
  anybody holding the public key can sign. It exists only to make simulator
  runs cheap and reproducible and is never used by authenticity tests.
* ``Ed25519Scheme`` - deterministic Ed25519 from the ``cryptography``
  package (EUF-CMA). A post-quantum scheme can be added as another
  ``SignatureScheme`` without touching the protocol services.
"""

import hashlib
import hmac
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Tuple, Union

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey, Ed25519PublicKey

from ..exceptions import ConfigError
from ..schemas.certificates import Signature
from ..schemas.identity import SchemeId


@dataclass(frozen=True)
class SigningKey:
    """Secret signing material bound to its scheme."""

    scheme_id: SchemeId
    secret: bytes = field(repr=False)


class SignatureScheme(ABC):
    """Abstract EUF-CMA signature interface."""

    scheme_id: SchemeId

    @abstractmethod
    def keypair_from_seed(self, seed: bytes) -> Tuple[SigningKey, bytes]:
        """Deterministically derive (signing key, verification key) from a 32-byte seed."""

    @abstractmethod
    def sign(self, signing_key: SigningKey, message: bytes) -> Signature:
        """Sign a canonical message."""

    @abstractmethod
    def verify(self, verification_key: bytes, message: bytes, signature: Signature) -> bool:
        """Return True iff the signature is valid; never raises on malformed input."""


class MockDeterministicScheme(SignatureScheme):
    scheme_id = SchemeId.MOCK

    @staticmethod
    def _public(seed: bytes) -> bytes:
        return hashlib.sha256(b"mock-vk" + seed).digest()

    def keypair_from_seed(self, seed: bytes) -> Tuple[SigningKey, bytes]:
        return SigningKey(scheme_id=self.scheme_id, secret=seed), self._public(seed)

    def sign(self, signing_key: SigningKey, message: bytes) -> Signature:
        mac = hmac.new(self._public(signing_key.secret), message, hashlib.sha256).digest()
        return Signature(data=mac, scheme_id=self.scheme_id)

    def verify(self, verification_key: bytes, message: bytes, signature: Signature) -> bool:
        if signature.scheme_id != self.scheme_id or len(signature.data) != 32:
            return False
        expected = hmac.new(verification_key, message, hashlib.sha256).digest()
        return hmac.compare_digest(expected, signature.data)


class Ed25519Scheme(SignatureScheme):
    scheme_id = SchemeId.ED25519

    def keypair_from_seed(self, seed: bytes) -> Tuple[SigningKey, bytes]:
        private_key = Ed25519PrivateKey.from_private_bytes(seed)
        public = private_key.public_key().public_bytes(
            encoding=serialization.Encoding.Raw, format=serialization.PublicFormat.Raw
        )
        return SigningKey(scheme_id=self.scheme_id, secret=seed), public

    def sign(self, signing_key: SigningKey, message: bytes) -> Signature:
        private_key = Ed25519PrivateKey.from_private_bytes(signing_key.secret)
        return Signature(data=private_key.sign(message), scheme_id=self.scheme_id)

    def verify(self, verification_key: bytes, message: bytes, signature: Signature) -> bool:
        if signature.scheme_id != self.scheme_id or len(signature.data) != 64:
            return False
        try:
            Ed25519PublicKey.from_public_bytes(verification_key).verify(signature.data, message)
        except (InvalidSignature, ValueError):
            return False
        return True


_SCHEMES: Dict[SchemeId, SignatureScheme] = {
    SchemeId.MOCK: MockDeterministicScheme(),
    SchemeId.ED25519: Ed25519Scheme(),
}


def get_scheme(scheme_id: Union[SchemeId, str]) -> SignatureScheme:
    try:
        return _SCHEMES[SchemeId(scheme_id)]
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"unknown signature scheme '{scheme_id}'", field="signature_scheme") from exc


def sign(signing_key: SigningKey, message: bytes) -> Signature:
    return get_scheme(signing_key.scheme_id).sign(signing_key, message)


def verify(verification_key: bytes, message: bytes, signature: Signature, scheme_id: SchemeId) -> bool:
    """
    Verify under the scheme registered for the key.

    A signature that claims a different scheme than the key's is rejected,
    so a mock signature can never stand in for an Ed25519 one.
    """
    if signature.scheme_id != scheme_id:
        return False
    return get_scheme(scheme_id).verify(verification_key, message, signature)
