"""
Pytest configuration and fixtures for MEV-ACE Lab tests.

This module provides shared fixtures for protocol parameters, validator
committees, registries, an in-memory archive database and a small protocol
kit that drives honest commit/open rounds.
"""

import json
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

from app.database import Base
from app.models import IdentityRow, SlashEventRow, SlotOutcomeRow  # noqa: F401
from app.schemas.block import Block
from app.schemas.certificates import CommitCertificate, OpenCertificate, OpeningSecret, ValidatorInfo, ValidatorSet
from app.schemas.identity import Role, RootEntropy, SchemeId
from app.schemas.ordering import AdmissibleSet
from app.schemas.params import ProtocolParams, SlotBudget
from app.schemas.scenario import ScenarioConfig
from app.services.codec import sha256
from app.services.commit_phase import (
    SlotClock,
    ValidatorCredentials,
    aggregate_commit_certificate,
    make_commitment,
    validator_check_commitment,
)
from app.services.identity import AuthKeyPair, IdentityRegistry, derive_auth_keypair
from app.services.open_phase import aggregate_open_certificate, build_execution_list, validator_check_opening
from app.services.ordering import canonicalize, produce_ordering
from app.services.signatures import get_scheme
from app.services.vdf import make_vdf_params

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN_VECTORS = Path(__file__).resolve().parent / "fixtures" / "golden_vectors.txt"
HONEST_SLOTS = Path(__file__).resolve().parent / "fixtures" / "honest_slots.json"

# Test database setup
SQLALCHEMY_DATABASE_URL = "sqlite:///:memory:"

engine = create_engine(
    SQLALCHEMY_DATABASE_URL,
    connect_args={"check_same_thread": False},
    poolclass=StaticPool,
)

TestingSessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


@pytest.fixture(scope="function")
def db_session():
    """
    Create a fresh archive database session for each test.

    Tables are created on an in-memory SQLite database and dropped afterwards,
    ensuring complete isolation between tests.
    """
    Base.metadata.create_all(bind=engine)
    session = TestingSessionLocal()
    try:
        yield session
    finally:
        session.close()
        Base.metadata.drop_all(bind=engine)


def build_params(**overrides) -> ProtocolParams:
    values = dict(
        f=1,
        n=4,
        q_c=3,
        q_o=3,
        quota_l=2,
        d_stake=100,
        b_prod=1000,
        delta_user="1/10",
        delta_prod="1/2",
        vdf_delay_T=16,
        slot_budget=SlotBudget(total=27, commit=10, vdf=5, open=10, margin=2),
    )
    values.update(overrides)
    return ProtocolParams(**values)


@pytest.fixture
def params() -> ProtocolParams:
    """n=4, f=1, q_c=q_o=3, quota 2, D=100, B=1000, deltas 1/10 and 1/2."""
    return build_params()


@pytest.fixture
def make_params() -> Callable[..., ProtocolParams]:
    return build_params


def build_validators(n: int, scheme: SchemeId = SchemeId.MOCK) -> Tuple[List[ValidatorCredentials], ValidatorSet]:
    credentials, members = [], []
    for index in range(n):
        signing_key, verification_key = get_scheme(scheme).keypair_from_seed(sha256(b"test-validator" + bytes([index])))
        credentials.append(ValidatorCredentials(validator_id=index, signing_key=signing_key))
        members.append(ValidatorInfo(validator_id=index, verification_key=verification_key, scheme_id=scheme))
    return credentials, ValidatorSet(members=tuple(members))


@pytest.fixture
def validators(params) -> List[ValidatorCredentials]:
    return build_validators(params.n)[0]


@pytest.fixture
def validator_set(params) -> ValidatorSet:
    return build_validators(params.n)[1]


@pytest.fixture
def registry() -> IdentityRegistry:
    return IdentityRegistry()


class ProtocolKit:
    """Drives honest commit and open rounds against one registry."""

    def __init__(self, params: ProtocolParams, registry: IdentityRegistry, scheme: SchemeId = SchemeId.MOCK):
        self.params = params
        self.registry = registry
        self.scheme = scheme
        self.validators, self.validator_set = build_validators(params.n, scheme)
        self._views: Optional[Dict[int, IdentityRegistry]] = None

    def register_user(self, label: str, bond: Optional[int] = None, role: Role = Role.USER) -> Tuple[AuthKeyPair, bytes]:
        keys = derive_auth_keypair(RootEntropy.from_bytes(sha256(label.encode("utf-8"))), scheme_id=self.scheme)
        default = self.params.b_prod if role == Role.PRODUCER else self.params.d_stake
        record = self.registry.register(
            keys.verification_key, bond or default, self.params, scheme_id=self.scheme, role=role
        )
        self._views = None
        return keys, record.idcom

    def views(self) -> Dict[int, IdentityRegistry]:
        if self._views is None:
            self._views = {cred.validator_id: self.registry.copy() for cred in self.validators}
        return self._views

    def commit(self, keys: AuthKeyPair, idcom: bytes, tx: bytes, slot: int = 0) -> Tuple[CommitCertificate, OpeningSecret]:
        commitment, secret = make_commitment(
            keys.signing_key, idcom, tx, slot, nonce_source=lambda size: sha256(b"nonce" + tx + idcom)[:size]
        )
        clock = SlotClock(slot=slot, tick=0)
        views = self.views()
        receipts = [
            validator_check_commitment(views[cred.validator_id], commitment, clock, self.params, cred)
            for cred in self.validators
        ]
        return aggregate_commit_certificate(commitment, receipts, self.params, self.validator_set), secret

    def open(self, admissible: AdmissibleSet, secret: OpeningSecret) -> OpenCertificate:
        clock = SlotClock(slot=secret.slot, tick=self.params.slot_budget.open_start)
        receipts = [
            validator_check_opening(admissible, secret, clock, self.params, self.registry, cred)
            for cred in self.validators
        ]
        return aggregate_open_certificate(secret, receipts, self.params, self.validator_set)

    def honest_block(
        self,
        certs: List[CommitCertificate],
        secrets: List[OpeningSecret],
        prev_block_hash: bytes,
        producer_id: bytes,
        slot: int = 0,
    ) -> Block:
        """Canonical set, real ordering, every given secret opened."""
        admissible = canonicalize(certs, slot)
        bundle = produce_ordering(admissible, prev_block_hash, make_vdf_params(self.params.vdf_delay_T))
        opened = [self.open(admissible, secret) for secret in secrets]
        execution_list = build_execution_list(bundle, admissible, opened)
        return Block(
            slot=slot,
            prev_block_hash=prev_block_hash,
            bundle=bundle,
            admissible=admissible,
            execution_list=execution_list,
            open_certificates=tuple(opened),
            penalized=execution_list.skipped_refs(),
            producer_id=producer_id,
        )


@pytest.fixture
def kit(params, registry) -> ProtocolKit:
    return ProtocolKit(params, registry)


@pytest.fixture
def prev_hash() -> bytes:
    return sha256(b"previous block")


def load_fixture_scenario(name: str) -> ScenarioConfig:
    return ScenarioConfig.model_validate_json((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture
def honest_scenario() -> ScenarioConfig:
    return load_fixture_scenario("honest_baseline.json")


@pytest.fixture
def censorship_scenario() -> ScenarioConfig:
    return load_fixture_scenario("censorship.json")


@pytest.fixture(scope="session")
def golden_vectors() -> Dict[str, List[List[str]]]:
    """Golden vectors grouped by kind; each entry is the list of fields."""
    vectors: Dict[str, List[List[str]]] = {}
    for line in GOLDEN_VECTORS.read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        kind, *fields = line.split()
        vectors.setdefault(kind, []).append(fields)
    return vectors


@pytest.fixture(scope="session")
def honest_slots() -> dict:
    """Expected artifacts of two chained honest slots of the baseline scenario."""
    return json.loads(HONEST_SLOTS.read_text(encoding="utf-8"))
