"""
MEV-ACE Lab schemas package.

Pydantic models for protocol parameters, identities, certificates, ordering
material, blocks, economics and simulator scenarios.
"""

from .block import (
    Block, BlockVerdict, ExecutedTx, ExecutionList, OmissionKind, OmissionProof,
    SkippedEntry, Violation,
)
from .certificates import (
    CanonicalMessage, CommitCertificate, Commitment, CommitmentRef, CommitReceipt,
    DomainTag, OpenCertificate, OpeningSecret, OpenReceipt, Receipt, Signature,
    ValidatorInfo, ValidatorSet,
)
from .common import DIGEST_SIZE, MAX_SLOT, Digest, HexBytes, Ratio, SlotNumber, TokenAmount
from .economics import FixedParams, GainModel, IncentiveReport, ParameterSuggestion
from .identity import IdentityRecord, RegistrySnapshot, Role, RootEntropy, SchemeId, SlashEvent, SlashReason
from .ordering import AdmissibleSet, OrderingBundle, Permutation, VdfOutput, VdfParams
from .params import ProtocolParams, SlotBudget
from .scenario import (
    ArtifactBundle, CampaignMetrics, CensorStage, PayoffConfig, ProducerStrategy,
    ScenarioConfig, SlotOutcome, StrategyKind, TraceEvent, UserSpec, ValidatorBehavior,
)

__all__ = [
    # Blocks and accountability
    "Block", "BlockVerdict", "ExecutedTx", "ExecutionList", "OmissionKind", "OmissionProof",
    "SkippedEntry", "Violation",

    # Certificates
    "CanonicalMessage", "CommitCertificate", "Commitment", "CommitmentRef", "CommitReceipt",
    "DomainTag", "OpenCertificate", "OpeningSecret", "OpenReceipt", "Receipt", "Signature",
    "ValidatorInfo", "ValidatorSet",

    # Field types
    "DIGEST_SIZE", "MAX_SLOT", "Digest", "HexBytes", "Ratio", "SlotNumber", "TokenAmount",

    # Economics
    "FixedParams", "GainModel", "IncentiveReport", "ParameterSuggestion",

    # Identities
    "IdentityRecord", "RegistrySnapshot", "Role", "RootEntropy", "SchemeId", "SlashEvent", "SlashReason",

    # Ordering
    "AdmissibleSet", "OrderingBundle", "Permutation", "VdfOutput", "VdfParams",

    # Parameters
    "ProtocolParams", "SlotBudget",

    # Simulation
    "ArtifactBundle", "CampaignMetrics", "CensorStage", "PayoffConfig", "ProducerStrategy",
    "ScenarioConfig", "SlotOutcome", "StrategyKind", "TraceEvent", "UserSpec", "ValidatorBehavior",
]
