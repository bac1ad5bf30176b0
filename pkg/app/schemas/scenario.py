"""
Pydantic schemas for simulator scenarios, slot outcomes and campaign metrics.

Scenarios are loaded from JSON documents; see fixtures/ for examples.
"""
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from ..config import get_settings
from .block import Block, BlockVerdict, OmissionProof
from .certificates import ValidatorSet
from .common import Digest
from .economics import GainModel
from .identity import SchemeId, SlashEvent
from .params import ProtocolParams


class StrategyKind(str, Enum):
    HONEST = "honest"
    STUFF = "stuff"
    SELECTIVE_NON_OPEN = "selective_non_open"
    REORDER = "reorder"
    CENSOR = "censor"
    FAKE_VDF = "fake_vdf"


class CensorStage(str, Enum):
    COMMIT = "commit"
    EXECUTION = "execution"


class ProducerStrategy(BaseModel):
    """
    Scripted producer behaviour.

    ``stuff_count`` is k for STUFF, ``withhold`` the number of
    producer-controlled commitments left unopened for SELECTIVE_NON_OPEN,
    ``targets`` the censored user names for CENSOR and ``target_order``
    an optional explicit execution order for REORDER, given as positions
    of the seeded permutation.
    """

    model_config = ConfigDict(frozen=True)

    kind: StrategyKind = StrategyKind.HONEST
    stuff_count: int = Field(default=0, ge=0)
    withhold: int = Field(default=1, ge=0)
    targets: Tuple[str, ...] = ()
    stage: CensorStage = CensorStage.COMMIT
    target_order: Optional[Tuple[int, ...]] = None

    @model_validator(mode="after")
    def _check_kind(self) -> "ProducerStrategy":
        if self.kind == StrategyKind.STUFF and self.stuff_count < 1:
            raise ValueError("stuff strategy needs stuff_count >= 1")
        if self.kind == StrategyKind.CENSOR and not self.targets:
            raise ValueError("censor strategy needs at least one target")
        if self.kind == StrategyKind.SELECTIVE_NON_OPEN and self.withhold < 1:
            raise ValueError("selective_non_open needs withhold >= 1")
        return self

    @property
    def label(self) -> str:
        if self.kind == StrategyKind.STUFF:
            return f"stuff({self.stuff_count})"
        if self.kind == StrategyKind.SELECTIVE_NON_OPEN:
            return f"selective_non_open({self.withhold})"
        if self.kind == StrategyKind.CENSOR:
            return f"censor({self.stage.value})"
        return self.kind.value


class ValidatorBehavior(str, Enum):
    HONEST = "honest"
    SILENT = "silent"
    GARBAGE_RECEIPTS = "garbage_receipts"


class UserSpec(BaseModel):
    """
    A scripted user. ``txs`` are UTF-8 payloads committed every slot;
    ``rev`` defaults to a value derived from the scenario seed and name.
    """

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., min_length=1)
    txs: Tuple[str, ...] = Field(..., min_length=1)
    opens: bool = True
    victim: bool = False
    producer_owned: bool = False
    rev: Optional[Digest] = None
    bond: Optional[int] = Field(default=None, ge=1)


class PayoffConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    sandwich_value: int = Field(default=0, ge=0)


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = "scenario"
    params: ProtocolParams
    users: Tuple[UserSpec, ...] = Field(..., min_length=1)
    validators: Tuple[ValidatorBehavior, ...]
    strategy: ProducerStrategy = ProducerStrategy()
    gains: GainModel = GainModel()
    payoff: PayoffConfig = PayoffConfig()
    seed: int = Field(default_factory=lambda: get_settings().default_seed, ge=0)
    proof_latency: int = Field(default=1, ge=0)
    vote_delay: int = Field(default=2, ge=0)
    producer_head_start: int = Field(default=0, ge=0)
    signature_scheme: Optional[SchemeId] = None
    k_max: int = Field(default=10, ge=1)

    @model_validator(mode="after")
    def _check_roster(self) -> "ScenarioConfig":
        params = self.params
        if len(self.validators) != params.n:
            raise ValueError(f"expected {params.n} validators, got {len(self.validators)}")
        byzantine = sum(1 for behavior in self.validators if behavior != ValidatorBehavior.HONEST)
        if byzantine > params.f:
            raise ValueError(f"{byzantine} Byzantine validators exceed f={params.f}")
        names = [user.name for user in self.users]
        if len(set(names)) != len(names):
            raise ValueError("user names must be unique")
        unknown = [target for target in self.strategy.targets if target not in names]
        if unknown:
            raise ValueError(f"censor targets are not users: {unknown}")
        for user in self.users:
            if user.bond is not None and user.bond < params.d_stake:
                raise ValueError(f"user '{user.name}' bond is below d_stake")
        return self

    @property
    def byzantine_count(self) -> int:
        return sum(1 for behavior in self.validators if behavior != ValidatorBehavior.HONEST)


class TraceEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    tick: int
    event: str
    detail: str = ""


class SlotOutcome(BaseModel):
    """Everything one simulated slot produced."""

    model_config = ConfigDict(frozen=True)

    slot: int
    strategy: str
    deviated: bool
    finalized: bool
    block: Block
    block_hash: Optional[Digest] = None
    verdict: BlockVerdict
    accept_votes: int
    proofs: Tuple[OmissionProof, ...] = ()
    timely_proofs: int = 0
    slash_events: Tuple[SlashEvent, ...] = ()
    payoffs: Dict[str, int] = Field(default_factory=dict)
    producer_payoff: int
    measured_mev: int
    conservation_holds: bool
    trace: Tuple[TraceEvent, ...] = ()

    @property
    def rejected(self) -> bool:
        return not self.finalized


class ArtifactBundle(BaseModel):
    """Self-contained material to re-verify a block or proof offline."""

    model_config = ConfigDict(frozen=True)

    params: ProtocolParams
    validator_set: ValidatorSet
    prev_block_hash: Digest
    block: Block
    proofs_hex: Tuple[str, ...] = ()


class CampaignMetrics(BaseModel):
    slots: int = 0
    finalized: int = 0
    rejected: int = 0
    permutation_histogram: Dict[str, int] = Field(default_factory=dict)
    position_histogram: Dict[int, List[int]] = Field(default_factory=dict)
    uniformity_p_value: Optional[float] = None
    slash_totals: Dict[str, int] = Field(default_factory=dict)
    payoff_table: Dict[str, int] = Field(default_factory=dict)
    conservation_holds: bool = True

    @computed_field
    @property
    def rejection_rate(self) -> float:
        return self.rejected / self.slots if self.slots else 0.0
