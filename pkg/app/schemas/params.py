"""
Pydantic schemas for protocol parameters.
"""
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .common import Ratio, TokenAmount


class SlotBudget(BaseModel):
    """
    Abstract-time allocation of one slot.

    ``total`` is the declared slot length Δ; the components are Δ_c, Δ_v,
    Δ_o and Δ_margin in ticks. The budget itself is not validated here so
    that timing checks can report on inconsistent budgets.
    """

    model_config = ConfigDict(frozen=True)

    total: int
    commit: int
    vdf: int
    open: int
    margin: int

    @property
    def components(self) -> tuple:
        return (self.commit, self.vdf, self.open, self.margin)

    @property
    def commit_cutoff(self) -> int:
        return self.commit

    @property
    def open_start(self) -> int:
        return self.commit + self.vdf

    @property
    def open_cutoff(self) -> int:
        return self.total


class ProtocolParams(BaseModel):
    """Protocol-wide parameters shared by every actor in a run."""

    model_config = ConfigDict(frozen=True)

    f: int = Field(..., ge=0, description="Byzantine fault bound")
    n: int = Field(..., ge=1, description="Validator count, must equal 3f+1")
    q_c: int = Field(..., ge=1, description="Commit receipt threshold")
    q_o: int = Field(..., ge=1, description="Open receipt threshold")
    quota_l: int = Field(..., ge=1, description="Max commitments per identity per slot")
    d_stake: TokenAmount = Field(..., description="User bond")
    b_prod: TokenAmount = Field(..., description="Producer bond")
    delta_user: Ratio = Field(..., description="Non-opening slash fraction")
    delta_prod: Ratio = Field(..., description="Invalid-block slash fraction")
    vdf_delay_T: int = Field(..., ge=1, description="VDF sequential step count")
    slot_budget: SlotBudget
    security_lambda: int = Field(default=128, ge=1, description="Bit-security label")

    @model_validator(mode="after")
    def _check_invariants(self) -> "ProtocolParams":
        if self.n != 3 * self.f + 1:
            raise ValueError(f"n must equal 3f+1 (f={self.f}, n={self.n})")
        quorum = 2 * self.f + 1
        for name in ("q_c", "q_o"):
            value = getattr(self, name)
            if value < quorum or value > self.n:
                raise ValueError(f"{name} must be in [2f+1, n] = [{quorum}, {self.n}], got {value}")
        for name in ("delta_user", "delta_prod"):
            value = getattr(self, name)
            if not (Fraction(0) < value <= Fraction(1)):
                raise ValueError(f"{name} must be in (0, 1], got {value}")
        if any(component <= 0 for component in self.slot_budget.components):
            raise ValueError("all slot budget components must be positive")
        return self

    @property
    def quorum(self) -> int:
        """Votes needed to finalize a block (2f+1)."""
        return 2 * self.f + 1
