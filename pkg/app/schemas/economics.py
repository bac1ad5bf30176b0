"""
Pydantic schemas for deviation gains, incentive reports and parameter suggestions.
"""
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator

from .common import Ratio, TokenAmount
from .params import ProtocolParams


class GainModel(BaseModel):
    """
    Exogenous one-slot gains available to a deviating producer.

    ``g_stuff(k)`` is ``g_stuff_table[k-1]`` when a table is given (and
    saturates at its last value past the end), otherwise
    ``k * g_stuff_per_commitment``.
    """

    model_config = ConfigDict(frozen=True)

    g_invalid: TokenAmount = 0
    g_open: TokenAmount = 0
    g_stuff_per_commitment: TokenAmount = 0
    g_stuff_table: Optional[Tuple[TokenAmount, ...]] = None

    @field_validator("g_stuff_table")
    @classmethod
    def _check_monotone(cls, value):
        if value is not None and any(value[i] > value[i + 1] for i in range(len(value) - 1)):
            raise ValueError("g_stuff_table must be nondecreasing")
        return value

    def g_stuff(self, k: int) -> int:
        if k <= 0:
            return 0
        if self.g_stuff_table:
            return self.g_stuff_table[min(k, len(self.g_stuff_table)) - 1]
        return k * self.g_stuff_per_commitment


class IncentiveReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    invalid_bound_holds: bool
    non_opening_bound_holds: bool
    stuffing_bound_holds: bool
    stuffing_bound_holds_up_to: int = Field(..., ge=0, description="Largest k such that every k' <= k passes")
    k_max: int
    binding_margins: Dict[str, int]

    @computed_field
    @property
    def all_hold(self) -> bool:
        return self.invalid_bound_holds and self.non_opening_bound_holds and self.stuffing_bound_holds


class FixedParams(BaseModel):
    """The parameters a bond search holds fixed."""

    model_config = ConfigDict(frozen=True)

    delta_user: Ratio
    delta_prod: Ratio
    quota_l: int = Field(..., ge=1)

    @classmethod
    def from_params(cls, params: ProtocolParams) -> "FixedParams":
        return cls(delta_user=params.delta_user, delta_prod=params.delta_prod, quota_l=params.quota_l)


class ParameterSuggestion(BaseModel):
    model_config = ConfigDict(frozen=True)

    feasible: bool
    reason: Optional[str] = None
    d_stake: Optional[int] = None
    b_prod: Optional[int] = None
    params: Optional[ProtocolParams] = None
    report: Optional[IncentiveReport] = None
