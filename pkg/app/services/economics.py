"""
Economics: stuffing and non-opening costs, the producer incentive
inequalities and a minimal-bond search.

Token amounts are integers and slash fractions exact rationals. Every
comparison uses the floor-rounded slash the registry actually applies.
"""

import logging
from fractions import Fraction
from typing import Dict, Optional

from ..schemas.economics import FixedParams, GainModel, IncentiveReport, ParameterSuggestion
from ..schemas.params import ProtocolParams

logger = logging.getLogger(__name__)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def stuffing_cost(k: int, quota_l: int, d_stake: int) -> int:
    """Capital locked to place k admissible commitments: ceil(k / quota_l) * d_stake."""
    if k < 0 or quota_l < 1:
        raise ValueError(f"need k >= 0 and quota_l >= 1, got k={k}, quota_l={quota_l}")
    return _ceil_div(k, quota_l) * d_stake


def non_opening_cost(u: int, delta_user: Fraction, d_stake: int) -> Fraction:
    """Lower bound u * delta_user * d_stake on the loss from u withheld openings."""
    if u < 0:
        raise ValueError(f"u must be non-negative, got {u}")
    return u * Fraction(delta_user) * d_stake


def realized_non_opening_cost(u: int, delta_user: Fraction, bond: int) -> int:
    """What u sequential registry slashes of a single identity burn in total."""
    fraction = Fraction(delta_user)
    burned = 0
    for _ in range(u):
        amount = bond * fraction.numerator // fraction.denominator
        bond -= amount
        burned += amount
    return burned


def effective_slash(delta: Fraction, bond: int) -> int:
    """floor(delta * bond), the amount one slash removes."""
    delta = Fraction(delta)
    return bond * delta.numerator // delta.denominator


def check_incentives(params: ProtocolParams, gains: GainModel, k_max: int) -> IncentiveReport:
    """
    Evaluate the three strict inequalities that make honest execution a best
    response against the implemented deviation family.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    invalid_margin = effective_slash(params.delta_prod, params.b_prod) - gains.g_invalid
    open_margin = effective_slash(params.delta_user, params.d_stake) - gains.g_open

    holds_up_to = k_max
    stuffing_margin: Optional[int] = None
    for k in range(1, k_max + 1):
        margin = stuffing_cost(k, params.quota_l, params.d_stake) - gains.g_stuff(k)
        stuffing_margin = margin if stuffing_margin is None else min(stuffing_margin, margin)
        if margin <= 0 and holds_up_to == k_max:
            holds_up_to = k - 1

    margins: Dict[str, int] = {
        "invalid": invalid_margin,
        "non_opening": open_margin,
        "stuffing": stuffing_margin,
    }
    return IncentiveReport(
        invalid_bound_holds=invalid_margin > 0,
        non_opening_bound_holds=open_margin > 0,
        stuffing_bound_holds=holds_up_to == k_max,
        stuffing_bound_holds_up_to=holds_up_to,
        k_max=k_max,
        binding_margins=margins,
    )


def _min_bond(gain: int, delta: Fraction) -> int:
    # smallest B with floor(B * num / den) >= gain + 1
    return _ceil_div((gain + 1) * delta.denominator, delta.numerator)


def minimal_parameters(
    gains: GainModel,
    fixed: FixedParams,
    k_max: int,
    base: Optional[ProtocolParams] = None,
) -> ParameterSuggestion:
    """
    Smallest integer d_stake and b_prod for which check_incentives passes.

    With ``base`` the suggestion also carries a full parameter set built from
    it, together with the incentive report for that set.
    """
    for name in ("delta_user", "delta_prod"):
        delta = getattr(fixed, name)
        if delta <= 0:
            return ParameterSuggestion(feasible=False, reason=f"{name} is zero, no bond can deter deviation")
        if delta > 1:
            return ParameterSuggestion(feasible=False, reason=f"{name} exceeds 1")
    if k_max < 1:
        return ParameterSuggestion(feasible=False, reason="k_max must be >= 1")

    d_stake = _min_bond(gains.g_open, fixed.delta_user)
    for k in range(1, k_max + 1):
        identities = _ceil_div(k, fixed.quota_l)
        d_stake = max(d_stake, gains.g_stuff(k) // identities + 1)
    b_prod = _min_bond(gains.g_invalid, fixed.delta_prod)
    logger.debug(f"Minimal bonds: d_stake={d_stake}, b_prod={b_prod}")

    if base is None:
        return ParameterSuggestion(feasible=True, d_stake=d_stake, b_prod=b_prod)
    params = base.model_copy(
        update={
            "d_stake": d_stake,
            "b_prod": b_prod,
            "delta_user": fixed.delta_user,
            "delta_prod": fixed.delta_prod,
            "quota_l": fixed.quota_l,
        }
    )
    return ParameterSuggestion(
        feasible=True,
        d_stake=d_stake,
        b_prod=b_prod,
        params=params,
        report=check_incentives(params, gains, k_max),
    )
