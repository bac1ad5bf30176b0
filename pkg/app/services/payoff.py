"""
Position-dependent payoff models used to measure extracted value.

MEV of a realized execution order is Profit(order) minus Profit(reference
order), where the reference is what an honest producer would have executed.
"""

from abc import ABC, abstractmethod
from typing import AbstractSet, Dict, Sequence

from ..schemas.block import ExecutedTx


class PayoffModel(ABC):
    @abstractmethod
    def profit(self, ordered: Sequence[ExecutedTx], producer_idcoms: AbstractSet[bytes]) -> int:
        """Producer payoff of an execution order."""

    @abstractmethod
    def user_utilities(self, ordered: Sequence[ExecutedTx], producer_idcoms: AbstractSet[bytes]) -> Dict[bytes, int]:
        """Per-identity utility change caused by the order."""


class SandwichPayoffModel(PayoffModel):
    """
    A producer-owned tx placed immediately before a victim tx earns
    ``value``; the victim loses the same amount.
    """

    def __init__(self, value: int, victim_idcoms: AbstractSet[bytes]):
        self.value = value
        self.victim_idcoms = frozenset(victim_idcoms)

    def _hits(self, ordered: Sequence[ExecutedTx], producer_idcoms: AbstractSet[bytes]):
        for before, after in zip(ordered, ordered[1:]):
            if before.idcom in producer_idcoms and after.idcom in self.victim_idcoms:
                yield after

    def profit(self, ordered: Sequence[ExecutedTx], producer_idcoms: AbstractSet[bytes]) -> int:
        return self.value * sum(1 for _ in self._hits(ordered, producer_idcoms))

    def user_utilities(self, ordered: Sequence[ExecutedTx], producer_idcoms: AbstractSet[bytes]) -> Dict[bytes, int]:
        utilities: Dict[bytes, int] = {}
        for victim in self._hits(ordered, producer_idcoms):
            utilities[victim.idcom] = utilities.get(victim.idcom, 0) - self.value
        return utilities


def measured_mev(
    model: PayoffModel,
    realized: Sequence[ExecutedTx],
    reference: Sequence[ExecutedTx],
    producer_idcoms: AbstractSet[bytes],
) -> int:
    return model.profit(realized, producer_idcoms) - model.profit(reference, producer_idcoms)
