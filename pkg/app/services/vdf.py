"""
Verifiable delay function: pluggable interface and a desk-scale reference.

The reference construction is iterated SHA-256 with recorded checkpoints.
It is deterministic and sound at desk scale (every segment between two
checkpoints is recomputed on verification), but its resistance to massive
parallel speed-up is assumed rather than proven, and its verification is
linear in T. Production constructions with sublinear verification
(Wesolowski, Pietrzak) can replace it behind ``DelayFunction``.
"""

from abc import ABC, abstractmethod
from typing import List

from ..config import get_settings
from ..schemas.common import DIGEST_SIZE
from ..schemas.ordering import VdfOutput, VdfParams
from .codec import sha256


def default_checkpoint_interval(delay_T: int) -> int:
    return max(1, delay_T // get_settings().vdf_checkpoint_divisor)


def make_vdf_params(delay_T: int) -> VdfParams:
    return VdfParams(delay_T=delay_T, checkpoint_interval=default_checkpoint_interval(delay_T))


class DelayFunction(ABC):
    @abstractmethod
    def eval(self, params: VdfParams, x: bytes) -> VdfOutput:
        """Evaluate in delay_T sequential steps."""

    @abstractmethod
    def verify(self, params: VdfParams, x: bytes, output: VdfOutput) -> bool:
        """Check an output; returns False on any mismatch."""


class IteratedHashVdf(DelayFunction):
    def eval(self, params: VdfParams, x: bytes) -> VdfOutput:
        y = x
        proof: List[bytes] = []
        interval = params.checkpoint_interval
        for step in range(1, params.delay_T + 1):
            y = sha256(y)
            if step % interval == 0 or step == params.delay_T:
                proof.append(y)
        return VdfOutput(y=y, proof=tuple(proof))

    def segment_checks(self, params: VdfParams, x: bytes, output: VdfOutput) -> List[bool]:
        """
        Recompute every inter-checkpoint segment independently.

        Segment k starts at checkpoint k-1 (or x) and must land on
        checkpoint k. Segments share no state and may run concurrently.
        """
        proof = output.proof
        results = []
        for index, checkpoint in enumerate(proof):
            start = x if index == 0 else proof[index - 1]
            begin_step = index * params.checkpoint_interval
            length = min(params.checkpoint_interval, params.delay_T - begin_step)
            value = start
            for _ in range(max(length, 0)):
                value = sha256(value)
            results.append(length > 0 and value == checkpoint)
        return results

    def verify(self, params: VdfParams, x: bytes, output: VdfOutput) -> bool:
        if len(x) != DIGEST_SIZE:
            return False
        if len(output.proof) != params.proof_length or output.proof[-1] != output.y:
            return False
        return all(self.segment_checks(params, x, output))


_reference = IteratedHashVdf()


def get_vdf() -> DelayFunction:
    return _reference


def vdf_eval(params: VdfParams, x: bytes) -> VdfOutput:
    return get_vdf().eval(params, x)


def vdf_verify(params: VdfParams, x: bytes, output: VdfOutput) -> bool:
    return get_vdf().verify(params, x, output)
