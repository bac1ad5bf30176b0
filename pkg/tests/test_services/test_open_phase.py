"""
Tests for opening receipts, execution lists and non-opening penalties.
"""

import pytest

from app.exceptions import (
    HashMismatchError,
    IdentityInactiveError,
    InsufficientReceiptsError,
    InvalidInputError,
    NoMatchingCommitmentError,
    PastCutoffError,
    WindowNotOpenError,
)
from app.schemas.certificates import OpenReceipt, Signature
from app.schemas.identity import SchemeId, SlashReason
from app.services.codec import sha256
from app.services.commit_phase import SlotClock
from app.services.open_phase import (
    aggregate_open_certificate,
    apply_non_opening_penalties,
    build_execution_list,
    validator_check_opening,
    verify_open_certificate,
)
from app.services.ordering import canonicalize, produce_ordering
from app.services.vdf import make_vdf_params


@pytest.fixture
def round_(kit, params, prev_hash):
    """Three committed users with their secrets, admissible set and bundle."""
    certs, secrets, idcoms = [], [], []
    for label in ("alice", "bob", "carol"):
        keys, idcom = kit.register_user(label)
        cert, secret = kit.commit(keys, idcom, f"tx-{label}".encode())
        certs.append(cert)
        secrets.append(secret)
        idcoms.append(idcom)
    admissible = canonicalize(certs, 0)
    bundle = produce_ordering(admissible, prev_hash, make_vdf_params(params.vdf_delay_T))
    return {"certs": certs, "secrets": secrets, "idcoms": idcoms, "admissible": admissible, "bundle": bundle}


class TestValidatorCheckOpening:
    """Window boundaries and binding checks."""

    def _check(self, kit, round_, secret, tick, slot=0):
        return validator_check_opening(
            round_["admissible"], secret, SlotClock(slot=slot, tick=tick), kit.params, kit.registry, kit.validators[0]
        )

    def test_window_boundaries(self, kit, params, round_):
        secret = round_["secrets"][0]
        budget = params.slot_budget
        self._check(kit, round_, secret, budget.open_start)
        self._check(kit, round_, secret, budget.open_cutoff - 1)
        with pytest.raises(WindowNotOpenError):
            self._check(kit, round_, secret, budget.open_start - 1)
        with pytest.raises(PastCutoffError):
            self._check(kit, round_, secret, budget.open_cutoff)

    def test_other_slot_past_cutoff(self, kit, params, round_):
        with pytest.raises(PastCutoffError):
            self._check(kit, round_, round_["secrets"][0], params.slot_budget.open_start, slot=1)

    def test_wrong_nonce(self, kit, params, round_):
        secret = round_["secrets"][0].model_copy(update={"r": sha256(b"wrong nonce")})
        with pytest.raises(HashMismatchError):
            self._check(kit, round_, secret, params.slot_budget.open_start)

    def test_wrong_transaction(self, kit, params, round_):
        secret = round_["secrets"][1].model_copy(update={"tx": b"substituted"})
        with pytest.raises(HashMismatchError):
            self._check(kit, round_, secret, params.slot_budget.open_start)

    def test_identity_without_entry(self, kit, params, round_):
        _, stranger = kit.register_user("stranger")
        secret = round_["secrets"][0].model_copy(update={"idcom": stranger})
        with pytest.raises(NoMatchingCommitmentError):
            self._check(kit, round_, secret, params.slot_budget.open_start)

    def test_inactive_identity(self, kit, params, round_):
        kit.registry.slash(round_["idcoms"][0], 1, SlashReason.INVALID_BEHAVIOR, 0)
        with pytest.raises(IdentityInactiveError):
            self._check(kit, round_, round_["secrets"][0], params.slot_budget.open_start)


class TestOpenCertificate:
    def _receipts(self, kit, round_, secret):
        clock = SlotClock(slot=0, tick=kit.params.slot_budget.open_start)
        return [
            validator_check_opening(round_["admissible"], secret, clock, kit.params, kit.registry, cred)
            for cred in kit.validators
        ]

    def test_aggregate_and_verify(self, kit, params, round_):
        secret = round_["secrets"][0]
        cert = aggregate_open_certificate(secret, self._receipts(kit, round_, secret), params, kit.validator_set)
        assert cert.signer_ids == (0, 1, 2, 3)
        assert cert.key == round_["certs"][0].key
        assert verify_open_certificate(cert, params, kit.validator_set)

    def test_invalid_receipts_dropped(self, kit, params, round_):
        secret = round_["secrets"][0]
        valid = self._receipts(kit, round_, secret)[:3]
        garbage = OpenReceipt(validator_id=3, sig=Signature(data=b"\x02" * 32, scheme_id=SchemeId.MOCK))
        stranger = OpenReceipt(validator_id=9, sig=valid[0].sig)
        cert = aggregate_open_certificate(secret, valid + [garbage, stranger], params, kit.validator_set)
        assert cert.signer_ids == (0, 1, 2)

    def test_below_threshold(self, kit, params, round_):
        secret = round_["secrets"][0]
        with pytest.raises(InsufficientReceiptsError):
            aggregate_open_certificate(secret, self._receipts(kit, round_, secret)[:2], params, kit.validator_set)

    def test_commit_receipts_do_not_count_as_open_receipts(self, kit, params, round_):
        secret = round_["secrets"][0]
        commit_receipts = [
            OpenReceipt(validator_id=receipt.validator_id, sig=receipt.sig) for receipt in round_["certs"][0].receipts
        ]
        with pytest.raises(InsufficientReceiptsError):
            aggregate_open_certificate(secret, commit_receipts, params, kit.validator_set)

    def test_verify_rejects_swapped_secret(self, kit, params, round_):
        cert = kit.open(round_["admissible"], round_["secrets"][0])
        swapped = cert.model_copy(update={"secret": round_["secrets"][1]})
        assert not verify_open_certificate(swapped, params, kit.validator_set)


class TestExecutionList:
    """Permutation walk with executed and skipped entries."""

    def test_all_opened(self, kit, round_):
        opened = [kit.open(round_["admissible"], secret) for secret in round_["secrets"]]
        execution = build_execution_list(round_["bundle"], round_["admissible"], opened)
        assert len(execution.ordered_txs) == 3
        assert execution.skipped == ()
        assert [tx.entry_index for tx in execution.ordered_txs] == list(round_["bundle"].permutation.mapping)
        assert [tx.position for tx in execution.ordered_txs] == [0, 1, 2]

    def test_none_opened(self, round_):
        execution = build_execution_list(round_["bundle"], round_["admissible"], [])
        assert execution.ordered_txs == ()
        assert len(execution.skipped) == 3
        assert [ref.key for ref in execution.skipped_refs()] == [entry.key for entry in round_["admissible"].entries]

    def test_partial(self, kit, round_):
        opened = [kit.open(round_["admissible"], round_["secrets"][1])]
        execution = build_execution_list(round_["bundle"], round_["admissible"], opened)
        assert [tx.tx for tx in execution.ordered_txs] == [b"tx-bob"]
        assert len(execution.skipped) == 2
        positions = sorted([tx.position for tx in execution.ordered_txs] + [entry.position for entry in execution.skipped])
        assert positions == [0, 1, 2]

    def test_certificate_outside_set(self, kit, params, prev_hash, round_):
        keys, idcom = kit.register_user("outsider")
        cert, secret = kit.commit(keys, idcom, b"late")
        bigger = canonicalize(round_["certs"] + [cert], 0)
        outside = kit.open(bigger, secret)
        with pytest.raises(InvalidInputError):
            build_execution_list(round_["bundle"], round_["admissible"], [outside])

    def test_permutation_size_mismatch(self, kit, params, prev_hash, round_):
        smaller = canonicalize(round_["certs"][:2], 0)
        with pytest.raises(InvalidInputError):
            build_execution_list(round_["bundle"], smaller, [])


class TestPenalties:
    def test_one_slash_per_skipped_entry(self, kit, params, round_):
        execution = build_execution_list(round_["bundle"], round_["admissible"], [])
        events = apply_non_opening_penalties(kit.registry, execution, params)
        assert [event.amount for event in events] == [10, 10, 10]
        assert all(event.reason == SlashReason.NON_OPENING for event in events)
        assert [event.idcom for event in events] == [entry.commitment.idcom for entry in round_["admissible"].entries]
        assert kit.registry.check_conservation()

    def test_penalties_compound(self, kit, params, round_):
        opened = [kit.open(round_["admissible"], secret) for secret in round_["secrets"][1:]]
        execution = build_execution_list(round_["bundle"], round_["admissible"], opened)
        first = apply_non_opening_penalties(kit.registry, execution, params)
        second = apply_non_opening_penalties(kit.registry, execution, params)
        assert [event.amount for event in first + second] == [10, 9]
        assert kit.registry.get(round_["idcoms"][0]).bond == 81

    def test_nothing_skipped(self, kit, params, round_):
        opened = [kit.open(round_["admissible"], secret) for secret in round_["secrets"]]
        execution = build_execution_list(round_["bundle"], round_["admissible"], opened)
        assert apply_non_opening_penalties(kit.registry, execution, params) == []
