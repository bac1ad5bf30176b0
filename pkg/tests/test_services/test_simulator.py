"""
Tests for the slot simulator and campaigns.
"""

import pytest

from app.exceptions import ConfigError, ValidationError
from app.schemas.block import OmissionKind, Violation
from app.schemas.economics import GainModel
from app.schemas.identity import SchemeId, SlashReason
from app.schemas.params import SlotBudget
from app.schemas.scenario import CensorStage, ProducerStrategy, StrategyKind
from app.services.accountability import make_omission_proof, verify_omission_proof
from app.services.codec import sha256
from app.services.economics import check_incentives
from app.services.identity import IdentityRegistry
from app.services.ordering import produce_ordering
from app.services.simulator import (
    PRODUCER,
    compare_strategies,
    genesis_hash,
    register_actors,
    run_campaign,
    run_slot,
    validate_timing,
)
from app.services.vdf import make_vdf_params
from tests.conftest import load_fixture_scenario


def simulate(config, slot=0):
    registry = IdentityRegistry()
    roster = register_actors(config, registry)
    outcome = run_slot(config, registry, genesis_hash(config.seed), slot, roster)
    return outcome, registry, roster


def with_strategy(config, gains=None, **strategy):
    update = {"strategy": ProducerStrategy(**strategy)}
    if gains is not None:
        update["gains"] = gains
    return config.model_copy(update=update)


class TestTiming:
    """Slot budget identity and the producer head-start bound."""

    BUDGET = SlotBudget(total=27, commit=10, vdf=5, open=10, margin=2)

    def test_valid_budget(self):
        assert validate_timing(self.BUDGET, head_start=3)

    def test_head_start_reaching_delay(self):
        assert not validate_timing(self.BUDGET, head_start=5)

    def test_non_positive_component(self):
        assert not validate_timing(SlotBudget(total=27, commit=-1, vdf=16, open=10, margin=2))

    def test_sum_mismatch(self):
        assert not validate_timing(SlotBudget(total=28, commit=10, vdf=5, open=10, margin=2))

    def test_params_accepted(self, params):
        assert validate_timing(params)

    def test_run_slot_rejects_bad_timing(self, honest_scenario):
        config = honest_scenario.model_copy(update={"producer_head_start": 5})
        with pytest.raises(ConfigError):
            run_slot(config, IdentityRegistry(), genesis_hash(config.seed))


class TestHonestSlot:
    def test_finalized_without_extraction(self, honest_scenario):
        outcome, registry, _ = simulate(honest_scenario)
        assert outcome.finalized
        assert outcome.verdict.valid
        assert outcome.accept_votes == 4
        assert outcome.measured_mev == 0
        assert outcome.producer_payoff == 0
        assert outcome.slash_events == ()
        assert len(outcome.block.execution_list.ordered_txs) == 4
        assert outcome.block_hash is not None
        assert outcome.conservation_holds and registry.check_conservation()

    def test_trace_follows_the_clock(self, honest_scenario):
        outcome, _, _ = simulate(honest_scenario)
        ticks = [event.tick for event in outcome.trace]
        assert ticks == sorted(ticks)
        budget = honest_scenario.params.slot_budget
        votes = [event for event in outcome.trace if event.event == "votes"]
        assert votes[0].tick == budget.total + honest_scenario.vote_delay

    def test_deterministic(self, honest_scenario):
        first, _, _ = simulate(honest_scenario)
        second, _, _ = simulate(honest_scenario)
        assert first.model_dump_json() == second.model_dump_json()

    def test_seed_changes_ordering_input(self, honest_scenario):
        first, _, _ = simulate(honest_scenario)
        other, _, _ = simulate(honest_scenario.model_copy(update={"seed": 8}))
        assert first.block.bundle.seed != other.block.bundle.seed

    def test_non_opening_user_penalized(self, honest_scenario):
        users = list(honest_scenario.users)
        users[1] = users[1].model_copy(update={"opens": False})
        outcome, registry, roster = simulate(honest_scenario.model_copy(update={"users": tuple(users)}))
        assert outcome.finalized
        assert [event.amount for event in outcome.slash_events] == [10]
        assert outcome.slash_events[0].reason == SlashReason.NON_OPENING
        assert outcome.payoffs["bob"] == -10
        bob = next(c for c in roster.committers if c.name == "bob")
        assert registry.get(bob.idcom).bond == 90


class TestCensorship:
    """A censored certified commitment is provable and costs the producer."""

    def test_commit_stage_censorship_rejected(self, censorship_scenario):
        outcome, registry, roster = simulate(censorship_scenario)
        assert outcome.deviated
        assert len(outcome.proofs) == 1
        assert outcome.timely_proofs == 1
        assert verify_omission_proof(outcome.proofs[0], outcome.block, censorship_scenario.params, roster.validator_set)
        assert Violation.COMMIT_OMITTED in outcome.verdict.violations
        assert not outcome.finalized
        assert outcome.accept_votes == 1
        assert [event.amount for event in outcome.slash_events] == [500]
        assert registry.get(roster.producer_id).bond == 500
        assert outcome.producer_payoff == 200 - 500

    def test_garbage_receipts_do_not_block_certificates(self, censorship_scenario):
        outcome, _, _ = simulate(censorship_scenario)
        for entry in outcome.block.admissible.entries:
            assert 3 not in entry.signer_ids

    def test_late_proof_lets_block_finalize(self):
        config = load_fixture_scenario("censorship_late_proof.json")
        outcome, registry, roster = simulate(config)
        assert len(outcome.proofs) == 1
        assert outcome.timely_proofs == 0
        assert outcome.finalized
        assert registry.get(roster.producer_id).bond == 1000
        assert outcome.producer_payoff == 200

    def test_execution_stage_censorship(self, honest_scenario):
        config = with_strategy(honest_scenario, kind=StrategyKind.CENSOR, targets=("alice",), stage=CensorStage.EXECUTION)
        outcome, registry, roster = simulate(config)
        assert outcome.deviated
        assert outcome.proofs[0].kind.value == "execution_omission"
        assert outcome.verdict.violations == (Violation.EXECUTION_OMITTED,)
        assert not outcome.finalized
        alice = next(c for c in roster.committers if c.name == "alice")
        assert registry.get(alice.idcom).bond == 100


class TestDeviations:
    def test_stuffing_registers_extra_identities(self, honest_scenario):
        config = with_strategy(honest_scenario, kind=StrategyKind.STUFF, stuff_count=3)
        outcome, registry, roster = simulate(config)
        assert len(roster.stuffing_identities) == 2
        assert len(registry) == 1 + 4 + 2
        assert len(outcome.block.admissible) == 7
        assert outcome.finalized
        assert outcome.producer_payoff == -200

    def test_selective_non_open_penalizes_own_identity(self, honest_scenario):
        config = with_strategy(honest_scenario, GainModel(g_open=4), kind=StrategyKind.SELECTIVE_NON_OPEN, withhold=2)
        outcome, _, roster = simulate(config)
        assert outcome.finalized
        assert outcome.deviated
        assert len(outcome.slash_events) == 2
        assert outcome.producer_payoff == 2 * 4 - 20
        assert all(event.idcom in roster.producer_idcoms for event in outcome.slash_events)

    @pytest.mark.parametrize("kind", [StrategyKind.REORDER, StrategyKind.FAKE_VDF])
    def test_invalid_blocks_rejected(self, honest_scenario, kind):
        outcome, _, _ = simulate(with_strategy(honest_scenario, kind=kind))
        assert outcome.deviated
        assert not outcome.finalized
        assert Violation.BAD_ORDERING in outcome.verdict.violations
        assert outcome.producer_payoff == -500

    def test_rejected_sandwich_extracts_nothing(self, honest_scenario):
        users = list(honest_scenario.users)
        users[0] = users[0].model_copy(update={"victim": True})
        users[3] = users[3].model_copy(update={"producer_owned": True})
        config = honest_scenario.model_copy(
            update={
                "users": tuple(users),
                "strategy": ProducerStrategy(kind=StrategyKind.REORDER),
                "payoff": honest_scenario.payoff.model_copy(update={"sandwich_value": 50}),
            }
        )
        outcome, _, roster = simulate(config)
        assert outcome.deviated
        assert not outcome.finalized
        assert outcome.measured_mev == 0
        assert "dave" not in outcome.payoffs
        assert len(roster.producer_idcoms) == 2


class TestIncentiveAgreement:
    """Realized deviation payoffs agree with the incentive report in both directions."""

    GRID = (
        [({"kind": StrategyKind.FAKE_VDF}, GainModel(g_invalid=g)) for g in (0, 400, 499, 500, 800)]
        + [({"kind": StrategyKind.REORDER}, GainModel(g_invalid=g)) for g in (0, 499, 500, 900)]
        + [({"kind": StrategyKind.CENSOR, "targets": ("bob",)}, GainModel(g_invalid=g)) for g in (300, 500)]
        + [({"kind": StrategyKind.SELECTIVE_NON_OPEN}, GainModel(g_open=g)) for g in (0, 9, 10, 15)]
        + [
            ({"kind": StrategyKind.STUFF, "stuff_count": k}, GainModel(g_stuff_per_commitment=g))
            for g in (0, 49, 50, 100)
            for k in (1, 2, 4)
        ]
    )

    def test_grid_has_enough_configurations(self):
        assert len(self.GRID) >= 20

    @pytest.mark.parametrize("strategy,gains", GRID)
    def test_payoff_matches_bound(self, honest_scenario, strategy, gains):
        config = with_strategy(honest_scenario, gains, **strategy)
        params = config.params
        report = check_incentives(params, gains, config.k_max)
        outcome, _, _ = simulate(config)
        honest, _, _ = simulate(honest_scenario.model_copy(update={"gains": gains}))

        kind = strategy["kind"]
        if kind == StrategyKind.SELECTIVE_NON_OPEN:
            holds = report.non_opening_bound_holds
        elif kind == StrategyKind.STUFF:
            holds = strategy["stuff_count"] <= report.stuffing_bound_holds_up_to
        else:
            holds = report.invalid_bound_holds
        assert outcome.deviated
        assert (outcome.producer_payoff < honest.producer_payoff) == holds

    def test_failing_bounds_admit_a_profitable_deviation(self, honest_scenario):
        profitable = []
        for strategy, gains in self.GRID:
            if strategy["kind"] not in (StrategyKind.FAKE_VDF, StrategyKind.REORDER):
                continue
            if check_incentives(honest_scenario.params, gains, honest_scenario.k_max).invalid_bound_holds:
                continue
            outcome, _, _ = simulate(with_strategy(honest_scenario, gains, **strategy))
            profitable.append(outcome.producer_payoff > 0)
        assert profitable and any(profitable)

    def test_stuffing_campaign_loses_when_bound_holds(self, honest_scenario):
        gains = GainModel(g_stuff_per_commitment=10)
        assert check_incentives(honest_scenario.params, gains, honest_scenario.k_max).stuffing_bound_holds_up_to >= 3
        table = compare_strategies(
            honest_scenario.model_copy(update={"gains": gains}),
            [ProducerStrategy(), ProducerStrategy(kind=StrategyKind.STUFF, stuff_count=3)],
            seeds=[1, 2],
        )
        assert table["honest"] == 0
        assert table["stuff(3)"] < 0


class TestCampaign:
    def test_conservation_and_determinism(self, honest_scenario):
        strategies = [ProducerStrategy(), ProducerStrategy(kind=StrategyKind.FAKE_VDF)]
        first = run_campaign(honest_scenario, 3, [1, 2], strategies)
        second = run_campaign(honest_scenario, 3, [1, 2], strategies)
        assert first.model_dump_json() == second.model_dump_json()
        assert first.conservation_holds
        assert first.slots == 12
        assert first.rejected == 6
        assert first.rejection_rate == 0.5

    def test_compare_strategies(self, honest_scenario):
        table = compare_strategies(
            honest_scenario, [ProducerStrategy(), ProducerStrategy(kind=StrategyKind.FAKE_VDF)], seeds=[1, 2]
        )
        assert table == {"honest": 0, "fake_vdf": -1000}

    def test_zero_slots(self, honest_scenario):
        metrics = run_campaign(honest_scenario, 0, [honest_scenario.seed])
        assert metrics.slots == 0
        assert metrics.permutation_histogram == {}
        assert metrics.uniformity_p_value is None
        assert metrics.rejection_rate == 0.0

    def test_outcome_callback(self, honest_scenario):
        seen = []
        run_campaign(honest_scenario, 2, [3], on_outcome=seen.append)
        assert [outcome.slot for outcome in seen] == [0, 1]
        assert seen[1].block.prev_block_hash == seen[0].block_hash

    def test_registry_callback(self, honest_scenario):
        seen = {}
        strategies = [ProducerStrategy(), ProducerStrategy(kind=StrategyKind.FAKE_VDF)]
        run_campaign(honest_scenario, 2, [4, 5], strategies, on_registry=seen.__setitem__)
        assert sorted(seen) == ["fake_vdf/seed-4", "fake_vdf/seed-5", "honest/seed-4", "honest/seed-5"]
        assert all(registry.check_conservation() for registry in seen.values())
        assert seen["fake_vdf/seed-4"].total_slashed > 0

    def test_producer_payoff_key(self, honest_scenario):
        outcome, _, _ = simulate(honest_scenario)
        assert PRODUCER in outcome.payoffs

    def test_permutation_uniformity(self, honest_scenario):
        params = honest_scenario.params.model_copy(update={"vdf_delay_T": 100})
        config = honest_scenario.model_copy(update={"params": params, "signature_scheme": SchemeId.MOCK})
        metrics = run_campaign(config, 100, range(100))
        assert metrics.slots == 10_000
        assert metrics.uniformity_p_value is not None
        assert metrics.uniformity_p_value > 0.001
        for entry_index, row in metrics.position_histogram.items():
            assert len(row) == 4
            for count in row:
                assert abs(count / metrics.slots - 0.25) <= 0.02


class TestReorderPlan:
    def test_explicit_target_order(self, honest_scenario):
        outcome, _, _ = simulate(with_strategy(honest_scenario, kind=StrategyKind.REORDER, target_order=(3, 2, 1, 0)))
        executed = [item.entry_index for item in outcome.block.execution_list.ordered_txs]
        assert executed == list(reversed(outcome.block.bundle.permutation.mapping))
        assert outcome.deviated
        assert not outcome.finalized

    @pytest.mark.parametrize("target_order", [(0, 0, 1, 2), (0, 1, 2), (1, 2, 3, 4)])
    def test_invalid_target_order_raises(self, honest_scenario, target_order):
        config = with_strategy(honest_scenario, kind=StrategyKind.REORDER, target_order=target_order)
        with pytest.raises(ValidationError) as exc_info:
            simulate(config)
        assert "strategy.target_order" in str(exc_info.value)


class TestEarlySeed:
    """The producer learns the seed head_start ticks early, always after the set is locked."""

    STRATEGIES = [
        {"kind": StrategyKind.REORDER},
        {"kind": StrategyKind.CENSOR, "targets": ("bob",)},
        {"kind": StrategyKind.CENSOR, "targets": ("bob",), "stage": CensorStage.EXECUTION},
    ]

    @pytest.mark.parametrize("strategy", STRATEGIES)
    def test_preview_follows_set_lock(self, honest_scenario, strategy):
        budget = honest_scenario.params.slot_budget
        for head_start in (0, 2, 4):
            config = with_strategy(honest_scenario.model_copy(update={"producer_head_start": head_start}), **strategy)
            outcome, _, _ = simulate(config)
            ticks = {event.event: event.tick for event in outcome.trace}
            assert ticks["seed_preview"] == budget.open_start - head_start
            assert ticks["set_locked"] < ticks["seed_preview"] <= ticks["seed_ready"]
            assert ticks["set_locked"] <= ticks["producer_plan"] <= ticks["seed_preview"]

    @pytest.mark.parametrize("strategy", STRATEGIES)
    def test_head_start_gives_no_advantage(self, honest_scenario, strategy):
        gains = GainModel(g_invalid=300)
        outcomes = []
        for head_start in (0, 2, 4):
            config = honest_scenario.model_copy(update={"producer_head_start": head_start})
            outcome, _, _ = simulate(with_strategy(config, gains, **strategy))
            outcomes.append(outcome.model_dump(exclude={"trace"}))
        assert outcomes[1] == outcomes[0]
        assert outcomes[2] == outcomes[0]
        assert not outcomes[0]["finalized"]
        assert outcomes[0]["producer_payoff"] == 300 - 500


class TestRebonding:
    """Slashed identities top back up to their floor, so every slot costs a full slash."""

    def test_slashed_producer_rebonds_before_next_slot(self, honest_scenario):
        config = with_strategy(honest_scenario, kind=StrategyKind.FAKE_VDF)
        _, registry, roster = simulate(config)
        assert registry.get(roster.producer_id).bond == 500

        second = run_slot(config, registry, genesis_hash(config.seed), 1, roster)
        rebonds = [event for event in second.trace if event.event == "rebond"]
        assert [(event.tick, event.detail) for event in rebonds] == [(0, "producer+500")]
        assert [event.amount for event in second.slash_events] == [500]
        assert registry.get(roster.producer_id).deposited == 1500
        assert registry.check_conservation()

    def test_non_opening_user_pays_full_penalty_every_slot(self, honest_scenario):
        users = list(honest_scenario.users)
        users[1] = users[1].model_copy(update={"opens": False})
        config = honest_scenario.model_copy(update={"users": tuple(users)})
        seen = []
        run_campaign(config, 3, [config.seed], on_outcome=seen.append)
        assert [outcome.payoffs["bob"] for outcome in seen] == [-10, -10, -10]
        assert [event.detail for event in seen[2].trace if event.event == "rebond"] == ["bob+10"]

    def test_selective_non_open_loses_over_many_slots(self, honest_scenario):
        gains = GainModel(g_open=9)
        assert check_incentives(honest_scenario.params, gains, honest_scenario.k_max).non_opening_bound_holds
        table = compare_strategies(
            honest_scenario.model_copy(update={"gains": gains}),
            [ProducerStrategy(), ProducerStrategy(kind=StrategyKind.SELECTIVE_NON_OPEN, withhold=1)],
            n_slots=10,
        )
        assert table == {"honest": 0, "selective_non_open(1)": 10 * (9 - 10)}

    @pytest.mark.parametrize(
        "strategy",
        [
            {"kind": StrategyKind.FAKE_VDF},
            {"kind": StrategyKind.REORDER},
            {"kind": StrategyKind.CENSOR, "targets": ("bob",)},
            {"kind": StrategyKind.CENSOR, "targets": ("bob",), "stage": CensorStage.EXECUTION},
        ],
    )
    def test_producer_deviation_loses_over_many_slots(self, honest_scenario, strategy):
        config = with_strategy(honest_scenario, GainModel(g_invalid=499), **strategy)
        assert check_incentives(config.params, config.gains, config.k_max).invalid_bound_holds
        seen = []
        metrics = run_campaign(config, 3, [config.seed], on_outcome=seen.append)
        for outcome in seen:
            assert outcome.deviated and not outcome.finalized
            assert [(event.reason, event.amount) for event in outcome.slash_events] == [
                (SlashReason.PRODUCER_INVALID_BLOCK, 500)
            ]
        assert metrics.payoff_table == {config.strategy.label: 3 * (499 - 500)}
        assert metrics.conservation_holds

    def test_stuffing_capital_charged_every_slot(self, honest_scenario):
        table = compare_strategies(
            honest_scenario, [ProducerStrategy(kind=StrategyKind.STUFF, stuff_count=3)], n_slots=3
        )
        assert table == {"stuff(3)": 3 * -200}


class TestCampaignInvariants:
    def test_no_omission_proof_against_honest_blocks(self, honest_scenario):
        config = honest_scenario.model_copy(update={"seed": 11})
        params = config.params
        validator_set = register_actors(config, IdentityRegistry()).validator_set
        seen = []
        run_campaign(config, 5, [config.seed], on_outcome=seen.append)
        assert len(seen) == 5
        for outcome in seen:
            block = outcome.block
            assert outcome.finalized
            for entry in block.admissible.entries:
                proof = make_omission_proof(OmissionKind.COMMIT_OMISSION, entry, params, validator_set)
                assert not verify_omission_proof(proof, block, params, validator_set)
            for open_cert in block.open_certificates:
                entry = block.admissible.entries[block.admissible.index_of(*open_cert.key)]
                proof = make_omission_proof(
                    OmissionKind.EXECUTION_OMISSION, entry, params, validator_set, open_cert=open_cert
                )
                assert not verify_omission_proof(proof, block, params, validator_set)

    def test_quota_holds_in_every_admissible_set(self, honest_scenario):
        users = list(honest_scenario.users)
        users[0] = users[0].model_copy(update={"txs": ("a-1", "a-2", "a-3")})
        config = with_strategy(
            honest_scenario.model_copy(update={"users": tuple(users)}), kind=StrategyKind.STUFF, stuff_count=3
        )
        quota = config.params.quota_l
        seen = []
        run_campaign(config, 4, [config.seed], on_outcome=seen.append)
        for outcome in seen:
            counts = {}
            for entry in outcome.block.admissible.entries:
                assert entry.commitment.slot == outcome.slot
                counts[entry.commitment.idcom] = counts.get(entry.commitment.idcom, 0) + 1
            assert max(counts.values()) == quota
            rejected = [event.detail for event in outcome.trace if event.event == "commit_uncertified"]
            assert rejected == ["alice: quota_exceeded"]


class TestGoldenSlots:
    """Two chained honest slots reproduce fixed artifacts byte for byte."""

    def test_chained_slots_match_fixture(self, honest_scenario, honest_slots):
        config = honest_scenario.model_copy(update={"signature_scheme": SchemeId.MOCK})
        registry = IdentityRegistry()
        roster = register_actors(config, registry)
        names = {committer.idcom: committer.name for committer in roster.committers}
        prev = genesis_hash(config.seed)
        assert prev.hex() == honest_slots["genesis"]
        assert roster.producer_id.hex() == honest_slots["producer_id"]

        for expected in honest_slots["slots"]:
            outcome = run_slot(config, registry, prev, expected["slot"], roster)
            block = outcome.block
            bundle = block.bundle
            assert [names[entry.commitment.idcom] for entry in block.admissible.entries] == expected["canonical_order"]
            assert bundle.set_root.hex() == expected["set_root"]
            assert bundle.vdf_input.hex() == expected["vdf_input"]
            assert bundle.seed.hex() == expected["seed"]
            assert len(bundle.vdf_proof) == honest_slots["proof_length"]
            assert sha256(b"".join(bundle.vdf_proof)).hex() == expected["proof_digest"]
            assert list(bundle.permutation.mapping) == expected["permutation"]
            assert [names[item.idcom] for item in block.execution_list.ordered_txs] == expected["execution_order"]
            assert block.producer_id.hex() == honest_slots["producer_id"]
            assert outcome.block_hash.hex() == expected["block_hash"]
            prev = outcome.block_hash

    def test_produce_ordering_matches_fixture(self, honest_scenario, honest_slots):
        config = honest_scenario.model_copy(update={"signature_scheme": SchemeId.MOCK})
        outcome, _, _ = simulate(config)
        expected = honest_slots["slots"][0]
        bundle = produce_ordering(
            outcome.block.admissible, genesis_hash(config.seed), make_vdf_params(honest_slots["vdf_delay_T"])
        )
        assert bundle == outcome.block.bundle
        assert bundle.set_root.hex() == expected["set_root"]
        assert bundle.seed.hex() == expected["seed"]
        assert sha256(b"".join(bundle.vdf_proof)).hex() == expected["proof_digest"]
        assert list(bundle.permutation.mapping) == expected["permutation"]
