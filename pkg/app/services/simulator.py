"""
Deterministic slot simulator.

Drives the commit window, the delay window and the opening window of one
slot on an abstract tick clock, lets the scripted producer strategy inject
its deviation, has validators vote with verify_block and settles slashes
and payoffs. Keys, nonces and seeds all derive from the scenario seed, so
identical inputs give byte-identical outcomes.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Type, Union

from scipy import stats

from ..config import get_settings
from ..exceptions import ConfigError, InsufficientReceiptsError, MevAceException, ValidationError
from ..schemas.block import Block, ExecutedTx, ExecutionList, OmissionKind, OmissionProof
from ..schemas.certificates import (
    CommitCertificate,
    CommitReceipt,
    OpenCertificate,
    OpeningSecret,
    OpenReceipt,
    Receipt,
    Signature,
    ValidatorInfo,
    ValidatorSet,
)
from ..schemas.identity import Role, RootEntropy, SchemeId, SlashEvent
from ..schemas.ordering import AdmissibleSet, Permutation
from ..schemas.params import ProtocolParams, SlotBudget
from ..schemas.scenario import (
    ArtifactBundle,
    CampaignMetrics,
    CensorStage,
    ProducerStrategy,
    ScenarioConfig,
    SlotOutcome,
    StrategyKind,
    TraceEvent,
    ValidatorBehavior,
)
from ..schemas.economics import GainModel
from .accountability import make_omission_proof, slash_producer, tally_votes, verify_block, verify_omission_proof
from .codec import block_hash, encode_omission_proof, sha256, u64
from .commit_phase import (
    SlotClock,
    ValidatorCredentials,
    aggregate_commit_certificate,
    make_commitment,
    validator_check_commitment,
)
from .economics import stuffing_cost
from .identity import IdentityRegistry, derive_auth_keypair, required_bond
from .open_phase import aggregate_open_certificate, apply_non_opening_penalties, build_execution_list, validator_check_opening
from .ordering import canonicalize, derive_permutation, produce_ordering
from .payoff import SandwichPayoffModel, measured_mev
from .signatures import SigningKey, get_scheme
from .vdf import make_vdf_params

logger = logging.getLogger(__name__)

PRODUCER = "producer"


def validate_timing(budget: Union[SlotBudget, ProtocolParams], head_start: int = 0) -> bool:
    """
    Slot budget identity Δ = Δc + Δv + Δo + Δmargin with positive
    components, and Δv strictly above the producer head-start.
    """
    if isinstance(budget, ProtocolParams):
        budget = budget.slot_budget
    if any(component <= 0 for component in budget.components):
        return False
    if sum(budget.components) != budget.total:
        return False
    return budget.vdf > head_start


@dataclass
class Committer:
    """An identity that commits every slot, user or producer-controlled."""

    name: str
    idcom: bytes
    signing_key: SigningKey
    txs: List[bytes]
    opens: bool = True
    controlled: bool = False
    victim: bool = False


@dataclass
class ActorRoster:
    scheme: SchemeId
    validators: List[ValidatorCredentials]
    behaviors: List[ValidatorBehavior]
    validator_set: ValidatorSet
    producer_id: bytes
    committers: List[Committer] = field(default_factory=list)

    @property
    def producer_idcoms(self) -> FrozenSet[bytes]:
        return frozenset([self.producer_id] + [c.idcom for c in self.committers if c.controlled])

    @property
    def victim_idcoms(self) -> FrozenSet[bytes]:
        return frozenset(c.idcom for c in self.committers if c.victim)

    @property
    def stuffing_identities(self) -> List[Committer]:
        return [c for c in self.committers if c.name.startswith("stuff-")]


def _seed_bytes(seed: int, label: str) -> bytes:
    return sha256(u64(seed) + label.encode("utf-8"))


def _register(
    registry: IdentityRegistry,
    params: ProtocolParams,
    scheme: SchemeId,
    rev: bytes,
    bond: int,
    role: Role = Role.USER,
):
    keys = derive_auth_keypair(RootEntropy.from_bytes(rev), scheme_id=scheme)
    record = registry.register(keys.verification_key, bond, params, scheme_id=scheme, role=role)
    return keys, record.idcom


def register_actors(config: ScenarioConfig, registry: IdentityRegistry) -> ActorRoster:
    """Register every scripted identity and derive validator receipt keys."""
    params = config.params
    scheme = config.signature_scheme or SchemeId(get_settings().signature_scheme)

    validators: List[ValidatorCredentials] = []
    members: List[ValidatorInfo] = []
    for index in range(params.n):
        signing_key, verification_key = get_scheme(scheme).keypair_from_seed(_seed_bytes(config.seed, f"validator-{index}"))
        validators.append(ValidatorCredentials(validator_id=index, signing_key=signing_key))
        members.append(ValidatorInfo(validator_id=index, verification_key=verification_key, scheme_id=scheme))

    _, producer_id = _register(
        registry, params, scheme, _seed_bytes(config.seed, PRODUCER), params.b_prod, role=Role.PRODUCER
    )
    roster = ActorRoster(
        scheme=scheme,
        validators=validators,
        behaviors=list(config.validators),
        validator_set=ValidatorSet(members=tuple(members)),
        producer_id=producer_id,
    )

    for user in config.users:
        rev = user.rev or _seed_bytes(config.seed, f"user-{user.name}")
        keys, idcom = _register(registry, params, scheme, rev, user.bond or params.d_stake)
        roster.committers.append(
            Committer(
                name=user.name,
                idcom=idcom,
                signing_key=keys.signing_key,
                txs=[tx.encode("utf-8") for tx in user.txs],
                opens=user.opens,
                controlled=user.producer_owned,
                victim=user.victim,
            )
        )

    strategy = config.strategy
    if strategy.kind == StrategyKind.STUFF:
        remaining = strategy.stuff_count
        for index in range(-(-strategy.stuff_count // params.quota_l)):
            batch = min(params.quota_l, remaining)
            remaining -= batch
            name = f"stuff-{index}"
            keys, idcom = _register(registry, params, scheme, _seed_bytes(config.seed, name), params.d_stake)
            txs = [f"{name}/filler-{j}".encode("utf-8") for j in range(batch)]
            roster.committers.append(Committer(name, idcom, keys.signing_key, txs, controlled=True))
    elif strategy.kind == StrategyKind.SELECTIVE_NON_OPEN:
        for index in range(strategy.withhold):
            name = f"withhold-{index}"
            keys, idcom = _register(registry, params, scheme, _seed_bytes(config.seed, name), params.d_stake)
            txs = [f"{name}/tx".encode("utf-8")]
            roster.committers.append(Committer(name, idcom, keys.signing_key, txs, opens=False, controlled=True))

    logger.info(f"Registered {len(registry)} identities for scenario '{config.name}' (seed {config.seed})")
    return roster


def genesis_hash(seed: int) -> bytes:
    return sha256(b"mev-ace/genesis" + u64(seed))


def _nonce_source(seed: int, slot: int, idcom: bytes, index: int) -> Callable[[int], bytes]:
    digest = sha256(b"nonce" + u64(seed) + u64(slot) + idcom + u64(index))
    return lambda size: digest[:size]


def _garbage_receipt(credentials: ValidatorCredentials, scheme: SchemeId, receipt_type: Type[Receipt], salt: bytes) -> Receipt:
    junk = sha256(b"garbage" + u64(credentials.validator_id) + salt)
    data = junk + junk if scheme == SchemeId.ED25519 else junk
    return receipt_type(validator_id=credentials.validator_id, sig=Signature(data=data, scheme_id=scheme))


class _SlotRun:
    """Mutable state of one slot while it is being simulated."""

    def __init__(self, config: ScenarioConfig, registry: IdentityRegistry, roster: ActorRoster, slot: int):
        self.config = config
        self.params = config.params
        self.registry = registry
        self.roster = roster
        self.slot = slot
        self.trace: List[TraceEvent] = []

    def note(self, tick: int, event: str, detail: str = "") -> None:
        self.trace.append(TraceEvent(tick=tick, event=event, detail=detail))

    def rebond(self) -> int:
        """Top every scripted identity back up to its role's bond floor before the slot starts."""
        owners = [(PRODUCER, self.roster.producer_id)] + [(c.name, c.idcom) for c in self.roster.committers]
        total = 0
        for name, idcom in owners:
            record = self.registry.get(idcom)
            shortfall = required_bond(record.role, self.params) - record.bond
            if shortfall > 0:
                self.registry.top_up(idcom, shortfall)
                self.note(0, "rebond", f"{name}+{shortfall}")
                total += shortfall
        return total

    def _receipts(self, check, receipt_type: Type[Receipt], salt: bytes) -> Tuple[List[Receipt], List[str]]:
        receipts: List[Receipt] = []
        errors: List[str] = []
        for credentials, behavior in zip(self.roster.validators, self.roster.behaviors):
            if behavior == ValidatorBehavior.SILENT:
                continue
            if behavior == ValidatorBehavior.GARBAGE_RECEIPTS:
                receipts.append(_garbage_receipt(credentials, self.roster.scheme, receipt_type, salt))
                continue
            try:
                receipts.append(check(credentials))
            except MevAceException as exc:
                errors.append(exc.code)
        return receipts, errors

    def commit_window(self) -> List[Tuple[Committer, CommitCertificate, OpeningSecret]]:
        clock = SlotClock(slot=self.slot, tick=0)
        views = {credentials.validator_id: self.registry.copy() for credentials in self.roster.validators}
        certified = []
        for committer in self.roster.committers:
            for index, tx in enumerate(committer.txs):
                commitment, secret = make_commitment(
                    committer.signing_key,
                    committer.idcom,
                    tx,
                    self.slot,
                    nonce_source=_nonce_source(self.config.seed, self.slot, committer.idcom, index),
                )
                receipts, errors = self._receipts(
                    lambda cred: validator_check_commitment(
                        views[cred.validator_id], commitment, clock, self.params, cred
                    ),
                    CommitReceipt,
                    commitment.c,
                )
                try:
                    cert = aggregate_commit_certificate(commitment, receipts, self.params, self.roster.validator_set)
                except InsufficientReceiptsError:
                    self.note(0, "commit_uncertified", f"{committer.name}: {','.join(sorted(set(errors)))}")
                    continue
                certified.append((committer, cert, secret))
                self.note(0, "commit_certified", f"{committer.name}/{index}")
        return certified

    def open_window(self, admissible, lookup) -> Tuple[List[OpenCertificate], int]:
        budget = self.params.slot_budget
        clock = SlotClock(slot=self.slot, tick=budget.open_start)
        open_certs: List[OpenCertificate] = []
        withheld = 0
        for entry in admissible.entries:
            committer, secret = lookup[entry.key]
            if not committer.opens:
                withheld += 1 if committer.controlled else 0
                self.note(budget.open_start, "opening_withheld", committer.name)
                continue
            receipts, errors = self._receipts(
                lambda cred: validator_check_opening(admissible, secret, clock, self.params, self.registry, cred),
                OpenReceipt,
                entry.commitment.c,
            )
            try:
                open_certs.append(
                    aggregate_open_certificate(secret, receipts, self.params, self.roster.validator_set)
                )
            except InsufficientReceiptsError:
                self.note(budget.open_start, "open_uncertified", f"{committer.name}: {','.join(sorted(set(errors)))}")
                continue
            self.note(budget.open_start, "open_certified", committer.name)
        return open_certs, withheld


def _plan_reorder(
    preview: Permutation, admissible: AdmissibleSet, strategy: ProducerStrategy, roster: ActorRoster
) -> Tuple[int, ...]:
    """
    Execution order the producer settles on after seeing the seed early,
    as a sequence of permutation positions.

    Without an explicit ``target_order`` the producer slots its own
    entries in front of the first victim, or reverses the order when it
    has nothing to sandwich.
    """
    m = len(preview)
    positions = list(range(m))
    if strategy.target_order is not None:
        if sorted(strategy.target_order) != positions:
            raise ValidationError(
                f"target_order must be a permutation of range({m}), got {list(strategy.target_order)}",
                field="strategy.target_order",
            )
        return tuple(strategy.target_order)
    owners = [admissible.entries[index].commitment.idcom for index in preview.mapping]
    producer = roster.producer_idcoms
    victims = roster.victim_idcoms
    own = [p for p in positions if owners[p] in producer]
    rest = [p for p in positions if owners[p] not in producer]
    cut = next((i for i, p in enumerate(rest) if owners[p] in victims), None)
    plan = rest[:cut] + own + rest[cut:] if own and cut is not None else positions
    if plan == positions:
        plan = list(reversed(positions))
    return tuple(plan)


def _apply_plan(execution_list: ExecutionList, plan: Sequence[int]) -> ExecutionList:
    rank = {position: r for r, position in enumerate(plan)}
    items = list(execution_list.ordered_txs)
    moved = sorted(items, key=lambda item: rank[item.position])
    positions = [item.position for item in items]
    reordered = tuple(item.model_copy(update={"position": pos}) for item, pos in zip(moved, positions))
    return execution_list.model_copy(update={"ordered_txs": reordered})


def _deviation_gain(strategy: ProducerStrategy, gains: GainModel, withheld: int) -> int:
    if strategy.kind == StrategyKind.STUFF:
        return gains.g_stuff(strategy.stuff_count)
    if strategy.kind == StrategyKind.SELECTIVE_NON_OPEN:
        return gains.g_open * withheld
    if strategy.kind in (StrategyKind.REORDER, StrategyKind.CENSOR, StrategyKind.FAKE_VDF):
        return gains.g_invalid
    return 0


def run_slot(
    config: ScenarioConfig,
    registry: IdentityRegistry,
    prev_block_hash: bytes,
    slot: int = 0,
    roster: Optional[ActorRoster] = None,
) -> SlotOutcome:
    """
    Simulate one slot end to end.

    Protocol failures (uncertified commitments, rejected blocks, slashes)
    are recorded in the outcome; only an invalid slot budget raises.
    """
    params = config.params
    budget = params.slot_budget
    if not validate_timing(budget, config.producer_head_start):
        raise ConfigError("slot budget fails the timing check", field="params.slot_budget")
    if roster is None:
        roster = register_actors(config, registry)
    strategy = config.strategy
    run = _SlotRun(config, registry, roster, slot)
    deviated = strategy.kind == StrategyKind.STUFF
    logger.info(f"Slot {slot}: start ({strategy.label})")

    # slashed identities re-bond before acting; a producer below b_prod may not propose
    rebonded = run.rebond()
    if rebonded:
        logger.info(f"Slot {slot}: scripted identities re-bonded {rebonded}")
    registry.require_bonded(roster.producer_id, params)

    # commit window [0, Δc)
    certified = run.commit_window()
    lookup = {cert.key: (committer, secret) for committer, cert, secret in certified}
    censored = {c.idcom for c in roster.committers if c.name in strategy.targets}

    honest_admissible = canonicalize([cert for _, cert, _ in certified], slot)
    admissible = honest_admissible
    if strategy.kind == StrategyKind.CENSOR and strategy.stage == CensorStage.COMMIT:
        admissible = canonicalize([cert for c, cert, _ in certified if c.idcom not in censored], slot)
        deviated = len(admissible) < len(honest_admissible)
    run.note(budget.commit_cutoff, "set_locked", f"m={len(admissible)}")
    if strategy.kind == StrategyKind.CENSOR and strategy.stage == CensorStage.COMMIT:
        run.note(budget.commit_cutoff, "producer_plan", f"drop {','.join(strategy.targets)}")

    # delay window [Δc, Δc+Δv)
    vdf_params = make_vdf_params(params.vdf_delay_T)
    honest_bundle = produce_ordering(honest_admissible, prev_block_hash, vdf_params)
    bundle = honest_bundle if admissible is honest_admissible else produce_ordering(admissible, prev_block_hash, vdf_params)
    if strategy.kind == StrategyKind.FAKE_VDF:
        fake_seed = sha256(b"ground-seed" + bundle.seed)
        bundle = bundle.model_copy(
            update={"seed": fake_seed, "permutation": derive_permutation(fake_seed, len(admissible))}
        )
        deviated = True

    # the producer finishes the delay evaluation head_start ticks early, after the set is locked
    preview_tick = budget.open_start - config.producer_head_start
    run.note(preview_tick, "seed_preview", bundle.seed.hex()[:16])
    plan: Optional[Tuple[int, ...]] = None
    doomed: FrozenSet[Tuple[bytes, bytes]] = frozenset()
    if strategy.kind == StrategyKind.REORDER:
        plan = _plan_reorder(bundle.permutation, admissible, strategy, roster)
        run.note(preview_tick, "producer_plan", "order " + ",".join(map(str, plan)))
    elif strategy.kind == StrategyKind.CENSOR and strategy.stage == CensorStage.EXECUTION:
        targeted = [
            p for p, index in enumerate(bundle.permutation.mapping)
            if admissible.entries[index].commitment.idcom in censored
        ]
        doomed = frozenset(admissible.entries[bundle.permutation.mapping[p]].key for p in targeted)
        run.note(preview_tick, "producer_plan", "drop positions " + ",".join(map(str, targeted)))
    run.note(budget.open_start, "seed_ready", bundle.seed.hex()[:16])

    # opening window [Δc+Δv, Δ)
    open_certs, withheld = run.open_window(admissible, lookup)
    if strategy.kind == StrategyKind.SELECTIVE_NON_OPEN:
        deviated = withheld > 0

    presented = open_certs
    if strategy.kind == StrategyKind.CENSOR and strategy.stage == CensorStage.EXECUTION:
        presented = [cert for cert in open_certs if cert.key not in doomed]
        deviated = len(presented) < len(open_certs)
    execution_list = build_execution_list(bundle, admissible, presented)
    if plan is not None:
        reordered = _apply_plan(execution_list, plan)
        deviated = reordered != execution_list
        execution_list = reordered

    block = Block(
        slot=slot,
        prev_block_hash=prev_block_hash,
        bundle=bundle,
        admissible=admissible,
        execution_list=execution_list,
        open_certificates=tuple(presented),
        penalized=execution_list.skipped_refs(),
        producer_id=roster.producer_id,
    )
    run.note(budget.total, "block_published", f"executed={len(execution_list.ordered_txs)}")

    # omission proofs from honest users, emitted at publication
    validator_set = roster.validator_set
    open_by_key = {cert.key: cert for cert in open_certs}
    executed = {(item.idcom, item.c) for item in execution_list.ordered_txs}
    proofs: List[OmissionProof] = []
    for committer, cert, _ in certified:
        if committer.controlled:
            continue
        if block.admissible.index_of(*cert.key) < 0:
            proof = make_omission_proof(OmissionKind.COMMIT_OMISSION, cert, params, validator_set)
        elif cert.key in open_by_key and cert.key not in executed:
            proof = make_omission_proof(
                OmissionKind.EXECUTION_OMISSION, cert, params, validator_set, open_cert=open_by_key[cert.key]
            )
        else:
            continue
        if verify_omission_proof(proof, block, params, validator_set):
            proofs.append(proof)
            run.note(budget.total + config.proof_latency, "proof_delivered", f"{proof.kind.value}:{committer.name}")

    timely = config.proof_latency < config.vote_delay
    if proofs and not timely:
        logger.warning(f"Slot {slot}: {len(proofs)} omission proofs arrive after the vote")
    pending = proofs if timely else []

    # votes at Δ + vote_delay; honest validators all compute the same verdict
    verdict = verify_block(block, prev_block_hash, params, validator_set, pending, registry)
    votes = {
        credentials.validator_id: verdict.valid if behavior == ValidatorBehavior.HONEST else True
        for credentials, behavior in zip(roster.validators, roster.behaviors)
    }
    finalized = tally_votes(votes, params)
    vote_tick = budget.total + config.vote_delay
    run.note(vote_tick, "votes", f"accept={sum(votes.values())}/{len(votes)}")

    events: List[SlashEvent] = []
    if finalized:
        events.extend(apply_non_opening_penalties(registry, execution_list, params, refs=block.penalized))
        run.note(vote_tick, "finalized", f"penalties={len(events)}")
        logger.info(f"Slot {slot}: block finalized with {len(execution_list.ordered_txs)} txs")
    else:
        event = slash_producer(registry, roster.producer_id, params, verdict, slot)
        if event is not None:
            events.append(event)
        run.note(vote_tick, "rejected", ",".join(v.value for v in verdict.violations))
        logger.warning(f"Slot {slot}: block rejected ({[v.value for v in verdict.violations]})")

    # payoffs
    controlled = roster.producer_idcoms
    model = SandwichPayoffModel(config.payoff.sandwich_value, roster.victim_idcoms)
    realized: Sequence[ExecutedTx] = execution_list.ordered_txs if finalized else ()
    mev = 0
    if finalized:
        reference = build_execution_list(honest_bundle, honest_admissible, open_certs)
        mev = measured_mev(model, realized, reference.ordered_txs, controlled)
    gain = _deviation_gain(strategy, config.gains, withheld) if deviated else 0
    slashed = sum(event.amount for event in events if event.idcom in controlled)
    capital = (
        stuffing_cost(strategy.stuff_count, params.quota_l, params.d_stake)
        if strategy.kind == StrategyKind.STUFF
        else 0
    )
    producer_payoff = mev + gain - slashed - capital

    utilities = model.user_utilities(realized, controlled)
    payoffs = {PRODUCER: producer_payoff}
    for committer in roster.committers:
        if committer.controlled:
            continue
        lost = sum(event.amount for event in events if event.idcom == committer.idcom)
        payoffs[committer.name] = utilities.get(committer.idcom, 0) - lost

    return SlotOutcome(
        slot=slot,
        strategy=strategy.label,
        deviated=deviated,
        finalized=finalized,
        block=block,
        block_hash=block_hash(block) if finalized else None,
        verdict=verdict,
        accept_votes=sum(votes.values()),
        proofs=tuple(proofs),
        timely_proofs=len(pending),
        slash_events=tuple(events),
        payoffs=payoffs,
        producer_payoff=producer_payoff,
        measured_mev=mev,
        conservation_holds=registry.check_conservation(),
        trace=tuple(run.trace),
    )


def _permutation_key(mapping: Sequence[int]) -> str:
    return "-".join(str(index) for index in mapping)


def run_campaign(
    config: ScenarioConfig,
    n_slots: int,
    seeds: Iterable[int],
    strategies: Optional[Sequence[ProducerStrategy]] = None,
    on_outcome: Optional[Callable[[SlotOutcome], None]] = None,
    on_registry: Optional[Callable[[str, IdentityRegistry], None]] = None,
) -> CampaignMetrics:
    """
    Run ``n_slots`` chained slots per seed (per strategy) on fresh registries
    and aggregate ordering histograms, slashes, rejections and payoffs.

    ``on_registry`` receives each final registry keyed "<strategy>/seed-<seed>".
    """
    seeds = list(seeds)
    plans = list(strategies) if strategies else [config.strategy]
    metrics = CampaignMetrics()
    permutations: Counter = Counter()
    sizes = set()

    for strategy in plans:
        total_payoff = 0
        for seed in seeds:
            scenario = config.model_copy(update={"seed": seed, "strategy": strategy})
            registry = IdentityRegistry()
            roster = register_actors(scenario, registry)
            prev = genesis_hash(seed)
            for slot in range(n_slots):
                outcome = run_slot(scenario, registry, prev, slot, roster)
                if on_outcome is not None:
                    on_outcome(outcome)
                metrics.slots += 1
                total_payoff += outcome.producer_payoff
                if outcome.finalized:
                    metrics.finalized += 1
                    prev = outcome.block_hash
                else:
                    metrics.rejected += 1

                mapping = outcome.block.bundle.permutation.mapping
                sizes.add(len(mapping))
                permutations[_permutation_key(mapping)] += 1
                for position, entry_index in enumerate(mapping):
                    row = metrics.position_histogram.setdefault(entry_index, [])
                    if len(row) < len(mapping):
                        row.extend([0] * (len(mapping) - len(row)))
                    row[position] += 1
                for event in outcome.slash_events:
                    reason = event.reason.value
                    metrics.slash_totals[reason] = metrics.slash_totals.get(reason, 0) + event.amount
            metrics.conservation_holds = metrics.conservation_holds and registry.check_conservation()
            if on_registry is not None:
                on_registry(f"{strategy.label}/seed-{seed}", registry)
        metrics.payoff_table[strategy.label] = total_payoff

    metrics.permutation_histogram = dict(sorted(permutations.items()))
    if len(sizes) == 1:
        m = sizes.pop()
        if 2 <= m <= 6:
            observed = [permutations[_permutation_key(p)] for p in itertools.permutations(range(m))]
            metrics.uniformity_p_value = float(stats.chisquare(observed).pvalue)
    logger.info(
        f"Campaign '{config.name}': {metrics.slots} slots, {metrics.rejected} rejected, "
        f"p-value {metrics.uniformity_p_value}"
    )
    return metrics


def compare_strategies(
    config: ScenarioConfig,
    strategies: Sequence[ProducerStrategy],
    seeds: Optional[Iterable[int]] = None,
    n_slots: int = 1,
) -> Dict[str, int]:
    """Producer payoff per strategy label over the same seeds."""
    seeds = list(seeds) if seeds is not None else [config.seed]
    return run_campaign(config, n_slots, seeds, strategies).payoff_table


def make_artifact_bundle(outcome: SlotOutcome, params: ProtocolParams, validator_set: ValidatorSet) -> ArtifactBundle:
    return ArtifactBundle(
        params=params,
        validator_set=validator_set,
        prev_block_hash=outcome.block.prev_block_hash,
        block=outcome.block,
        proofs_hex=tuple(encode_omission_proof(proof).hex() for proof in outcome.proofs),
    )


def write_artifacts(bundle: ArtifactBundle, outcome: SlotOutcome, directory: Union[str, Path]) -> List[Path]:
    """Write outcome.json, block.json and one proof-<n>.json per omission proof."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    files = {"outcome.json": outcome.model_dump_json(indent=2), "block.json": bundle.model_dump_json(indent=2)}
    for index, proof_hex in enumerate(bundle.proofs_hex):
        single = bundle.model_copy(update={"proofs_hex": (proof_hex,)})
        files[f"proof-{index}.json"] = single.model_dump_json(indent=2)
    for name, content in files.items():
        path = directory / name
        path.write_text(content, encoding="utf-8")
        written.append(path)
    logger.info(f"Wrote {len(written)} artifacts to {directory}")
    return written
