"""
MEV-ACE Lab command-line entry point.

Subcommands:
    check-config     timing and incentive checks on a scenario file
    run-slot         simulate one slot, optionally exporting block/proof artifacts
    run-campaign     simulate many slots over seeds and report metrics
    verify-block     re-verify an exported block artifact
    verify-proof     re-verify exported omission proofs against their block
    suggest-params   minimal bonds for a scenario's gains

Exit status: 0 success / valid, 1 invalid artifact or failed bounds,
2 usage or parse error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError as PydanticValidationError

from .config import get_settings
from .exceptions import ConfigError, DecodeError, MevAceException
from .schemas.block import OmissionProof
from .schemas.scenario import ArtifactBundle, CensorStage, ProducerStrategy, ScenarioConfig, StrategyKind
from .schemas.economics import FixedParams
from .services.accountability import verify_block, verify_omission_proof
from .services.codec import decode_omission_proof
from .services.economics import check_incentives, minimal_parameters
from .services.identity import IdentityRegistry
from .services.simulator import (
    genesis_hash,
    make_artifact_bundle,
    register_actors,
    run_campaign,
    run_slot,
    validate_timing,
    write_artifacts,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Raised for argument values argparse cannot check on its own."""


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read '{path}': {e.strerror or e}", field="path") from e


def load_scenario(path: str) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate_json(_read_text(path))
    except PydanticValidationError as e:
        raise ConfigError(f"invalid scenario '{path}': {e.errors()[0]['msg']}", field="scenario") from e


def load_artifact(path: str) -> ArtifactBundle:
    try:
        return ArtifactBundle.model_validate_json(_read_text(path))
    except PydanticValidationError as e:
        raise ConfigError(f"invalid artifact '{path}': {e.errors()[0]['msg']}", field="artifact") from e


def parse_strategy(name: str, base: ProducerStrategy) -> ProducerStrategy:
    """
    Parse a strategy override: ``honest``, ``reorder``, ``fake_vdf``,
    ``stuff:<k>``, ``selective_non_open[:<count>]`` or ``censor[:commit|execution]``.
    Censor targets come from the scenario's own strategy.
    """
    kind_name, _, argument = name.partition(":")
    try:
        kind = StrategyKind(kind_name)
    except ValueError as e:
        raise UsageError(f"unknown strategy '{name}'") from e
    try:
        if kind == StrategyKind.STUFF:
            return ProducerStrategy(kind=kind, stuff_count=int(argument))
        if kind == StrategyKind.SELECTIVE_NON_OPEN:
            return ProducerStrategy(kind=kind, withhold=int(argument) if argument else 1)
        if kind == StrategyKind.CENSOR:
            stage = CensorStage(argument) if argument else base.stage
            return ProducerStrategy(kind=kind, targets=base.targets, stage=stage)
        return ProducerStrategy(kind=kind)
    except (ValueError, PydanticValidationError) as e:
        raise UsageError(f"bad strategy '{name}': {e}") from e


def _emit(document: dict, output: Optional[str]) -> None:
    text = json.dumps(document, indent=2, sort_keys=True)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    print(text)


def cmd_check_config(args) -> int:
    config = load_scenario(args.scenario)
    timing_ok = validate_timing(config.params.slot_budget, config.producer_head_start)
    report = check_incentives(config.params, config.gains, args.k_max or config.k_max)
    _emit(
        {"scenario": config.name, "timing_valid": timing_ok, "incentives": report.model_dump(mode="json")},
        args.output,
    )
    return EXIT_OK if timing_ok and report.all_hold else EXIT_INVALID


def cmd_run_slot(args) -> int:
    config = load_scenario(args.scenario)
    update = {}
    if args.seed is not None:
        update["seed"] = args.seed
    if args.strategy:
        update["strategy"] = parse_strategy(args.strategy, config.strategy)
    config = config.model_copy(update=update)

    registry = IdentityRegistry()
    roster = register_actors(config, registry)
    outcome = run_slot(config, registry, genesis_hash(config.seed), args.slot, roster)
    if args.export_dir:
        bundle = make_artifact_bundle(outcome, config.params, roster.validator_set)
        write_artifacts(bundle, outcome, args.export_dir)
    _emit(
        {
            "scenario": config.name,
            "slot": outcome.slot,
            "strategy": outcome.strategy,
            "finalized": outcome.finalized,
            "violations": [v.value for v in outcome.verdict.violations],
            "proofs": len(outcome.proofs),
            "producer_payoff": outcome.producer_payoff,
            "measured_mev": outcome.measured_mev,
            "payoffs": outcome.payoffs,
            "block_hash": outcome.block_hash.hex() if outcome.block_hash else None,
        },
        args.output,
    )
    return EXIT_OK


def cmd_run_campaign(args) -> int:
    config = load_scenario(args.scenario)
    strategies = [parse_strategy(name, config.strategy) for name in args.strategy] if args.strategy else None
    seeds = args.seeds or [config.seed]

    session = None
    callback = None
    archive_registry = None
    run_label = args.run_label or config.name
    if args.archive:
        from .crud import record_slot_outcome, save_registry
        from .database import SessionLocal, create_tables

        create_tables()
        session = SessionLocal()
        callback = lambda outcome: record_slot_outcome(session, run_label, outcome, commit=False)  # noqa: E731
        archive_registry = lambda key, registry: save_registry(session, registry, f"{run_label}/{key}")  # noqa: E731
    try:
        metrics = run_campaign(
            config, args.slots, seeds, strategies, on_outcome=callback, on_registry=archive_registry
        )
        if session is not None:
            session.commit()
            logger.info(f"Archived {metrics.slots} slot outcomes under '{run_label}'")
    finally:
        if session is not None:
            session.close()

    output = args.output
    if args.report:
        reports = Path(get_settings().reports_dir)
        reports.mkdir(parents=True, exist_ok=True)
        output = str(reports / f"{run_label}-metrics.json")
    _emit(metrics.model_dump(mode="json"), output)
    return EXIT_OK if metrics.conservation_holds else EXIT_INVALID


def _decode_proof_hex(item: str) -> OmissionProof:
    try:
        data = bytes.fromhex(item)
    except ValueError as e:
        raise DecodeError(f"proof is not hex: {e}") from e
    return decode_omission_proof(data)


def cmd_verify_block(args) -> int:
    bundle = load_artifact(args.block)
    proofs = [_decode_proof_hex(item) for item in bundle.proofs_hex]
    for path in args.proof or []:
        proofs.extend(_decode_proof_hex(item) for item in load_artifact(path).proofs_hex)
    verdict = verify_block(bundle.block, bundle.prev_block_hash, bundle.params, bundle.validator_set, proofs)
    _emit(
        {"slot": bundle.block.slot, "valid": verdict.valid, "violations": [v.value for v in verdict.violations]},
        args.output,
    )
    return EXIT_OK if verdict.valid else EXIT_INVALID


def cmd_verify_proof(args) -> int:
    bundle = load_artifact(args.proof)
    if not bundle.proofs_hex:
        raise ConfigError("artifact carries no omission proof", field="proofs_hex")
    results = []
    for item in bundle.proofs_hex:
        proof = _decode_proof_hex(item)
        valid = verify_omission_proof(proof, bundle.block, bundle.params, bundle.validator_set)
        results.append({"kind": proof.kind.value, "report": "proof valid" if valid else "proof invalid"})
    _emit({"slot": bundle.block.slot, "proofs": results}, args.output)
    return EXIT_OK if all(r["report"] == "proof valid" for r in results) else EXIT_INVALID


def cmd_suggest_params(args) -> int:
    config = load_scenario(args.scenario)
    k_max = args.k_max or config.k_max
    suggestion = minimal_parameters(config.gains, FixedParams.from_params(config.params), k_max, base=config.params)
    _emit(suggestion.model_dump(mode="json", exclude={"params"}), args.output)
    return EXIT_OK if suggestion.feasible else EXIT_INVALID


def _seed_list(value: str) -> List[int]:
    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers: {value}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mevace", description="MEV-ACE fair-ordering protocol lab")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check-config", help="Run timing and incentive checks on a scenario")
    check.add_argument("scenario", help="Path to a scenario JSON file")
    check.add_argument("--k-max", type=int, default=None, help="Largest stuffing count to check")
    check.add_argument("--output", help="Also write the report to this file")
    check.set_defaults(handler=cmd_check_config)

    slot = sub.add_parser("run-slot", help="Simulate one slot")
    slot.add_argument("scenario", help="Path to a scenario JSON file")
    slot.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
    slot.add_argument("--slot", type=int, default=0, help="Slot number")
    slot.add_argument("--strategy", help="Override the producer strategy, e.g. stuff:3")
    slot.add_argument("--export-dir", help="Write outcome, block and proof artifacts here")
    slot.add_argument("--output", help="Also write the summary to this file")
    slot.set_defaults(handler=cmd_run_slot)

    campaign = sub.add_parser("run-campaign", help="Simulate many slots and report metrics")
    campaign.add_argument("scenario", help="Path to a scenario JSON file")
    campaign.add_argument("--slots", type=int, default=100, help="Slots per seed")
    campaign.add_argument("--seeds", type=_seed_list, default=None, help="Comma-separated seeds")
    campaign.add_argument("--strategy", action="append", help="Strategy to compare (repeatable)")
    campaign.add_argument("--archive", action="store_true", help="Persist slot outcomes and final registries to the archive database")
    campaign.add_argument("--run-label", help="Archive/report label (defaults to the scenario name)")
    campaign.add_argument("--report", action="store_true", help="Write metrics under the reports directory")
    campaign.add_argument("--output", help="Also write the metrics to this file")
    campaign.set_defaults(handler=cmd_run_campaign)

    block = sub.add_parser("verify-block", help="Re-verify an exported block artifact")
    block.add_argument("block", help="Path to block.json")
    block.add_argument("--proof", action="append", help="Extra proof artifact to deliver (repeatable)")
    block.add_argument("--output", help="Also write the verdict to this file")
    block.set_defaults(handler=cmd_verify_block)

    proof = sub.add_parser("verify-proof", help="Re-verify an exported omission proof")
    proof.add_argument("proof", help="Path to proof-<n>.json")
    proof.add_argument("--output", help="Also write the report to this file")
    proof.set_defaults(handler=cmd_verify_proof)

    suggest = sub.add_parser("suggest-params", help="Minimal bonds for the scenario's gains")
    suggest.add_argument("scenario", help="Path to a scenario JSON file")
    suggest.add_argument("--k-max", type=int, default=None, help="Largest stuffing count to cover")
    suggest.add_argument("--output", help="Also write the suggestion to this file")
    suggest.set_defaults(handler=cmd_suggest_params)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    settings = get_settings()
    level = logging.DEBUG if args.verbose or settings.debug else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return args.handler(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MevAceException as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Unhandled error in {args.command}: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
