# Command line interface of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
``agiopp`` command.

Exit codes: 0 success or accept, 1 protocol reject, 2 usage or configuration error, 3 internal
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np

from .abstract import CoinMode, Family
from .algebra import as_ints, random_elements
from .config import (
    MODES,
    PlanConfig,
    build_plan,
    check_digest,
    read_config,
    save_plan,
    word_from_bytes,
    word_to_bytes,
)
from .errors import AgIoppError, ConfigError, SoundnessError
from .folding import OpCounter
from .foldplan import FoldingPlan, tower_parameters
from .interactive import simulate
from .iopp import prove, verify
from .presets import PRESETS, preset, rate_table, rs_bench_config, worked_example
from .rrbasis import encode
from .soundness import (
    SoundnessParams,
    choose_epsilon,
    min_repetitions,
    query_repetitions,
    soundness_report,
)
from .transcript import ProofTranscript

logger = logging.getLogger(__name__)

#: Largest tower length that ``plan`` builds; larger configurations are only reported
MAX_PLAN_POINTS = 1 << 20

#: Repetitions when neither t nor kappa is configured
DEFAULT_T = 16

#: Epsilon of the query only repetition rule on small fields
FALLBACK_EPSILON = "2^-6"

_LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def _print(document: Any) -> None:
    print(json.dumps(document, indent=2, default=str))


def _load(args: argparse.Namespace) -> Tuple[PlanConfig, Optional[bytes]]:
    if args.preset is not None:
        config, digest = preset(args.preset), None
    elif args.config is not None:
        config, digest = read_config(args.config)
    else:
        raise ConfigError("Need --config or --preset")
    config = config.replace(
        seed=args.seed,
        threads=args.threads,
        mode=None if args.mode is None else MODES[args.mode],
        t=args.t,
        kappa=args.kappa,
    )
    return config, digest


def _load_plan(args: argparse.Namespace) -> Tuple[PlanConfig, FoldingPlan]:
    config, digest = _load(args)
    return config, check_digest(build_plan(config), digest)


def _read_word(path: str, plan: FoldingPlan) -> galois.FieldArray:
    try:
        data = Path(path).read_bytes()
    except OSError as ex:
        raise ConfigError(f"Cannot read {path}: {ex}") from ex
    return plan.spec.field(list(word_from_bytes(plan.spec, data)))


def _write(path: str, data: bytes) -> None:
    Path(path).write_bytes(data)
    logger.info("Wrote %d bytes to %s", len(data), path)


def random_codeword(plan: FoldingPlan, rng: np.random.Generator) -> galois.FieldArray:
    """
    Uniformly random codeword of the plan's top code.
    """
    level = plan.levels[0]
    message = random_elements(plan.spec, level.dimension, rng)
    if plan.family is Family.LINE:
        # Monomial basis: evaluate the polynomial instead of building the generator.
        poly = galois.Poly(message[::-1], field=plan.spec.field)
        return poly(level.domain.coordinates[:, 0])
    return encode(message, level.basis, level.domain)


def repetitions(config: PlanConfig, plan: FoldingPlan) -> int:
    """
    Number of query tests: configured t, or the fewest reaching ``2^-kappa``.

    When err_commit cannot meet the target (small fields) only the query error is bounded.
    """
    if config.t is not None:
        return config.t
    if config.kappa is None:
        return DEFAULT_T
    params = SoundnessParams.from_plan(plan, config.epsilon or FALLBACK_EPSILON)
    try:
        eps = config.epsilon or choose_epsilon(params, config.kappa)
        params = params.with_eps(eps)
        return min_repetitions(params.commit(), params.query(), config.kappa)
    except SoundnessError as ex:
        logger.warning("Bounding the query error only: %s", ex)
        return query_repetitions(params.query(), config.kappa)


def cmd_plan(args: argparse.Namespace) -> int:
    config, digest = _load(args)
    if config.family is Family.TOWER:
        params = tower_parameters(config.q, config.level, config.degree, config.bump)
        report: Dict[str, Any] = {
            "degrees": list(params.degrees),
            "genera": list(params.genera),
            "n": params.length,
            "k": params.top_dimension,
            "top_rate": str(params.top_rate),
            "rs_rate": str(params.rs_rate),
            "rs_rate_bound": str((params.corollary_bound + 1) / config.q ** 2),
        }
        if params.length > MAX_PLAN_POINTS:
            logger.info("Tower of length %d is only reported", params.length)
            _print({"tower": report})
            return 0
    else:
        report = None
    plan = check_digest(build_plan(config), digest)
    document = {
        "description": plan.description,
        "digest": plan.digest.hex(),
        "n": plan.length,
        "rounds": plan.rounds,
        "lambda": str(plan.lam),
        "p_max": plan.p_max,
        "proof_length": plan.proof_length,
        "levels": plan.describe(),
    }
    if report is not None:
        document["tower"] = report
    if args.out is not None:
        save_plan(args.out, config, plan)
    _print(document)
    return 0


def cmd_encode(args: argparse.Namespace) -> int:
    config, plan = _load_plan(args)
    level = plan.levels[0]
    if args.message is not None:
        message = _read_word(args.message, plan)
    else:
        rng = np.random.default_rng(config.seed)
        message = random_elements(plan.spec, level.dimension, rng)
    word = encode(message, level.basis, level.domain)
    _write(args.out, word_to_bytes(plan.spec, as_ints(word).tolist()))
    return 0


def cmd_prove(args: argparse.Namespace) -> int:
    config, plan = _load_plan(args)
    if args.word is not None:
        word = _read_word(args.word, plan)
    else:
        word = random_codeword(plan, np.random.default_rng(config.seed))
    t = repetitions(config, plan)
    distinct = config.sampling == "distinct"
    if args.interactive:
        transcript, decision = simulate(
            word, plan, t, config.seed, config.mode, distinct, config.threads
        )
        logger.info("Interactive verifier: %s", decision)
    else:
        transcript = prove(
            word,
            plan,
            t,
            CoinMode.FIAT_SHAMIR,
            config.mode,
            distinct=distinct,
            threads=config.threads,
        )
    _write(args.out, transcript.to_bytes())
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    config, plan = _load_plan(args)
    try:
        data = Path(args.proof).read_bytes()
    except OSError as ex:
        raise ConfigError(f"Cannot read {args.proof}: {ex}") from ex
    transcript = ProofTranscript.from_bytes(data)
    word = None if args.word is None else _read_word(args.word, plan)
    decision = verify(transcript, plan, word, config.seed, config.sampling == "distinct")
    print(decision)
    return 0 if decision else 1


def cmd_soundness(args: argparse.Namespace) -> int:
    if args.config is not None or args.preset is not None:
        config, plan = _load_plan(args)
        eps = args.eps or config.epsilon
        kappa = config.kappa
        params = SoundnessParams.from_plan(plan, eps or FALLBACK_EPSILON, args.delta)
        if eps is None and kappa is not None:
            params = params.with_eps(choose_epsilon(params, kappa))
        t = config.t
    else:
        keys = ("n", "field_size", "p_max", "lam", "eps")
        missing = ["--" + k.replace("_", "-") for k in keys if getattr(args, k) is None]
        if missing:
            raise ConfigError(f"Missing {', '.join(missing)}")
        params = SoundnessParams(
            args.n,
            args.field_size,
            args.p_max,
            args.lam,
            args.eps,
            args.delta,
            args.closed_form,
        )
        kappa, t = args.kappa, args.t
    _print(soundness_report(params, kappa=kappa, t=t))
    return 0


def cmd_paper_example(args: argparse.Namespace) -> int:
    _print(worked_example(90 if args.kappa is None else args.kappa))
    return 0


def cmd_table1(args: argparse.Namespace) -> int:
    rows = rate_table()
    _print(rows)
    return 0 if all(row["certified"] for row in rows) else 1


def cmd_bench(args: argparse.Namespace) -> int:
    t = DEFAULT_T if args.t is None else args.t
    rng = np.random.default_rng(0 if args.seed is None else args.seed)
    rows: List[Dict[str, Any]] = []
    for log_n in range(args.min_log, args.max_log + 1):
        plan = build_plan(rs_bench_config(log_n))
        word = random_codeword(plan, rng)
        prover, verifier = OpCounter(), OpCounter()
        transcript = prove(word, plan, t, threads=args.threads or 1, counter=prover)
        decision = verify(transcript, plan, counter=verifier)
        if not decision:
            raise AssertionError(f"Honest proof rejected at n = {plan.length}: {decision}")
        rows.append(
            {
                "n": plan.length,
                "prover_ops": prover.total,
                "verifier_ops": verifier.total,
                "proof_length": plan.proof_length,
                "proof_bytes": len(transcript.to_bytes()),
            }
        )
    document: Dict[str, Any] = {"t": t, "rows": rows}
    document["proof_below_n"] = all(row["proof_length"] < row["n"] for row in rows)
    if len(rows) > 1:
        n = np.array([row["n"] for row in rows], dtype=float)
        ops = np.array([row["prover_ops"] for row in rows], dtype=float)
        document["prover_exponent"] = float(np.polyfit(np.log(n), np.log(ops), 1)[0])
        # Verifier operations against log2 n.
        checks = np.array([row["verifier_ops"] for row in rows], dtype=float)
        document["verifier_log_slope"] = float(np.polyfit(np.log2(n), checks, 1)[0])
        per_log = checks / np.log2(n)
        document["verifier_log_ratio"] = float(per_log.max() / per_log.min())
    _print(document)
    return 0


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--config", help="JSON configuration or plan file")
    source.add_argument("--preset", choices=sorted(PRESETS), help="Named configuration")
    common.add_argument("--seed", type=int, help="Seed of coins and random words")
    common.add_argument("--threads", type=int, help="Worker threads")
    common.add_argument("--mode", choices=sorted(MODES), help="Final test")
    common.add_argument("--t", type=int, help="Number of query tests")
    common.add_argument("--kappa", type=int, help="Security target in bits")
    common.add_argument("--out", help="Output file")
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging")

    parser = argparse.ArgumentParser(prog="agiopp", description="Proximity proofs for AG codes")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("plan", parents=[common], help="Build and report a folding plan")
    sub.set_defaults(func=cmd_plan)

    sub = commands.add_parser("encode", parents=[common], help="Encode a message")
    sub.add_argument("--message", help="Message file, a random message by default")
    sub.set_defaults(func=cmd_encode, need_out=True)

    sub = commands.add_parser("prove", parents=[common], help="Prove proximity of a word")
    sub.add_argument("--word", help="Word file, a random codeword by default")
    sub.add_argument(
        "--interactive", action="store_true", help="Seeded coins over a simulated exchange"
    )
    sub.set_defaults(func=cmd_prove, need_out=True)

    sub = commands.add_parser("verify", parents=[common], help="Verify a proof")
    sub.add_argument("--proof", required=True, help="Proof file")
    sub.add_argument("--word", help="Word file to check the opened values against")
    sub.set_defaults(func=cmd_verify)

    sub = commands.add_parser("soundness", parents=[common], help="Soundness error report")
    sub.add_argument("--n", type=int, help="Code length")
    sub.add_argument("--field-size", type=int, help="Size of the challenge alphabet")
    sub.add_argument("--p-max", type=int, help="Largest quotient degree")
    sub.add_argument("--lam", help="Relative minimum distance, e.g. 7/8")
    sub.add_argument("--eps", help="Epsilon, e.g. 2^-6.55")
    sub.add_argument("--delta", help="Distance of the word")
    sub.add_argument("--closed-form", action="store_true", help="Closed form radius")
    sub.set_defaults(func=cmd_soundness)

    sub = commands.add_parser(
        "paper-example",
        parents=[common],
        aliases=["worked-example"],
        help="Soundness of a large Mersenne field code",
    )
    sub.set_defaults(func=cmd_paper_example)

    sub = commands.add_parser(
        "table1", parents=[common], aliases=["rate-table"], help="Tower line code rate rows"
    )
    sub.set_defaults(func=cmd_table1)

    sub = commands.add_parser("bench", parents=[common], help="Operation counts of RS plans")
    sub.add_argument("--min-log", type=int, default=10, help="Smallest log2 n")
    sub.add_argument("--max-log", type=int, default=16, help="Largest log2 n")
    sub.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=_LOG_LEVELS[min(args.verbose, 2)],
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    if getattr(args, "need_out", False) and args.out is None:
        parser.error(f"{args.command} needs --out")
    try:
        return args.func(args)
    except AgIoppError as ex:
        print(f"agiopp: {ex}", file=sys.stderr)
        return 2
    except Exception:
        logger.exception("Internal error")
        return 3


if __name__ == "__main__":
    sys.exit(main())
