#!/usr/bin/env python3
"""
seqlab - Main Application
Command-line surface: numsys, generate, measure, certify, crosscheck

Results go to stdout (or --out); logs go to stderr.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import yaml

from src import __version__
from src.automata import (
    check_language_equals_greedy,
    count_accepted,
    growth_report,
    iter_language,
)
from src.beta_systems import NonConvergent, dominant_root
from src.config_manager import ConfigManager, ConfigValidationError
from src.measures import BudgetExceeded, MODES, correlation, correlation_profile, well_distribution
from src.morphic import cross_check_morphic_vs_automatic
from src.numeration import count_words_with_leading_zeros, is_bertrand_up_to
from src.presets import NumerationPreset
from src.report_writer import RunReport, format_prefix, render_report, write_prefix, write_report, write_text_atomic
from src.spec_files import SequenceSource, SpecFileError, format_automaton, resolve_sequence, resolve_system
from src.utils import CapacityExceeded, SeqlabError, format_word, parse_word
from src.witness import (
    PigeonholeBoundExceeded,
    VerificationFailed,
    block_exponent_for,
    build_certificate,
    certificate_growth,
    collision_from_words,
    find_collisions,
    verify_certificate,
)

logger = logging.getLogger(__name__)

# Exit codes
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_CAPACITY = 3

EMIT_CHOICES = ["recurrence", "values", "automaton", "language", "check", "growth"]


def parse_n_range(text: str) -> List[int]:
    """
    '10' -> [10]; '6..32' -> [6, ..., 32]; '10..100:10' -> [10, 20, ..., 100];
    comma separated parts are combined.
    """
    values = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        step = 1
        if ":" in part:
            part, step_text = part.split(":", 1)
            step = int(step_text)
            if step < 1:
                raise ValueError(f"Step must be positive in {text!r}")
        if ".." in part:
            low, high = (int(x) for x in part.split("..", 1))
            if low > high:
                raise ValueError(f"Empty range {part!r}")
            values.update(range(low, high + 1, step))
        else:
            values.add(int(part))
    if not values or min(values) < 1:
        raise ValueError(f"N range must contain positive integers, got {text!r}")
    return sorted(values)


def parse_orders(text: str) -> List[int]:
    orders = sorted({int(x) for x in text.split(",") if x.strip()})
    if not orders or orders[0] < 1:
        raise ValueError(f"Orders must be positive integers, got {text!r}")
    return orders


def _output_path(out: str, config: ConfigManager) -> Path:
    path = Path(out).expanduser()
    if not path.is_absolute():
        path = Path(config.get("output.directory", ".")).expanduser() / path
    return path


def _emit_text(text: str, out: Optional[str], config: ConfigManager) -> None:
    if out:
        written = write_text_atomic(_output_path(out, config), text)
        logger.info(f"Output written: {written}")
    else:
        sys.stdout.write(text)


def _emit_report(report: RunReport, args: argparse.Namespace, config: ConfigManager) -> None:
    fmt = config.get("output.format", "csv")
    if args.out:
        write_report(report, _output_path(args.out, config), fmt)
    else:
        sys.stdout.write(render_report(report, fmt))


def _source(args: argparse.Namespace, config: ConfigManager) -> SequenceSource:
    return resolve_sequence(args.preset, args.spec, config.get("numeration.probe_depth"))


def _prefix_capacity(length: int, config: ConfigManager) -> None:
    capacity = config.get("measures.max_prefix")
    if length > capacity:
        raise CapacityExceeded(f"Requested {length} symbols, measures.max_prefix is {capacity}")


def cmd_numsys(args: argparse.Namespace, config: ConfigManager) -> int:
    """Print recurrence, values, language automaton, first words, checks or growth of a system."""
    numeration: NumerationPreset = resolve_system(args.preset, args.spec, config.get("numeration.probe_depth"))
    system = numeration.system
    rec = numeration.recurrence
    tolerance = config.get("beta.ratio_tolerance")
    status = EXIT_OK

    if args.emit == "values":
        text = " ".join(str(u) for u in system.values(args.count)) + "\n"

    elif args.emit == "recurrence":
        terms = " + ".join(
            f"{c}*U(n-{i})" for i, c in enumerate(rec.coefficients, start=1) if c
        ).replace("+ -", "- ")
        lines = [f"U(n) = {terms}", "initial: " + " ".join(str(u) for u in rec.initial_values)]
        if numeration.beta is not None:
            lines.append(f"d*(1): {numeration.beta}")
        try:
            root = dominant_root(rec, max(60, 2 * rec.order), tolerance)
            lines.append(f"beta: {root.beta:.12g}")
            lines.append(f"c: {root.c:.12g}")
        except NonConvergent as e:
            logger.warning(f"Dominant root did not converge: {e}")
            lines.append("beta: not converged")
        text = "\n".join(lines) + "\n"

    elif args.emit == "automaton":
        dfa = numeration.padded_dfa if args.padded and numeration.padded_dfa else numeration.language_dfa
        text = format_automaton(dfa)

    elif args.emit == "language":
        words = []
        for word in iter_language(numeration.language_dfa):
            if len(words) == args.count:
                break
            words.append(format_word(word))
        text = "\n".join(words) + "\n"

    elif args.emit == "growth":
        report = growth_report(rec, numeration.language_dfa, args.claimed, tolerance=tolerance)
        text = (
            f"u_growth: {report.u_growth:.12g}\n"
            f"language_growth: {report.language_growth:.12g}\n"
            f"claimed: {report.claimed}\n"
            f"disagreement: {str(report.disagreement).lower()}\n"
        )

    else:
        limit = config.get("numeration.enumeration_limit")
        max_words = config.get("numeration.max_words")
        lines = []
        language = check_language_equals_greedy(numeration.language_dfa, system, limit, max_words=max_words)
        lines.append(_check_line("language", language.ok, language.mismatch))
        ok = language.ok

        bertrand = is_bertrand_up_to(system, limit, max_words)
        lines.append(_check_line("bertrand", bertrand.ok, bertrand.counterexample))
        ok = ok and bertrand.ok

        if numeration.padded_dfa is not None:
            padded = check_language_equals_greedy(
                numeration.padded_dfa, system, limit, leading_zeros=True, max_words=max_words
            )
            lines.append(_check_line("padded_language", padded.ok, padded.mismatch))
            ok = ok and padded.ok
            broken = [
                n
                for n in range(limit + 1)
                if count_words_with_leading_zeros(system, n, "enumerate", max_words) != system.value(n)
                or count_accepted(numeration.padded_dfa, n) != system.value(n)
            ]
            lines.append(f"counting_law: {'ok' if not broken else 'mismatch at n=' + str(broken[0])}")
            ok = ok and not broken

        text = "\n".join(lines) + "\n"
        status = EXIT_OK if ok else EXIT_FAILED

    _emit_text(text, args.out, config)
    return status


def _check_line(name: str, ok: bool, word) -> str:
    return f"{name}: ok" if ok else f"{name}: mismatch {format_word(word)}"


def cmd_generate(args: argparse.Namespace, config: ConfigManager) -> int:
    """Write the first N symbols of a sequence as a prefix file."""
    source = _source(args, config)
    _prefix_capacity(args.length, config)
    if args.direct:
        prefix = source.automatic_prefix(args.length)
    else:
        prefix = source.prefix(args.length, config.get("morphic.max_letters"))

    if args.out:
        write_prefix(prefix, _output_path(args.out, config))
    else:
        sys.stdout.write(format_prefix(prefix))
    return EXIT_OK


def cmd_measure(args: argparse.Namespace, config: ConfigManager) -> int:
    """Correlation (and optionally well-distribution) rows over an N range."""
    source = _source(args, config)
    orders = parse_orders(args.orders)
    n_values = parse_n_range(args.n_range)
    n_max = n_values[-1]
    _prefix_capacity(n_max, config)

    budget = config.get("measures.budget")
    threads = config.get("measures.threads")
    samples = config.get("measures.samples")
    seed = config.get("measures.seed")

    timing: Dict[str, float] = {}
    started = time.perf_counter()
    prefix = source.prefix(n_max, config.get("morphic.max_letters"))
    timing["generate"] = time.perf_counter() - started

    if args.mode == "sampled":
        logger.warning(f"Sampled mode: values are lower bounds ({samples} samples, seed {seed})")

    report = RunReport(
        command="measure",
        spec_digest=source.digest,
        parameters={
            "sequence": source.name,
            "orders": orders,
            "n_values": n_values,
            "mode": args.mode,
            "samples": samples if args.mode == "sampled" else None,
            "seed": seed if args.mode == "sampled" else None,
            "well_distribution": args.well_distribution,
        },
    )

    started = time.perf_counter()
    for order in orders:
        candidates = [n for n in n_values if n >= order]
        if not candidates:
            logger.warning(f"No N in range is >= order {order}")
            continue
        profile = correlation_profile(prefix, candidates[-1], order, args.mode, budget, threads, samples, seed)
        for n in candidates:
            report.rows.append(
                correlation(prefix, n, order, args.mode, budget, threads, samples, seed, profile=profile)
            )
    if args.well_distribution:
        for n in n_values:
            report.rows.append(well_distribution(prefix, n, budget))
    timing["measure"] = time.perf_counter() - started
    report.timing = timing

    logger.info(f"Measured {len(report.rows)} rows for {source.name}")
    _emit_report(report, args, config)
    return EXIT_OK


def cmd_certify(args: argparse.Namespace, config: ConfigManager) -> int:
    """Collision witness, correlation certificate and its verification on a generated prefix."""
    source = _source(args, config)
    if args.order < 2 or args.order % 2:
        raise ValueError(f"--order must be an even integer >= 2, got {args.order}")
    half_order = args.order // 2
    system = source.numeration.system if source.is_automatic else None
    product_automaton = source.product()

    timing: Dict[str, float] = {}
    started = time.perf_counter()
    if args.words:
        words = [parse_word(w) for w in args.words.split(",")]
        witness = collision_from_words(product_automaton, system, words)
        if witness.half_order != half_order:
            raise ValueError(f"{len(words)} words give order {2 * witness.half_order}, not {args.order}")
    else:
        witness = find_collisions(product_automaton, system, half_order)

    if args.exponent is not None:
        exponent = args.exponent
    elif args.target_n is not None:
        exponent = block_exponent_for(witness, system, args.target_n)
    else:
        exponent = block_exponent_for(witness, system, config.get("measures.max_prefix"))
    certificate = build_certificate(witness, system, exponent)
    timing["witness"] = time.perf_counter() - started

    _prefix_capacity(certificate.implied_length, config)
    started = time.perf_counter()
    prefix = source.prefix(certificate.implied_length, config.get("morphic.max_letters"))
    timing["generate"] = time.perf_counter() - started

    report = RunReport(
        command="certify",
        spec_digest=source.digest,
        parameters={
            "sequence": source.name,
            "order": args.order,
            "words": args.words,
            "exponent": exponent,
            "check_up_to": args.check_up_to,
        },
    )
    report.certificates.append(certificate)

    started = time.perf_counter()
    status = EXIT_OK
    try:
        certificate = verify_certificate(prefix, certificate, system)
        report.certificates[0] = certificate
    except VerificationFailed as e:
        logger.error(f"Certificate verification failed at offset {e.index}: {e}")
        status = EXIT_FAILED

    if args.check_up_to and status == EXIT_OK:
        status = _check_certificate_bound(report, source, certificate, args.check_up_to, config)

    if args.growth is not None:
        for row in certificate_growth(witness, system, args.growth):
            report.notes.append(
                {
                    "M": row.exponent,
                    "U(M)": row.block_length,
                    "last_position": row.last_position,
                    "ratio": row.ratio,
                }
            )
    timing["verify"] = time.perf_counter() - started
    report.timing = timing

    _emit_report(report, args, config)
    return status


def _check_certificate_bound(
    report: RunReport, source: SequenceSource, certificate, n_max: int, config: ConfigManager
) -> int:
    """Exact C_2k(s,N) for N <= n_max against the certified bound."""
    _prefix_capacity(n_max, config)
    prefix = source.prefix(n_max, config.get("morphic.max_letters"))
    profile = correlation_profile(
        prefix,
        n_max,
        certificate.order,
        "exact",
        config.get("measures.budget"),
        config.get("measures.threads"),
    )
    status = EXIT_OK
    for n in range(certificate.order, n_max + 1):
        row = correlation(prefix, n, certificate.order, profile=profile)
        report.rows.append(row)
        if row.value < certificate.bound_for(n):
            logger.error(
                f"C_{certificate.order}(s,{n}) = {row.value} is below the certified {certificate.block_length}"
            )
            status = EXIT_FAILED
    return status


def cmd_crosscheck(args: argparse.Namespace, config: ConfigManager) -> int:
    """Morphic against automatic construction, and automaton against greedy language."""
    source = _source(args, config)
    if not source.is_automatic:
        raise SpecFileError("sequence", f"{source.name} has no automatic presentation to cross-check")

    _prefix_capacity(args.length, config)
    numeration = source.numeration
    limit = config.get("numeration.enumeration_limit")

    construction = cross_check_morphic_vs_automatic(
        source.product(),
        numeration.system,
        args.length,
        max_letters=config.get("morphic.max_letters"),
    )
    language = check_language_equals_greedy(
        numeration.language_dfa, numeration.system, limit, max_words=config.get("numeration.max_words")
    )

    lines = [
        f"construction: ok ({args.length} symbols)"
        if construction.ok
        else f"construction: mismatch ({construction.kind}) at index {construction.index}",
        f"language: ok (lengths <= {limit})"
        if language.ok
        else f"language: mismatch {format_word(language.mismatch)}",
    ]
    _emit_text("\n".join(lines) + "\n", args.out, config)
    return EXIT_OK if construction.ok and language.ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Path to configuration file (defaults built in)")
    common.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level",
    )
    common.add_argument("--threads", type=int, default=None, help="Worker threads for measures")
    common.add_argument("--budget", type=int, default=None, help="Step budget of exact measures")
    common.add_argument("--seed", type=int, default=None, help="Seed of sampled mode")
    common.add_argument("--out", default=None, help="Output file (default: stdout)")
    common.add_argument("--format", default=None, choices=["csv", "json"], help="Report format")

    source = argparse.ArgumentParser(add_help=False)
    group = source.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", help="Preset name")
    group.add_argument("--spec", help="YAML spec file")

    parser = argparse.ArgumentParser(prog="seqlab", description=f"seqlab v{__version__}")
    parser.add_argument("--version", action="version", version=f"seqlab {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    numsys = commands.add_parser("numsys", parents=[common, source], help="Numeration system artifacts")
    numsys.add_argument("--emit", choices=EMIT_CHOICES, default="values")
    numsys.add_argument("--count", type=int, default=10, help="Values or words to print")
    numsys.add_argument("--padded", action="store_true", help="Emit the automaton of 0*L (Parry systems)")
    numsys.add_argument("--claimed", type=float, default=None, help="Claimed growth for --emit growth")
    numsys.set_defaults(handler=cmd_numsys)

    generate = commands.add_parser("generate", parents=[common, source], help="Write a sequence prefix")
    generate.add_argument("-N", "--length", type=int, required=True)
    generate.add_argument("--direct", action="store_true", help="Run the DFAO on rep(n) instead of the morphism")
    generate.set_defaults(handler=cmd_generate)

    measure = commands.add_parser("measure", parents=[common, source], help="Correlation measures over N")
    measure.add_argument("--orders", default="2", help="Comma separated orders k")
    measure.add_argument("--n-range", required=True, help="'N', 'A..B' or 'A..B:step', comma separated")
    measure.add_argument("--mode", choices=list(MODES), default="exact")
    measure.add_argument("--well-distribution", action="store_true", help="Add W(s,N) rows")
    measure.set_defaults(handler=cmd_measure)

    certify = commands.add_parser("certify", parents=[common, source], help="Correlation certificate")
    certify.add_argument("--order", type=int, default=2, help="Even order 2k")
    size = certify.add_mutually_exclusive_group()
    size.add_argument("--M", dest="exponent", type=int, default=None, help="Block exponent M")
    size.add_argument("--target-N", dest="target_n", type=int, default=None, help="Largest M with p + U(M) <= N")
    certify.add_argument("--words", default=None, help="Comma separated collision words, e.g. 10,100")
    certify.add_argument("--check-up-to", type=int, default=None, help="Compare exact C_2k for N up to this")
    certify.add_argument("--growth", type=int, default=None, help="Tabulate U(M) up to this M")
    certify.set_defaults(handler=cmd_certify)

    crosscheck = commands.add_parser("crosscheck", parents=[common, source], help="Construction cross-checks")
    crosscheck.add_argument("-N", "--length", type=int, default=1000)
    crosscheck.set_defaults(handler=cmd_crosscheck)

    return parser


def load_config(args: argparse.Namespace) -> ConfigManager:
    """Configuration file (or defaults) with command-line flags applied."""
    config = ConfigManager(args.config)
    config.override("measures.threads", args.threads)
    config.override("measures.budget", args.budget)
    config.override("measures.seed", args.seed)
    config.override("output.format", args.format)
    return config


def run_command(handler: Callable[..., int], args: argparse.Namespace) -> int:
    """Run a subcommand and map exception families to exit codes."""
    try:
        config = load_config(args)
        return handler(args, config)
    except (BudgetExceeded, CapacityExceeded) as e:
        logger.error(f"Capacity exceeded: {e}")
        return EXIT_CAPACITY
    except (VerificationFailed, PigeonholeBoundExceeded) as e:
        logger.error(f"Verification failed: {e}")
        return EXIT_FAILED
    except (SpecFileError, ConfigValidationError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID
    except (SeqlabError, ValueError, FileNotFoundError, yaml.YAMLError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INVALID


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point for seqlab.

    Command-line arguments (every subcommand):
        --config: Path to configuration file
        --log-level: Logging level (DEBUG, INFO, WARNING, ERROR)
        --threads / --budget / --seed: Override measures.* settings
        --out / --format: Output file and report format
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s [%(name)s] [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    return run_command(args.handler, args)


if __name__ == "__main__":
    sys.exit(main())
