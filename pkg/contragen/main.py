"""
Main entry point for contragen.
"""
import argparse
import json
import os
import sys
from typing import List, Optional

from .config.settings import settings
from .contracts.extractor import extract_program
from .contracts.patterns import PatternTableError, load_patterns
from .emit.exporter import SuiteExporter
from .harness.experiment import (
    CONTRACT_MODE,
    COVERAGE_MODE,
    contract_budget,
    run_contract_generation,
    run_coverage_generation,
    run_experiment,
)
from .harness.report import render_report, write_report
from .lang.errors import SubjectError
from .lang.parser import parse_file
from .search.config import GENERATIONS, SECONDS, ConfigError, SearchConfig
from .search.progress import ProgressLog
from .utils.logger import Logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CORPUS = 2
EXIT_FAULT = 3


class CorpusError(Exception):
    """A subject file or corpus could not be read or parsed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_args(argv: Optional[List[str]] = None):
    """
    Parse command line arguments.

    Returns:
        Parsed arguments
    """
    parser = _Parser(description="contragen - contract-guided search-based test generation")
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    generate_parser = subparsers.add_parser("generate", help="Generate tests for one subject file")
    generate_parser.add_argument("file", help="Subject source file (.sub)")
    generate_parser.add_argument("--mode", choices=[CONTRACT_MODE, COVERAGE_MODE], default=CONTRACT_MODE,
                                 help="Contract-guided search or the coverage baseline")
    generate_parser.add_argument("--seed", type=int, help="Random seed (default: CONTRAGEN_SEED or settings)")
    budget = generate_parser.add_mutually_exclusive_group()
    budget.add_argument("--budget-generations", type=int, help="Fixed generation budget per batch")
    budget.add_argument("--budget-seconds", type=float, help="Fixed wall-clock budget per batch")
    generate_parser.add_argument("--batch-size", type=int, help="Objectives per batch")
    generate_parser.add_argument("--population", type=int, help="Population size")
    generate_parser.add_argument("--workers", type=int, help="Evaluation worker threads")
    generate_parser.add_argument("--assume-oracles", action="store_true", help="Render assume lines in tests")
    generate_parser.add_argument("--out", help="Output directory for emitted tests")
    generate_parser.add_argument("--progress-log", help="Write one JSON line per generation to this file")
    generate_parser.add_argument("--patterns", help="Pattern table file")
    generate_parser.add_argument("--no-color", action="store_true", help="Disable colored output")
    generate_parser.add_argument("--verbose", action="store_true", help="Show debug messages")

    experiment_parser = subparsers.add_parser("experiment", help="Compare both generators over a corpus")
    experiment_parser.add_argument("corpus", nargs="?", help="Corpus directory (default: bundled corpus)")
    experiment_parser.add_argument("--reps", type=int, help="Repetitions per program")
    experiment_parser.add_argument("--seed", type=int, help="Base seed")
    experiment_parser.add_argument("--report", help="Report directory")
    experiment_parser.add_argument("--emit", help="Write the first repetition's suites here")
    experiment_parser.add_argument("--budget-generations", type=int, help="Fixed generation budget per batch")
    experiment_parser.add_argument("--workers", type=int, help="Evaluation worker threads")
    experiment_parser.add_argument("--no-color", action="store_true", help="Disable colored output")
    experiment_parser.add_argument("--verbose", action="store_true", help="Show debug messages")

    extract_parser = subparsers.add_parser("extract", help="Print the contracts of a subject file as JSON")
    extract_parser.add_argument("file", help="Subject source file (.sub)")
    extract_parser.add_argument("--patterns", help="Pattern table file")

    config_parser = subparsers.add_parser("config", help="View or update configuration")
    config_parser.add_argument("--view", action="store_true", help="View current configuration")
    config_parser.add_argument("--set", nargs=2, metavar=("KEY", "VALUE"), help="Set a configuration value")
    config_parser.add_argument("--reset", action="store_true", help="Reset configuration to defaults")

    return parser.parse_args(argv)


def make_logger(args) -> Logger:
    section = dict(settings["logging"])
    if getattr(args, "no_color", False):
        section["use_colors"] = False
    if getattr(args, "verbose", False):
        section["verbose"] = True
    return Logger.from_settings(section)


def search_config(args) -> SearchConfig:
    """
    Build the run configuration from settings, then CLI flags.
    """
    config = SearchConfig.from_settings(settings)
    budget_seconds = getattr(args, "budget_seconds", None)
    budget_generations = getattr(args, "budget_generations", None)
    if budget_seconds is not None:
        config = config.replace(budget_mode=SECONDS, fixed_budget=budget_seconds)
    elif budget_generations is not None:
        config = config.replace(budget_mode=GENERATIONS, fixed_budget=budget_generations)
    return config.replace(
        seed=getattr(args, "seed", None),
        batch_size=getattr(args, "batch_size", None),
        population_size=getattr(args, "population", None),
        workers=getattr(args, "workers", None),
        progress_log=getattr(args, "progress_log", None),
    )


def load_subject(path: str, patterns: Optional[str] = None, logger: Optional[Logger] = None):
    """
    Parse a subject file and extract its contracts.

    Raises:
        CorpusError: If the file cannot be read, parsed or translated
    """
    try:
        program = parse_file(path)
        rules = load_patterns(patterns) if patterns else None
    except (OSError, SubjectError, PatternTableError) as e:
        raise CorpusError(str(e)) from e
    return program, extract_program(program, rules, logger)


def generate_command(args) -> int:
    """
    Run one generator on one subject file and write its output.
    """
    logger = make_logger(args)
    config = search_config(args)
    program, extraction = load_subject(args.file, args.patterns, logger)
    name = os.path.splitext(os.path.basename(args.file))[0]
    out_dir = args.out or settings.get("emit.output_dir", "generated")
    assume = args.assume_oracles or settings.get("emit.assume_oracles", False)
    progress = ProgressLog(config.progress_log) if config.progress_log else None

    logger.system_message(f"Generating {args.mode}-mode tests for {args.file} (seed {config.seed})")
    logger.log_dict(config.to_dict(), "Search configuration")
    try:
        if args.mode == CONTRACT_MODE:
            run = run_contract_generation(program, extraction, config, config.seed, assume, logger, progress)
            if run.emitted:
                SuiteExporter(out_dir, logger).export_by_unit(run.emitted)
            alarms = sum(1 for alarm in run.alarms.values() if alarm)
            logger.success(
                f"Hit {sum(run.hits.values())}/{len(run.hits)} postconditions, "
                f"{alarms} alarms, {run.tests} tests written to {out_dir}"
            )
        else:
            budget = contract_budget(extraction, config) or None
            run = run_coverage_generation(program, extraction, config, config.seed, budget, logger, progress)
            os.makedirs(out_dir, exist_ok=True)
            path = os.path.join(out_dir, f"{name}-coverage.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump(run.suite.to_dict(), f, indent=2, sort_keys=True)
                f.write("\n")
            logger.success(f"{run.tests} coverage tests, oracle matrix written to {path}")
    finally:
        if progress:
            progress.close()
    return EXIT_OK


def experiment_command(args) -> int:
    """
    Run the two-generator comparison over a corpus and write the report.
    """
    logger = make_logger(args)
    config = search_config(args)
    corpus = args.corpus or settings.get("harness.corpus_dir")
    if not os.path.isdir(corpus):
        raise CorpusError(f"Corpus directory not found: {corpus}")
    reps = args.reps if args.reps is not None else settings.get("harness.repetitions", 10)
    if reps < 1:
        logger.error("--reps must be at least 1")
        return EXIT_USAGE
    report_dir = args.report or settings.get("harness.report_dir", "reports")

    logger.system_message(f"Running experiment on {corpus}: R={reps}, base seed {config.seed}")
    report = run_experiment(corpus, config, reps, args.emit, settings.get("emit.assume_oracles", False), logger)
    write_report(report, report_dir, logger)
    print(render_report(report), end="")
    if report.failures and not report.programs:
        return EXIT_CORPUS
    return EXIT_OK


def extract_command(args) -> int:
    """Print contracts and skip records as JSON."""
    _, extraction = load_subject(args.file, args.patterns)
    print(json.dumps(extraction.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def config_command(args) -> int:
    """
    View or update configuration.
    """
    if args.set:
        key, value = args.set
        try:
            value = int(value)
        except ValueError:
            try:
                value = float(value)
            except ValueError:
                if value.lower() in ["true", "yes"]:
                    value = True
                elif value.lower() in ["false", "no"]:
                    value = False
                elif value.lower() in ["null", "none"]:
                    value = None
        settings.set(key, value)
        settings.save()
        print(f"Configuration updated: {key} = {value}")
    elif args.reset:
        if os.path.exists(settings.config_path):
            os.remove(settings.config_path)
        settings.reset()
        print("Configuration reset to defaults.")
    else:
        print(json.dumps(settings.config, indent=2, sort_keys=True))
    return EXIT_OK


COMMANDS = {
    "generate": generate_command,
    "experiment": experiment_command,
    "extract": extract_command,
    "config": config_command,
}


def run(argv: Optional[List[str]] = None) -> int:
    """
    Execute a command and return its exit code.
    """
    args = parse_args(argv)
    handler = COMMANDS.get(args.command)
    if handler is None:
        print("Please specify a command. Use --help for more information.", file=sys.stderr)
        return EXIT_USAGE
    try:
        return handler(args)
    except CorpusError as e:
        Logger(use_colors=False).error(str(e))
        return EXIT_CORPUS
    except ConfigError as e:
        Logger(use_colors=False).error(f"Invalid configuration: {e}")
        return EXIT_USAGE
    except Exception as e:  # noqa: BLE001
        Logger(use_colors=False).error(f"Internal fault: {type(e).__name__}: {e}")
        return EXIT_FAULT


def main():
    """Main entry point for the application."""
    sys.exit(run())


if __name__ == "__main__":
    main()
