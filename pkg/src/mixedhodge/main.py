import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Final, get_args

import yaml
from pydantic import ValidationError

from .app import MixedHodgeApp
from .configuration import CommandName, load_run_config
from .errors import DocumentError, MixedHodgeError
from .scalars import Backend

logger = logging.getLogger(__name__)

EXIT_OK: Final = 0
EXIT_INPUT_ERROR: Final = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedhodge",
        description="Compute with mixed Hodge structures and verify extension-class identities.",
    )
    parser.add_argument("command", choices=get_args(CommandName))
    parser.add_argument(
        "--input",
        dest="inputs",
        action="append",
        type=Path,
        help="input document (JSON or YAML); repeat for sweeps over documents",
    )
    parser.add_argument("--backend", choices=[backend.value for backend in Backend])
    parser.add_argument("--tol-rank", dest="tol_rank", type=float, help="float rank tolerance")
    parser.add_argument("--tol-torus", dest="tol_torus", type=float, help="torus equality tolerance")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--out", type=Path, help="write the report here instead of standard output")
    parser.add_argument("--twist", type=int, help="Tate twist m for the twist command")
    parser.add_argument(
        "--class",
        dest="integral_class",
        type=lambda text: tuple(int(part) for part in text.split(",")),
        help="comma-separated integral class of B for taj",
    )
    parser.add_argument("--workers", type=int, help="process pool size for sweeps")
    parser.add_argument("--clearance", type=float, help="cycle pole clearance in lattice units")
    parser.add_argument("--tori", type=int, help="random tori drawn by curve-verify")
    parser.add_argument(
        "--divisors-per-torus",
        dest="divisors_per_torus",
        type=int,
        help="random divisors checked on each torus (defaults to --trials)",
    )
    parser.add_argument(
        "--max-rank",
        dest="max_rank",
        type=int,
        help="draw Hodge numbers per trial with rank(A) + rank(B) up to this bound",
    )
    return parser


def _configure_logging() -> None:
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def _write_report(report: dict[str, Any], out: Path | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    out.write_text(text, encoding="utf-8")
    logger.log(logging.INFO, "Report written to %s", out)


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    arguments = build_parser().parse_args(argv)
    try:
        config = load_run_config(vars(arguments))
        outcome = MixedHodgeApp().run(config)
        _write_report(outcome.report, config.out)
    except FileNotFoundError as error:
        logger.log(logging.ERROR, "Input file not found: %s", error.filename)
        return EXIT_INPUT_ERROR
    except ValidationError as error:
        logger.log(logging.ERROR, "Invalid input: %s", _format_error(error))
        return EXIT_INPUT_ERROR
    except yaml.YAMLError as error:
        logger.log(logging.ERROR, "Invalid JSON or YAML document%s", _yaml_location(error))
        return EXIT_INPUT_ERROR
    except DocumentError as error:
        logger.log(logging.ERROR, "Unusable document: %s", error)
        return EXIT_INPUT_ERROR
    except (MixedHodgeError, ValueError) as error:
        logger.log(logging.ERROR, "Cannot process input (%s): %s", type(error).__name__, error)
        return EXIT_INPUT_ERROR
    except OSError as error:
        logger.log(logging.ERROR, "File operation failed (%s)", type(error).__name__)
        return EXIT_INPUT_ERROR
    return outcome.status


def _format_error(error: ValidationError) -> str:
    messages = []
    for detail in error.errors():
        location = _format_location(detail["loc"])
        messages.append(f"{location}: {detail['msg']}")
    return "; ".join(messages)


def _format_location(location: tuple[str | int, ...]) -> str:
    return ".".join(str(part) for part in location) or "document"


def _yaml_location(error: yaml.YAMLError) -> str:
    if not isinstance(error, yaml.MarkedYAMLError) or error.problem_mark is None:
        return ""
    return (
        f" at line {error.problem_mark.line + 1}, "
        f"column {error.problem_mark.column + 1}"
    )


if __name__ == "__main__":
    raise SystemExit(main())
