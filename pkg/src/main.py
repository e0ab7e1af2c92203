import json
import logging
import sys
from importlib import metadata
from pathlib import Path
from typing import Optional, Sequence

from rich.traceback import install

import debug
from data.run_config import DEFAULT_CONFIG, RunConfig, apply_args, load_run_config
from errors import ErgDivError
from report.commands import COMMANDS
from utils import args, get_file

install(show_locals=False)

SCRIPT_NAME = "erg-diversity"

try:
    SCRIPT_VERSION = metadata.version(SCRIPT_NAME)
except metadata.PackageNotFoundError:
    with open(Path(__file__).parent / ".." / "VERSION") as f:
        SCRIPT_VERSION = f.read().strip()

logger = logging.getLogger("ergdiv")


def _run_config(commandArgs) -> RunConfig:
    # Without --config and without config/config.json every setting keeps its default
    if commandArgs.config is None and not Path(get_file(DEFAULT_CONFIG)).is_file():
        logger.info(f"No {DEFAULT_CONFIG}; using built-in defaults")
        return apply_args(RunConfig(config_path=None), commandArgs)
    return apply_args(load_run_config(commandArgs.config), commandArgs)


def run(argv: Optional[Sequence[str]] = None) -> None:
    commandArgs = args(argv)

    # Logging from the command line first, so config loading is visible
    loglevel = commandArgs.loglevel or "INFO"
    debug.setup_logger(loglevel=loglevel, verbose=(loglevel.lower() == "debug"), logtofile=commandArgs.logtofile)

    config = _run_config(commandArgs)

    # If we pass the log level on the command line it overrides the config file
    debug.set_debug_status(config, loglevel=commandArgs.loglevel or config.loglevel,
                           logtofile=commandArgs.logtofile)

    logger.info(f"{SCRIPT_NAME} - v{SCRIPT_VERSION}: {commandArgs.command} (seed {config.seed})")

    written = COMMANDS[commandArgs.command](config, commandArgs)
    for path in written:
        logger.info(f"Wrote {path}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; errors become a single JSON line on stderr and a non-zero exit code"""
    try:
        run(argv)
    except ErgDivError as e:
        logger.debug(str(e))
        print(json.dumps(e.to_dict(), default=str), file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        logger.info(f"Exiting {SCRIPT_NAME}")
        return 130
    return 0


if __name__ == "__main__":
    sys.exit(main())
