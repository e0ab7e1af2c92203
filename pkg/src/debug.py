import logging

from richcolorlog import setup_logging

LOGGER_NAME = "ergdiv"
LOG_FILE = "ergdiv.log"

PLAIN_FORMAT = "%(asctime)s | %(levelname)s | %(message)s"
VERBOSE_FORMAT = "%(asctime)s | %(name)s | %(levelname)s | %(funcName)s() | %(message)s | %(filename)s:%(lineno)d"

debug_enabled = False


def setup_logger(loglevel: str = "INFO", verbose: bool = False, logtofile: bool = False) -> logging.Logger:
    """(Re)configure the "ergdiv" logger; verbose forces DEBUG with call-site details"""
    logger = setup_logging(
        name=LOGGER_NAME,
        level="DEBUG" if verbose else loglevel.upper(),
        show_path=verbose,
        show_locals=False,
        show_icon=True,
        show_background=False,
        rich_tracebacks=True,
        omit_repeated_times=False,
        log_file=logtofile,
        log_file_name=LOG_FILE,
        format_template=VERBOSE_FORMAT if verbose else PLAIN_FORMAT,
    )
    logger.propagate = False
    return logger


def set_debug_status(config, loglevel: str = "INFO", logtofile: bool = False) -> logging.Logger:
    """Apply the run config's debug flag (or a DEBUG level) and return the configured logger"""
    global debug_enabled
    debug_enabled = bool(config.debug) or loglevel.lower() == "debug"

    logger = setup_logger(loglevel, debug_enabled, logtofile)
    if debug_enabled:
        logger.debug("Debug logging enabled")
    else:
        logger.log(logging.getLevelName(loglevel.upper()), f"Logging level set to: {loglevel}")
    return logger
