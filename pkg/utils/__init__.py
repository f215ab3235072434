"""Console verbosity shared by every module of a run, and the run helpers."""

from utils.setup import log_failure
from utils.timing import Timer

# Set once per run from output.verbose
_VERBOSE = False


def set_verbose(verbose: bool) -> None:
    global _VERBOSE
    _VERBOSE = bool(verbose)


def is_verbose() -> bool:
    return _VERBOSE


def vprint(*args, **kwargs) -> None:
    """Print progress lines only in verbose runs."""
    if _VERBOSE:
        print(*args, **kwargs, flush=True)


__all__ = [
    "Timer",
    "is_verbose",
    "log_failure",
    "set_verbose",
    "vprint",
]
