import os
from typing import Tuple

FAILURE_FILE = "failures.txt"
TIME_FILE = "time.txt"


def create_output_directory(output_dir: str) -> str:
    """Create the run output directory if needed."""
    if not os.path.exists(output_dir):
        os.makedirs(output_dir)
    return output_dir


def setup_paths(output_dir: str) -> Tuple[str, str]:
    """Create the output directory and an empty failure file; return (failure, time) paths."""
    create_output_directory(output_dir)
    ff_filepath = os.path.join(output_dir, FAILURE_FILE)
    time_filepath = os.path.join(output_dir, TIME_FILE)

    open(ff_filepath, "w").close()

    return ff_filepath, time_filepath


def log_failure(ff_loc: str, message: str) -> None:
    """Append one non-fatal failure to the failure file."""
    with open(ff_loc, "a", encoding="utf-8") as log_file:
        log_file.write(message.rstrip("\n") + "\n")


def remove_empty_failure_file(ff_loc: str) -> None:
    if os.path.exists(ff_loc) and os.stat(ff_loc).st_size == 0:
        os.remove(ff_loc)
