import time
from typing import Dict, Optional


def get_time_as_string(time_s: float) -> str:
    """Convert time in seconds to a formatted string."""
    if time_s >= 3600:
        t_hr = int(time_s // 3600)
        t_min = (time_s - t_hr * 3600) / 60
        return f"{t_hr} hours, {t_min:.2f} minutes"
    if time_s >= 60:
        return f"{time_s / 60:.2f} minutes"
    return f"{time_s:.2f} seconds"


class Timer:
    """Phase timer for a run; writes elapsed times to a log file and the console.

    Timings are kept out of every CSV/JSON artifact so that those stay
    byte-identical between repeated runs.
    """

    def __init__(self, filepath: Optional[str] = None):
        self.filepath = filepath
        self.file = None
        self.start_time = None
        self.last_log_time = None
        self.end_time = None
        self.phases: Dict[str, float] = {}

    def start(self):
        """Start the timer and open the log file (if any)."""
        if self.filepath:
            self.file = open(self.filepath, "w", encoding="utf-8")
            self.file.write(self.filepath + "\n")
        self.start_time = time.perf_counter()
        self.last_log_time = self.start_time

    def _write(self, line: str) -> None:
        if self.file:
            self.file.write(f"{line}\n")

        # Local import: utils/__init__ imports this module
        from utils import vprint

        vprint(line)

    def _log_time_since(self, _time: float, message: str, record: bool) -> str:
        current_time = time.perf_counter()
        elapsed_time = current_time - _time
        elapsed_time_str = get_time_as_string(elapsed_time)

        log_message = f"{message}: {elapsed_time_str}" if message else elapsed_time_str
        self._write(log_message)
        self.last_log_time = current_time
        if record and message:
            self.phases[message] = self.phases.get(message, 0.0) + elapsed_time

        return log_message

    def log_phase(self, name: str) -> str:
        """Log the time spent in the phase that just finished."""
        return self._log_time_since(self.last_log_time, name, record=True)

    def log_time_since_start(self, message: str = "") -> str:
        """Log the time elapsed since the timer started."""
        return self._log_time_since(self.start_time, message, record=False)

    def log_breakdown(self) -> None:
        """Share of the logged phases in their total, slowest first."""
        total = sum(self.phases.values())
        if total <= 0:
            return
        for name, elapsed in sorted(self.phases.items(), key=lambda item: -item[1]):
            self._write(f"  {name}: {100.0 * elapsed / total:.1f}%")

    def stop(self):
        """Stop the timer and close the log file."""
        self.end_time = time.perf_counter()
        if self.file:
            self.file.close()
            self.file = None
