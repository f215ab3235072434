import csv
import os
from typing import Dict, List, Optional, Tuple

import numpy as np

from utils import vprint

CACHE_MAGIC = b"KASM"


def read_assembly_cache(filepath: str, n: int) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Read (W, kappa) from a binary cache file; None if absent or inconsistent.

    Layout: magic ``KASM``, uint64 n, then W row-major and kappa, all little-endian.
    """
    if not os.path.isfile(filepath):
        return None
    with open(filepath, "rb") as f:
        payload = f.read()

    header = len(CACHE_MAGIC) + 8
    if len(payload) < header or payload[: len(CACHE_MAGIC)] != CACHE_MAGIC:
        vprint(f"Ignoring cache {filepath}: bad header")
        return None
    stored_n = int(np.frombuffer(payload, dtype="<u8", count=1, offset=len(CACHE_MAGIC))[0])
    if stored_n != n or len(payload) != header + 8 * (n * n + n):
        vprint(f"Ignoring cache {filepath}: expected {n} cells, found {stored_n}")
        return None

    data = np.frombuffer(payload, dtype="<f8", offset=header).astype(float)
    return data[: n * n].reshape(n, n), data[n * n :]


def read_csv_rows(filepath: str) -> List[Dict[str, str]]:
    """Read a CSV artifact into a list of header-keyed rows."""
    with open(filepath, "r", newline="", encoding="utf-8") as csvfile:
        return list(csv.DictReader(csvfile))


def read_field_csv(filepath: str) -> np.ndarray:
    """Values column of a field CSV, in cell order."""
    rows = read_csv_rows(filepath)
    rows.sort(key=lambda row: int(row["cell"]))
    return np.array([float(row["value"]) for row in rows])
