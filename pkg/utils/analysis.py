from collections import Counter
from math import factorial
from typing import Iterable, Union

import numpy as np


def signed_power(arr: np.ndarray, exponent: float) -> np.ndarray:
    """Return sign(t)|t|^exponent elementwise; zero where t is zero."""
    return np.sign(arr) * np.abs(arr) ** exponent


def positive_part(arr: np.ndarray) -> np.ndarray:
    """Cell-wise max(t, 0)."""
    return np.maximum(arr, 0.0)


def format_number(value: Union[float, int, str, None]) -> Union[str, int]:
    """Shortest round-trip decimal text for CSV output; ints and strings pass through."""
    if value is None:
        return ""
    if isinstance(value, (str, bool)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    return repr(float(value))


def multiset_permutation_count(values: Iterable[float]) -> int:
    """Number of distinct orderings of a multiset (multinomial coefficient)."""
    counts = Counter(values)
    total = factorial(sum(counts.values()))
    for count in counts.values():
        total //= factorial(count)
    return total


def unit_sphere_measure(dim: int) -> float:
    """Surface measure of the unit sphere in R^dim (2 points in 1D, 2*pi in 2D)."""
    if dim == 1:
        return 2.0
    if dim == 2:
        return 2.0 * np.pi
    raise ValueError(f"Unsupported dimension: {dim}")


def relative_error(value: float, reference: float) -> float:
    """|value - reference| / |reference| (absolute error when reference is zero)."""
    denom = abs(reference)
    return abs(value - reference) / denom if denom > 0 else abs(value - reference)
