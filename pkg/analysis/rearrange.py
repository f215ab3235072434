"""
Discrete rearrangement classes.

On equal-measure cells a rearrangement of g0 is a permutation of its values, so
a class is stored as the multiset of generator values. The closure of the class
is represented by explicit finite convex mixtures of members.
"""

import re
from dataclasses import dataclass
from typing import Any, Iterator, List, Sequence, Tuple

import numpy as np

from analysis.grid import Grid
from core import Field
from utils.analysis import multiset_permutation_count

MEMBERSHIP_TOL = 1e-12
SIMPLEX_TOL = 1e-12
DEFAULT_ENUMERATION_CAP = 100_000

_PATTERN = re.compile(r"^\s*(binary|linear-ramp|constant)\s*\{([^}]*)\}\s*$")


def parse_generator_spec(spec: Any) -> Tuple[str, Tuple[float, ...]]:
    """Validate a generator description; return (kind, parameters)."""
    if isinstance(spec, (list, tuple)):
        values = [float(v) for v in spec]
        if not all(np.isfinite(v) and v >= 0 for v in values):
            raise ValueError("explicit generator values must be finite and nonnegative")
        if not any(v > 0 for v in values):
            raise ValueError("explicit generator must not vanish identically")
        return "explicit", tuple(values)

    if not isinstance(spec, str):
        raise ValueError(f"generator must be a list or a string, got {spec!r}")
    match = _PATTERN.match(spec)
    if match is None:
        raise ValueError(
            f"cannot parse generator '{spec}' (expected binary{{f}}, linear-ramp{{lo,hi}} or constant{{c}})"
        )
    kind = match.group(1)
    try:
        params = tuple(float(v) for v in match.group(2).split(","))
    except ValueError:
        raise ValueError(f"non-numeric parameter in generator '{spec}'") from None

    if kind == "binary":
        if len(params) != 1 or not 0 < params[0] <= 1:
            raise ValueError(f"binary{{f}} needs one fraction f in (0, 1], got {params}")
    elif kind == "linear-ramp":
        if len(params) != 2 or min(params) < 0 or max(params) <= 0:
            raise ValueError(f"linear-ramp{{lo,hi}} needs lo, hi >= 0, not both zero, got {params}")
    else:
        if len(params) != 1 or not params[0] > 0:
            raise ValueError(f"constant{{c}} needs c > 0, got {params}")
    return kind, params


def parse_generator(spec: Any, grid: Grid) -> Field:
    """Materialize a generator description on the grid."""
    kind, params = parse_generator_spec(spec)
    n = grid.n
    if kind == "explicit":
        return grid.check_field(params, "generator")
    if kind == "binary":
        count = int(round(params[0] * n))
        if count < 1:
            raise ValueError(f"binary{{{params[0]}}} selects no cell of {n}")
        g = np.zeros(n)
        g[:count] = 1.0
        return g
    if kind == "linear-ramp":
        return np.linspace(params[0], params[1], n)
    return np.full(n, params[0])


@dataclass(frozen=True)
class RearrangementClass:
    """All rearrangements of a nonnegative bounded generator."""

    generator: Field
    sorted_values: np.ndarray
    bound: float

    @classmethod
    def from_generator(cls, g0) -> "RearrangementClass":
        g0 = np.array(g0, dtype=float)
        if g0.ndim != 1 or len(g0) == 0:
            raise ValueError("generator must be a non-empty vector")
        if not np.all(np.isfinite(g0)) or np.any(g0 < 0):
            raise ValueError("generator values must be finite and nonnegative")
        if not np.any(g0 > 0):
            raise ValueError("generator must not vanish identically")
        sorted_values = np.sort(g0)[::-1].copy()
        g0.flags.writeable = False
        sorted_values.flags.writeable = False
        return cls(generator=g0, sorted_values=sorted_values, bound=float(sorted_values[0]))

    @property
    def n(self) -> int:
        return len(self.generator)

    def contains(self, g, tol: float = MEMBERSHIP_TOL) -> bool:
        g = np.asarray(g, dtype=float)
        if g.shape != self.generator.shape:
            return False
        return bool(np.all(np.abs(np.sort(g)[::-1] - self.sorted_values) <= tol))

    def random_member(self, rng: np.random.Generator) -> Field:
        return self.generator[rng.permutation(self.n)]

    def size(self) -> int:
        return multiset_permutation_count(self.sorted_values.tolist())


def class_from_spec(spec: Any, grid: Grid) -> RearrangementClass:
    return RearrangementClass.from_generator(parse_generator(spec, grid))


def maximize_linear(cls: RearrangementClass, w) -> Field:
    """Member maximizing sum g_i w_i: largest values onto largest w, ties by cell index."""
    w = np.asarray(w, dtype=float)
    if w.shape != (cls.n,) or not np.all(np.isfinite(w)):
        raise ValueError(f"direction must be a finite vector of length {cls.n}")
    order = np.argsort(-w, kind="stable")
    g = np.empty(cls.n)
    g[order] = cls.sorted_values
    return g


def linear_maximizer_is_unique(cls: RearrangementClass, w) -> bool:
    """True iff no tie group of w receives two different generator values."""
    w = np.asarray(w, dtype=float)
    g = maximize_linear(cls, w)
    order = np.argsort(-w, kind="stable")
    w_sorted, g_sorted = w[order], g[order]
    same_w = w_sorted[1:] == w_sorted[:-1]
    return bool(np.all(~same_w | (g_sorted[1:] == g_sorted[:-1])))


def is_comonotone(g, w, tol: float = 1e-9) -> bool:
    """g never decreases where w increases by more than tol."""
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    if g.shape != w.shape:
        raise ValueError(f"shape mismatch: {g.shape} vs {w.shape}")
    w_above = (w[:, None] - w[None, :]) > tol
    g_below = g[:, None] < g[None, :] - tol
    return not bool(np.any(w_above & g_below))


def distribution_function(grid: Grid, g, t: float) -> float:
    """Measure of the superlevel set {g > t}."""
    g = grid.check_field(g, "g")
    return float(np.count_nonzero(g > t) * grid.cell_measure)


def _multiset_permutations(values: List[float]) -> Iterator[Field]:
    """Distinct permutations in lexicographic order (next-permutation walk)."""
    current = sorted(values)
    n = len(current)
    while True:
        yield np.array(current)
        i = n - 2
        while i >= 0 and current[i] >= current[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while current[j] <= current[i]:
            j -= 1
        current[i], current[j] = current[j], current[i]
        current[i + 1 :] = reversed(current[i + 1 :])


def enumerate_class(cls: RearrangementClass, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Field]:
    """Every distinct member exactly once; rejects classes larger than cap."""
    count = cls.size()
    if count > cap:
        raise ValueError(f"class has {count} distinct members, more than the cap of {cap}")
    return _multiset_permutations(cls.sorted_values.tolist())


@dataclass(frozen=True)
class ClosureElement:
    """Finite convex combination of class members."""

    values: Field
    members: Tuple[Field, ...]
    weights: Tuple[float, ...]
    is_member: bool

    @property
    def is_strict(self) -> bool:
        return not self.is_member


def mixture(cls: RearrangementClass, members: Sequence, theta: Sequence[float]) -> ClosureElement:
    members = [np.asarray(m, dtype=float) for m in members]
    theta = np.asarray(theta, dtype=float)
    if len(members) == 0 or theta.shape != (len(members),):
        raise ValueError(f"need one weight per member, got {theta.shape} for {len(members)}")
    if np.any(theta < 0) or abs(theta.sum() - 1.0) > SIMPLEX_TOL:
        raise ValueError(f"theta must lie on the simplex, got {theta.tolist()}")
    for k, member in enumerate(members):
        if not cls.contains(member):
            raise ValueError(f"member {k} is not a rearrangement of the generator")

    values = np.sum(theta[:, None] * np.stack(members), axis=0)
    return ClosureElement(
        values=values,
        members=tuple(members),
        weights=tuple(float(t) for t in theta),
        is_member=cls.contains(values),
    )
