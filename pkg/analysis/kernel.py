"""
Admissible kernels and the cell-pair weights that define the discrete seminorm.

``W[i, j]`` integrates K over the product of cells i and j, ``kappa[i]`` integrates
K over cell i times the complement of the domain (the nonlocal Dirichlet
condition u = 0 outside). In 1D with the pure fractional kernel both are closed
forms; otherwise a dyadically graded tensor Gauss rule is used.
"""

import hashlib
import json
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg
from scipy import integrate
from scipy.special import roots_legendre

from analysis.grid import Grid
from core import KernelConfig, QuadratureError
from utils import vprint
from utils.analysis import unit_sphere_measure

Modulation = Callable[[np.ndarray, np.ndarray], np.ndarray]
Offset = Tuple[int, ...]

PURE = "pure_fractional"
MODULATED = "modulated"

# Exterior lattice cells farther than these (in cells, sup-norm) use cheaper rules
_NEAR_REACH = 4
_MID_REACH = 16
_CHUNK = 2048
_EXTRA_DEPTH_1D = 12
_EXTRA_DEPTH_2D = 1
_CLOSURE_ORDER = 12


@dataclass(frozen=True)
class KernelSpec:
    """K(x,y) = C|x-y|^-(N+ps) (pure) or m(x,y)|x-y|^-(N+ps) with C1 <= m <= C2."""

    p: float
    s: float
    family: str = PURE
    C: float = 1.0
    C1: float = 1.0
    C2: float = 1.0
    modulation: Optional[Modulation] = None
    modulation_name: str = ""

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"p must be > 1, got {self.p}")
        if not 0 < self.s < 1:
            raise ValueError(f"s must lie in (0, 1), got {self.s}")
        if self.family not in (PURE, MODULATED):
            raise ValueError(f"Unknown kernel family '{self.family}'")
        if not self.C > 0:
            raise ValueError(f"C must be > 0, got {self.C}")
        if not 0 < self.C1 <= self.C2:
            raise ValueError(f"Need 0 < C1 <= C2, got C1={self.C1}, C2={self.C2}")
        if self.family == MODULATED and self.modulation is None:
            raise ValueError("Modulated kernel needs a modulation callable")

    @property
    def ps(self) -> float:
        return self.p * self.s

    def exponent(self, dim: int) -> float:
        return dim + self.ps

    def factor(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """K(x,y)|x-y|^(N+ps) at points of shape (..., N)."""
        if self.family == PURE:
            return np.full(x.shape[:-1], self.C)
        return np.asarray(self.modulation(x, y), dtype=float)

    def values(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(x - y, axis=-1)
        return self.factor(x, y) * r ** (-self.exponent(x.shape[-1]))


def modulation_preset(name: str, C1: float, C2: float, frequency: float = 2.0) -> Modulation:
    """Shipped modulations: constant at either bound, or a smooth checkerboard."""
    if name == "lower":
        return lambda x, y: np.full(np.shape(x)[:-1], C1)
    if name == "upper":
        return lambda x, y: np.full(np.shape(x)[:-1], C2)
    if name == "checkerboard":

        def checkerboard(x: np.ndarray, y: np.ndarray) -> np.ndarray:
            mid = 0.5 * (x + y)
            wave = np.prod(np.sin(2.0 * np.pi * frequency * mid), axis=-1)
            return C1 + (C2 - C1) * 0.5 * (1.0 + wave)

        return checkerboard
    raise ValueError(f"Unknown modulation preset '{name}'")


def kernel_from_config(config: KernelConfig) -> KernelSpec:
    if config.family == PURE:
        return KernelSpec(p=config.p, s=config.s, family=PURE, C=config.C, C1=config.C, C2=config.C)
    return KernelSpec(
        p=config.p,
        s=config.s,
        family=MODULATED,
        C=config.C,
        C1=config.C1,
        C2=config.C2,
        modulation=modulation_preset(
            config.modulation, config.C1, config.C2, config.modulation_frequency
        ),
        modulation_name=f"{config.modulation}:{config.modulation_frequency!r}",
    )


def check_modulation(
    spec: KernelSpec, grid: Grid, samples: int = 256, seed: int = 0
) -> None:
    """Sample m for symmetry (K1) and the bounds (K2) over an enlarged box."""
    if spec.family == PURE:
        return
    rng = np.random.default_rng(seed)
    span = grid.upper - grid.lower
    lo, hi = grid.lower - span, grid.upper + span
    x = rng.uniform(lo, hi, size=(samples, grid.dim))
    y = rng.uniform(lo, hi, size=(samples, grid.dim))
    mxy, myx = spec.factor(x, y), spec.factor(y, x)
    slack = 1e-12 * spec.C2
    if np.max(np.abs(mxy - myx)) > slack:
        raise ValueError("Modulation is not symmetric: m(x,y) != m(y,x)")
    if np.min(mxy) < spec.C1 - slack or np.max(mxy) > spec.C2 + slack:
        raise ValueError(f"Modulation leaves [C1, C2] = [{spec.C1}, {spec.C2}]")


def eval_kernel(spec: KernelSpec, x, y) -> float:
    """K(x, y) at a single pair of distinct points."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"Points must be vectors of equal length, got {x.shape} and {y.shape}")
    if np.array_equal(x, y):
        raise ValueError("Kernel is singular at x = y")
    return float(spec.values(x[None, :], y[None, :])[0])


@dataclass(frozen=True)
class KernelAssembly:
    """Symmetric cell-pair weights W (zero diagonal) and exterior weights kappa."""

    grid: Grid
    spec: KernelSpec
    W: np.ndarray
    kappa: np.ndarray

    @property
    def p(self) -> float:
        return self.spec.p

    @property
    def n(self) -> int:
        return self.grid.n


# --- 1D closed form --------------------------------------------------------


def _unit_primitive(ps: float, t: np.ndarray) -> np.ndarray:
    """Second antiderivative of t^-(1+ps), without the constant C; zero at t = 0."""
    beta = 1.0 + ps
    return np.asarray(t, dtype=float) ** (2.0 - beta) / ((beta - 1.0) * (2.0 - beta))


def _assemble_closed_form_1d(grid: Grid, spec: KernelSpec) -> Tuple[np.ndarray, np.ndarray]:
    n, h = grid.n, grid.widths[0]

    def G(m):
        return _unit_primitive(spec.ps, np.asarray(m, dtype=float) * h)

    # Corner gaps of cells i < j = i + k: (k-1)h, kh, kh, (k+1)h
    k = np.arange(1, n)
    by_gap = G(k) + G(k) - G(k + 1) - G(k - 1)
    W = spec.C * scipy.linalg.toeplitz(np.concatenate([[0.0], by_gap]))

    i = np.arange(n)
    kappa = spec.C * ((G(i + 1) - G(i)) + (G(n - i) - G(n - i - 1)))
    return W, kappa


# --- graded tensor Gauss quadrature ------------------------------------------


@lru_cache(maxsize=None)
def _pair_rule(dim: int, order: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tensor Gauss nodes for a pair of unit boxes: nodes in A, nodes in B, weights."""
    nodes, weights = roots_legendre(order)
    nodes, weights = (nodes + 1.0) / 2.0, weights / 2.0
    box = np.stack(np.meshgrid(*([nodes] * dim), indexing="ij"), -1).reshape(-1, dim)
    box_w = np.prod(
        np.stack(np.meshgrid(*([weights] * dim), indexing="ij"), -1).reshape(-1, dim), axis=1
    )
    q = len(box)
    return np.repeat(box, q, axis=0), np.tile(box, (q, 1)), np.outer(box_w, box_w).ravel()


def _touching(lo_a: np.ndarray, lo_b: np.ndarray, size: float) -> bool:
    return bool(np.all(lo_a <= lo_b + size) and np.all(lo_b <= lo_a + size))


@dataclass(frozen=True)
class GradedRule:
    """Quadrature for a touching reference pair A = [0,1]^N, B = offset + [0,1]^N.

    Nodes cover every non-touching sub-pair produced by ``depth`` dyadic
    refinements; the touching sub-pairs left at the finest level are ``leaves``.
    """

    xa: np.ndarray
    xb: np.ndarray
    weights: np.ndarray
    leaf_a: np.ndarray
    leaf_b: np.ndarray
    leaf_size: float
    leaf_offsets: Tuple[Offset, ...]


@lru_cache(maxsize=None)
def graded_rule(offset: Offset, depth: int, order: int) -> GradedRule:
    dim = len(offset)
    qa, qb, qw = _pair_rule(dim, order)
    corners = np.array(list(product((0.0, 0.5), repeat=dim)))

    pending = [(np.zeros(dim), np.array(offset, dtype=float))]
    size = 1.0
    xa, xb, weights = [], [], []
    for _ in range(depth):
        half = size / 2.0
        refined = []
        for lo_a, lo_b in pending:
            for ca in corners:
                sub_a = lo_a + ca * size
                for cb in corners:
                    sub_b = lo_b + cb * size
                    if _touching(sub_a, sub_b, half):
                        refined.append((sub_a, sub_b))
                    else:
                        xa.append(sub_a + half * qa)
                        xb.append(sub_b + half * qb)
                        weights.append(half ** (2 * dim) * qw)
        pending, size = refined, half

    leaf_a = np.array([a for a, _ in pending])
    leaf_b = np.array([b for _, b in pending])
    leaf_offsets = tuple(
        tuple(int(v) for v in np.rint((b - a) / size)) for a, b in pending
    )
    return GradedRule(
        xa=np.concatenate(xa) if xa else np.zeros((0, dim)),
        xb=np.concatenate(xb) if xb else np.zeros((0, dim)),
        weights=np.concatenate(weights) if weights else np.zeros(0),
        leaf_a=leaf_a,
        leaf_b=leaf_b,
        leaf_size=size,
        leaf_offsets=leaf_offsets,
    )


def touching_offsets(dim: int) -> List[Offset]:
    return [o for o in product((-1, 0, 1), repeat=dim) if any(o)]


@lru_cache(maxsize=None)
def _touching_reference_integrals(
    widths: Tuple[float, ...], exponent: float
) -> Dict[Offset, float]:
    """Integrals of |x-y|^-exponent over touching cell pairs of the given shape.

    One refinement of a touching pair yields non-touching sub-pairs (high-order
    Gauss) and touching sub-pairs similar to the originals with ratio 1/2, whose
    integrals scale by 2^-(2N - exponent). Solving that linear system closes the
    recursion.
    """
    dim = len(widths)
    w = np.array(widths)
    mu2 = float(np.prod(w)) ** 2
    configs = touching_offsets(dim)
    index = {o: i for i, o in enumerate(configs)}
    sigma = 2.0 ** (-(2 * dim - exponent))

    transfer = np.zeros((len(configs), len(configs)))
    direct = np.zeros(len(configs))
    for o in configs:
        rule = graded_rule(o, 1, _CLOSURE_ORDER)
        r = np.linalg.norm((rule.xa - rule.xb) * w, axis=-1)
        direct[index[o]] = mu2 * np.sum(rule.weights * r ** (-exponent))
        for leaf in rule.leaf_offsets:
            transfer[index[o], index[leaf]] += 1.0

    integrals = np.linalg.solve(np.eye(len(configs)) - sigma * transfer, direct)
    return {o: float(integrals[index[o]]) for o in configs}


def _gauss_pair_values(
    spec: KernelSpec, lo_a: np.ndarray, lo_b: np.ndarray, widths: np.ndarray, order: int
) -> np.ndarray:
    """Integrals of K over cell pairs with lower corners lo_a[k], lo_b[k] (non-touching)."""
    dim = len(widths)
    qa, qb, qw = _pair_rule(dim, order)
    mu2 = float(np.prod(widths)) ** 2
    out = np.empty(len(lo_a))
    for start in range(0, len(lo_a), max(1, _CHUNK * 16 // len(qw))):
        stop = min(start + max(1, _CHUNK * 16 // len(qw)), len(lo_a))
        x = lo_a[start:stop, None, :] + widths * qa[None]
        y = lo_b[start:stop, None, :] + widths * qb[None]
        out[start:stop] = mu2 * np.sum(qw * spec.values(x, y), axis=1)
    return out


def _graded_pair_value(
    spec: KernelSpec,
    corner_a: np.ndarray,
    offset: Offset,
    widths: np.ndarray,
    depth: int,
    order: int,
) -> float:
    """Integral of a modulated K over a touching pair (A at corner_a, B = A + offset)."""
    dim = len(widths)
    exponent = spec.exponent(dim)
    rule = graded_rule(offset, depth, order)
    mu2 = float(np.prod(widths)) ** 2

    value = 0.0
    for start in range(0, len(rule.weights), _CHUNK * 64):
        stop = start + _CHUNK * 64
        x = corner_a + widths * rule.xa[start:stop]
        y = corner_a + widths * rule.xb[start:stop]
        value += mu2 * float(np.sum(rule.weights[start:stop] * spec.values(x, y)))

    # Finest touching sub-pairs: exact homogeneous integral, m frozen at the sub-cell centres
    reference = _touching_reference_integrals(tuple(widths), exponent)
    scale = rule.leaf_size ** (2 * dim - exponent)
    centre_a = corner_a + widths * (rule.leaf_a + rule.leaf_size / 2.0)
    centre_b = corner_a + widths * (rule.leaf_b + rule.leaf_size / 2.0)
    factors = spec.factor(centre_a, centre_b)
    value += scale * float(
        np.sum(factors * np.array([reference[o] for o in rule.leaf_offsets]))
    )
    return value


def _converged_pair_value(
    spec: KernelSpec,
    corner_a: np.ndarray,
    offset: Offset,
    widths: np.ndarray,
    depth: int,
    order: int,
    tol: float,
) -> float:
    """Graded value whose change from one grading level less is below tol (relative).

    Grading is deepened past ``depth`` while the check fails, up to a few levels
    (more in 1D, where a level costs a handful of nodes).
    """
    max_depth = depth + (_EXTRA_DEPTH_1D if len(widths) == 1 else _EXTRA_DEPTH_2D)
    coarse = _graded_pair_value(spec, corner_a, offset, widths, depth - 1, order)
    level = depth
    while True:
        value = _graded_pair_value(spec, corner_a, offset, widths, level, order)
        change = abs(value - coarse) / value
        if change <= tol:
            return value
        if level >= max_depth:
            raise QuadratureError(
                f"Graded quadrature for offset {offset} at {corner_a.tolist()} changed by "
                f"{change:.3e} between depth {level - 1} and {level}",
                {"offset": list(offset), "relative_change": change, "depth": level},
            )
        coarse, level = value, level + 1


def _lattice_offsets(grid: Grid, radius: float) -> np.ndarray:
    """Integer cell offsets (excluding 0) whose centre distance is at most radius."""
    widths = grid.widths
    reach = [int(math.ceil(radius / w)) for w in widths]
    axes = [np.arange(-r, r + 1) for r in reach]
    offsets = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, grid.dim)
    keep = np.linalg.norm(offsets * widths, axis=1) <= radius
    keep &= np.any(offsets != 0, axis=1)
    return offsets[keep]


def _outside(grid: Grid, cells: np.ndarray) -> np.ndarray:
    limits = np.array(grid.cells_per_axis)
    return np.any((cells < 0) | (cells >= limits), axis=-1)


def _canonical(offsets: np.ndarray) -> np.ndarray:
    """True for offsets whose first nonzero component is positive."""
    first = np.argmax(offsets != 0, axis=1)
    return offsets[np.arange(len(offsets)), first] > 0


def _tail(spec: KernelSpec, grid: Grid, radius: float, factors: np.ndarray) -> np.ndarray:
    """Analytic exterior contribution from |y - x| > radius."""
    ps = spec.ps
    return factors * grid.cell_measure * unit_sphere_measure(grid.dim) * radius ** (-ps) / ps


def _tail_factors(spec: KernelSpec, grid: Grid, radius: float) -> np.ndarray:
    if spec.family == PURE:
        return np.full(grid.n, spec.C)
    if grid.dim == 1:
        directions = np.array([[-1.0], [1.0]])
    else:
        angles = np.arange(16) * (2.0 * np.pi / 16)
        directions = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    x = np.repeat(grid.centers[:, None, :], len(directions), axis=1)
    y = x + radius * directions[None]
    return np.mean(spec.factor(x, y), axis=1)


def _assemble_pure_lattice(
    grid: Grid, spec: KernelSpec, order: int, radius: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Translation-invariant kernels: one value per lattice offset, mirrored for symmetry."""
    dim, widths = grid.dim, grid.widths
    exponent = spec.exponent(dim)
    offsets = _lattice_offsets(grid, radius)
    canonical = offsets[_canonical(offsets)]

    values = np.empty(len(canonical))
    near = np.max(np.abs(canonical), axis=1) <= 1
    reference = _touching_reference_integrals(tuple(widths), exponent)
    values[near] = [spec.C * reference[tuple(int(v) for v in o)] for o in canonical[near]]
    zeros = np.zeros((int((~near).sum()), dim))
    values[~near] = _gauss_pair_values(spec, zeros, canonical[~near] * widths, widths, order)

    reach = np.max(np.abs(offsets), axis=0)
    table = np.zeros(tuple(2 * reach + 1))
    table[tuple((canonical + reach).T)] = values
    table[tuple((-canonical + reach).T)] = values

    index = grid.multi_index
    diff = index[None, :, :] - index[:, None, :] + reach
    W = table[tuple(diff[..., k] for k in range(dim))]
    np.fill_diagonal(W, 0.0)

    all_values = table[tuple((offsets + reach).T)]
    kappa = np.empty(grid.n)
    for i in range(grid.n):
        outside = _outside(grid, index[i] + offsets)
        kappa[i] = np.sum(all_values[outside])
    kappa += _tail(spec, grid, radius, _tail_factors(spec, grid, radius))
    return W, kappa


def _assemble_modulated(
    grid: Grid,
    spec: KernelSpec,
    depth: int,
    order: int,
    radius: float,
    self_convergence_tol: float,
) -> Tuple[np.ndarray, np.ndarray]:
    dim, widths, n = grid.dim, grid.widths, grid.n
    index = grid.multi_index
    corners = grid.cell_lower_corners

    W = np.zeros((n, n))
    rows, cols = np.triu_indices(n, k=1)
    offsets = index[cols] - index[rows]
    touching = np.max(np.abs(offsets), axis=1) <= 1

    # Non-touching in-grid pairs
    far = ~touching
    W[rows[far], cols[far]] = _gauss_pair_values(
        spec, corners[rows[far]], corners[cols[far]], widths, order
    )

    for i, j, o in zip(rows[touching], cols[touching], offsets[touching]):
        W[i, j] = _converged_pair_value(
            spec, corners[i], tuple(int(v) for v in o), widths, depth, order, self_convergence_tol
        )
    W = W + W.T

    # Exterior lattice cells, with rules coarsening with distance
    lattice = _lattice_offsets(grid, radius)
    reach = np.max(np.abs(lattice), axis=1)
    qa_mid, qb_mid, qw_mid = _pair_rule(dim, 2)
    mu2 = grid.cell_measure**2
    kappa = np.zeros(n)
    for i in range(n):
        outside = _outside(grid, index[i] + lattice)
        ext = lattice[outside]
        ext_reach = reach[outside]

        total = 0.0
        for o in ext[ext_reach <= 1]:
            total += _converged_pair_value(
                spec, corners[i], tuple(int(v) for v in o), widths, depth, order, self_convergence_tol
            )

        near = ext[(ext_reach > 1) & (ext_reach <= _NEAR_REACH)]
        if len(near):
            lo_a = np.repeat(corners[i][None], len(near), axis=0)
            total += float(np.sum(_gauss_pair_values(spec, lo_a, corners[i] + near * widths, widths, order)))

        mid = ext[(ext_reach > _NEAR_REACH) & (ext_reach <= _MID_REACH)]
        if len(mid):
            x = corners[i] + widths * qa_mid[None]
            y = corners[i] + widths * (mid[:, None, :] + qb_mid[None])
            total += mu2 * float(np.sum(qw_mid * spec.values(np.broadcast_to(x, y.shape), y)))

        far_cells = ext[ext_reach > _MID_REACH]
        if len(far_cells):
            x = np.broadcast_to(grid.centers[i], (len(far_cells), dim))
            y = grid.centers[i] + far_cells * widths
            total += mu2 * float(np.sum(spec.values(x, y)))

        kappa[i] = total
    kappa += _tail(spec, grid, radius, _tail_factors(spec, grid, radius))
    return W, kappa


# --- public assembly ----------------------------------------------------------


def assembly_cache_key(
    grid: Grid, spec: KernelSpec, depth: int, order: int, truncation_factor: float
) -> Optional[str]:
    """Content hash of everything the assembly depends on; None for custom modulations."""
    if spec.family == MODULATED and not spec.modulation_name:
        return None
    content = {
        "bounds": [list(b) for b in grid.bounds],
        "cells_per_axis": list(grid.cells_per_axis),
        "p": spec.p,
        "s": spec.s,
        "family": spec.family,
        "C": spec.C,
        "C1": spec.C1,
        "C2": spec.C2,
        "modulation": spec.modulation_name,
        "depth": depth,
        "order": order,
        "truncation_factor": truncation_factor,
    }
    canonical = json.dumps(content, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def assemble(
    grid: Grid,
    spec: KernelSpec,
    depth: int = 6,
    order: int = 4,
    truncation_factor: float = 10.0,
    self_convergence_tol: float = 1e-6,
    cache_dir: Optional[str] = None,
) -> KernelAssembly:
    """Assemble W and kappa for the grid (requires ps < 1)."""
    if spec.ps >= 1:
        raise ValueError(
            f"ps = {spec.ps} >= 1: adjacent-cell energy diverges for cell-wise constant fields"
        )
    check_modulation(spec, grid)

    cache_path = None
    if cache_dir:
        key = assembly_cache_key(grid, spec, depth, order, truncation_factor)
        if key is not None:
            from utils.reader import read_assembly_cache

            cache_path = os.path.join(cache_dir, f"{key}.kasm")
            cached = read_assembly_cache(cache_path, grid.n)
            if cached is not None:
                vprint(f"Loaded kernel assembly from cache {cache_path}")
                return _finalize(grid, spec, *cached)

    radius = truncation_factor * grid.diameter
    if spec.family == PURE and grid.dim == 1:
        W, kappa = _assemble_closed_form_1d(grid, spec)
    elif spec.family == PURE:
        W, kappa = _assemble_pure_lattice(grid, spec, order, radius)
    else:
        W, kappa = _assemble_modulated(grid, spec, depth, order, radius, self_convergence_tol)

    vprint(
        f"Assembled kernel weights: n={grid.n}, family={spec.family}, "
        f"min kappa={kappa.min():.6g}, max W={W.max():.6g}"
    )

    if cache_path is not None:
        from utils.writer import write_assembly_cache

        os.makedirs(cache_dir, exist_ok=True)
        write_assembly_cache(cache_path, W, kappa)

    return _finalize(grid, spec, W, kappa)


def _finalize(grid: Grid, spec: KernelSpec, W: np.ndarray, kappa: np.ndarray) -> KernelAssembly:
    W = np.array(W, dtype=float)
    kappa = np.array(kappa, dtype=float)
    if np.any(kappa <= 0):
        raise QuadratureError("Exterior weights must be positive", {"min_kappa": float(kappa.min())})
    W.flags.writeable = False
    kappa.flags.writeable = False
    return KernelAssembly(grid=grid, spec=spec, W=W, kappa=kappa)


def assemble_from_config(grid: Grid, config: KernelConfig, cache_dir: Optional[str] = None) -> KernelAssembly:
    return assemble(
        grid,
        kernel_from_config(config),
        depth=config.quadrature_depth,
        order=config.quadrature_order,
        truncation_factor=config.truncation_factor,
        self_convergence_tol=config.self_convergence_tol,
        cache_dir=cache_dir,
    )


# --- 1D adaptive-quadrature oracles (pure kernel) -----------------------------


def _gap_integral(spec: KernelSpec, start: float, length: float, rising: bool) -> float:
    """C * integral over t in [start, start+length] of t^-beta * L(t),
    with L(t) = t - start (rising) or start + length - t (falling)."""
    beta = 1.0 + spec.ps
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=200)
    if start == 0.0 and rising:
        # t^-beta * t: algebraic end-point singularity t^(1-beta)
        value, _ = integrate.quad(lambda t: 1.0, 0.0, length, weight="alg", wvar=(1.0 - beta, 0.0), **opts)
    elif rising:
        value, _ = integrate.quad(lambda t: t ** (-beta) * (t - start), start, start + length, **opts)
    else:
        value, _ = integrate.quad(
            lambda t: t ** (-beta) * (start + length - t), start, start + length, **opts
        )
    return spec.C * value


def pair_weight_oracle(grid: Grid, spec: KernelSpec, i: int, j: int) -> float:
    """Independent adaptive quadrature of W[i, j] (1D, pure kernel)."""
    if grid.dim != 1 or spec.family != PURE:
        raise ValueError("Oracle is available for 1D pure fractional kernels only")
    i, j = min(i, j), max(i, j)
    if i == j:
        return 0.0
    h = grid.widths[0]
    gap = (j - i - 1) * h
    if gap > 0:
        beta = 1.0 + spec.ps
        a = grid.lower[0] + i * h
        c = grid.lower[0] + j * h
        value, _ = integrate.dblquad(
            lambda y, x: (y - x) ** (-beta),
            a,
            a + h,
            c,
            c + h,
            epsabs=0.0,
            epsrel=1e-12,
        )
        return spec.C * value
    # Touching cells: the gap t = y - x has a triangular density on [0, 2h]
    return _gap_integral(spec, 0.0, h, rising=True) + _gap_integral(spec, h, h, rising=False)


def exterior_weight_oracle(grid: Grid, spec: KernelSpec, i: int) -> float:
    """Independent adaptive quadrature of kappa[i] (1D, pure kernel)."""
    if grid.dim != 1 or spec.family != PURE:
        raise ValueError("Oracle is available for 1D pure fractional kernels only")
    h = grid.widths[0]
    beta = 1.0 + spec.ps
    total = 0.0
    # Distance from the cell to each exterior half-line
    for gap in (i * h, (grid.n - 1 - i) * h):
        total += _gap_integral(spec, gap, h, rising=True)
        far, _ = integrate.quad(lambda t: t ** (-beta), gap + h, np.inf, epsabs=0.0, epsrel=1e-13, limit=200)
        total += spec.C * h * far
    return total
