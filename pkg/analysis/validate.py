"""
Oracle and property checks on small built-in problems.

Every check returns a ``CheckResult`` (measured value, threshold, verdict). The
same oracles back the ``--validate`` cross-checks of the other commands.
"""

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from analysis.dirichlet import ReactionSpec, energy_E, linear_solve_oracle, solve_dirichlet
from analysis.eigen import p2_oracle, principal_eigen
from analysis.energy import seminorm_grad, seminorm_p
from analysis.grid import Grid, build_grid
from analysis.kernel import (
    KernelAssembly,
    KernelSpec,
    assemble,
    exterior_weight_oracle,
    pair_weight_oracle,
)
from analysis.optimize import bruteforce_optimum
from analysis.optimize_eigen import derivative_direction_eigen, minimize_eigenvalue
from analysis.optimize_energy import maximize_energy
from analysis.rearrange import RearrangementClass, class_from_spec, mixture
from core import (
    CheckResult,
    DirichletConfig,
    EigenConfig,
    Field,
    OptimizationTrace,
    OptimizerConfig,
)
from utils import vprint
from utils.analysis import relative_error

KERNEL_ORACLE_TOL = 1e-8
GRADIENT_TOL = 1e-6
EIGEN_ORACLE_TOL = 1e-8
HOMOGENEITY_TOL = 1e-9
FIELD_ORACLE_TOL = 1e-8
BRUTEFORCE_TOL = 1e-9
CONVEXITY_TOL = 1e-10
GATEAUX_TOL = 1e-5
MONOTONE_TOL = 1e-8


def _check(name: str, measured: float, threshold: float, passed: Optional[bool] = None) -> CheckResult:
    if passed is None:
        passed = bool(measured <= threshold)
    vprint(f"check {name}: measured={measured:.3e}, threshold={threshold:.1e}, passed={passed}")
    return CheckResult(check=name, measured=float(measured), threshold=float(threshold), passed=passed)


def unit_interval(n: int) -> Grid:
    return build_grid(1, [[0.0, 1.0]], [n])


# --- oracles ---------------------------------------------------------------------


def kernel_oracle_error(grid: Grid, assembly: KernelAssembly) -> float:
    """Largest relative deviation of W and kappa from the adaptive-quadrature oracles."""
    worst = 0.0
    for i in range(grid.n):
        worst = max(worst, relative_error(assembly.kappa[i], exterior_weight_oracle(grid, assembly.spec, i)))
        for j in range(i + 1, grid.n):
            oracle = pair_weight_oracle(grid, assembly.spec, i, j)
            worst = max(worst, relative_error(assembly.W[i, j], oracle))
    return worst


def gradient_fd_error(assembly: KernelAssembly, u: Field) -> float:
    """Sup-norm deviation of seminorm_grad from central differences, relative to its sup-norm."""
    grad = seminorm_grad(assembly, u)
    step = 1e-5 * np.max(np.abs(u))
    fd = np.empty_like(grad)
    for i in range(len(u)):
        e = np.zeros_like(u)
        e[i] = step
        fd[i] = (seminorm_p(assembly, u + e) - seminorm_p(assembly, u - e)) / (2.0 * step)
    return float(np.max(np.abs(fd - grad)) / np.max(np.abs(grad)))


def bruteforce_eigen(
    assembly: KernelAssembly,
    grid: Grid,
    cls: RearrangementClass,
    cap: int,
    options: Optional[EigenConfig] = None,
) -> Tuple[Field, float]:
    """Smallest principal eigenvalue over every member (dense oracle when p = 2)."""
    if assembly.p == 2:
        lam: Callable[[Field], float] = lambda g: p2_oracle(assembly, grid, g)
    else:
        lam = lambda g: principal_eigen(assembly, grid, g, options).lambda_
    g_best, neg_lambda = bruteforce_optimum(cls, lambda g: -lam(g), cap)
    return g_best, -neg_lambda


def bruteforce_energy(
    assembly: KernelAssembly,
    grid: Grid,
    cls: RearrangementClass,
    reaction: ReactionSpec,
    cap: int,
    options: Optional[DirichletConfig] = None,
) -> Tuple[Field, float]:
    """Largest maximal energy over every member (dense solve when p = 2 without reaction)."""
    if assembly.p == 2 and not np.any(reaction.c):
        phi: Callable[[Field], float] = lambda g: energy_E(
            assembly, grid, g, reaction, linear_solve_oracle(assembly, grid, g)
        )
    else:
        phi = lambda g: solve_dirichlet(assembly, grid, g, reaction, options).energy
    return bruteforce_optimum(cls, phi, cap)


def eigen_phi_p2(assembly: KernelAssembly, grid: Grid) -> Callable[[Field], float]:
    """phi(g) = 1 / lambda(g)^2 through the dense oracle (p = 2)."""
    return lambda g: 1.0 / p2_oracle(assembly, grid, g) ** 2


def energy_phi_p2(assembly: KernelAssembly, grid: Grid) -> Callable[[Field], float]:
    """phi(g) = max_u E(g, u) through the dense solve (p = 2, no reaction)."""
    reaction = ReactionSpec.zero(grid)
    return lambda g: energy_E(assembly, grid, g, reaction, linear_solve_oracle(assembly, grid, g))


def segment_convexity_defect(
    cls: RearrangementClass,
    phi: Callable[[Field], float],
    rng: np.random.Generator,
    segments: int,
    ts: Sequence[float] = (0.25, 0.5, 0.75),
) -> Tuple[float, float]:
    """(worst convexity violation, smallest midpoint gap) over random segments, relative to phi.

    The violation phi((1-t) g0 + t g1) - ((1-t) phi(g0) + t phi(g1)) is <= 0 for a
    convex phi; the midpoint gap is -violation at t = 1/2 and is > 0 when phi is
    strictly convex along the segment. Segments with g0 == g1 are skipped.
    """
    worst, smallest_gap = -np.inf, np.inf
    for _ in range(segments):
        g0, g1 = cls.random_member(rng), cls.random_member(rng)
        if np.array_equal(g0, g1):
            continue
        phi0, phi1 = phi(g0), phi(g1)
        scale = max(abs(phi0), abs(phi1))
        for t in ts:
            mid = mixture(cls, [g0, g1], [1.0 - t, t]).values
            violation = (phi(mid) - ((1.0 - t) * phi0 + t * phi1)) / scale
            worst = max(worst, violation)
            if t == 0.5:
                smallest_gap = min(smallest_gap, -violation)
    return float(worst), float(smallest_gap)


def gateaux_defect(
    phi: Callable[[Field], float],
    derivative: Callable[[Field], Field],
    grid: Grid,
    g: Field,
    h: Field,
    eps: float = 1e-4,
) -> float:
    """Deviation of sum((h - g) * derivative(g)) mu from a one-sided difference quotient.

    The quotient (4 phi(g + eps/2 d) - phi(g + eps d) - 3 phi(g)) / eps, d = h - g,
    is second-order accurate and stays inside the closure. The deviation is
    relative to sum(|d| |derivative(g)|) mu.
    """
    d = h - g
    field = derivative(g)
    formula = float(np.sum(d * field) * grid.cell_measure)
    quotient = (4.0 * phi(g + 0.5 * eps * d) - phi(g + eps * d) - 3.0 * phi(g)) / eps
    scale = float(np.sum(np.abs(d * field)) * grid.cell_measure)
    return abs(quotient - formula) / scale


# --- checks ----------------------------------------------------------------------


def check_kernel_oracle(n: int, p: float, s: float) -> CheckResult:
    grid = unit_interval(n)
    assembly = assemble(grid, KernelSpec(p=p, s=s))
    return _check(f"kernel_oracle_n{n}_p{p:g}_s{s:g}", kernel_oracle_error(grid, assembly), KERNEL_ORACLE_TOL)


def check_gradient(rng: np.random.Generator, n: int = 32, p: float = 3.0, s: float = 0.3, trials: int = 10) -> CheckResult:
    grid = unit_interval(n)
    assembly = assemble(grid, KernelSpec(p=p, s=s))
    worst = max(gradient_fd_error(assembly, rng.uniform(-1.0, 1.0, n)) for _ in range(trials))
    return _check(f"gradient_fd_p{p:g}", worst, GRADIENT_TOL)


def check_eigen_oracle(rng: np.random.Generator, n: int = 32) -> List[CheckResult]:
    grid = unit_interval(n)
    assembly = assemble(grid, KernelSpec(p=2.0, s=0.4))
    g = class_from_spec("binary{0.25}", grid).random_member(rng)
    result = principal_eigen(assembly, grid, g)
    scaled = principal_eigen(assembly, grid, 2.0 * g)
    return [
        _check("eigen_p2_oracle", relative_error(result.lambda_, p2_oracle(assembly, grid, g)), EIGEN_ORACLE_TOL),
        _check("eigen_homogeneity", relative_error(2.0 * scaled.lambda_, result.lambda_), HOMOGENEITY_TOL),
        _check("eigen_positivity", float(np.min(result.u)), 0.0, passed=bool(np.min(result.u) > 0)),
        _check("eigen_normalization", result.normalization_defect, 1e-10),
    ]


def check_dirichlet_oracle(rng: np.random.Generator, n: int = 32) -> List[CheckResult]:
    grid = unit_interval(n)
    assembly = assemble(grid, KernelSpec(p=2.0, s=0.4))
    g = class_from_spec("linear-ramp{0,1}", grid).random_member(rng)
    result = solve_dirichlet(assembly, grid, g, options=DirichletConfig(tol=1e-12))
    oracle = linear_solve_oracle(assembly, grid, g)
    return [
        _check("dirichlet_linear_oracle", float(np.max(np.abs(result.u - oracle))), FIELD_ORACLE_TOL),
        _check("dirichlet_positivity", float(np.min(result.u)), 0.0, passed=bool(np.min(result.u) > 0)),
    ]


def check_bruteforce(seed: int, n: int = 8) -> List[CheckResult]:
    grid = unit_interval(n)
    assembly = assemble(grid, KernelSpec(p=2.0, s=0.4))
    cls = class_from_spec("binary{0.5}", grid)
    options = OptimizerConfig(restarts=5, seed=seed)
    reaction = ReactionSpec.zero(grid)

    trace = minimize_eigenvalue(assembly, grid, cls, options)
    _, lam_min = bruteforce_eigen(assembly, grid, cls, cap=100)
    energy_trace = maximize_energy(assembly, grid, cls, reaction, options, DirichletConfig(tol=1e-12))
    _, phi_max = bruteforce_energy(assembly, grid, cls, reaction, cap=100)

    return [
        _check("eig_min_bruteforce", relative_error(trace.best.lambda_, lam_min), BRUTEFORCE_TOL),
        _check("eig_min_comonotone", float(not trace.comonotone), 0.0),
        _check("energy_max_bruteforce", relative_error(energy_trace.best.phi, phi_max), BRUTEFORCE_TOL),
        _check("energy_max_comonotone", float(not energy_trace.comonotone), 0.0),
    ]


def check_segment_convexity(rng: np.random.Generator, n: int = 8, segments: int = 50) -> List[CheckResult]:
    grid = unit_interval(n)
    assembly = assemble(grid, KernelSpec(p=2.0, s=0.4))
    cls = class_from_spec("linear-ramp{0,1}", grid)
    eigen_worst, _ = segment_convexity_defect(cls, eigen_phi_p2(assembly, grid), rng, segments)
    energy_worst, energy_gap = segment_convexity_defect(cls, energy_phi_p2(assembly, grid), rng, segments)
    return [
        _check("eigen_segment_convexity", eigen_worst, CONVEXITY_TOL),
        _check("energy_segment_convexity", energy_worst, CONVEXITY_TOL),
        _check("energy_strict_convexity", energy_gap, 0.0, passed=bool(energy_gap > 0)),
    ]


def check_gateaux(rng: np.random.Generator, n: int = 8, directions: int = 20) -> List[CheckResult]:
    grid = unit_interval(n)
    assembly = assemble(grid, KernelSpec(p=2.0, s=0.4))
    cls = class_from_spec("binary{0.5}", grid)

    def eigen_direction(g: Field) -> Field:
        return derivative_direction_eigen(principal_eigen(assembly, grid, g), assembly.p)

    def energy_direction(g: Field) -> Field:
        return linear_solve_oracle(assembly, grid, g)

    pairs = [(cls.random_member(rng), cls.random_member(rng)) for _ in range(directions)]
    pairs = [(g, h) for g, h in pairs if not np.array_equal(g, h)]
    eigen_phi, energy_phi = eigen_phi_p2(assembly, grid), energy_phi_p2(assembly, grid)
    eigen_worst = max(gateaux_defect(eigen_phi, eigen_direction, grid, g, h) for g, h in pairs)
    energy_worst = max(gateaux_defect(energy_phi, energy_direction, grid, g, h) for g, h in pairs)
    return [
        _check("eigen_gateaux_derivative", eigen_worst, GATEAUX_TOL),
        _check("energy_gateaux_derivative", energy_worst, GATEAUX_TOL),
    ]


def check_descent(seed: int, n: int = 32) -> List[CheckResult]:
    """Eigenvalue minimization decreases lambda monotonically and ends comonotone away from the boundary."""
    grid = unit_interval(n)
    assembly = assemble(grid, KernelSpec(p=2.0, s=0.4))
    cls = class_from_spec("binary{0.25}", grid)
    trace = minimize_eigenvalue(assembly, grid, cls, OptimizerConfig(restarts=2, seed=seed))
    lambdas = np.array([record.lambda_ for record in trace.iterations])
    rise = float(np.max(np.diff(lambdas), initial=0.0) / lambdas[0])
    boundary = int(np.count_nonzero(trace.best.g[grid.boundary_adjacent] > 0))
    return [
        _check("eig_min_monotone", rise, MONOTONE_TOL),
        _check("eig_min_fixed_point_comonotone", float(not trace.comonotone), 0.0),
        _check("eig_min_boundary_cells", float(boundary), 0.0),
    ]


def check_square(rng: np.random.Generator, m: int = 4) -> List[CheckResult]:
    """Eigen oracle and exterior weights on an m x m grid of the unit square."""
    grid = build_grid(2, [[0.0, 1.0], [0.0, 1.0]], [m, m])
    assembly = assemble(grid, KernelSpec(p=2.0, s=0.3))
    g = class_from_spec("binary{0.25}", grid).random_member(rng)
    result = principal_eigen(assembly, grid, g)
    row = np.asarray(assembly.kappa).reshape(m, m)[m // 2]
    half = (m + 1) // 2
    # kappa falls from each edge of the middle row towards its centre
    rise = max(float(np.max(np.diff(row[:half]))), float(np.max(np.diff(row[::-1][:half]))))
    return [
        _check("square_eigen_p2_oracle", relative_error(result.lambda_, p2_oracle(assembly, grid, g)), EIGEN_ORACLE_TOL),
        _check("square_kappa_mid_row", rise, 0.0, passed=bool(rise < 0)),
    ]


def run_validation_suite(seed: int = 0) -> List[CheckResult]:
    """All built-in checks; deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    checks = [check_kernel_oracle(n, p, s) for n in (2, 8, 32) for p, s in ((2.0, 0.4), (3.0, 0.3))]
    checks.append(check_gradient(rng))
    checks.extend(check_eigen_oracle(rng))
    checks.extend(check_dirichlet_oracle(rng))
    checks.extend(check_bruteforce(seed))
    checks.extend(check_segment_convexity(rng))
    checks.extend(check_gateaux(rng))
    checks.extend(check_descent(seed))
    checks.extend(check_square(rng))
    return checks


def trace_matches(trace: OptimizationTrace, optimum: float, minimize_lambda: bool) -> bool:
    value = trace.best.lambda_ if minimize_lambda else trace.best.phi
    return relative_error(value, optimum) <= BRUTEFORCE_TOL
