"""
Principal eigenpair of the weighted nonlocal p-eigenproblem.

lambda(g) is the minimum over nonnegative u of seminorm_p(u) / sum(g |u|^p mu).
The minimizer is found by projected gradient descent: a step along the quotient
gradient, a cell-wise absolute value (which cannot raise the seminorm) and a
renormalization to unit weighted mass.
"""

from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from analysis.energy import energy_and_gradient, seminorm_p, weighted_mass, weighted_mass_grad
from analysis.grid import Grid
from analysis.kernel import KernelAssembly
from core import ConvergenceError, EigenConfig, EigenResult, Field
from utils import vprint

_MIN_STEP = 1e-20
_MAX_STEP = 1e12


def check_weight(grid: Grid, g) -> Field:
    g = grid.check_field(g, "g")
    if np.any(g < 0):
        raise ValueError("weight g must be nonnegative")
    if not np.any(g > 0):
        raise ValueError("weight g vanishes identically")
    return g


def rayleigh(assembly: KernelAssembly, grid: Grid, g: Field, u: Field) -> float:
    mass = weighted_mass(grid, g, u, assembly.p)
    if not mass > 0:
        raise ValueError("weighted mass is zero: u vanishes on the support of g")
    return seminorm_p(assembly, u) / mass


def euler_lagrange_residual(
    assembly: KernelAssembly, grid: Grid, g: Field, u: Field, lam: float
) -> float:
    """Sup-norm of grad seminorm_p(u) - lam * grad weighted_mass(u)."""
    _, grad = energy_and_gradient(assembly, u)
    return float(np.max(np.abs(grad - lam * weighted_mass_grad(grid, g, u, assembly.p))))


def eigen_functional(assembly: KernelAssembly, grid: Grid, g: Field, u: Field) -> float:
    """F(g, u) = 2 weighted_mass - seminorm_p^2; its supremum over u is 1 / lambda(g)^2."""
    return 2.0 * weighted_mass(grid, g, u, assembly.p) - seminorm_p(assembly, u) ** 2


def tilde_u(result: EigenResult, p: float) -> Field:
    return result.u * result.lambda_ ** (-2.0 / p)


def _normalize(grid: Grid, g: Field, v: Field, p: float) -> Optional[Field]:
    mass = weighted_mass(grid, g, v, p)
    if not (mass > 0 and np.isfinite(mass)):
        return None
    return v / mass ** (1.0 / p)


def _descend(
    assembly: KernelAssembly,
    grid: Grid,
    g: Field,
    u0: Field,
    options: EigenConfig,
    label: str,
) -> Tuple[Field, float, int, float]:
    """Projected descent from one start; returns (u, lambda, iterations, residual)."""
    p = assembly.p
    u = _normalize(grid, g, np.abs(u0), p)
    if u is None:
        raise ValueError(f"{label}: start field vanishes on the support of g")

    lam, grad_e = energy_and_gradient(assembly, u)
    grad = grad_e - lam * weighted_mass_grad(grid, g, u, p)
    residual = float(np.max(np.abs(grad)))
    step = options.initial_step
    decrease = np.inf

    for iteration in range(options.max_iters + 1):
        if residual <= options.residual_tol * lam and decrease <= options.tol:
            vprint(f"{label}: converged after {iteration} iterations, lambda={lam!r}")
            return u, lam, iteration, residual
        if iteration == options.max_iters:
            break

        # Backtracking on the projected, renormalized trial point
        gnorm2 = float(grad @ grad)
        slack = 4.0 * np.finfo(float).eps * abs(lam)
        t = step
        while True:
            trial = _normalize(grid, g, np.abs(u - t * grad), p)
            if trial is not None:
                lam_t, grad_e_t = energy_and_gradient(assembly, trial)
                if lam_t <= lam - options.armijo * t * gnorm2 + slack:
                    break
            t *= options.backtrack
            if t < _MIN_STEP:
                trial = None
                break

        if trial is None:
            # No representable decrease left: accept only if the residual is already met
            if residual <= options.residual_tol * lam:
                vprint(f"{label}: stalled at machine precision after {iteration} iterations")
                return u, lam, iteration, residual
            raise ConvergenceError(
                f"{label}: line search failed",
                {
                    "solver": "principal_eigen",
                    "iterations": iteration,
                    "residual": residual,
                    "objective": lam,
                },
            )

        new_grad = grad_e_t - lam_t * weighted_mass_grad(grid, g, trial, p)
        s_vec, y_vec = trial - u, new_grad - grad
        sy = float(s_vec @ y_vec)
        step = float(s_vec @ s_vec) / sy if sy > 0 else options.initial_step
        step = min(max(step, _MIN_STEP), _MAX_STEP)

        decrease = abs(lam - lam_t) / lam
        u, lam, grad = trial, lam_t, new_grad
        residual = float(np.max(np.abs(grad)))

        if options.log_every and (iteration + 1) % options.log_every == 0:
            vprint(f"{label}: iteration {iteration + 1}, lambda={lam:.12g}, residual={residual:.3e}")

    raise ConvergenceError(
        f"{label}: no convergence within {options.max_iters} iterations",
        {
            "solver": "principal_eigen",
            "iterations": options.max_iters,
            "residual": residual,
            "objective": lam,
            "relative_decrease": decrease,
        },
    )


def principal_eigen(
    assembly: KernelAssembly,
    grid: Grid,
    g: Field,
    options: Optional[EigenConfig] = None,
    initial: Optional[Field] = None,
) -> EigenResult:
    """Principal eigenvalue and its positive eigenfunction with sum(g u^p) mu = 1.

    Start 0 is ``initial`` if given, else the indicator of {g > 0}; further starts
    (``options.starts``) are seeded uniform random positive fields. The lowest
    eigenvalue is kept, ties going to the earliest start.
    """
    options = options or EigenConfig()
    g = check_weight(grid, g)

    if initial is not None:
        first = grid.check_field(initial, "initial")
        if weighted_mass(grid, g, first, assembly.p) <= 0:
            first = (g > 0).astype(float)
    else:
        first = (g > 0).astype(float)

    starts = [first]
    rng = np.random.default_rng(options.seed)
    for _ in range(1, options.starts):
        starts.append(rng.uniform(0.0, 1.0, size=grid.n))

    best = None
    lambdas = []
    for index, u0 in enumerate(starts):
        u, lam, iterations, residual = _descend(
            assembly, grid, g, u0, options, label=f"eigen start {index}"
        )
        lambdas.append(lam)
        if best is None or lam < best[1]:
            best = (u, lam, iterations, residual)

    u, lam, iterations, residual = best
    return EigenResult(
        lambda_=lam,
        u=u,
        iterations=iterations,
        residual=residual,
        normalization_defect=abs(weighted_mass(grid, g, u, assembly.p) - 1.0),
        start_lambdas=lambdas,
    )


def quadratic_form_matrix(assembly: KernelAssembly) -> np.ndarray:
    """A with seminorm_p(u) = u^T A u when p = 2: A = 2 (diag(row sums of W + kappa) - W)."""
    W = np.asarray(assembly.W)
    A = -2.0 * W
    A[np.diag_indices_from(A)] = 2.0 * (W.sum(axis=1) + assembly.kappa)
    return A


def p2_oracle(assembly: KernelAssembly, grid: Grid, g: Field) -> float:
    """Smallest generalized eigenvalue of (A, diag(g mu)), dense, for p = 2 only.

    Cells where g = 0 carry no mass; they are eliminated by a Schur complement
    so that the mass matrix on the remaining cells is definite.
    """
    if assembly.p != 2:
        raise ValueError(f"the dense oracle needs p = 2, got p = {assembly.p}")
    g = check_weight(grid, g)
    A = quadratic_form_matrix(assembly)

    support = g > 0
    A_ss = A[np.ix_(support, support)]
    if not support.all():
        zero = ~support
        A_sz = A[np.ix_(support, zero)]
        A_zz = A[np.ix_(zero, zero)]
        A_ss = A_ss - A_sz @ scipy.linalg.solve(A_zz, A_sz.T, assume_a="pos")
        A_ss = 0.5 * (A_ss + A_ss.T)

    M = np.diag(g[support] * grid.cell_measure)
    values = scipy.linalg.eigh(A_ss, M, eigvals_only=True, subset_by_index=[0, 0])
    return float(values[0])
