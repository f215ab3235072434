"""
Nonlinear nonlocal Dirichlet problem L_K u + h(x, u) = g with u = 0 outside the domain.

The solution is the unique maximizer of the concave energy
E(g, u) = sum(g u - H(x, u)) mu - seminorm_p(u) / p, found by minimizing
J = -E with Barzilai-Borwein steps under an Armijo safeguard.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from analysis.eigen import quadratic_form_matrix
from analysis.energy import energy_and_gradient, seminorm_p
from analysis.grid import Grid
from analysis.kernel import KernelAssembly
from core import ConvergenceError, DirichletConfig, Field, ReactionConfig, SolveResult
from utils import vprint
from utils.analysis import positive_part

_MIN_STEP = 1e-20
_MAX_STEP = 1e12


@dataclass(frozen=True)
class ReactionSpec:
    """h(x, t) = c(x) max(t, 0)^(q-1), with primitive H(x, t) = c(x) max(t, 0)^q / q."""

    c: Field
    q: float

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 1 or not np.all(np.isfinite(c)) or np.any(c < 0):
            raise ValueError("reaction coefficient c must be a finite nonnegative field")
        if not self.q > 1:
            raise ValueError(f"reaction exponent q must be > 1, got {self.q}")
        c.flags.writeable = False
        object.__setattr__(self, "c", c)

    @classmethod
    def zero(cls, grid: Grid, q: Optional[float] = None, p: float = 2.0) -> "ReactionSpec":
        """The admissible zero reaction; q defaults below p."""
        return cls(c=np.zeros(grid.n), q=default_reaction_exponent(p) if q is None else q)

    @property
    def bound(self) -> float:
        """C0 in 0 <= h(x, t) <= C0 (1 + |t|^(q-1))."""
        return float(np.max(self.c)) if len(self.c) else 0.0

    def h(self, u: Field) -> Field:
        return self.c * positive_part(u) ** (self.q - 1.0)

    def H(self, u: Field) -> Field:
        return self.c * positive_part(u) ** self.q / self.q


def default_reaction_exponent(p: float) -> float:
    return min(1.5, 0.5 * (1.0 + p))


def reaction_from_config(
    config: Optional[ReactionConfig], grid: Grid, p: float = 2.0
) -> ReactionSpec:
    if config is None:
        return ReactionSpec.zero(grid, p=p)
    c = np.asarray(config.c, dtype=float)
    if c.ndim == 0:
        c = np.full(grid.n, float(c))
    return ReactionSpec(c=grid.check_field(c, "reaction.c"), q=config.q)


def _check_inputs(assembly: KernelAssembly, grid: Grid, g, reaction: ReactionSpec) -> Field:
    g = grid.check_field(g, "g")
    if np.any(g < 0):
        raise ValueError("datum g must be nonnegative")
    if reaction.c.shape != (grid.n,):
        raise ValueError(f"reaction.c has shape {reaction.c.shape}, grid has {grid.n} cells")
    if np.any(reaction.c) and not reaction.q < assembly.p:
        raise ValueError(f"reaction exponent q = {reaction.q} must be < p = {assembly.p}")
    return g


def energy_E(
    assembly: KernelAssembly, grid: Grid, g: Field, reaction: ReactionSpec, u: Field
) -> float:
    u = grid.check_field(u, "u")
    g = grid.check_field(g, "g")
    local = np.sum(g * u - reaction.H(u)) * grid.cell_measure
    return float(local - seminorm_p(assembly, u) / assembly.p)


def objective_and_gradient(
    assembly: KernelAssembly, grid: Grid, g: Field, reaction: ReactionSpec, u: Field
) -> Tuple[float, Field]:
    """J(u) = -E(g, u) and its gradient."""
    energy, grad = energy_and_gradient(assembly, u)
    mu, p = grid.cell_measure, assembly.p
    J = energy / p + np.sum(reaction.H(u) - g * u) * mu
    return float(J), grad / p + (reaction.h(u) - g) * mu


def weak_solution_defect(
    assembly: KernelAssembly, grid: Grid, g: Field, reaction: ReactionSpec, u: Field
) -> Field:
    """<L_K u, e_i> + h(x_i, u_i) mu - g_i mu for every cell i."""
    return objective_and_gradient(assembly, grid, g, reaction, u)[1]


def solve_dirichlet(
    assembly: KernelAssembly,
    grid: Grid,
    g: Field,
    reaction: Optional[ReactionSpec] = None,
    options: Optional[DirichletConfig] = None,
    initial: Optional[Field] = None,
) -> SolveResult:
    options = options or DirichletConfig()
    reaction = reaction or ReactionSpec.zero(grid, p=assembly.p)
    g = _check_inputs(assembly, grid, g, reaction)
    u = np.zeros(grid.n) if initial is None else grid.check_field(initial, "initial").copy()

    J, grad = objective_and_gradient(assembly, grid, g, reaction, u)
    residual = float(np.max(np.abs(grad)))
    step = options.initial_step

    for iteration in range(options.max_iters + 1):
        if residual <= options.tol:
            vprint(f"dirichlet: converged after {iteration} iterations, J={J!r}")
            return SolveResult(
                u=u,
                energy=-J,
                residual=residual,
                iterations=iteration,
                compliance=float(np.sum(g * u) * grid.cell_measure),
            )
        if iteration == options.max_iters:
            break

        gnorm2 = float(grad @ grad)
        slack = 4.0 * np.finfo(float).eps * max(abs(J), 1.0)
        t = step
        while True:
            trial = u - t * grad
            J_t, grad_t = objective_and_gradient(assembly, grid, g, reaction, trial)
            if J_t <= J - options.armijo * t * gnorm2 + slack:
                break
            t *= options.backtrack
            if t < _MIN_STEP:
                raise ConvergenceError(
                    "dirichlet: line search failed",
                    {
                        "solver": "solve_dirichlet",
                        "iterations": iteration,
                        "residual": residual,
                        "objective": J,
                    },
                )

        s_vec, y_vec = trial - u, grad_t - grad
        sy = float(s_vec @ y_vec)
        step = float(s_vec @ s_vec) / sy if sy > 0 else options.initial_step
        step = min(max(step, _MIN_STEP), _MAX_STEP)

        u, J, grad = trial, J_t, grad_t
        residual = float(np.max(np.abs(grad)))

        if options.log_every and (iteration + 1) % options.log_every == 0:
            vprint(f"dirichlet: iteration {iteration + 1}, J={J:.12g}, residual={residual:.3e}")

    raise ConvergenceError(
        f"dirichlet: no convergence within {options.max_iters} iterations",
        {
            "solver": "solve_dirichlet",
            "iterations": options.max_iters,
            "residual": residual,
            "objective": J,
        },
    )


def linear_solve_oracle(assembly: KernelAssembly, grid: Grid, g: Field) -> Field:
    """Dense solution of A u = mu g: the maximizer for p = 2 without reaction."""
    if assembly.p != 2:
        raise ValueError(f"the dense oracle needs p = 2, got p = {assembly.p}")
    g = grid.check_field(g, "g")
    A = quadratic_form_matrix(assembly)
    return scipy.linalg.solve(A, g * grid.cell_measure, assume_a="pos")
