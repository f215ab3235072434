"""
Minimization of the principal eigenvalue over a rearrangement class.

Minimizing lambda(g) is maximizing the convex functional phi(g) = 1 / lambda(g)^2,
whose derivative against h - g is sum((h - g) * 2 tilde_u^p) mu.
"""

from typing import Optional

from analysis.eigen import principal_eigen, tilde_u
from analysis.grid import Grid
from analysis.kernel import KernelAssembly
from analysis.optimize import Evaluate, Evaluation, alternating_ascent
from analysis.rearrange import RearrangementClass
from core import EigenConfig, EigenResult, Field, OptimizationTrace, OptimizerConfig


def phi_eigen(
    assembly: KernelAssembly, grid: Grid, g: Field, options: Optional[EigenConfig] = None
) -> float:
    result = principal_eigen(assembly, grid, g, options)
    return 1.0 / result.lambda_**2


def derivative_direction_eigen(result: EigenResult, p: float) -> Field:
    return 2.0 * tilde_u(result, p) ** p


def eigen_evaluator(
    assembly: KernelAssembly, grid: Grid, options: Optional[EigenConfig] = None
) -> Evaluate:
    """Evaluate phi = 1 / lambda^2, warm-starting from the previous eigenfunction."""

    def evaluate(g: Field, previous: Optional[Evaluation]) -> Evaluation:
        initial = previous.state if previous is not None else None
        result = principal_eigen(assembly, grid, g, options, initial=initial)
        return Evaluation(
            phi=1.0 / result.lambda_**2,
            direction=derivative_direction_eigen(result, assembly.p),
            solver_iterations=result.iterations,
            solver_residual=result.residual,
            lambda_=result.lambda_,
            state=result.u,
        )

    return evaluate


def minimize_eigenvalue(
    assembly: KernelAssembly,
    grid: Grid,
    cls: RearrangementClass,
    options: Optional[OptimizerConfig] = None,
    eigen_options: Optional[EigenConfig] = None,
) -> OptimizationTrace:
    return alternating_ascent(
        cls, eigen_evaluator(assembly, grid, eigen_options), options, label="eig-min"
    )
