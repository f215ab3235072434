"""
Maximization of the Dirichlet energy phi(g) = max_u E(g, u) over a rearrangement class.

phi is convex in g with derivative sum((k - g) * u_g) mu, so the alternating
scheme pairs the class against the state u_g.
"""

from typing import Optional

from analysis.dirichlet import ReactionSpec, solve_dirichlet
from analysis.grid import Grid
from analysis.kernel import KernelAssembly
from analysis.optimize import Evaluate, Evaluation, alternating_ascent
from analysis.rearrange import RearrangementClass
from core import DirichletConfig, Field, OptimizationTrace, OptimizerConfig


def phi_energy(
    assembly: KernelAssembly,
    grid: Grid,
    reaction: Optional[ReactionSpec],
    g: Field,
    options: Optional[DirichletConfig] = None,
) -> float:
    return solve_dirichlet(assembly, grid, g, reaction, options).energy


def energy_evaluator(
    assembly: KernelAssembly,
    grid: Grid,
    reaction: Optional[ReactionSpec] = None,
    options: Optional[DirichletConfig] = None,
) -> Evaluate:
    def evaluate(g: Field, previous: Optional[Evaluation]) -> Evaluation:
        initial = previous.state if previous is not None else None
        result = solve_dirichlet(assembly, grid, g, reaction, options, initial=initial)
        return Evaluation(
            phi=result.energy,
            direction=result.u,
            solver_iterations=result.iterations,
            solver_residual=result.residual,
            state=result.u,
        )

    return evaluate


def maximize_energy(
    assembly: KernelAssembly,
    grid: Grid,
    cls: RearrangementClass,
    reaction: Optional[ReactionSpec] = None,
    options: Optional[OptimizerConfig] = None,
    dirichlet_options: Optional[DirichletConfig] = None,
) -> OptimizationTrace:
    return alternating_ascent(
        cls,
        energy_evaluator(assembly, grid, reaction, dirichlet_options),
        options,
        label="energy-max",
    )
