from .grid import Grid, build_grid, grid_from_config, support_distance_to_boundary
from .kernel import (
    KernelAssembly,
    KernelSpec,
    assemble,
    assemble_from_config,
    eval_kernel,
    kernel_from_config,
    modulation_preset,
)
from .energy import (
    energy_and_gradient,
    operator_action,
    seminorm_grad,
    seminorm_p,
    weighted_mass,
    weighted_mass_grad,
)
from .eigen import (
    eigen_functional,
    euler_lagrange_residual,
    p2_oracle,
    principal_eigen,
    rayleigh,
    tilde_u,
)
from .rearrange import (
    ClosureElement,
    RearrangementClass,
    distribution_function,
    enumerate_class,
    is_comonotone,
    linear_maximizer_is_unique,
    maximize_linear,
    mixture,
    parse_generator,
)
from .dirichlet import (
    ReactionSpec,
    energy_E,
    linear_solve_oracle,
    solve_dirichlet,
    weak_solution_defect,
)
from .optimize import alternating_ascent, strict_mixture_gap
from .optimize_eigen import derivative_direction_eigen, minimize_eigenvalue, phi_eigen
from .optimize_energy import maximize_energy, phi_energy

from .run import run_command

__all__ = [
    "Grid",
    "build_grid",
    "grid_from_config",
    "support_distance_to_boundary",
    "KernelAssembly",
    "KernelSpec",
    "assemble",
    "assemble_from_config",
    "eval_kernel",
    "kernel_from_config",
    "modulation_preset",
    "energy_and_gradient",
    "operator_action",
    "seminorm_grad",
    "seminorm_p",
    "weighted_mass",
    "weighted_mass_grad",
    "eigen_functional",
    "euler_lagrange_residual",
    "p2_oracle",
    "principal_eigen",
    "rayleigh",
    "tilde_u",
    "ClosureElement",
    "RearrangementClass",
    "distribution_function",
    "enumerate_class",
    "is_comonotone",
    "linear_maximizer_is_unique",
    "maximize_linear",
    "mixture",
    "parse_generator",
    "ReactionSpec",
    "energy_E",
    "linear_solve_oracle",
    "solve_dirichlet",
    "weak_solution_defect",
    "alternating_ascent",
    "strict_mixture_gap",
    "derivative_direction_eigen",
    "minimize_eigenvalue",
    "phi_eigen",
    "maximize_energy",
    "phi_energy",
    "run_command",
]
