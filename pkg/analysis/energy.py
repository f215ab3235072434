"""
Discrete fractional p-seminorm, its exact gradient and the weighted integrals.

All functions are pure and only read the (immutable) assembly.
"""

from typing import Tuple

import numpy as np

from analysis.grid import Grid
from analysis.kernel import KernelAssembly
from core import Field
from utils.analysis import signed_power


def _check(assembly: KernelAssembly, u) -> Field:
    return assembly.grid.check_field(u, "u")


def _differences(u: Field) -> np.ndarray:
    return u[:, None] - u[None, :]


def seminorm_p(assembly: KernelAssembly, u: Field) -> float:
    """Sum over i != j of |u_i - u_j|^p W_ij plus 2 sum |u_i|^p kappa_i."""
    u = _check(assembly, u)
    p = assembly.p
    interior = np.sum(np.abs(_differences(u)) ** p * assembly.W)
    exterior = 2.0 * np.sum(np.abs(u) ** p * assembly.kappa)
    return float(interior + exterior)


def seminorm_grad(assembly: KernelAssembly, u: Field) -> Field:
    """Exact partial derivatives of seminorm_p (|t|^(p-2) t taken as 0 at t = 0)."""
    return energy_and_gradient(assembly, u)[1]


def energy_and_gradient(assembly: KernelAssembly, u: Field) -> Tuple[float, Field]:
    """seminorm_p and seminorm_grad sharing one difference matrix."""
    u = _check(assembly, u)
    p = assembly.p
    diff = _differences(u)
    abs_diff = np.abs(diff)

    energy = np.sum(abs_diff**p * assembly.W) + 2.0 * np.sum(np.abs(u) ** p * assembly.kappa)
    grad = 2.0 * p * (
        np.sum(signed_power(diff, p - 1.0) * assembly.W, axis=1)
        + signed_power(u, p - 1.0) * assembly.kappa
    )
    return float(energy), grad


def operator_action(assembly: KernelAssembly, u: Field, phi: Field) -> float:
    """Weak form <L_K u, phi> of the discrete operator, i.e. grad(seminorm_p / p) . phi."""
    phi = _check(assembly, phi)
    return float(seminorm_grad(assembly, u) @ phi) / assembly.p


def weighted_mass(grid: Grid, g: Field, u: Field, p: float) -> float:
    """Sum of g_i |u_i|^p mu."""
    g = grid.check_field(g, "g")
    u = grid.check_field(u, "u")
    return float(np.sum(g * np.abs(u) ** p) * grid.cell_measure)


def weighted_mass_grad(grid: Grid, g: Field, u: Field, p: float) -> Field:
    g = grid.check_field(g, "g")
    u = grid.check_field(u, "u")
    return p * g * signed_power(u, p - 1.0) * grid.cell_measure
