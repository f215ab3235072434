import os
from typing import Any, Dict, List

import numpy as np

from analysis.dirichlet import linear_solve_oracle, reaction_from_config, solve_dirichlet
from analysis.eigen import p2_oracle, principal_eigen
from analysis.grid import Grid, grid_from_config, support_distance_to_boundary
from analysis.kernel import KernelAssembly, assemble_from_config
from analysis.optimize_eigen import minimize_eigenvalue
from analysis.optimize_energy import maximize_energy
from analysis.rearrange import RearrangementClass, parse_generator
from analysis.validate import (
    EIGEN_ORACLE_TOL,
    bruteforce_eigen,
    bruteforce_energy,
    run_validation_suite,
    trace_matches,
)
from core import Command, IterationRecord, OptimizationTrace, RunConfig
from utils import Timer, log_failure, vprint
from utils.analysis import relative_error
from utils.writer import field_to_csv, results_to_csv

TRACE_FILE = "trace.csv"
FIELD_U_FILE = "field_u.csv"
FIELD_G_FILE = "field_g.csv"
VALIDATION_FILE = "validation.csv"

# Pipeline-level agreement with the dense Dirichlet solve, in sup-norm
DIRICHLET_ORACLE_TOL = 1e-7

# Summary flags set by --validate; a False one fails the run
CROSS_CHECKS = ("matches_oracle", "matches_bruteforce")


def _write_fields(grid: Grid, u: np.ndarray, g: np.ndarray, output_dir: str) -> None:
    field_to_csv(grid.centers, u, os.path.join(output_dir, FIELD_U_FILE))
    field_to_csv(grid.centers, g, os.path.join(output_dir, FIELD_G_FILE))


def _write_trace(records: List[IterationRecord], output_dir: str) -> None:
    results_to_csv(records, os.path.join(output_dir, TRACE_FILE))


def _run_eigen_solve(
    config: RunConfig, grid: Grid, assembly: KernelAssembly, output_dir: str
) -> Dict[str, Any]:
    g = parse_generator(config.weight.generator, grid)
    result = principal_eigen(assembly, grid, g, config.eigen)
    phi = 1.0 / result.lambda_**2

    _write_trace(
        [
            IterationRecord(
                k=0,
                g=g,
                phi=phi,
                solver_iterations=result.iterations,
                solver_residual=result.residual,
                lambda_=result.lambda_,
            )
        ],
        output_dir,
    )
    _write_fields(grid, result.u, g, output_dir)

    summary = result.to_summary()
    summary["phi"] = phi
    if config.validate and assembly.p == 2:
        oracle = p2_oracle(assembly, grid, g)
        summary["oracle_lambda"] = oracle
        summary["matches_oracle"] = relative_error(result.lambda_, oracle) <= EIGEN_ORACLE_TOL
    return summary


def _run_dirichlet_solve(
    config: RunConfig, grid: Grid, assembly: KernelAssembly, output_dir: str
) -> Dict[str, Any]:
    g = parse_generator(config.weight.generator, grid)
    reaction = reaction_from_config(config.reaction, grid, assembly.p)
    result = solve_dirichlet(assembly, grid, g, reaction, config.dirichlet)

    _write_trace(
        [
            IterationRecord(
                k=0,
                g=g,
                phi=result.energy,
                solver_iterations=result.iterations,
                solver_residual=result.residual,
            )
        ],
        output_dir,
    )
    _write_fields(grid, result.u, g, output_dir)

    summary = result.to_summary()
    if config.validate and assembly.p == 2 and not np.any(reaction.c):
        oracle = linear_solve_oracle(assembly, grid, g)
        deviation = float(np.max(np.abs(result.u - oracle)))
        summary["oracle_deviation"] = deviation
        summary["matches_oracle"] = deviation <= DIRICHLET_ORACLE_TOL
    return summary


def _optimization_summary(
    trace: OptimizationTrace, grid: Grid, output_dir: str, ff_loc: str
) -> Dict[str, Any]:
    final = trace.best
    _write_trace(trace.iterations, output_dir)
    _write_fields(grid, final.state, final.g, output_dir)

    for restart in trace.restarts:
        if restart.error:
            log_failure(ff_loc, f"Restart {restart.index}: {restart.error}")

    summary = trace.to_summary()
    summary["support_distance_to_boundary"] = support_distance_to_boundary(grid, final.g)
    summary["boundary_cells_in_support"] = int(np.count_nonzero(final.g[grid.boundary_adjacent] > 0))
    return summary


def _bruteforce_allowed(config: RunConfig, cls: RearrangementClass, ff_loc: str) -> bool:
    if not config.validate:
        return False
    size = cls.size()
    if size > config.optimizer.bruteforce_cap:
        log_failure(
            ff_loc,
            f"Brute-force check skipped: class has {size} members, cap is {config.optimizer.bruteforce_cap}",
        )
        return False
    return True


def _run_eig_min(
    config: RunConfig, grid: Grid, assembly: KernelAssembly, output_dir: str, ff_loc: str
) -> Dict[str, Any]:
    cls = RearrangementClass.from_generator(parse_generator(config.weight.generator, grid))
    trace = minimize_eigenvalue(assembly, grid, cls, config.optimizer, config.eigen)
    summary = _optimization_summary(trace, grid, output_dir, ff_loc)

    if _bruteforce_allowed(config, cls, ff_loc):
        _, lam_min = bruteforce_eigen(
            assembly, grid, cls, config.optimizer.bruteforce_cap, config.eigen
        )
        summary["bruteforce_lambda"] = lam_min
        summary["matches_bruteforce"] = trace_matches(trace, lam_min, minimize_lambda=True)
    return summary


def _run_energy_max(
    config: RunConfig, grid: Grid, assembly: KernelAssembly, output_dir: str, ff_loc: str
) -> Dict[str, Any]:
    cls = RearrangementClass.from_generator(parse_generator(config.weight.generator, grid))
    reaction = reaction_from_config(config.reaction, grid, assembly.p)
    trace = maximize_energy(assembly, grid, cls, reaction, config.optimizer, config.dirichlet)
    summary = _optimization_summary(trace, grid, output_dir, ff_loc)

    if _bruteforce_allowed(config, cls, ff_loc):
        _, phi_max = bruteforce_energy(
            assembly, grid, cls, reaction, config.optimizer.bruteforce_cap, config.dirichlet
        )
        summary["bruteforce_phi"] = phi_max
        summary["matches_bruteforce"] = trace_matches(trace, phi_max, minimize_lambda=False)
    return summary


def _run_validate(config: RunConfig, output_dir: str) -> Dict[str, Any]:
    seed = config.optimizer.seed if config.optimizer.seed is not None else 0
    checks = run_validation_suite(seed)
    results_to_csv(checks, os.path.join(output_dir, VALIDATION_FILE))
    return {
        "all_passed": all(c.passed for c in checks),
        "checks": {c.check: c.passed for c in checks},
    }


def run_command(config: RunConfig, output_dir: str, ff_loc: str, timer: Timer) -> Dict[str, Any]:
    """Dispatch one command; writes its CSV artifacts and returns the summary results."""
    command = Command(config.command)
    vprint(f"Command: {command.value}")

    if command == Command.VALIDATE:
        summary = _run_validate(config, output_dir)
        timer.log_phase("Validation suite")
        return summary

    grid = grid_from_config(config.grid)
    assembly = assemble_from_config(grid, config.kernel, cache_dir=config.output.cache_dir or None)
    timer.log_phase("Kernel assembly")

    if command == Command.EIGEN_SOLVE:
        summary = _run_eigen_solve(config, grid, assembly, output_dir)
    elif command == Command.DIRICHLET_SOLVE:
        summary = _run_dirichlet_solve(config, grid, assembly, output_dir)
    elif command == Command.EIG_MIN:
        summary = _run_eig_min(config, grid, assembly, output_dir, ff_loc)
    else:
        summary = _run_energy_max(config, grid, assembly, output_dir, ff_loc)

    if config.validate:
        failed = [key for key in CROSS_CHECKS if key in summary and not summary[key]]
        for key in failed:
            log_failure(ff_loc, f"Cross-check {key} failed")
        summary["all_passed"] = not failed

    timer.log_phase(f"Command {command.value}")
    return summary
