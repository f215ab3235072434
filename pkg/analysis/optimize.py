"""
Alternating ascent of a convex functional over a rearrangement class.

Each step solves the state problem for the current member, then replaces the
member by the rearrangement that maximizes the linearization (the derivative
field paired against the member). Convexity makes every accepted step an ascent
step; the scheme stops at a fixed point, on a small improvement or after
``max_iters`` steps. Several starts (the generator, then seeded random members)
are run and the best final objective wins.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from analysis.rearrange import (
    RearrangementClass,
    enumerate_class,
    is_comonotone,
    maximize_linear,
    mixture,
)
from core import (
    ConvergenceError,
    Field,
    IterationRecord,
    OptimizationTrace,
    OptimizerConfig,
    QuadratureError,
    RestartSummary,
    Termination,
)
from utils import is_verbose, vprint

# Accepted steps may lose at most this much objective to solver round-off
ASCENT_SLACK = 1e-12


@dataclass
class Evaluation:
    """Objective, derivative field and solver diagnostics at one class member."""

    phi: float
    direction: Field
    solver_iterations: int
    solver_residual: float
    lambda_: Optional[float] = None
    state: Optional[Field] = None


# evaluate(g, previous evaluation or None) -> Evaluation
Evaluate = Callable[[Field, Optional[Evaluation]], Evaluation]


def _record(k: int, g: Field, evaluation: Evaluation) -> IterationRecord:
    return IterationRecord(
        k=k,
        g=g.copy(),
        phi=evaluation.phi,
        solver_iterations=evaluation.solver_iterations,
        solver_residual=evaluation.solver_residual,
        lambda_=evaluation.lambda_,
        state=evaluation.state,
    )


@dataclass
class _StartOutcome:
    records: List[IterationRecord]
    terminated_by: Termination
    final: Evaluation


def _ascend(
    cls: RearrangementClass,
    g0: Field,
    evaluate: Evaluate,
    options: OptimizerConfig,
    label: str,
) -> _StartOutcome:
    g = np.asarray(g0, dtype=float)
    current = evaluate(g, None)
    records = [_record(0, g, current)]
    terminated_by = Termination.MAX_ITERS

    for k in range(1, options.max_iters + 1):
        g_next = maximize_linear(cls, current.direction)
        if np.array_equal(g_next, g):
            records.append(_record(k, g, current))
            terminated_by = Termination.FIXED_POINT
            break

        candidate = evaluate(g_next, current)
        if candidate.phi < current.phi - ASCENT_SLACK:
            vprint(f"{label}: step {k} lost objective ({candidate.phi!r} < {current.phi!r}), stopping")
            terminated_by = Termination.SMALL_IMPROVEMENT
            break

        improvement = candidate.phi - current.phi
        moved = int(np.count_nonzero(g_next != g)) if is_verbose() else 0
        g, current = g_next, candidate
        records.append(_record(k, g, current))
        vprint(f"{label}: k={k}, phi={current.phi:.12g}, moved cells={moved}")

        if abs(improvement) < options.tol:
            terminated_by = Termination.SMALL_IMPROVEMENT
            break

    return _StartOutcome(records=records, terminated_by=terminated_by, final=current)


def _run_start(
    cls: RearrangementClass,
    g0: Field,
    evaluate: Evaluate,
    options: OptimizerConfig,
    label: str,
) -> Union[_StartOutcome, Exception]:
    try:
        return _ascend(cls, g0, evaluate, options, label)
    except (ConvergenceError, QuadratureError) as e:
        return e


def starting_members(cls: RearrangementClass, options: OptimizerConfig) -> List[Field]:
    """The generator followed by ``options.restarts`` seeded random members."""
    starts = [np.array(cls.generator)]
    if options.restarts > 0:
        rng = np.random.default_rng(options.seed)
        starts.extend(cls.random_member(rng) for _ in range(options.restarts))
    return starts


def alternating_ascent(
    cls: RearrangementClass,
    evaluate: Evaluate,
    options: Optional[OptimizerConfig] = None,
    label: str = "ascent",
) -> OptimizationTrace:
    """Maximize the objective behind ``evaluate`` over the class."""
    options = options or OptimizerConfig()
    starts = starting_members(cls, options)
    labels = [f"{label} start {i}" for i in range(len(starts))]

    if options.workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=options.workers) as executor:
            outcomes = list(
                executor.map(
                    lambda args: _run_start(cls, args[0], evaluate, options, args[1]),
                    zip(starts, labels),
                )
            )
    else:
        outcomes = [_run_start(cls, g0, evaluate, options, lbl) for g0, lbl in zip(starts, labels)]

    if isinstance(outcomes[0], Exception):
        raise outcomes[0]

    summaries: List[RestartSummary] = []
    best_index: Optional[int] = None
    for index, outcome in enumerate(outcomes):
        if isinstance(outcome, Exception):
            vprint(f"{labels[index]} failed: {outcome}")
            summaries.append(RestartSummary(index=index, error=f"{type(outcome).__name__}: {outcome}"))
            continue
        final = outcome.records[-1]
        summaries.append(
            RestartSummary(
                index=index,
                phi=final.phi,
                iterations=final.k,
                terminated_by=outcome.terminated_by,
            )
        )
        if best_index is None or final.phi > outcomes[best_index].records[-1].phi:
            best_index = index

    best = outcomes[best_index]
    g_final = best.records[-1].g
    return OptimizationTrace(
        iterations=best.records,
        terminated_by=best.terminated_by,
        restart_index=best_index,
        direction=best.final.direction,
        comonotone=is_comonotone(g_final, best.final.direction, options.comonotone_tol),
        restarts=summaries,
    )


def strict_mixture_gap(
    cls: RearrangementClass, phi: Callable[[Field], float], g_hat: Field, other: Field
) -> float:
    """phi(g_hat) - phi((g_hat + other) / 2); positive when g_hat beats the strict mixture."""
    midpoint = mixture(cls, [g_hat, other], [0.5, 0.5])
    return phi(g_hat) - phi(midpoint.values)


def bruteforce_optimum(
    cls: RearrangementClass, objective: Callable[[Field], float], cap: int
) -> Tuple[Field, float]:
    """Largest objective over every member of the class (ties to the first enumerated)."""
    best_g, best_value = None, -np.inf
    for g in enumerate_class(cls, cap):
        value = objective(g)
        if value > best_value:
            best_g, best_value = g, value
    return best_g, best_value
