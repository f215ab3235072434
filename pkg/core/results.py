from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, TypeAlias

import numpy as np

from core.metrics import CENTER_COLUMNS, Metrics, Termination
from utils.analysis import format_number

# Cell-wise constant function on the grid, extended by zero outside the domain.
Field: TypeAlias = np.ndarray


@dataclass
class ResultsBase(ABC):
    """Base class for everything written as a CSV row."""

    @classmethod
    @abstractmethod
    def get_metrics(cls, **kwargs) -> List[Metrics]:
        """Get the columns associated with this results class."""
        pass

    @classmethod
    def get_headers(cls, **kwargs) -> List[str]:
        """Get headers for CSV output."""
        return [metric.value for metric in cls.get_metrics(**kwargs)]

    @abstractmethod
    def get_data(self, **kwargs) -> List[Any]:
        """Return the results as a list for CSV writing."""
        pass


@dataclass
class EigenResult:
    """Principal eigenpair, normalized so that sum(g * u^p) * mu = 1."""

    lambda_: float
    u: Field
    iterations: int
    residual: float
    normalization_defect: float
    start_lambdas: List[float] = field(default_factory=list)

    def to_summary(self) -> Dict[str, Any]:
        return {
            "lambda": float(self.lambda_),
            "iterations": int(self.iterations),
            "residual": float(self.residual),
            "normalization_defect": float(self.normalization_defect),
            "min_u": float(np.min(self.u)),
            "start_lambdas": [float(v) for v in self.start_lambdas],
        }


@dataclass
class SolveResult:
    """Maximizer u_g of the energy E(g, .)."""

    u: Field
    energy: float
    residual: float
    iterations: int
    compliance: float = np.nan

    def to_summary(self) -> Dict[str, Any]:
        return {
            "energy": float(self.energy),
            "residual": float(self.residual),
            "iterations": int(self.iterations),
            "compliance": float(self.compliance),
            "min_u": float(np.min(self.u)),
        }


@dataclass
class IterationRecord(ResultsBase):
    """One step of an alternating scheme (or a single solve)."""

    k: int
    g: Field
    phi: float
    solver_iterations: int
    solver_residual: float
    lambda_: Optional[float] = None
    state: Optional[Field] = None

    @classmethod
    def get_metrics(cls) -> List[Metrics]:
        return [
            Metrics.ITERATION,
            Metrics.LAMBDA,
            Metrics.PHI,
            Metrics.SOLVER_ITERATIONS,
            Metrics.SOLVER_RESIDUAL,
        ]

    def get_data(self) -> List[Any]:
        return [
            self.k,
            format_number(self.lambda_),
            format_number(self.phi),
            self.solver_iterations,
            format_number(self.solver_residual),
        ]


@dataclass
class RestartSummary:
    """Outcome of one start of the alternating scheme."""

    index: int
    phi: float = np.nan
    iterations: int = 0
    terminated_by: Optional[Termination] = None
    error: str = ""

    def to_summary(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "phi": None if np.isnan(self.phi) else float(self.phi),
            "iterations": self.iterations,
            "terminated_by": self.terminated_by.value if self.terminated_by else None,
            "error": self.error,
        }


@dataclass
class OptimizationTrace:
    """Iterates of the alternating scheme for the selected start."""

    iterations: List[IterationRecord] = field(default_factory=list)
    terminated_by: Termination = Termination.MAX_ITERS
    restart_index: int = 0
    direction: Optional[Field] = None
    comonotone: bool = False
    restarts: List[RestartSummary] = field(default_factory=list)

    @property
    def best(self) -> IterationRecord:
        return self.iterations[-1]

    def to_summary(self) -> Dict[str, Any]:
        best = self.best
        return {
            "phi": float(best.phi),
            "lambda": None if best.lambda_ is None else float(best.lambda_),
            "outer_iterations": best.k,
            "terminated_by": self.terminated_by.value,
            "restart_index": self.restart_index,
            "comonotone": bool(self.comonotone),
            "restarts": [r.to_summary() for r in self.restarts],
        }


@dataclass
class CellValue(ResultsBase):
    """Value of a field on one cell, with the cell centre."""

    cell: int
    center: Sequence[float]
    value: float

    @classmethod
    def get_metrics(cls, dim: int = 1) -> List[Metrics]:
        return [Metrics.CELL] + CENTER_COLUMNS[:dim] + [Metrics.VALUE]

    def get_data(self, dim: int = 1) -> List[Any]:
        return (
            [self.cell]
            + [format_number(c) for c in self.center[:dim]]
            + [format_number(self.value)]
        )


@dataclass
class CheckResult(ResultsBase):
    """Outcome of one oracle/property check of the validation suite."""

    check: str
    measured: float
    threshold: float
    passed: bool

    @classmethod
    def get_metrics(cls) -> List[Metrics]:
        return [Metrics.CHECK, Metrics.MEASURED, Metrics.THRESHOLD, Metrics.PASSED]

    def get_data(self) -> List[Any]:
        return [
            self.check,
            format_number(self.measured),
            format_number(self.threshold),
            "true" if self.passed else "false",
        ]


def field_rows(centers: np.ndarray, values: Field) -> List[CellValue]:
    """CSV rows of a cell-wise field."""
    return [
        CellValue(cell=i, center=tuple(centers[i]), value=float(values[i]))
        for i in range(len(values))
    ]
