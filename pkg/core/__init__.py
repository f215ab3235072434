__version__ = "0.1.0"

from core.errors import ConfigError, ConvergenceError, QuadratureError

from core.metrics import Command, Metrics, Termination

from core.config import (
    BaseConfig,
    GridConfig,
    KernelConfig,
    WeightConfig,
    ReactionConfig,
    EigenConfig,
    DirichletConfig,
    OptimizerConfig,
    OutputConfig,
    RunConfig,
)

from core.results import (
    Field,
    ResultsBase,
    EigenResult,
    SolveResult,
    IterationRecord,
    RestartSummary,
    OptimizationTrace,
    CellValue,
    CheckResult,
    field_rows,
)

__all__ = [
    "__version__",
    "ConfigError",
    "ConvergenceError",
    "QuadratureError",
    "Command",
    "Metrics",
    "Termination",
    "BaseConfig",
    "GridConfig",
    "KernelConfig",
    "WeightConfig",
    "ReactionConfig",
    "EigenConfig",
    "DirichletConfig",
    "OptimizerConfig",
    "OutputConfig",
    "RunConfig",
    "Field",
    "ResultsBase",
    "EigenResult",
    "SolveResult",
    "IterationRecord",
    "RestartSummary",
    "OptimizationTrace",
    "CellValue",
    "CheckResult",
    "field_rows",
]
