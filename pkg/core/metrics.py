from enum import Enum


class Metrics(Enum):
    """Column headers used in the CSV artifacts."""

    # Optimization / solve trace
    ITERATION = "k"
    LAMBDA = "lambda"
    PHI = "phi"
    SOLVER_ITERATIONS = "eigen_iterations"
    SOLVER_RESIDUAL = "eigen_residual"

    # Cell-wise fields
    CELL = "cell"
    X = "x"
    Y = "y"
    VALUE = "value"

    # Validation suite
    CHECK = "check"
    MEASURED = "measured"
    THRESHOLD = "threshold"
    PASSED = "passed"


class Termination(Enum):
    """Why the alternating scheme stopped."""

    FIXED_POINT = "fixed_point"
    SMALL_IMPROVEMENT = "small_improvement"
    MAX_ITERS = "max_iters"


class Command(Enum):
    """Subcommands of the batch front-end."""

    EIGEN_SOLVE = "eigen-solve"
    EIG_MIN = "eig-min"
    DIRICHLET_SOLVE = "dirichlet-solve"
    ENERGY_MAX = "energy-max"
    VALIDATE = "validate"


CENTER_COLUMNS = [Metrics.X, Metrics.Y]
