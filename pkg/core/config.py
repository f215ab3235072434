"""
Pure dataclass configurations for a run.

A run configuration is a single structured document (JSON syntax is accepted,
since every JSON document is valid YAML). Sections map one-to-one onto the
dataclasses below; unknown keys are rejected and every violated constraint is
reported at once through ``ConfigError``.
"""

import hashlib
import json
import math
from abc import ABC
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional

import yaml

from core.errors import ConfigError
from core.metrics import Command

KERNEL_FAMILIES = ("pure_fractional", "modulated")
MODULATION_PRESETS = ("lower", "upper", "checkerboard")


def _coerce(field_type: Any, value: Any) -> Any:
    """Read numerics as 64-bit floats where the field is a float."""
    if field_type is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value


def _is_finite_number(value: Any) -> bool:
    return (
        isinstance(value, (int, float))
        and not isinstance(value, bool)
        and math.isfinite(value)
    )


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_positive(value: Any) -> bool:
    return _is_finite_number(value) and value > 0


def _is_at_least(value: Any, bound: int) -> bool:
    return _is_int(value) and value >= bound


def _descent_violations(section: str, config: Any) -> List[str]:
    """Step-size and logging constraints shared by the descent solvers."""
    problems = []
    if not _is_positive(config.initial_step):
        problems.append(f"{section}.initial_step must be > 0")
    if not _is_finite_number(config.backtrack) or not 0 < config.backtrack < 1:
        problems.append(f"{section}.backtrack must lie in (0, 1)")
    if not _is_finite_number(config.armijo) or not 0 < config.armijo < 1:
        problems.append(f"{section}.armijo must lie in (0, 1)")
    if not _is_at_least(config.log_every, 0):
        problems.append(f"{section}.log_every must be an integer >= 0")
    return problems


@dataclass
class BaseConfig(ABC):
    """Base class for all configuration sections."""

    @classmethod
    def from_dict(cls, data: dict) -> "BaseConfig":
        """Create config instance from dictionary, rejecting unknown keys."""
        if not isinstance(data, dict):
            raise ConfigError([f"{cls.__name__}: expected a mapping, got {data!r}"])

        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError([f"{cls.__name__}: unknown key '{k}'" for k in unknown])

        kwargs = {name: _coerce(known[name].type, value) for name, value in data.items()}
        return cls(**kwargs)

    def to_dict(self) -> dict:
        """Convert config to dictionary for serialization."""
        return {
            field_name: getattr(self, field_name)
            for field_name in self.__dataclass_fields__
        }

    def violations(self) -> List[str]:
        """Constraint violations of this section alone."""
        return []


@dataclass
class GridConfig(BaseConfig):
    """Box domain and its equal-measure partition."""

    dim: int = 1
    bounds: List[List[float]] = field(default_factory=lambda: [[0.0, 1.0]])
    cells_per_axis: List[int] = field(default_factory=lambda: [64])

    @property
    def cell_count(self) -> Optional[int]:
        """Number of cells, or None while cells_per_axis is malformed."""
        if not isinstance(self.cells_per_axis, list) or not all(_is_int(c) for c in self.cells_per_axis):
            return None
        return int(math.prod(self.cells_per_axis))

    def violations(self) -> List[str]:
        problems = []
        if not _is_int(self.dim) or self.dim not in (1, 2):
            problems.append(f"grid.dim must be 1 or 2, got {self.dim!r}")
        if not isinstance(self.bounds, list):
            problems.append(f"grid.bounds must be a list of intervals, got {self.bounds!r}")
        else:
            if len(self.bounds) != self.dim:
                problems.append(f"grid.bounds needs {self.dim} intervals, got {len(self.bounds)}")
            for axis, interval in enumerate(self.bounds):
                if (
                    not isinstance(interval, list)
                    or len(interval) != 2
                    or not all(_is_finite_number(v) for v in interval)
                    or not interval[0] < interval[1]
                ):
                    problems.append(f"grid.bounds[{axis}] must be a finite interval [a, b] with a < b")
        if not isinstance(self.cells_per_axis, list):
            problems.append(f"grid.cells_per_axis must be a list of integers, got {self.cells_per_axis!r}")
        else:
            if len(self.cells_per_axis) != self.dim:
                problems.append(
                    f"grid.cells_per_axis needs {self.dim} entries, got {len(self.cells_per_axis)}"
                )
            for axis, count in enumerate(self.cells_per_axis):
                if not _is_at_least(count, 2):
                    problems.append(f"grid.cells_per_axis[{axis}] must be an integer >= 2")
        return problems


@dataclass
class KernelConfig(BaseConfig):
    """Kernel K(x, y) and the quadrature used to assemble it."""

    family: str = "pure_fractional"
    p: float = 2.0
    s: float = 0.4
    C: float = 1.0
    C1: float = 1.0
    C2: float = 1.0
    modulation: str = "checkerboard"
    modulation_frequency: float = 2.0
    quadrature_depth: int = 6
    quadrature_order: int = 4
    truncation_factor: float = 10.0
    self_convergence_tol: float = 1e-6

    def violations(self) -> List[str]:
        problems = []
        if self.family not in KERNEL_FAMILIES:
            problems.append(f"kernel.family must be one of {KERNEL_FAMILIES}, got '{self.family}'")
        if not _is_finite_number(self.p) or self.p <= 1:
            problems.append(f"kernel.p must be > 1, got {self.p}")
        if not _is_finite_number(self.s) or not 0 < self.s < 1:
            problems.append(f"kernel.s must lie in (0, 1), got {self.s}")
        if _is_finite_number(self.p) and _is_finite_number(self.s) and self.p * self.s >= 1:
            problems.append(f"kernel.p * kernel.s must be < 1, got {self.p * self.s}")
        if not _is_finite_number(self.C) or self.C <= 0:
            problems.append(f"kernel.C must be > 0, got {self.C}")
        if not (_is_finite_number(self.C1) and _is_finite_number(self.C2) and 0 < self.C1 <= self.C2):
            problems.append(f"kernel needs 0 < C1 <= C2, got C1={self.C1}, C2={self.C2}")
        if self.modulation not in MODULATION_PRESETS:
            problems.append(
                f"kernel.modulation must be one of {MODULATION_PRESETS}, got '{self.modulation}'"
            )
        if not _is_positive(self.modulation_frequency):
            problems.append(f"kernel.modulation_frequency must be > 0, got {self.modulation_frequency!r}")
        if not _is_at_least(self.quadrature_depth, 1):
            problems.append("kernel.quadrature_depth must be an integer >= 1")
        if not _is_at_least(self.quadrature_order, 1):
            problems.append("kernel.quadrature_order must be an integer >= 1")
        if not _is_finite_number(self.truncation_factor) or self.truncation_factor <= 1:
            problems.append("kernel.truncation_factor must be > 1")
        if not _is_positive(self.self_convergence_tol):
            problems.append("kernel.self_convergence_tol must be > 0")
        return problems


@dataclass
class WeightConfig(BaseConfig):
    """Generator of the rearrangement class: a list, binary{f}, linear-ramp{lo,hi} or constant{c}."""

    generator: Any = "constant{1}"

    def violations(self) -> List[str]:
        from analysis.rearrange import parse_generator_spec

        try:
            parse_generator_spec(self.generator)
        except (TypeError, ValueError) as e:
            return [f"weight.generator: {e}"]
        return []


@dataclass
class ReactionConfig(BaseConfig):
    """Reaction h(x, t) = c(x) * max(t, 0)^(q-1)."""

    c: Any = 0.0
    q: float = 1.5

    def violations(self) -> List[str]:
        problems = []
        values = self.c if isinstance(self.c, list) else [self.c]
        if not values or not all(_is_finite_number(v) and v >= 0 for v in values):
            problems.append("reaction.c must be a nonnegative number or list of numbers")
        if not _is_finite_number(self.q) or self.q <= 1:
            problems.append(f"reaction.q must be > 1, got {self.q}")
        return problems


@dataclass
class EigenConfig(BaseConfig):
    """Projected-descent principal eigensolver."""

    tol: float = 1e-10
    residual_tol: float = 1e-8
    max_iters: int = 50000
    starts: int = 1
    seed: int = 0
    initial_step: float = 1.0
    backtrack: float = 0.5
    armijo: float = 1e-4
    log_every: int = 1000

    def violations(self) -> List[str]:
        problems = []
        if not (_is_positive(self.tol) and _is_positive(self.residual_tol)):
            problems.append("eigen tolerances must be > 0")
        if not _is_at_least(self.max_iters, 1):
            problems.append("eigen.max_iters must be an integer >= 1")
        if not _is_at_least(self.starts, 1):
            problems.append("eigen.starts must be an integer >= 1")
        if not _is_at_least(self.seed, 0):
            problems.append("eigen.seed must be an integer >= 0")
        problems.extend(_descent_violations("eigen", self))
        return problems


@dataclass
class DirichletConfig(BaseConfig):
    """Descent solver for the nonlinear Dirichlet problem."""

    tol: float = 1e-9
    max_iters: int = 50000
    initial_step: float = 1.0
    backtrack: float = 0.5
    armijo: float = 1e-4
    log_every: int = 1000

    def violations(self) -> List[str]:
        problems = []
        if not _is_positive(self.tol):
            problems.append("dirichlet.tol must be > 0")
        if not _is_at_least(self.max_iters, 1):
            problems.append("dirichlet.max_iters must be an integer >= 1")
        problems.extend(_descent_violations("dirichlet", self))
        return problems


@dataclass
class OptimizerConfig(BaseConfig):
    """Alternating rearrangement scheme."""

    tol: float = 1e-11
    max_iters: int = 100
    restarts: int = 5
    seed: Optional[int] = 0
    workers: int = 1
    comonotone_tol: float = 1e-9
    bruteforce_cap: int = 200

    def violations(self) -> List[str]:
        problems = []
        if not _is_finite_number(self.tol) or self.tol < 0:
            problems.append("optimizer.tol must be >= 0")
        if not _is_at_least(self.max_iters, 1):
            problems.append("optimizer.max_iters must be an integer >= 1")
        if not _is_at_least(self.restarts, 0):
            problems.append("optimizer.restarts must be an integer >= 0")
        elif self.restarts > 0 and self.seed is None:
            problems.append("optimizer.seed is required when optimizer.restarts > 0")
        if self.seed is not None and not _is_at_least(self.seed, 0):
            problems.append("optimizer.seed must be an integer >= 0")
        if not _is_at_least(self.workers, 1):
            problems.append("optimizer.workers must be an integer >= 1")
        if not _is_finite_number(self.comonotone_tol) or self.comonotone_tol < 0:
            problems.append("optimizer.comonotone_tol must be >= 0")
        if not _is_at_least(self.bruteforce_cap, 1):
            problems.append("optimizer.bruteforce_cap must be an integer >= 1")
        return problems


@dataclass
class OutputConfig(BaseConfig):
    """Output location and console verbosity."""

    output_dir: str = "output"
    verbose: bool = False
    cache_dir: str = ""

    def violations(self) -> List[str]:
        problems = []
        if not isinstance(self.output_dir, str) or not self.output_dir:
            problems.append("output.output_dir must be a non-empty path")
        if not isinstance(self.verbose, bool):
            problems.append("output.verbose must be true or false")
        if not isinstance(self.cache_dir, str):
            problems.append("output.cache_dir must be a path (empty disables the cache)")
        return problems


@dataclass
class RunConfig:
    """Main configuration container for a batch run."""

    command: str = Command.EIGEN_SOLVE.value
    validate: bool = False

    grid: GridConfig = field(default_factory=GridConfig)
    kernel: KernelConfig = field(default_factory=KernelConfig)
    weight: WeightConfig = field(default_factory=WeightConfig)
    reaction: Optional[ReactionConfig] = None
    eigen: EigenConfig = field(default_factory=EigenConfig)
    dirichlet: DirichletConfig = field(default_factory=DirichletConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    _SCALARS = ("command", "validate")
    _SECTIONS = {
        "grid": GridConfig,
        "kernel": KernelConfig,
        "weight": WeightConfig,
        "reaction": ReactionConfig,
        "eigen": EigenConfig,
        "dirichlet": DirichletConfig,
        "optimizer": OptimizerConfig,
        "output": OutputConfig,
    }

    @classmethod
    def from_dict(cls, config_data: Dict[str, Any]) -> "RunConfig":
        """Build and validate a configuration; all problems are reported together."""
        if not isinstance(config_data, dict):
            raise ConfigError(["expected a mapping at the top level of the configuration"])

        kwargs: Dict[str, Any] = {}
        problems: List[str] = []
        for key, value in config_data.items():
            if key in cls._SCALARS:
                kwargs[key] = value
            elif key in cls._SECTIONS:
                try:
                    kwargs[key] = cls._SECTIONS[key].from_dict(value)
                except ConfigError as e:
                    problems.extend(e.violations)
            else:
                problems.append(f"unknown configuration section: '{key}'")

        if problems:
            raise ConfigError(problems)

        config = cls(**kwargs)
        config.check()
        return config

    @classmethod
    def load(cls, filepath: str) -> "RunConfig":
        """Load configuration from a JSON or YAML file."""
        with open(filepath, "r", encoding="utf-8") as f:
            try:
                config_data = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigError([f"unreadable configuration {filepath}: {e}"]) from e
        return cls.from_dict(config_data)

    def violations(self) -> List[str]:
        problems = []
        commands = [c.value for c in Command]
        if self.command not in commands:
            problems.append(f"command must be one of {commands}, got '{self.command}'")
        if not isinstance(self.validate, bool):
            problems.append("validate must be true or false")

        for name in self._SECTIONS:
            section = getattr(self, name)
            if section is not None:
                problems.extend(section.violations())

        if self.reaction is not None:
            if (
                _is_finite_number(self.reaction.q)
                and _is_finite_number(self.kernel.p)
                and self.reaction.q >= self.kernel.p
            ):
                problems.append(
                    f"reaction.q must be < kernel.p, got q={self.reaction.q}, p={self.kernel.p}"
                )
            problems.extend(self._length_violations("reaction.c", self.reaction.c))
        problems.extend(self._length_violations("weight.generator", self.weight.generator))
        return problems

    def _length_violations(self, name: str, values: Any) -> List[str]:
        cells = self.grid.cell_count
        if isinstance(values, list) and cells is not None and len(values) != cells:
            return [f"{name} has {len(values)} entries, grid has {cells} cells"]
        return []

    def check(self) -> None:
        """Raise ConfigError listing every violated constraint."""
        problems = self.violations()
        if problems:
            raise ConfigError(problems)

    def to_dict(self) -> dict:
        config_data: Dict[str, Any] = {name: getattr(self, name) for name in self._SCALARS}
        for name in self._SECTIONS:
            section = getattr(self, name)
            if section is not None:
                config_data[name] = section.to_dict()
        return config_data

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON form of the configuration."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def save_to_yaml(self, filepath: str) -> None:
        """Save the effective configuration to YAML."""
        with open(filepath, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.to_dict(), f, default_flow_style=False, indent=2, sort_keys=True)
