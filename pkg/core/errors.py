from typing import Any, Dict, List, Optional


class ConfigError(ValueError):
    """Invalid run configuration; lists every violated constraint."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ConvergenceError(RuntimeError):
    """An iterative solver stopped without meeting its tolerances."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class QuadratureError(RuntimeError):
    """Graded quadrature for touching cells failed its self-convergence check."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)
