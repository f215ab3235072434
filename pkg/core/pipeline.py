import math
import os
from typing import Any, Dict, Optional

import yaml

from analysis import run_command
from core import __version__
from core.config import RunConfig
from core.errors import ConfigError, ConvergenceError, QuadratureError
from utils import Timer, set_verbose, vprint
from utils.setup import create_output_directory, remove_empty_failure_file, setup_paths
from utils.writer import write_summary_json

SUMMARY_FILE = "summary.json"
SETTINGS_FILE = "settings.yaml"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats (inside diagnostics) by None."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def error_object(error: Exception) -> Dict[str, Any]:
    """Machine-readable description of a failed run."""
    payload: Dict[str, Any] = {"type": type(error).__name__, "message": str(error)}
    if isinstance(error, ConfigError):
        payload["violations"] = list(error.violations)
    if isinstance(error, (ConvergenceError, QuadratureError)):
        payload["diagnostics"] = _json_safe(error.diagnostics)
    return payload


def write_config_error(error: ConfigError, output_dir: str) -> int:
    """Report a configuration that could not be loaded at all."""
    create_output_directory(output_dir)
    write_summary_json(
        {"status": "error", "version": __version__, "error": error_object(error)},
        os.path.join(output_dir, SUMMARY_FILE),
    )
    print(f"Invalid configuration: {error}")
    return EXIT_CONFIG


def apply_overrides(
    config_data: Dict[str, Any],
    command: Optional[str] = None,
    output_dir: Optional[str] = None,
    seed: Optional[int] = None,
    validate: bool = False,
) -> Dict[str, Any]:
    """Command-line overrides on the raw configuration mapping."""
    data = dict(config_data or {})

    def section(name: str) -> Dict[str, Any]:
        value = data.get(name)
        return dict(value) if isinstance(value, dict) else {}

    if command is not None:
        data["command"] = command
    if output_dir is not None:
        data["output"] = {**section("output"), "output_dir": output_dir}
    if seed is not None:
        data["optimizer"] = {**section("optimizer"), "seed": seed}
        data["eigen"] = {**section("eigen"), "seed": seed}
    if validate:
        data["validate"] = True
    return data


def run(config: RunConfig) -> int:
    """Run one command headlessly; returns the process exit status."""
    set_verbose(config.output.verbose)

    output_dir = config.output.output_dir
    ff_loc, time_filepath = setup_paths(output_dir)
    vprint(f"Output directory: {output_dir}")

    timer = Timer(time_filepath)
    timer.start()

    summary: Dict[str, Any] = {
        "command": config.command,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "version": __version__,
    }
    try:
        try:
            results = run_command(config, output_dir, ff_loc, timer)
            passed = results.get("all_passed", True)
            summary["status"] = "ok" if passed else "failed"
            summary["results"] = results
            status = EXIT_OK if passed else EXIT_FAILURE
        except ConfigError as e:
            summary["status"] = "error"
            summary["error"] = error_object(e)
            status = EXIT_CONFIG
        except (ConvergenceError, QuadratureError, ValueError) as e:
            print(f"Run failed: {e}")
            summary["status"] = "error"
            summary["error"] = error_object(e)
            status = EXIT_FAILURE
        except Exception as e:
            # Unexpected errors still leave a summary behind, then propagate
            summary["status"] = "error"
            summary["error"] = error_object(e)
            write_summary_json(summary, os.path.join(output_dir, SUMMARY_FILE))
            raise

        write_summary_json(summary, os.path.join(output_dir, SUMMARY_FILE))
        config.save_to_yaml(os.path.join(output_dir, SETTINGS_FILE))
        timer.log_phase("Writing outputs")
        timer.log_time_since_start("Total time")
        timer.log_breakdown()
    finally:
        timer.stop()
        remove_empty_failure_file(ff_loc)
    return status


def run_from_file(
    config_path: Optional[str],
    command: Optional[str] = None,
    output_dir: Optional[str] = None,
    seed: Optional[int] = None,
    validate: bool = False,
) -> int:
    """Load a configuration file (or defaults), apply overrides and run."""
    data: Dict[str, Any] = {}
    try:
        if config_path:
            if not os.path.isfile(config_path):
                raise ConfigError([f"configuration file not found: {config_path}"])
            with open(config_path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
            if not isinstance(data, dict):
                raise ConfigError(["expected a mapping at the top level of the configuration"])
        config = RunConfig.from_dict(apply_overrides(data, command, output_dir, seed, validate))
    except yaml.YAMLError as e:
        return write_config_error(ConfigError([f"unreadable configuration {config_path}: {e}"]), output_dir or "output")
    except ConfigError as e:
        return write_config_error(e, output_dir or _output_dir_of(data))
    return run(config)


def _output_dir_of(data: Any) -> str:
    if isinstance(data, dict) and isinstance(data.get("output"), dict):
        return str(data["output"].get("output_dir", "output"))
    return "output"
