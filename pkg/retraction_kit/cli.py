"""
Command-Line Runner
===================

`retraction-kit <experiment> [options]` runs one experiment and writes one
table (CSV with a `#` metadata block, or JSON with the same schema).

Every option may also come from `--config file.json`; flags given on the
command line win over the file. Exit status is 0 on success, 1 when the
experiment fails or a retraction does not converge, 2 on configuration errors.

Example:
    $ retraction-kit retract --manifold circle --method newton --x 1,0 --v 0,0.5
    $ retraction-kit order --manifold ellipse:2,1 --method newton,projective
    $ retraction-kit region --manifold ellipse:2,1 --seed 7 --format json -o region.json
"""

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass, field, fields
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from retraction_kit import __version__
from retraction_kit.analysis import (
    compare_methods,
    estimate_gap_order,
    estimate_order,
    estimate_rate_exponent,
    geometric_ladder,
    lemma_ajnf_trial,
    profile_cost,
    sample_tangent_pairs,
    scan_region,
)
from retraction_kit.exceptions import (
    ConfigError,
    ExperimentError,
    RetractionKitError,
    ValidationError,
)
from retraction_kit.geodesics import exp_analytic, exp_numeric
from retraction_kit.manifolds import (
    ConstraintMap,
    canonical_tangent,
    make_point,
    make_tangent,
    parse_manifold,
)
from retraction_kit.models import (
    ExperimentKind,
    ManifoldPoint,
    OutputFormat,
    ReferenceKind,
    RetractionConfig,
    RetractionMethod,
)
from retraction_kit.reporting import build_metadata, write_table
from retraction_kit.retractions import DEFAULT_TILT_DEGREES, retract, tilted_direction

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

STOCHASTIC_EXPERIMENTS = {
    ExperimentKind.REGION,
    ExperimentKind.COST,
    ExperimentKind.LEMMA,
    ExperimentKind.COMPARE,
}

# Default magnitudes for rate exponents: linear convergence over several
# iterations without leaving the asymptotic regime.
DEFAULT_RATE_MAGNITUDES = {
    RetractionMethod.CHORD_ORTHOGRAPHIC: [0.1, 0.14, 0.2, 0.28],
    RetractionMethod.MODIFIED_NEWTON: [0.25, 0.3, 0.4, 0.5],
}

# Keys that do not influence result rows and stay out of the config hash.
_UNHASHED = ("output", "format", "threads")

_FLOAT_KEYS = ("c0", "t_max", "ratio", "angle", "max_magnitude")
_INT_KEYS = (
    "max_iter", "rungs", "base_points", "directions", "samples", "trials", "n", "c",
    "n_steps", "seed", "threads",
)
_STR_KEYS = ("manifold", "reference", "method_b", "output", "format")
_VECTOR_KEYS = ("x", "v", "magnitudes")
_OPTIONAL_KEYS = ("methods", "x", "v", "magnitudes", "n", "c", "seed", "output", "threads")


# ============================================================================
# Experiment Configuration
# ============================================================================

@dataclass
class ExperimentConfig:
    """Everything needed to reproduce one experiment run."""
    experiment: ExperimentKind
    manifold: str = "circle"
    methods: Optional[List[str]] = None
    x: Optional[List[float]] = None
    v: Optional[List[float]] = None
    c0: float = 1e-10
    max_iter: int = 50
    t_max: float = 0.2
    ratio: float = 0.5
    rungs: int = 8
    reference: str = ReferenceKind.AUTO.value
    angle: float = DEFAULT_TILT_DEGREES
    method_b: str = RetractionMethod.PROJECTIVE.value
    base_points: int = 32
    directions: int = 2
    magnitudes: Optional[List[float]] = None
    samples: int = 100
    max_magnitude: float = 0.5
    trials: int = 10000
    n: Optional[int] = None
    c: Optional[int] = None
    complement: bool = True
    n_steps: int = 100
    seed: Optional[int] = None
    output: Optional[str] = None
    format: str = OutputFormat.CSV.value
    threads: Optional[int] = None
    source_lines: Dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls) if f.name != "source_lines"]

    @classmethod
    def from_dict(
        cls, data: Dict[str, Any], source_lines: Optional[Dict[str, int]] = None
    ) -> "ExperimentConfig":
        """
        Build a config from plain values (config file or merged flags).

        Raises:
            ConfigError: On unknown keys or values of the wrong type
        """
        lines = source_lines or {}
        known = set(cls.field_names())
        for key in data:
            if key not in known:
                raise ConfigError(f"Unknown config key '{key}'", field=key, line=lines.get(key))
        if "experiment" not in data:
            raise ConfigError("experiment is required", field="experiment")
        values = dict(data)
        try:
            values["experiment"] = ExperimentKind(values["experiment"])
        except ValueError:
            raise ConfigError(
                f"Unknown experiment '{values['experiment']}'",
                field="experiment",
                line=lines.get("experiment"),
            ) from None
        for key in list(values):
            if key != "experiment":
                values[key] = _coerce(key, values[key], lines.get(key))
        return cls(source_lines=dict(lines), **values)

    def to_dict(self) -> Dict[str, Any]:
        data = {name: getattr(self, name) for name in self.field_names()}
        data["experiment"] = self.experiment.value
        return data

    def hashable(self) -> Dict[str, Any]:
        """The part of the config that determines the result rows."""
        return {k: v for k, v in self.to_dict().items() if k not in _UNHASHED}

    def _error(self, message: str, key: str) -> ConfigError:
        return ConfigError(message, field=key, line=self.source_lines.get(key))

    def resolve_manifold(self) -> ConstraintMap:
        try:
            return parse_manifold(self.manifold)
        except ValidationError as e:
            raise self._error(e.message, "manifold") from None

    def resolve_methods(self) -> List[RetractionMethod]:
        """Requested methods; newton alone when none were given."""
        methods = [RetractionMethod.NEWTON.value] if self.methods is None else self.methods
        if not methods:
            raise self._error("method list is empty", "methods")
        try:
            return [RetractionMethod.parse(m) for m in methods]
        except ValidationError as e:
            raise self._error(e.message, "methods") from None

    def retraction_config(self) -> RetractionConfig:
        if not self.c0 > 0:
            raise self._error("c0 must be positive", "c0")
        if self.max_iter < 1:
            raise self._error("max_iter must be positive", "max_iter")
        return RetractionConfig(c0=self.c0, max_iter=self.max_iter)

    def validate(self) -> None:
        """
        Check that names resolve and numbers are in range.

        Raises:
            ConfigError: Naming the offending field (and config-file line when known)
        """
        self.resolve_manifold()
        self.resolve_methods()
        self.retraction_config()
        try:
            OutputFormat(self.format)
        except ValueError:
            raise self._error(f"Unknown format '{self.format}'", "format") from None
        try:
            ReferenceKind(self.reference)
        except ValueError:
            raise self._error(f"Unknown reference '{self.reference}'", "reference") from None
        if self.experiment in STOCHASTIC_EXPERIMENTS and self.seed is None:
            raise self._error(f"seed is required for '{self.experiment.value}' experiments", "seed")
        if self.experiment == ExperimentKind.RETRACT and self.v is None:
            raise self._error("retract needs a tangent vector --v", "v")
        if self.experiment in (ExperimentKind.ORDER, ExperimentKind.GAP, ExperimentKind.COMPARE):
            try:
                geometric_ladder(self.t_max, self.ratio, self.rungs)
            except ValidationError as e:
                raise self._error(e.message, "t_max") from None
        for key in ("base_points", "directions", "samples", "trials", "n_steps"):
            if getattr(self, key) < 1:
                raise self._error(f"{key} must be positive", key)
        if self.threads is not None and self.threads < 1:
            raise self._error("threads must be positive", "threads")


def _split(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _coerce(key: str, value: Any, line: Optional[int] = None) -> Any:
    """
    Convert a config value to the type of its field.

    Raises:
        ConfigError: Naming the field when the value has the wrong type
    """
    def wrong(expected: str) -> ConfigError:
        return ConfigError(f"{key} must be {expected}, got {value!r}", field=key, line=line)

    if value is None:
        if key in _OPTIONAL_KEYS:
            return None
        raise wrong("set")
    if key in _FLOAT_KEYS:
        return _to_float(value, wrong("a number"))
    if key in _INT_KEYS:
        number = _to_float(value, wrong("an integer"))
        if not number.is_integer():
            raise wrong("an integer")
        return int(number)
    if key in _STR_KEYS:
        if not isinstance(value, str):
            raise wrong("a string")
        return value
    if key == "complement":
        if not isinstance(value, bool):
            raise wrong("true or false")
        return value
    if key == "methods":
        if isinstance(value, str):
            return _split(value)
        if not isinstance(value, list) or not all(isinstance(m, str) for m in value):
            raise wrong("a list of method names")
        return value
    if key in _VECTOR_KEYS:
        if isinstance(value, str):
            return _parse_floats(value, key, line)
        if not isinstance(value, (list, tuple)):
            raise wrong("a list of numbers")
        return [_to_float(item, wrong("a list of numbers")) for item in value]
    return value


def _to_float(value: Any, error: ConfigError) -> float:
    if isinstance(value, bool):
        raise error
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            raise error from None
    raise error


def _parse_floats(text: str, key: str, line: Optional[int] = None) -> List[float]:
    try:
        return [float(part) for part in _split(text)]
    except ValueError:
        raise ConfigError(
            f"'{text}' is not a comma-separated list of numbers", field=key, line=line
        ) from None


def load_config_file(path: str) -> Tuple[Dict[str, Any], Dict[str, int]]:
    """
    Read a JSON config file.

    Returns:
        (values, key → line number)

    Raises:
        ConfigError: If the file is unreadable or not a JSON object
    """
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e.strerror}", field="config") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"Invalid JSON in {path}: {e.msg}", field="config", line=e.lineno
        ) from None
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object", field="config", line=1)
    lines: Dict[str, int] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        for key in re.findall(r'"([A-Za-z_][A-Za-z0-9_]*)"\s*:', line):
            lines.setdefault(key, number)
    return data, lines


# ============================================================================
# Experiments
# ============================================================================

@dataclass
class ExperimentResult:
    columns: List[str]
    rows: List[Dict[str, Any]]
    summary: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = EXIT_OK


def _base_point(F: ConstraintMap, config: ExperimentConfig) -> ManifoldPoint:
    if config.x is None:
        return F.anchor_point()
    try:
        return make_point(F, config.x)
    except ValidationError as e:
        raise config._error(e.message, "x") from None


def _direction(F: ConstraintMap, config: ExperimentConfig, point: ManifoldPoint) -> np.ndarray:
    if config.v is None:
        return canonical_tangent(F, point)
    try:
        return make_tangent(F, point, config.v).direction
    except ValidationError as e:
        raise config._error(e.message, "v") from None


def _method_kwargs(
    F: ConstraintMap, method: RetractionMethod, point: ManifoldPoint, config: ExperimentConfig
) -> Dict[str, Any]:
    if method == RetractionMethod.OBLIQUE_CONTROL:
        return {"w": tilted_direction(F, point, config.angle)}
    return {}


def _run_retract(F: ConstraintMap, config: ExperimentConfig) -> ExperimentResult:
    point = _base_point(F, config)
    v = _direction(F, config, point)
    cfg = config.retraction_config()
    rows = []
    failed = False
    for method in config.resolve_methods():
        outcome = retract(method, F, point, v, cfg, **_method_kwargs(F, method, point, config))
        failed = failed or not outcome.converged
        rows.append({
            "method": outcome.method,
            "status": outcome.status.value,
            "iterations": outcome.iterations,
            "solver_ops": outcome.solver_ops,
            "point": outcome.final_coords,
            "residual": float(np.linalg.norm(F.eval(outcome.final_coords))),
            "history_label": outcome.history_label,
            "residual_history": outcome.residual_history,
        })
    columns = ["method", "status", "iterations", "solver_ops", "point", "residual",
               "history_label", "residual_history"]
    return ExperimentResult(columns, rows, exit_code=EXIT_FAILURE if failed else EXIT_OK)


def _run_order(F: ConstraintMap, config: ExperimentConfig) -> ExperimentResult:
    point = _base_point(F, config)
    v = _direction(F, config, point)
    ladder = geometric_ladder(config.t_max, config.ratio, config.rungs)
    rows = []
    for method in config.resolve_methods():
        estimate = estimate_order(
            F, point, v, method, ladder, config.reference, config.retraction_config(),
            **_method_kwargs(F, method, point, config),
        )
        rows.append({"method": method.value, **estimate.to_dict()})
    columns = ["method", "slope", "intercept", "leading_constant", "r_squared", "used"]
    summary = {"slope": rows[0]["slope"]} if len(rows) == 1 else {}
    return ExperimentResult(columns, rows, summary)


def _run_gap(F: ConstraintMap, config: ExperimentConfig) -> ExperimentResult:
    point = _base_point(F, config)
    v = _direction(F, config, point)
    method_a = config.resolve_methods()[0]
    try:
        method_b = RetractionMethod.parse(config.method_b)
    except ValidationError as e:
        raise config._error(e.message, "method_b") from None
    estimate = estimate_gap_order(
        F, point, v, method_a, method_b,
        geometric_ladder(config.t_max, config.ratio, config.rungs),
        config.retraction_config(),
    )
    row = {"method_a": method_a.value, "method_b": method_b.value, **estimate.to_dict()}
    columns = ["method_a", "method_b", "slope", "intercept", "r_squared", "used"]
    return ExperimentResult(columns, [row], {"slope": estimate.slope})


def _run_region(F: ConstraintMap, config: ExperimentConfig) -> ExperimentResult:
    methods = config.resolve_methods()
    kwargs = {"magnitudes": config.magnitudes} if config.magnitudes else {}
    scan = scan_region(
        F, methods, config.base_points, config.directions,
        cfg=config.retraction_config(), seed=config.seed, threads=config.threads, **kwargs,
    )
    rows = []
    for bucket, magnitude in enumerate(scan.magnitudes):
        row: Dict[str, Any] = {"magnitude": magnitude, "cells": scan.cells_per_bucket}
        for name in scan.methods:
            row[f"{name}_success"] = scan.success_counts[name][bucket]
        rows.append(row)
    columns = ["magnitude", "cells"] + [f"{name}_success" for name in scan.methods]
    summary: Dict[str, Any] = {"anomalies": scan.anomalies}
    newton, ortho = RetractionMethod.NEWTON.value, RetractionMethod.ORTHOGRAPHIC.value
    if newton in scan.methods and ortho in scan.methods:
        summary["nesting_violations"] = len(scan.nesting_violations(ortho, newton))
    return ExperimentResult(columns, rows, summary)


def _run_cost(F: ConstraintMap, config: ExperimentConfig) -> ExperimentResult:
    if config.methods is None:
        methods = [RetractionMethod.NEWTON, RetractionMethod.ORTHOGRAPHIC]
    else:
        methods = config.resolve_methods()
        if len(methods) != 2:
            raise config._error("cost compares exactly two methods", "methods")
    pairs = sample_tangent_pairs(F, config.samples, config.max_magnitude, seed=config.seed)
    profile = profile_cost(F, pairs, config.retraction_config(), methods, threads=config.threads)
    rows = [cost.to_dict() for cost in profile.methods]
    columns = ["method", "samples", "failures", "failure_rate", "mean_iterations",
               "max_iterations", "mean_solver_ops", "mean_ops_per_iteration"]
    summary = {
        "matched_pairs": profile.matched_pairs,
        "iteration_violations": profile.iteration_violations,
        "max_iteration_excess": profile.max_iteration_excess,
    }
    return ExperimentResult(columns, rows, summary)


def _run_rates(F: ConstraintMap, config: ExperimentConfig) -> ExperimentResult:
    point = _base_point(F, config)
    direction = _direction(F, config, point) if config.v is not None else None
    rows = []
    for method in config.resolve_methods():
        if method not in DEFAULT_RATE_MAGNITUDES:
            supported = ", ".join(m.value for m in DEFAULT_RATE_MAGNITUDES)
            raise config._error(f"rates apply to {supported}", "methods")
        magnitudes = config.magnitudes or DEFAULT_RATE_MAGNITUDES[method]
        exponent = estimate_rate_exponent(F, point, method, magnitudes, direction)
        rows.append({"method": method.value, "exponent": exponent, "magnitudes": magnitudes})
    return ExperimentResult(["method", "exponent", "magnitudes"], rows)


def _run_lemma(F: ConstraintMap, config: ExperimentConfig) -> ExperimentResult:
    report = lemma_ajnf_trial(config.n, config.c, config.trials, config.seed, config.complement)
    columns = ["trials", "violations", "max_gap", "n", "c", "complement"]
    result = ExperimentResult(columns, [report.to_dict()], {"violations": report.violations})
    result.exit_code = EXIT_FAILURE if report.violations else EXIT_OK
    return result


def _run_geodesic(F: ConstraintMap, config: ExperimentConfig) -> ExperimentResult:
    point = _base_point(F, config)
    v = _direction(F, config, point)
    geodesic = exp_numeric(F, point, v, config.n_steps)
    row = {
        "steps": geodesic.steps,
        "endpoint": geodesic.endpoint.coords,
        "end_velocity": geodesic.end_velocity,
        "speed_drift": abs(float(np.linalg.norm(geodesic.end_velocity) - np.linalg.norm(v))),
        "max_drift": geodesic.max_drift,
        "max_correction": geodesic.max_correction,
        "analytic_error": None,
    }
    if F.has_closed_form_geodesics:
        exact = exp_analytic(F, point, v).coords
        row["analytic_error"] = float(np.linalg.norm(geodesic.endpoint.coords - exact))
    return ExperimentResult(list(row), [row])


def _run_compare(F: ConstraintMap, config: ExperimentConfig) -> ExperimentResult:
    point = _base_point(F, config)
    kwargs = {"magnitudes": config.magnitudes} if config.magnitudes else {}
    rows = compare_methods(
        F,
        config.resolve_methods(),
        x=point,
        v=_direction(F, config, point),
        t_ladder=geometric_ladder(config.t_max, config.ratio, config.rungs),
        base_points=config.base_points,
        n_directions=config.directions,
        cfg=config.retraction_config(),
        seed=config.seed,
        threads=config.threads,
        **kwargs,
    )
    columns = ["method", "order_slope", "success_rate", "max_converged_magnitude",
               "mean_iterations", "mean_solver_ops"]
    return ExperimentResult(columns, [row.to_dict() for row in rows])


EXPERIMENTS: Dict[ExperimentKind, Callable[[ConstraintMap, ExperimentConfig], ExperimentResult]] = {
    ExperimentKind.RETRACT: _run_retract,
    ExperimentKind.ORDER: _run_order,
    ExperimentKind.GAP: _run_gap,
    ExperimentKind.REGION: _run_region,
    ExperimentKind.COST: _run_cost,
    ExperimentKind.RATES: _run_rates,
    ExperimentKind.LEMMA: _run_lemma,
    ExperimentKind.GEODESIC: _run_geodesic,
    ExperimentKind.COMPARE: _run_compare,
}


def execute(config: ExperimentConfig) -> ExperimentResult:
    """
    Run the configured experiment and return its table.

    Raises:
        ConfigError: If the configuration is invalid
        ExperimentError: Wrapping any other library failure
    """
    config.validate()
    F = config.resolve_manifold()
    logger.info(f"Running {config.experiment.value} on {F.label}")
    try:
        return EXPERIMENTS[config.experiment](F, config)
    except ConfigError:
        raise
    except RetractionKitError as e:
        raise ExperimentError(
            f"{config.experiment.value} experiment failed: {e.message}",
            cause=e,
            details={"cause": e.code},
        ) from e


def run(config: ExperimentConfig, stream: Optional[TextIO] = None) -> int:
    """
    Run an experiment and write its table.

    Returns:
        Exit status: 0 success, 1 experiment failure, 2 configuration error
    """
    try:
        result = execute(config)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_CONFIG
    except ExperimentError as e:
        logger.error(str(e))
        return EXIT_FAILURE

    metadata = build_metadata(
        experiment=config.experiment.value,
        manifold=config.resolve_manifold().label,
        config=config.hashable(),
        version=__version__,
        seed=config.seed,
        summary=result.summary,
    )
    write_table(
        metadata,
        result.columns,
        result.rows,
        fmt=config.format,
        path=config.output,
        stream=stream if stream is not None else sys.stdout,
    )
    if result.exit_code != EXIT_OK:
        logger.error(f"{config.experiment.value}: one or more runs did not succeed")
    return result.exit_code


# ============================================================================
# Argument Parsing
# ============================================================================

def _floats(text: str) -> List[float]:
    try:
        return [float(part) for part in _split(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"'{text}' is not a comma-separated list of numbers"
        ) from None


def _add_common(parser: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    parser.add_argument("--config", default=None, help="JSON file with any option below")
    parser.add_argument("--manifold", default=s, help="name[:p1,p2,...], e.g. ellipse:2,1")
    parser.add_argument("--method", dest="methods", type=_split, default=s,
                        help="comma-separated retraction methods")
    parser.add_argument("--x", type=_floats, default=s, help="base point, comma-separated")
    parser.add_argument("--v", type=_floats, default=s, help="tangent vector, comma-separated")
    parser.add_argument(
        "--c0", type=float, default=s, help="convergence threshold on the step norm"
    )
    parser.add_argument("--max-iter", dest="max_iter", type=int, default=s)
    parser.add_argument("--seed", type=int, default=s)
    parser.add_argument("-o", "--output", default=s, help="output file (default stdout)")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=s)
    parser.add_argument("--threads", type=int, default=s, help="worker threads")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def _add_ladder(parser: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    parser.add_argument("--t-max", dest="t_max", type=float, default=s)
    parser.add_argument("--ratio", type=float, default=s)
    parser.add_argument("--rungs", type=int, default=s)


def _add_grid(parser: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    parser.add_argument("--base-points", dest="base_points", type=int, default=s)
    parser.add_argument("--directions", type=int, default=s)
    parser.add_argument("--magnitudes", type=_floats, default=s)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retraction-kit",
        description="Compute and compare retractions on constraint manifolds F^-1(0).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="experiment", metavar="EXPERIMENT")
    sub.required = True
    s = argparse.SUPPRESS

    p = sub.add_parser("retract", help="retract one tangent vector")
    _add_common(p)
    p.add_argument("--angle", type=float, default=s, help="oblique_control tilt in degrees")

    p = sub.add_parser("order", help="approximation order against the exponential map")
    _add_common(p)
    _add_ladder(p)
    p.add_argument("--reference", choices=[r.value for r in ReferenceKind], default=s)
    p.add_argument("--angle", type=float, default=s)

    p = sub.add_parser("gap", help="order of the gap between two retractions")
    _add_common(p)
    _add_ladder(p)
    p.add_argument("--method-b", dest="method_b", default=s)

    p = sub.add_parser("region", help="convergence region scan")
    _add_common(p)
    _add_grid(p)

    p = sub.add_parser("cost", help="matched-pair iteration and solver cost")
    _add_common(p)
    p.add_argument("--samples", type=int, default=s)
    p.add_argument("--max-magnitude", dest="max_magnitude", type=float, default=s)

    p = sub.add_parser("rates", help="contraction-rate exponents")
    _add_common(p)
    p.add_argument("--magnitudes", type=_floats, default=s)

    p = sub.add_parser("lemma", help="randomized pseudoinverse norm bound check")
    _add_common(p)
    p.add_argument("--n", type=int, default=s)
    p.add_argument("--c", type=int, default=s)
    p.add_argument("--trials", type=int, default=s)
    p.add_argument("--no-complement", dest="complement", action="store_false", default=s)

    p = sub.add_parser("geodesic", help="numerically integrated exponential map")
    _add_common(p)
    p.add_argument("--n-steps", dest="n_steps", type=int, default=s)

    p = sub.add_parser("compare", help="measured order, stability and cost per method")
    _add_common(p)
    _add_ladder(p)
    _add_grid(p)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Merge a config file (if any) with explicit flags; flags win."""
    values: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    if args.config:
        values, lines = load_config_file(args.config)
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "verbose")}
    if "experiment" in values and values["experiment"] != flags["experiment"]:
        logger.warning(
            f"Config file experiment '{values['experiment']}' overridden by command line"
        )
    values.update(flags)
    return ExperimentConfig.from_dict(values, lines)


def setup_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        config = config_from_args(args)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_CONFIG
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
