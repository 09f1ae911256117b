"""Batch command-line interface.

Subcommands: force-sweep | z-spectrum | toy-model | validate.  Scenario
files are YAML (documented in the README); outputs are CSV files plus a
rendered figure per run.  Exit codes: 0 success, 2 configuration error,
3 numerical failure.
"""

import argparse
import concurrent.futures
import json
import logging
import sys
from pathlib import Path

import numpy as np
from scipy.constants import c as C_LIGHT

from . import __version__
from .config import ConfigError, load_config
from .force import QuadratureConvergenceError, casimir_force
from .geodesic import (
    NoClosedOrbitError,
    OpenOrbitError,
    SingularRegionError,
    WindingDivergenceError,
    orbit_dump_rows,
    solve_closed_geodesic,
    toy_family_metric,
    toy_orbit,
    toy_sweep_rows,
)
from .loopalgebra import word_contributions, z_function
from .media import MaterialError, MetricDomainError, SingularMetricError
from .scattering import MieInstabilityError
from .specialfn import BesselDomainError, BesselOverflowError
from .translation import OracleQuadratureError
from . import report
from .validate import run_validation

log = logging.getLogger("casloop")

NUMERICAL_ERRORS = (
    QuadratureConvergenceError, NoClosedOrbitError, SingularRegionError,
    OpenOrbitError, WindingDivergenceError, MieInstabilityError,
    OracleQuadratureError, BesselDomainError, BesselOverflowError,
    MaterialError, MetricDomainError, SingularMetricError,
    ArithmeticError,
)


def _swept_system(config, separation):
    """Scene with the swept sphere moved to `separation` from the target."""
    from .media import SphereSystem

    system = config.system
    t = config.force_target - 1
    s = config.force_sweep_sphere - 1
    axis = system.separation(s, t)
    axis = axis / np.linalg.norm(axis)
    centers = system.centers.copy()
    centers[s] = centers[t] + separation * axis
    return SphereSystem(centers=centers, radii=system.radii,
                        materials=system.materials,
                        background=system.background)


def _force_row(config, separation):
    system = _swept_system(config, separation)
    res = casimir_force(system, target=config.force_target,
                        temperature=config.temperature, l_max=config.l_max,
                        order_max=config.order_max,
                        quad_nodes=config.quadrature_nodes)
    order2 = res.per_order.get(2, np.zeros(3))[2]
    order4 = res.per_order.get(4, np.zeros(3))[2]
    log.info("separation %.4e m: Fz = %.6e N (quad err %.1e, %d nodes)",
             separation, res.force[2], res.error_estimate, res.node_count)
    return (separation, res.force[0], res.force[1], res.force[2],
            order2, order4, res.error_estimate, res.l_max)


def run_force_sweep(config, out_dir, threads=1):
    if config.system is None or config.system.size < 2:
        raise ConfigError("force-sweep needs a spheres section with >= 2 "
                          "spheres")
    seps = config.force_separations
    if not seps:
        base = float(np.linalg.norm(config.system.separation(
            config.force_sweep_sphere - 1, config.force_target - 1)))
        seps = tuple(base * f for f in np.geomspace(1.0, 3.0, 7))
        log.info("no force.separations given; sweeping %s", seps)
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(lambda s: _force_row(config, s), seps))
    else:
        rows = [_force_row(config, s) for s in seps]
    csv_path = report.write_force_sweep_csv(out_dir / "force_sweep.csv",
                                            rows, config.config_sha256)
    fig_path = report.render_force_sweep_figure(out_dir / "force_sweep.png",
                                                rows)
    return [csv_path, fig_path]


def run_z_spectrum(config, out_dir, threads=1):
    if config.system is None or config.system.size < 2:
        raise ConfigError("z-spectrum needs a spheres section with >= 2 "
                          "spheres")
    rows = []
    word_rows = []
    for omega in config.z_omegas:
        z = z_function(config.system, omega, config.l_max, config.order_max,
                       anchor=config.z_anchor)
        rows.append((omega, z.value))
        for label, order, trace in word_contributions(
                config.system, omega, config.l_max, config.order_max,
                anchor=config.z_anchor):
            word_rows.append((omega, label, order, trace))
        log.info("omega %.4e rad/s: Z = %.6e", omega, z.value)
    csv_path = report.write_z_spectrum_csv(out_dir / "z_spectrum.csv", rows,
                                           config.config_sha256)
    words_path = report.write_word_csv(out_dir / "loop_words.csv", word_rows,
                                       config.config_sha256)
    fig_path = report.render_z_spectrum_figure(out_dir / "z_spectrum.png",
                                               rows)
    return [csv_path, words_path, fig_path]


def run_toy_model(config, out_dir, threads=1):
    spec = config.toy_spec
    if spec is None:
        raise ConfigError("toy-model needs a toy_model section")
    conic = toy_orbit(spec)
    log.info("conic through base point: p = %.6g, ecc = %.6g, "
             "orientation = %.6g rad", conic.semi_latus, conic.eccentricity,
             conic.orientation)
    r0, _ = spec.base_polar
    omega_ref = C_LIGHT / (2.0 * np.pi
                           * np.sqrt(spec.length_scale * r0))
    omegas = tuple(omega_ref * np.geomspace(0.3, 30.0,
                                            config.toy_omega_count))
    sweep = toy_sweep_rows(spec, omegas,
                           eccentricities=config.toy_eccentricities or None)
    metric = toy_family_metric(spec, omega_ref)
    orbit = solve_closed_geodesic(metric, spec.base_polar, np.pi / 2)
    log.info("closed orbit: residual %.2e, period %.4g",
             orbit.closure_residual, orbit.period)
    dump = orbit_dump_rows(orbit)
    sweep_path = report.write_toy_sweep_csv(out_dir / "toy_sweep.csv", sweep,
                                            config.config_sha256)
    orbit_path = report.write_orbit_csv(out_dir / "orbit.csv", dump,
                                        config.config_sha256)
    fig_path = report.render_toy_figure(out_dir / "toy_model.png", sweep,
                                        dump)
    summary = out_dir / "conic_summary.txt"
    with open(summary, "w") as fh:
        fh.write(f"# casloop {__version__}\n")
        fh.write(f"# config sha256: {config.config_sha256}\n")
        fh.write(f"semi_latus_rectum: {conic.semi_latus:.17g}\n")
        fh.write(f"eccentricity: {conic.eccentricity:.17g}\n")
        fh.write(f"orientation_rad: {conic.orientation:.17g}\n")
        fh.write(f"closure_residual: {orbit.closure_residual:.3e}\n")
    return [sweep_path, orbit_path, fig_path, summary]


def run_validate(config, out_dir, threads=1):
    results = run_validation()
    width = max(len(name) for name, _, _ in results)
    print(f"{'check':<{width}}  status  detail")
    for name, passed, detail in results:
        print(f"{name:<{width}}  {'PASS' if passed else 'FAIL'}    {detail}")
    if not all(passed for _, passed, _ in results):
        raise ArithmeticError("validation suite reported failures")
    return []


RUNNERS = {
    "force-sweep": run_force_sweep,
    "z-spectrum": run_z_spectrum,
    "toy-model": run_toy_model,
    "validate": run_validate,
}


def run_scenario(config, run_kind, out_dir, threads=1):
    """Execute one run kind; returns the list of artifact paths."""
    if config.run is not None and config.run != run_kind:
        raise ConfigError(
            f"config requests run {config.run!r} but the {run_kind!r} "
            "subcommand was invoked")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    log.info("casloop %s | run %s | config sha256 %s", __version__,
             run_kind, config.config_sha256)
    log.info("truncation: l_max=%d order_max=%d | temperature %.3g K | "
             "deterministic=%s", config.l_max, config.order_max,
             config.temperature, config.deterministic)
    if config.defaults_used:
        log.info("defaults applied: %s", ", ".join(config.defaults_used))
    return RUNNERS[run_kind](config, out_dir, threads=threads)


def _write_error_record(out_dir, kind, exc):
    try:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "error.json", "w") as fh:
            json.dump({"error": type(exc).__name__, "kind": kind,
                       "message": str(exc)}, fh, indent=2)
    except OSError:
        pass


def build_parser():
    parser = argparse.ArgumentParser(
        prog="casloop",
        description="Casimir dispersion forces from closed scattering "
                    "loops: sphere scenes, loop traces, and the 2D toy "
                    "model.")
    parser.add_argument("--version", action="version",
                        version=f"casloop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("force-sweep", "force on a target sphere over separations"),
            ("z-spectrum", "loop trace Z over a frequency grid"),
            ("toy-model", "closed-orbit toy model sweep and orbit dump"),
            ("validate", "run the built-in oracle cross-checks")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=(name != "validate"),
                       help="scenario YAML file")
        p.add_argument("--out", default=None,
                       help="output directory (default: config 'output')")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for sweep points")
        p.add_argument("--log-level", default="info",
                       choices=["debug", "info", "warning", "error"])
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper()),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.config:
            config = load_config(args.config)
        else:
            from .config import ScenarioConfig
            config = ScenarioConfig(
                run=None, system=None, background=None, l_max=3,
                order_max=4, temperature=0.0, deterministic=True,
                output="out", force_target=1, force_sweep_sphere=2,
                force_separations=(), quadrature_nodes=48, z_anchor=1,
                z_omegas=(), toy_spec=None, toy_eccentricities=(),
                toy_omega_count=16, sphere_material_names=(),
                config_sha256="none")
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    out_dir = args.out if args.out is not None else config.output
    try:
        artifacts = run_scenario(config, args.command, out_dir,
                                 threads=args.threads)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        _write_error_record(out_dir, type(exc).__name__, exc)
        return 3
    for path in artifacts:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
