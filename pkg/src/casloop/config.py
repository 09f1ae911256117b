"""Scenario configuration: YAML ingestion, validation, defaults.

The config file is the reproducibility artifact: every run records its
sha256 and identical configs produce byte-identical primary CSV outputs.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np
import yaml

from .geodesic import ToyModelSpec
from .media import (
    VACUUM,
    MaterialModel,
    SphereSystem,
    constant_material,
    drude_lorentz_material,
)

RUN_KINDS = ("force-sweep", "z-spectrum", "toy-model", "validate")

DEFAULT_L_MAX = 3
DEFAULT_ORDER_MAX = 4
DEFAULT_TEMPERATURE = 0.0


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    run: str
    system: object                 # SphereSystem or None
    background: MaterialModel
    l_max: int
    order_max: int
    temperature: float
    deterministic: bool
    output: str
    force_target: int
    force_sweep_sphere: int
    force_separations: tuple
    quadrature_nodes: int
    z_anchor: int
    z_omegas: tuple
    toy_spec: object               # ToyModelSpec or None
    toy_eccentricities: tuple
    toy_omega_count: int
    sphere_material_names: tuple
    config_sha256: str
    defaults_used: tuple = field(default_factory=tuple)


def _require(mapping, key, context):
    if key not in mapping:
        raise ConfigError(f"missing key {key!r} in {context}")
    return mapping[key]


def _build_material(name, node):
    kind = _require(node, "kind", f"material {name!r}")
    if kind == "constant":
        return constant_material(node.get("eps", 1.0), node.get("mu", 1.0),
                                 name=name)
    if kind == "drude-lorentz":
        def osc_list(key):
            out = []
            for osc in node.get(key, []):
                out.append((float(osc["strength"]), float(osc["resonance"]),
                            float(osc.get("damping", 0.0))))
            return out
        return drude_lorentz_material(osc_list("eps_oscillators"),
                                      osc_list("mu_oscillators"), name=name)
    raise ConfigError(f"material {name!r}: unknown kind {kind!r} "
                      "(expected constant or drude-lorentz)")


def _material_table(doc):
    table = {"vacuum": VACUUM}
    for name, node in (doc.get("materials") or {}).items():
        table[name] = _build_material(name, node)
    return table


def load_config(path):
    """Parse and validate a scenario file.

    Raises ConfigError with line/column for parse failures and with the
    offending key for validation failures.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    sha = hashlib.sha256(raw).hexdigest()
    try:
        doc = yaml.safe_load(raw)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = (f"line {mark.line + 1}, column {mark.column + 1}"
                 if mark else "unknown location")
        raise ConfigError(f"config parse error at {where}: "
                          f"{exc.problem}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a mapping")

    defaults_used = []
    run = doc.get("run")
    if run is not None and run not in RUN_KINDS:
        raise ConfigError(f"run: unknown run kind {run!r} "
                          f"(expected one of {', '.join(RUN_KINDS)})")

    trunc = doc.get("truncation") or {}
    l_max = int(trunc.get("l_max", DEFAULT_L_MAX))
    if "l_max" not in trunc:
        defaults_used.append(f"l_max={DEFAULT_L_MAX}")
    order_max = int(trunc.get("order_max", DEFAULT_ORDER_MAX))
    if "order_max" not in trunc:
        defaults_used.append(f"order_max={DEFAULT_ORDER_MAX}")
    if l_max < 1:
        raise ConfigError("truncation.l_max must be >= 1")
    if order_max < 2:
        raise ConfigError("truncation.order_max must be >= 2")

    temperature = float(doc.get("temperature", DEFAULT_TEMPERATURE))
    if "temperature" not in doc:
        defaults_used.append(f"temperature={DEFAULT_TEMPERATURE}")
    if temperature < 0:
        raise ConfigError("temperature must be >= 0 kelvin")

    materials = _material_table(doc)
    bg_name = doc.get("background", "vacuum")
    if bg_name not in materials:
        raise ConfigError(
            f"background: unknown material {bg_name!r}; available: "
            + ", ".join(sorted(materials)))
    background = materials[bg_name]

    system = None
    names = ()
    spheres = doc.get("spheres")
    if spheres:
        centers, radii, models, names_l = [], [], [], []
        for i, node in enumerate(spheres, start=1):
            center = _require(node, "center", f"spheres[{i}]")
            radius = float(_require(node, "radius", f"spheres[{i}]"))
            if radius <= 0:
                raise ConfigError(f"spheres[{i}].radius must be positive")
            mat_name = _require(node, "material", f"spheres[{i}]")
            if mat_name not in materials:
                raise ConfigError(
                    f"spheres[{i}].material: unknown material "
                    f"{mat_name!r}; available: "
                    + ", ".join(sorted(materials)))
            centers.append([float(x) for x in center])
            radii.append(radius)
            models.append(materials[mat_name])
            names_l.append(mat_name)
        try:
            system = SphereSystem(centers=np.array(centers),
                                  radii=np.array(radii),
                                  materials=tuple(models),
                                  background=background)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        names = tuple(names_l)

    force = doc.get("force") or {}
    target = int(force.get("target", 1))
    sweep_sphere = int(force.get("sweep_sphere", 2))
    separations = tuple(float(s) for s in force.get("separations", ()))
    quad_nodes = int(force.get("quadrature_nodes", 48))
    if "quadrature_nodes" not in force:
        defaults_used.append("quadrature_nodes=48")
    if quad_nodes < 8:
        raise ConfigError("force.quadrature_nodes must be >= 8")

    zconf = doc.get("z_spectrum") or {}
    z_anchor = int(zconf.get("anchor", 1))
    if "omegas" in zconf:
        z_omegas = tuple(float(w) for w in zconf["omegas"])
    else:
        lo = float(zconf.get("omega_min", 1e14))
        hi = float(zconf.get("omega_max", 1e16))
        count = int(zconf.get("count", 16))
        if lo <= 0 or hi <= lo:
            raise ConfigError("z_spectrum: need 0 < omega_min < omega_max")
        z_omegas = tuple(np.geomspace(lo, hi, count))

    toy = doc.get("toy_model") or {}
    toy_spec = None
    toy_ecc = ()
    toy_omega_count = int(toy.get("omega_count", 16))
    if toy:
        toy_spec = ToyModelSpec(
            length_scale=float(_require(toy, "length_scale", "toy_model")),
            energy=float(toy.get("energy", 1.0)),
            base_point=tuple(float(x) for x in toy.get("base_point",
                                                       (1.0, 0.0))))
        e_max = float(toy.get("eccentricity_max", 0.8))
        e_count = int(toy.get("eccentricity_count", 9))
        if not 0.0 <= e_max < 1.0:
            raise ConfigError("toy_model.eccentricity_max must be in [0, 1)")
        toy_ecc = tuple(np.linspace(0.0, e_max, e_count))

    return ScenarioConfig(
        run=run, system=system, background=background, l_max=l_max,
        order_max=order_max, temperature=temperature,
        deterministic=bool(doc.get("deterministic", True)),
        output=str(doc.get("output", "out")),
        force_target=target, force_sweep_sphere=sweep_sphere,
        force_separations=separations, quadrature_nodes=quad_nodes,
        z_anchor=z_anchor, z_omegas=z_omegas, toy_spec=toy_spec,
        toy_eccentricities=toy_ecc, toy_omega_count=toy_omega_count,
        sphere_material_names=names, config_sha256=sha,
        defaults_used=tuple(defaults_used))
