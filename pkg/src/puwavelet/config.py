"""JSON run configuration: parsing, validation, canonical serialization.

``serialize_config(parse_config(d)) == d`` holds for configs written in the
canonical form (the shipped examples are generated that way).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError
from .grids import FrequencyGrid, Neighborhood, SpatialGrid, make_frequency_grid
from .microlocal import Cone, MicrolocalQuery
from .profiles import PROFILE_KINDS
from .signals import SignalSpec

DEFAULT_OUTPUTS = {
    "volume": "volume.puwv",
    "field": "reconstruction.pufd",
    "report": "theorem_report.json",
    "energy": "energy_map.csv",
    "coverage": "coverage.csv",
}


@dataclass(frozen=True)
class EnergyMapSpec:
    """Query lattice for the s_hat sweep: x0 stride in pixels, direction count."""

    stride: int = 32
    directions: int = 3
    radius: float = 0.08

    def __post_init__(self):
        if self.stride < 1 or self.directions < 1 or self.radius <= 0:
            raise ConfigurationError("invalid energy_map parameters")


@dataclass
class RunConfig:
    signal: SignalSpec
    spatial: SpatialGrid
    frequency: FrequencyGrid
    profile_kind: str = "smooth_bump"
    queries: list[MicrolocalQuery] = field(default_factory=list)
    s_grid: tuple[float, ...] = (0.0, 0.5, 1.0, 1.5, 2.0)
    tolerance: float = 0.25
    seed: int = 0
    energy_map: EnergyMapSpec = field(default_factory=EnergyMapSpec)
    outputs: dict = field(default_factory=lambda: dict(DEFAULT_OUTPUTS))


def _require_keys(d: dict, allowed: set[str], context: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigurationError(f"unknown {context} keys: {sorted(unknown)}")


def _parse_signal(d: dict) -> SignalSpec:
    allowed = {
        "kind", "center", "width", "normal", "exponent",
        "modulation", "radius", "window_inner", "window_outer",
    }
    _require_keys(d, allowed, "signal")
    kwargs = dict(d)
    for key in ("center", "normal", "modulation"):
        if kwargs.get(key) is not None:
            kwargs[key] = tuple(float(v) for v in kwargs[key])
    return SignalSpec(**kwargs)


def _parse_query(d: dict) -> MicrolocalQuery:
    allowed = {"x0", "xi0", "radius", "norm", "ratio_factor", "s_grid"}
    _require_keys(d, allowed, "query")
    x0 = tuple(float(v) for v in d["x0"])
    xi0 = tuple(float(v) for v in d["xi0"])
    radius = float(d.get("radius", 0.1))
    norm = d.get("norm", "euclidean")
    rho = float(d.get("ratio_factor", 5.0))
    s_grid = tuple(float(v) for v in d.get("s_grid", (0.0, 0.5, 1.0, 1.5, 2.0)))
    return MicrolocalQuery(
        x0=x0,
        xi0=xi0,
        neighborhood=Neighborhood(center=x0, radius=radius, norm=norm),
        cone=Cone(center=xi0, ratio_factor=rho),
        s_grid=s_grid,
    )


def parse_config(d: dict) -> RunConfig:
    allowed = {
        "signal", "spatial", "frequency", "profile_kind", "queries",
        "s_grid", "tolerance", "seed", "energy_map", "outputs",
    }
    _require_keys(d, allowed, "config")
    for key in ("signal", "spatial", "frequency"):
        if key not in d:
            raise ConfigurationError(f"missing config section {key!r}")

    spatial_d = d["spatial"]
    _require_keys(spatial_d, {"extent", "samples_per_axis"}, "spatial")
    spatial = SpatialGrid(
        n_dims=len(spatial_d["extent"]),
        extent=tuple(float(v) for v in spatial_d["extent"]),
        samples_per_axis=int(spatial_d["samples_per_axis"]),
    )

    freq_d = d["frequency"]
    _require_keys(freq_d, {"xi_min", "voices", "octaves", "quadrants"}, "frequency")
    frequency = make_frequency_grid(
        freq_d["xi_min"], freq_d["voices"], freq_d["octaves"], freq_d["quadrants"]
    )

    profile_kind = d.get("profile_kind", "smooth_bump")
    if profile_kind not in PROFILE_KINDS:
        raise ConfigurationError(f"unknown profile_kind {profile_kind!r}")

    outputs = dict(DEFAULT_OUTPUTS)
    outputs.update(d.get("outputs", {}))
    _require_keys(outputs, set(DEFAULT_OUTPUTS), "outputs")

    em = d.get("energy_map", {})
    _require_keys(em, {"stride", "directions", "radius"}, "energy_map")

    cfg = RunConfig(
        signal=_parse_signal(d["signal"]),
        spatial=spatial,
        frequency=frequency,
        profile_kind=profile_kind,
        queries=[_parse_query(q) for q in d.get("queries", [])],
        s_grid=tuple(float(v) for v in d.get("s_grid", (0.0, 0.5, 1.0, 1.5, 2.0))),
        tolerance=float(d.get("tolerance", 0.25)),
        seed=int(d.get("seed", 0)),
        energy_map=EnergyMapSpec(
            stride=int(em.get("stride", 32)),
            directions=int(em.get("directions", 3)),
            radius=float(em.get("radius", 0.08)),
        ),
        outputs=outputs,
    )
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    sg, fg = cfg.spatial, cfg.frequency
    if fg.n_dims != sg.n_dims:
        raise ConfigurationError("spatial and frequency grid dimensionality differ")
    top = 2.0 * fg.xi_max
    for axis in range(sg.n_dims):
        if top > sg.nyquist(axis) * (1.0 + 1e-12):
            raise ConfigurationError(
                f"frequency support {top:.6g} exceeds Nyquist {sg.nyquist(axis):.6g} on axis {axis}"
            )
    for q in cfg.queries:
        if any(c <= 0 for c in q.xi0):
            raise ConfigurationError("query directions must lie in the open positive quadrant")
        for c, e, h in zip(q.x0, sg.extent, sg.spacing):
            if not 0 <= c <= e:
                raise ConfigurationError(f"query point {q.x0} outside the domain")
            if abs(c / h - round(c / h)) > 1e-9:
                raise ConfigurationError(f"query point {q.x0} is not on the sampling grid")
        for c, e in zip(q.x0, sg.extent):
            r = 2.0 * q.neighborhood.radius
            if c - r < 0 or c + r > e:
                raise ConfigurationError(
                    f"cutoff support around {q.x0} (radius {r:.3g}) leaves the domain"
                )


def serialize_config(cfg: RunConfig) -> dict:
    d = {
        "signal": {
            "kind": cfg.signal.kind,
            "center": list(cfg.signal.center),
            "width": cfg.signal.width,
        },
        "spatial": {
            "extent": list(cfg.spatial.extent),
            "samples_per_axis": cfg.spatial.samples_per_axis,
        },
        "frequency": {
            "xi_min": cfg.frequency.xi_min,
            "voices": cfg.frequency.voices_per_octave,
            "octaves": cfg.frequency.octaves,
            "quadrants": [list(q) for q in cfg.frequency.quadrants],
        },
        "profile_kind": cfg.profile_kind,
        "queries": [
            {
                "x0": list(q.x0),
                "xi0": list(q.xi0),
                "radius": q.neighborhood.radius,
                "norm": q.neighborhood.norm,
                "ratio_factor": q.cone.ratio_factor,
                "s_grid": list(q.s_grid),
            }
            for q in cfg.queries
        ],
        "s_grid": list(cfg.s_grid),
        "tolerance": cfg.tolerance,
        "seed": cfg.seed,
        "energy_map": {
            "stride": cfg.energy_map.stride,
            "directions": cfg.energy_map.directions,
            "radius": cfg.energy_map.radius,
        },
        "outputs": dict(cfg.outputs),
    }
    sig = d["signal"]
    if cfg.signal.normal is not None:
        sig["normal"] = list(cfg.signal.normal)
        sig["exponent"] = cfg.signal.exponent
    if cfg.signal.modulation is not None:
        sig["modulation"] = list(cfg.signal.modulation)
    if cfg.signal.kind in ("disk_indicator_smoothed", "bump"):
        sig["radius"] = cfg.signal.radius
    if cfg.signal.window_inner is not None:
        sig["window_inner"] = cfg.signal.window_inner
    if cfg.signal.window_outer is not None:
        sig["window_outer"] = cfg.signal.window_outer
    return d


def load_config(path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from None
    return parse_config(raw)


def save_config(path, cfg: RunConfig) -> None:
    Path(path).write_text(json.dumps(serialize_config(cfg), indent=2, sort_keys=True) + "\n")
