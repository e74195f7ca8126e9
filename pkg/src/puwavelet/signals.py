"""Deterministic test fields with controlled singularities and smooth cutoffs.

Singular directions are expected to lie strictly inside the positive
quadrant: frequency cones live in (R_>0)^2 and spectra concentrated on a
coordinate axis are invisible to every bounded-frequency node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .grids import SpatialGrid
from .profiles import smooth_step
from .transform import SampledField

SIGNAL_KINDS = (
    "gaussian",
    "plane_wave_bump",
    "half_plane_power",
    "disk_indicator_smoothed",
    "bump",
)


@dataclass(frozen=True)
class SignalSpec:
    """Parameters for one generated field; unused fields are ignored per kind."""

    kind: str
    center: tuple[float, ...] = (0.5, 0.5)
    width: float = 0.05
    normal: tuple[float, ...] | None = None       # half_plane_power edge normal
    exponent: float = 1.0                          # half_plane_power alpha
    modulation: tuple[float, ...] | None = None    # plane-wave frequency tau0
    radius: float = 0.2                            # disk / bump inner radius
    window_inner: float | None = None              # boundary-decay window radii
    window_outer: float | None = None

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise ConfigurationError(
                f"unknown signal kind {self.kind!r}; choose from {SIGNAL_KINDS}"
            )
        if self.kind == "half_plane_power":
            if self.exponent <= 0:
                raise ConfigurationError("half_plane_power requires exponent > 0")
            if self.normal is None:
                raise ConfigurationError("half_plane_power requires an edge normal")
            nrm = math.hypot(*self.normal)
            if nrm == 0:
                raise ConfigurationError("edge normal must be nonzero")
            object.__setattr__(self, "normal", tuple(v / nrm for v in self.normal))
        if self.kind == "plane_wave_bump" and self.modulation is None:
            raise ConfigurationError("plane_wave_bump requires a modulation frequency")
        if self.width <= 0:
            raise ConfigurationError("width must be positive")


def make_cutoff(x0, inner_r: float, outer_r: float, grid: SpatialGrid) -> SampledField:
    """Smooth radial cutoff: identically 1 inside inner_r, 0 outside outer_r."""
    if not 0 < inner_r < outer_r:
        raise ConfigurationError("need 0 < inner_r < outer_r")
    for c, extent in zip(x0, grid.extent):
        if c - outer_r < 0 or c + outer_r > extent:
            raise ConfigurationError(
                f"cutoff ball (center {x0}, radius {outer_r}) does not fit in the grid"
            )
    mesh = grid.meshgrid()
    dist = np.sqrt(sum((m - c) ** 2 for m, c in zip(mesh, x0)))
    values = smooth_step((outer_r - dist) / (outer_r - inner_r))
    return SampledField(grid=grid, values=values, domain_tag="space")


def _default_window(spec: SignalSpec, grid: SpatialGrid) -> tuple[float, float]:
    lmin = min(grid.extent)
    inner = spec.window_inner if spec.window_inner is not None else 0.30 * lmin
    outer = spec.window_outer if spec.window_outer is not None else 0.46 * lmin
    return inner, outer


def generate(spec: SignalSpec, grid: SpatialGrid) -> SampledField:
    """Render the field described by ``spec`` on ``grid``."""
    mesh = grid.meshgrid()

    if spec.kind == "gaussian":
        # periodize by summing wrapped copies so the sampled spectrum is the
        # exact continuous transform at bin frequencies (the per-copy phase
        # matters when the modulation is not a bin frequency)
        reach = int(math.ceil(9.0 * spec.width / min(grid.extent)))
        values = np.zeros(grid.shape, dtype=complex if spec.modulation else float)
        shifts = range(-reach, reach + 1)
        for m0 in shifts:
            for m1 in shifts if grid.n_dims == 2 else (0,):
                offs = (m0 * grid.extent[0],) + (
                    (m1 * grid.extent[1],) if grid.n_dims == 2 else ()
                )
                pts = [m + o for m, o in zip(mesh, offs)]
                r2 = sum((p - c) ** 2 for p, c in zip(pts, spec.center))
                copy = np.exp(-r2 / (2.0 * spec.width**2))
                if spec.modulation is not None:
                    phase = sum(t * p for t, p in zip(spec.modulation, pts))
                    copy = copy * np.exp(1j * phase)
                values += copy

    elif spec.kind == "plane_wave_bump":
        inner, outer = _default_window(spec, grid)
        window = make_cutoff(spec.center, inner, outer, grid).values
        phase = sum(t * m for t, m in zip(spec.modulation, mesh))
        values = np.exp(1j * phase) * window

    elif spec.kind == "half_plane_power":
        inner, outer = _default_window(spec, grid)
        window = make_cutoff(spec.center, inner, outer, grid).values
        d = sum(n * (m - c) for n, m, c in zip(spec.normal, mesh, spec.center))
        values = np.where(d > 0.0, np.abs(d) ** spec.exponent, 0.0) * window

    elif spec.kind == "disk_indicator_smoothed":
        dist = np.sqrt(sum((m - c) ** 2 for m, c in zip(mesh, spec.center)))
        values = smooth_step((spec.radius - dist) / spec.width)

    elif spec.kind == "bump":
        return make_cutoff(spec.center, spec.radius, spec.radius + spec.width, grid)

    else:  # pragma: no cover - guarded in SignalSpec
        raise ConfigurationError(f"unknown signal kind {spec.kind!r}")

    return SampledField(grid=grid, values=values, domain_tag="space")
