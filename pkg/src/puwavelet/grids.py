"""Spatial sampling grids and geometric frequency grids.

Frequency nodes are per-axis geometric sequences ``xi_min * 2**(k/V)`` with V
voices per octave over K octaves, replicated over the requested sign
quadrants.  In log2 coordinates the singular measure ``dxi/|xi_1 xi_2|``
becomes uniform, so every 2-D node carries the same quadrature weight
``(ln2/V)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic grid over [0, extent) per axis."""

    n_dims: int
    extent: tuple[float, ...]
    samples_per_axis: int

    def __post_init__(self):
        if self.n_dims not in (1, 2):
            raise ConfigurationError(f"n_dims must be 1 or 2, got {self.n_dims}")
        if len(self.extent) != self.n_dims:
            raise ConfigurationError("extent length must match n_dims")
        if any(e <= 0 for e in self.extent):
            raise ConfigurationError("extent must be positive")
        m = self.samples_per_axis
        if m < 2 or (m & (m - 1)) != 0:
            raise ConfigurationError(
                f"samples_per_axis must be a power of two >= 2, got {m}"
            )

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.samples_per_axis,) * self.n_dims

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(e / self.samples_per_axis for e in self.extent)

    @property
    def pixel_area(self) -> float:
        return float(np.prod(self.spacing))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        return np.arange(self.samples_per_axis) * self.spacing[axis]

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        axes = [self.axis_coordinates(a) for a in range(self.n_dims)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def angular_frequencies(self, axis: int) -> np.ndarray:
        """Physical angular frequencies of the FFT bins along one axis."""
        return 2.0 * math.pi * np.fft.fftfreq(self.samples_per_axis, d=self.spacing[axis])

    def nyquist(self, axis: int) -> float:
        return math.pi / self.spacing[axis]

    @property
    def spectral_cell(self) -> float:
        """Area of one FFT bin in angular-frequency space: prod(2*pi/extent)."""
        return float(np.prod([2.0 * math.pi / e for e in self.extent]))


def make_spatial_grid(extent, samples_per_axis: int) -> SpatialGrid:
    extent = tuple(float(e) for e in np.atleast_1d(extent))
    return SpatialGrid(n_dims=len(extent), extent=extent, samples_per_axis=int(samples_per_axis))


@dataclass(frozen=True)
class FrequencyGrid:
    """Geometric per-axis frequency nodes replicated over sign quadrants."""

    xi_min: float
    voices_per_octave: int
    octaves: int
    quadrants: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.xi_min <= 0:
            raise ConfigurationError(f"xi_min must be positive, got {self.xi_min}")
        if self.voices_per_octave < 1:
            raise ConfigurationError("voices_per_octave must be >= 1")
        if self.octaves < 1:
            raise ConfigurationError("octaves must be >= 1")
        if not self.quadrants:
            raise ConfigurationError("at least one quadrant is required")
        n = len(self.quadrants[0])
        for q in self.quadrants:
            if len(q) != n or any(s not in (-1, 1) for s in q):
                raise ConfigurationError(f"bad quadrant sign vector: {q}")
        if len(set(self.quadrants)) != len(self.quadrants):
            raise ConfigurationError("duplicate quadrants")

    @property
    def n_dims(self) -> int:
        return len(self.quadrants[0])

    @property
    def nodes_per_axis(self) -> int:
        return self.voices_per_octave * self.octaves

    @property
    def axis_nodes(self) -> np.ndarray:
        """Positive per-axis magnitudes xi_min * 2**(k/V), strictly increasing."""
        k = np.arange(self.nodes_per_axis, dtype=np.float64)
        return self.xi_min * 2.0 ** (k / self.voices_per_octave)

    @property
    def xi_max(self) -> float:
        return float(self.axis_nodes[-1])

    @property
    def log_weight(self) -> float:
        """Per-axis quadrature weight for dxi/|xi| on the geometric nodes."""
        return math.log(2.0) / self.voices_per_octave

    @property
    def node_weight(self) -> float:
        """Weight of one n-D node for dxi/|xi_1 ... xi_n|."""
        return self.log_weight**self.n_dims

    @property
    def n_nodes(self) -> int:
        return len(self.quadrants) * self.nodes_per_axis**self.n_dims

    def node_table(self) -> tuple[np.ndarray, np.ndarray]:
        """(signs, scales) arrays of shape (n_nodes, n_dims).

        Enumeration is quadrant-major, then axis-0 node index, then axis-1, so
        the layout is deterministic for serialization.
        """
        mags = self.axis_nodes
        per_axis = [mags] * self.n_dims
        grids = np.meshgrid(*per_axis, indexing="ij")
        scales_one = np.stack([g.ravel() for g in grids], axis=1)
        blocks_signs = []
        blocks_scales = []
        for q in self.quadrants:
            s = np.tile(np.asarray(q, dtype=np.int8), (scales_one.shape[0], 1))
            blocks_signs.append(s)
            blocks_scales.append(scales_one)
        return np.concatenate(blocks_signs, axis=0), np.concatenate(blocks_scales, axis=0)

    def signed_nodes(self) -> np.ndarray:
        signs, scales = self.node_table()
        return signs * scales


ALL_QUADRANTS_2D = ((1, 1), (1, -1), (-1, 1), (-1, -1))
POSITIVE_QUADRANT_2D = ((1, 1),)


def make_frequency_grid(xi_min, voices, octaves, quadrants) -> FrequencyGrid:
    quadrants = tuple(tuple(int(s) for s in q) for q in quadrants)
    return FrequencyGrid(
        xi_min=float(xi_min),
        voices_per_octave=int(voices),
        octaves=int(octaves),
        quadrants=quadrants,
    )


def quadrature_weight(grid: FrequencyGrid, node_index: int) -> float:
    """Weight for dxi/|xi_1...xi_n| at one node; constant across the grid."""
    if not 0 <= node_index < grid.n_nodes:
        raise ConfigurationError(
            f"node index {node_index} out of range [0, {grid.n_nodes})"
        )
    return grid.node_weight


@dataclass(frozen=True)
class Neighborhood:
    """Ball U(x0) in euclidean or max norm; no periodic wrap is applied."""

    center: tuple[float, ...]
    radius: float
    norm: str = "euclidean"

    def __post_init__(self):
        if self.radius <= 0:
            raise ConfigurationError("neighborhood radius must be positive")
        if self.norm not in ("euclidean", "max"):
            raise ConfigurationError(f"unknown norm {self.norm!r}")

    def mask(self, grid: SpatialGrid) -> np.ndarray:
        mesh = grid.meshgrid()
        deltas = [m - c for m, c in zip(mesh, self.center)]
        if self.norm == "euclidean":
            dist = np.sqrt(sum(d * d for d in deltas))
        else:
            dist = np.maximum.reduce([np.abs(d) for d in deltas])
        return dist <= self.radius
