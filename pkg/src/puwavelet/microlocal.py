"""Frequency cones, dyadic shell energies, and Sobolev decay estimation.

Both regularity functionals are reduced to raw dyadic shell energies a_j over
``2**j <= |freq| < 2**(j+1)``: the weighted functional ``sum_j a_j 2**(2js)``
is finite exactly when the shell decay beats ``2**(-2js)``, so the critical
order is estimated as ``s_hat = -slope/2`` from a least-squares fit of
``log2 a_j`` against ``j``.  Shells whose energy falls below ``ENERGY_FLOOR``
are excluded; when fewer than ``min_shells`` remain the series is reported as
numerically smooth via the ``+inf`` sentinel.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._accel import cone_shell_sums
from .errors import ConfigurationError
from .grids import FrequencyGrid, Neighborhood, SpatialGrid
from .profiles import WaveletSpec
from .transform import SampledField, iter_transform_slices

SENTINEL_ORDER = math.inf
ENERGY_FLOOR = 1e-30


@dataclass(frozen=True)
class Cone:
    """Scale-invariant ratio cone in the open positive quadrant.

    tau belongs to the cone iff tau_1, tau_2 > 0 and the ratio tau_1/tau_2
    lies strictly between (1/ratio_factor) and ratio_factor times the
    center's ratio.
    """

    center: tuple[float, float]
    ratio_factor: float

    def __post_init__(self):
        if len(self.center) != 2 or any(c <= 0 for c in self.center):
            raise ConfigurationError("cone center must lie in the open positive quadrant")
        if self.ratio_factor <= 1.0:
            raise ConfigurationError("ratio_factor must exceed 1")

    @property
    def center_ratio(self) -> float:
        return self.center[0] / self.center[1]

    @property
    def ratio_bounds(self) -> tuple[float, float]:
        r0 = self.center_ratio
        return r0 / self.ratio_factor, r0 * self.ratio_factor

    def mask(self, t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
        """Vectorized membership for broadcastable coordinate arrays."""
        lo, hi = self.ratio_bounds
        pos = (t1 > 0.0) & (t2 > 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(pos, t1 / np.where(t2 > 0.0, t2, 1.0), 0.0)
        return pos & (ratio > lo) & (ratio < hi)


def cone_contains(c: Cone, tau) -> bool:
    t1, t2 = float(tau[0]), float(tau[1])
    if t1 <= 0.0 or t2 <= 0.0:
        return False
    lo, hi = c.ratio_bounds
    return lo < t1 / t2 < hi


@dataclass(frozen=True)
class MicrolocalQuery:
    """One (position, direction) regularity question with its analysis windows."""

    x0: tuple[float, ...]
    xi0: tuple[float, float]
    neighborhood: Neighborhood
    cone: Cone
    s_grid: tuple[float, ...] = (0.0, 0.5, 1.0, 1.5, 2.0)


@dataclass
class ShellEnergySeries:
    """Raw shell energies with the fitted decay exponent."""

    j_values: np.ndarray
    a: np.ndarray
    fitted_slope: float = math.nan
    s_hat: float = SENTINEL_ORDER
    residual: float = 0.0
    n_shells_used: int = 0
    empty_shells: tuple[int, ...] = ()
    truncated: bool = False

    def weighted_sum(self, s: float) -> float:
        """Summability functional sum_j a_j * 2**(2 j s)."""
        return float(np.sum(self.a * np.exp2(2.0 * s * self.j_values)))

    def to_dict(self) -> dict:
        return {
            "j": [int(j) for j in self.j_values],
            "a": [float(v) for v in self.a],
            "fitted_slope": float(self.fitted_slope),
            "s_hat": float(self.s_hat),
            "residual": float(self.residual),
            "n_shells_used": int(self.n_shells_used),
            "empty_shells": [int(j) for j in self.empty_shells],
            "truncated": bool(self.truncated),
        }


def estimate_sobolev_order(series: ShellEnergySeries, min_shells: int = 3) -> tuple[float, float]:
    """Least-squares decay fit; (+inf, 0.0) when too few shells carry energy."""
    keep = series.a > ENERGY_FLOOR
    if int(np.sum(keep)) < min_shells:
        return SENTINEL_ORDER, 0.0
    j = series.j_values[keep].astype(np.float64)
    y = np.log2(series.a[keep])
    slope, intercept = np.polyfit(j, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * j + intercept)) ** 2)))
    return -0.5 * float(slope), resid


def _finalize(series: ShellEnergySeries, min_shells: int) -> ShellEnergySeries:
    s_hat, resid = estimate_sobolev_order(series, min_shells)
    keep = series.a > ENERGY_FLOOR
    series.n_shells_used = int(np.sum(keep))
    series.s_hat = s_hat
    series.residual = resid
    if math.isfinite(s_hat):
        series.fitted_slope = -2.0 * s_hat
    return series


def covered_shell_range(sg: SpatialGrid, fg: FrequencyGrid | None = None) -> tuple[int, int]:
    """Dyadic shells [2^j, 2^{j+1}) fully inside both the frequency grid's node
    band (if given) and the spatial Nyquist disk."""
    nyq = min(sg.nyquist(a) for a in range(sg.n_dims))
    j_hi = int(math.floor(math.log2(nyq))) - 1
    j_lo = 0
    if fg is not None:
        mags = fg.axis_nodes
        lo = math.sqrt(fg.n_dims) * mags[0]
        hi = math.sqrt(fg.n_dims) * mags[-1]
        j_lo = int(math.ceil(math.log2(lo)))
        j_hi = min(j_hi, int(math.floor(math.log2(hi))) - 1)
    if j_hi < j_lo:
        raise ConfigurationError("no fully covered dyadic shells for these grids")
    return j_lo, j_hi


def _clip_j_range(j_range: tuple[int, int], sg: SpatialGrid) -> tuple[tuple[int, int], bool]:
    j_lo, j_hi = int(j_range[0]), int(j_range[1])
    nyq = min(sg.nyquist(a) for a in range(sg.n_dims))
    j_max_ok = int(math.floor(math.log2(nyq))) - 1
    truncated = False
    if j_hi > j_max_ok:
        warnings.warn(
            f"shell range truncated at j={j_max_ok} (Nyquist limit)", stacklevel=3
        )
        j_hi = j_max_ok
        truncated = True
    if j_hi < j_lo:
        raise ConfigurationError("empty shell range after Nyquist truncation")
    return (j_lo, j_hi), truncated


def shell_energy_hormander(
    f: SampledField,
    cutoff: SampledField,
    cone: Cone,
    s: float = 0.0,
    j_range: tuple[int, int] | None = None,
    min_shells: int = 3,
) -> ShellEnergySeries:
    """Windowed spectral shell energies over a cone.

    a_j = sum over FFT bins tau in the cone with 2^j <= |tau| < 2^{j+1} of
    |(cutoff*f)^(tau)|^2 * spectral_cell.  The ``s`` weight enters only via
    ``weighted_sum``.
    """
    if s < 0:
        raise ConfigurationError("s must be nonnegative")
    sg = f.grid
    if sg.n_dims != 2:
        raise ConfigurationError("shell energies require a 2-D grid")
    if cutoff.grid.shape != sg.shape:
        raise ConfigurationError("cutoff grid does not match the field grid")
    if j_range is None:
        j_range = covered_shell_range(sg)
    (j_lo, j_hi), truncated = _clip_j_range(j_range, sg)

    windowed = SampledField(grid=sg, values=f.values * cutoff.values, domain_tag="space")
    ghat = windowed.physical_fft()
    power = (np.abs(ghat) ** 2) * sg.spectral_cell
    t1 = sg.angular_frequencies(0)
    t2 = sg.angular_frequencies(1)
    lo, hi = cone.ratio_bounds
    sums, counts = cone_shell_sums(power, t1, t2, lo, hi, j_lo, j_hi)

    j_values = np.arange(j_lo, j_hi + 1)
    series = ShellEnergySeries(
        j_values=j_values,
        a=sums,
        empty_shells=tuple(int(j) for j, c in zip(j_values, counts) if c == 0),
        truncated=truncated,
    )
    return _finalize(series, min_shells)


def _shell_index(magnitude: float) -> int:
    return int(math.floor(math.log2(magnitude)))


def select_cone_nodes(
    fg: FrequencyGrid, cone: Cone, j_range: tuple[int, int] | None = None
) -> list[int]:
    """Canonical node indices whose signed node lies in the cone (and shell
    range, when one is given)."""
    signs, scales = fg.node_table()
    signed = signs * scales
    out = []
    for i in range(signed.shape[0]):
        t = signed[i]
        if not cone_contains(cone, t):
            continue
        if j_range is not None:
            j = _shell_index(float(np.hypot(t[0], t[1])))
            if not j_range[0] <= j <= j_range[1]:
                continue
        out.append(i)
    return out


def shell_energy_pu(
    vol,
    neighborhood: Neighborhood,
    cone: Cone,
    j_range: tuple[int, int] | None = None,
    min_shells: int = 3,
) -> ShellEnergySeries:
    """Wavelet-coefficient shell energies over U(x0) and a cone.

    a_j = sum over nodes xi in the cone with 2^j <= |xi| < 2^{j+1} of
    node_weight * sum_{x in U} |W(x, xi)|^2 * pixel_area.  ``vol`` may be a
    dense CWTVolume or any provider exposing the same grids plus
    ``iter_slices``/``signed_node``.
    """
    sg: SpatialGrid = vol.spatial_grid
    fg: FrequencyGrid = vol.freq_grid
    if j_range is None:
        j_range = covered_shell_range(sg, fg)
    j_lo, j_hi = int(j_range[0]), int(j_range[1])
    mask = neighborhood.mask(sg)
    if not np.any(mask):
        raise ConfigurationError("neighborhood contains no grid points")
    pixel = sg.pixel_area
    weight = fg.node_weight

    j_values = np.arange(j_lo, j_hi + 1)
    sums = np.zeros(len(j_values))
    counts = np.zeros(len(j_values), dtype=np.int64)
    for i, sl in vol.iter_slices():
        t = vol.signed_node(i)
        if not cone_contains(cone, t):
            continue
        j = _shell_index(float(np.hypot(t[0], t[1])))
        if j < j_lo or j > j_hi:
            continue
        sums[j - j_lo] += weight * pixel * float(np.sum(np.abs(sl[mask]) ** 2))
        counts[j - j_lo] += 1

    series = ShellEnergySeries(
        j_values=j_values,
        a=sums,
        empty_shells=tuple(int(j) for j, c in zip(j_values, counts) if c == 0),
    )
    return _finalize(series, min_shells)


def local_decay_check(
    f: SampledField,
    x0: tuple[float, ...],
    u_radius: float,
    fg: FrequencyGrid,
    w: WaveletSpec,
    support_rel_threshold: float = 1e-12,
) -> float:
    """Decay exponent of sup_{x in U(x0)} |W(x, xi)| against |xi| over dyadic scales.

    Requires x0 to sit at distance > 2*u_radius from the numerical support of
    f; returns +inf for zero fields.
    """
    sg = f.grid
    amax = float(np.max(np.abs(f.values)))
    if amax == 0.0:
        return SENTINEL_ORDER
    supp = np.abs(f.values) > support_rel_threshold * amax
    mesh = sg.meshgrid()
    dist = np.sqrt(sum((m - c) ** 2 for m, c in zip(mesh, x0)))
    min_dist = float(np.min(dist[supp]))
    if min_dist <= 2.0 * u_radius:
        raise ConfigurationError(
            f"x0 is {min_dist:.3g} from the field support; need > {2.0 * u_radius:.3g}"
        )
    mask = Neighborhood(center=tuple(x0), radius=u_radius).mask(sg)

    j_per_node: dict[int, int] = {}
    signs, scales = fg.node_table()
    signed = signs * scales
    for i in range(signed.shape[0]):
        j_per_node[i] = _shell_index(float(np.hypot(*signed[i])))
    sup_per_shell: dict[int, float] = {}
    for i, sl in iter_transform_slices(f, fg, w):
        m = float(np.max(np.abs(sl[mask])))
        j = j_per_node[i]
        sup_per_shell[j] = max(sup_per_shell.get(j, 0.0), m)

    js = np.array(sorted(sup_per_shell))
    ms = np.array([sup_per_shell[int(j)] for j in js])
    keep = ms > 1e-300
    if int(np.sum(keep)) < 3:
        return SENTINEL_ORDER
    slope, _ = np.polyfit(js[keep].astype(float), np.log2(ms[keep]), 1)
    return -float(slope)


def proof_bound_check(samples: int = 100_000, seed: int = 0) -> bool:
    """Check 1+|xi|^2 <= 4(1+|tau|^2) with tau_i = omega_i * xi_i, omega in [1/2,2]^2.

    Includes the extreme omega = (1/2, 1/2) against a deterministic sweep of
    xi magnitudes in addition to the randomized bulk.
    """
    rng = np.random.default_rng(seed)
    xi = np.exp2(rng.uniform(-12.0, 12.0, size=(samples, 2)))
    om = rng.uniform(0.5, 2.0, size=(samples, 2))
    mags = np.exp2(np.linspace(-12.0, 12.0, 97))
    xi_det = np.stack([np.repeat(mags, mags.size), np.tile(mags, mags.size)], axis=1)
    om_det = np.full_like(xi_det, 0.5)
    xi = np.concatenate([xi, xi_det])
    om = np.concatenate([om, om_det])
    tau = om * xi
    lhs = 1.0 + np.sum(xi * xi, axis=1)
    rhs = 4.0 * (1.0 + np.sum(tau * tau, axis=1))
    return bool(np.all(lhs <= rhs))


def cone_propagation_check(
    rho_in: float = 1.25,
    support: tuple[float, float] = (0.5, 2.0),
    rho_out: float = 5.0,
    samples: int = 100_000,
    seed: int = 0,
) -> bool:
    """Check that tau = (omega_1 xi_1, omega_2 xi_2) stays in the rho_out cone
    whenever omega lies in the window support square and xi in the rho_in cone.

    Ratio extremes (corner omegas combined with near-boundary xi ratios) are
    tested exhaustively on top of the randomized interior samples.
    """
    if rho_in <= 1.0 or rho_out <= 1.0:
        raise ConfigurationError("cone factors must exceed 1")
    lo, hi = support
    rng = np.random.default_rng(seed)

    centers = np.asarray([[1.0, 1.0], [3.0, 1.0], [1.0, 4.0], [2.5, 0.5]])

    def _in_out_cone(tau_ratio: np.ndarray, r0: float) -> np.ndarray:
        return (tau_ratio > r0 / rho_out) & (tau_ratio < r0 * rho_out)

    ok = True
    for cx, cy in centers:
        r0 = cx / cy
        # randomized interior
        om_ratio = rng.uniform(lo, hi, samples) / rng.uniform(lo, hi, samples)
        xi_ratio = r0 * np.exp2(
            rng.uniform(-math.log2(rho_in), math.log2(rho_in), samples)
        )
        ok &= bool(np.all(_in_out_cone(om_ratio * xi_ratio, r0)))
        # ratio extremes: corner omegas, xi ratio pushed to the open boundary
        corner_ratios = np.asarray([lo / hi, lo / lo, hi / lo, hi / hi])
        edge = math.log2(rho_in) * (1.0 - 1e-12)
        xi_edge = r0 * np.exp2(np.asarray([-edge, 0.0, edge]))
        prod = np.multiply.outer(corner_ratios, xi_edge).ravel()
        ok &= bool(np.all(_in_out_cone(prod, r0)))
        if not ok:
            return False
    return ok
