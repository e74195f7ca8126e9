"""Fourier-domain window profiles and the separable wavelet built from them.

A 1-D profile ``h`` lives on the closed frequency band ``[1/2, 2]`` and is
evaluated in log2 frequency ``u = log2(omega)``, so dilations act as shifts.
The n-D wavelet window is the tensor product ``psihat(omega) = prod_i
h_i(omega_i)``, supported in the positive cube ``[1/2, 2]**n``.  Its
normalizing constant is

    c_psi = integral |psihat(omega)|**2 domega / |omega_1 ... omega_n|,

which factorizes across axes and becomes an ordinary integral in ``u``
(``domega/omega = ln2 du``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._accel import mollifier_step
from .errors import ConfigurationError, DataError

SUPPORT_LO = 0.5
SUPPORT_HI = 2.0

PROFILE_KINDS = ("smooth_bump", "raised_cosine", "ideal_box")


def smooth_step(x: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for x<=0, 1 for x>=1, exp(-1/x)-mollified between."""
    return mollifier_step(x)


def _bump_log(u: np.ndarray) -> np.ndarray:
    # up-ramp on u in [-1,0], down-ramp on [0,1]; all derivatives vanish at the ends
    return mollifier_step(1.0 - np.abs(u))


def _cos_log(u: np.ndarray) -> np.ndarray:
    # cos^6 ramp: analytic, first five derivatives vanish at u = +-1
    c = np.cos(0.5 * np.pi * np.clip(u, -1.0, 1.0))
    return c**6


def _box_log(u: np.ndarray) -> np.ndarray:
    return np.ones_like(u)


_PROFILE_FUNCS = {
    "smooth_bump": _bump_log,
    "raised_cosine": _cos_log,
    "ideal_box": _box_log,
}

_SMOOTHNESS = {
    "smooth_bump": math.inf,
    "raised_cosine": 5,
    "ideal_box": 0,
}


@dataclass(frozen=True)
class WindowProfile1D:
    """One axis factor of the Fourier window, supported on [support_lo, support_hi]."""

    kind: str
    support_lo: float = SUPPORT_LO
    support_hi: float = SUPPORT_HI
    smoothness_order: float = math.inf
    amplitude: float = 1.0

    def __call__(self, omega) -> np.ndarray:
        """Evaluate the window at (scalar or array) frequencies; zero off-support."""
        arr = np.asarray(omega, dtype=np.float64)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        out = np.zeros_like(arr)
        mask = (arr >= self.support_lo) & (arr <= self.support_hi)
        if np.any(mask):
            u = np.log2(arr[mask])
            out[mask] = self.amplitude * _PROFILE_FUNCS[self.kind](u)
        return out[0] if scalar else out

    @property
    def admissible_for_theory(self) -> bool:
        """ideal_box is not in the Schwartz class; it exists for analytic oracles."""
        return self.kind != "ideal_box"


@dataclass(frozen=True)
class WaveletSpec:
    """Tensor-product wavelet window with its cached admissibility constant."""

    profiles: tuple[WindowProfile1D, ...]
    c_psi: float
    n_dims: int

    def axis_window(self, axis: int, omega) -> np.ndarray:
        return self.profiles[axis](omega)

    def fourier_window(self, *axis_freqs) -> np.ndarray:
        """psihat evaluated on broadcastable per-axis frequency arrays."""
        if len(axis_freqs) != self.n_dims:
            raise ConfigurationError(
                f"expected {self.n_dims} frequency arguments, got {len(axis_freqs)}"
            )
        out = self.profiles[0](axis_freqs[0])
        for axis in range(1, self.n_dims):
            out = out * self.profiles[axis](axis_freqs[axis])
        return out

    @property
    def admissible_for_theory(self) -> bool:
        return all(p.admissible_for_theory for p in self.profiles)


def make_profile(profile_kind: str, amplitude: float = 1.0) -> WindowProfile1D:
    if profile_kind not in PROFILE_KINDS:
        raise ConfigurationError(
            f"unknown profile kind {profile_kind!r}; choose from {PROFILE_KINDS}"
        )
    return WindowProfile1D(
        kind=profile_kind,
        smoothness_order=_SMOOTHNESS[profile_kind],
        amplitude=amplitude,
    )


def make_wavelet(profile_kind: str, n_dims: int, resolution: int = 2048) -> WaveletSpec:
    """Build the separable wavelet window and cache its admissibility constant."""
    if n_dims not in (1, 2):
        raise ConfigurationError(f"n_dims must be 1 or 2, got {n_dims}")
    profile = make_profile(profile_kind)
    spec = WaveletSpec(profiles=(profile,) * n_dims, c_psi=math.nan, n_dims=n_dims)
    c = admissibility_constant(spec, resolution)
    return replace(spec, c_psi=c)


def _axis_admissibility(profile: WindowProfile1D, resolution: int) -> float:
    """Trapezoid quadrature of |h|^2 domega/omega on log-uniform nodes."""
    u = np.linspace(-1.0, 1.0, resolution)
    values = profile(2.0**u)
    integrand = values * values
    return math.log(2.0) * float(np.trapezoid(integrand, u))


def admissibility_constant(w: WaveletSpec, resolution: int) -> float:
    """Quadrature approximation of c_psi; exact tensor factorization across axes."""
    if resolution < 64:
        raise ConfigurationError(f"resolution must be >= 64, got {resolution}")
    c = 1.0
    for profile in w.profiles:
        c *= _axis_admissibility(profile, resolution)
    if not math.isfinite(c) or c <= 0.0:
        raise DataError(f"admissibility constant is not finite positive: {c}")
    return c
