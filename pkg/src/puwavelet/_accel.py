"""Hot numeric kernels: numba-compiled loops with a pure-numpy fallback.

The numpy path is selected when the environment variable
``PUWAVELET_DISABLE_NUMBA`` is set to ``1``/``true``/``yes`` or when numba is
not importable.  Both implementations are kept importable so the benchmark in
``benchmarks/bench_kernels.py`` can time them side by side.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLE = os.environ.get("PUWAVELET_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

try:
    if _DISABLE:
        raise ImportError("numba disabled via PUWAVELET_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def mollifier_step_numpy(x: np.ndarray) -> np.ndarray:
    """Smooth step S(x) built from exp(-1/x): 0 for x<=0, 1 for x>=1, C-inf."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    out[x >= 1.0] = 1.0
    mid = (x > 0.0) & (x < 1.0)
    if np.any(mid):
        xm = x[mid]
        a = np.exp(-1.0 / xm)
        b = np.exp(-1.0 / (1.0 - xm))
        out[mid] = a / (a + b)
    return out


def cone_shell_sums_numpy(
    power: np.ndarray,
    t1: np.ndarray,
    t2: np.ndarray,
    ratio_lo: float,
    ratio_hi: float,
    j_min: int,
    j_max: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate ``power`` over bins inside a ratio cone, split by dyadic shell.

    ``power`` has shape ``(len(t1), len(t2))``; bins with any nonpositive
    coordinate are excluded (the cone lives in the open positive quadrant,
    with strict ratio inequalities).  Shell ``j`` collects bins with
    ``2**j <= |t| < 2**(j+1)``.
    """
    n_shells = j_max - j_min + 1
    a = t1[:, None]
    b = t2[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = a / b
        inside = (a > 0.0) & (b > 0.0) & (ratio > ratio_lo) & (ratio < ratio_hi)
        jj = np.floor(0.5 * np.log2(a * a + b * b)).astype(np.int64)
    inside &= (jj >= j_min) & (jj <= j_max)
    idx = (jj - j_min)[inside]
    sums = np.bincount(idx, weights=power[inside], minlength=n_shells)
    counts = np.bincount(idx, minlength=n_shells)
    return sums.astype(np.float64), counts.astype(np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def _mollifier_flat(x, out):  # pragma: no cover - compiled
        for i in range(x.size):
            v = x[i]
            if v <= 0.0:
                out[i] = 0.0
            elif v >= 1.0:
                out[i] = 1.0
            else:
                p = math.exp(-1.0 / v)
                q = math.exp(-1.0 / (1.0 - v))
                out[i] = p / (p + q)

    def mollifier_step_numba(x: np.ndarray) -> np.ndarray:
        x = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
        out = np.empty_like(x)
        _mollifier_flat(x.ravel(), out.ravel())
        return out

    @njit(cache=True)
    def _cone_shell_loop(power, t1, t2, ratio_lo, ratio_hi, j_min, j_max, sums, counts):  # pragma: no cover - compiled
        for i in range(t1.size):
            a = t1[i]
            if a <= 0.0:
                continue
            for k in range(t2.size):
                b = t2[k]
                if b <= 0.0:
                    continue
                r = a / b
                if r <= ratio_lo or r >= ratio_hi:
                    continue
                j = int(math.floor(0.5 * math.log2(a * a + b * b)))
                if j < j_min or j > j_max:
                    continue
                sums[j - j_min] += power[i, k]
                counts[j - j_min] += 1

    def cone_shell_sums_numba(power, t1, t2, ratio_lo, ratio_hi, j_min, j_max):
        power = np.ascontiguousarray(power, dtype=np.float64)
        t1 = np.ascontiguousarray(t1, dtype=np.float64)
        t2 = np.ascontiguousarray(t2, dtype=np.float64)
        n_shells = j_max - j_min + 1
        sums = np.zeros(n_shells, dtype=np.float64)
        counts = np.zeros(n_shells, dtype=np.int64)
        _cone_shell_loop(power, t1, t2, ratio_lo, ratio_hi, j_min, j_max, sums, counts)
        return sums, counts

    mollifier_step = mollifier_step_numba
    cone_shell_sums = cone_shell_sums_numba
else:
    mollifier_step = mollifier_step_numpy
    cone_shell_sums = cone_shell_sums_numpy

USING_NUMBA = HAVE_NUMBA
