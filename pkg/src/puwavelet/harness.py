"""Theorem verification pipeline, s_hat sweeps, and the invariant self-test.

The comparison theorem is checked as one-sided inequalities between fitted
decay orders, matching its implication structure:

  direction (a): regularity of the windowed spectrum on the wide cone
      (factor 5) must be matched by wavelet-coefficient regularity on the
      narrow cone (factor 5/4):  s_pu_inner >= s_hormander_outer - tol;
  direction (b): wavelet-coefficient regularity on the wide cone must be
      matched by windowed-spectrum regularity on the narrow cone:
      s_hormander_inner >= s_pu_outer - tol;
      additionally the cone-and-cutoff-masked synthesis f1 is built and the
      decay of its spectrum is reported as s_hat_f1.

Estimates at the +inf sentinel, or above SMOOTH_ORDER, count as "numerically
smooth"; inequalities are evaluated with inf-aware arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .errors import InvariantFailure
from .grids import FrequencyGrid, Neighborhood, SpatialGrid, make_frequency_grid
from .microlocal import (
    Cone,
    ShellEnergySeries,
    _finalize,
    cone_contains,
    cone_propagation_check,
    covered_shell_range,
    proof_bound_check,
    select_cone_nodes,
    shell_energy_hormander,
)
from .profiles import WaveletSpec, admissibility_constant, make_wavelet
from .signals import SignalSpec, generate, make_cutoff
from .transform import (
    SampledField,
    _axis_window_cache,
    _node_axis_indices,
    _node_multiplier,
    analysis_energy,
    coverage_function,
    forward_transform,
    inverse_transform,
    iter_transform_slices,
    spectral_energy_against_coverage,
    uncovered_energy_fraction,
)

INNER_RATIO_FACTOR = 1.25
SMOOTH_ORDER = 3.0


@dataclass
class QueryVerdict:
    x0: tuple[float, ...]
    xi0: tuple[float, float]
    s_hat_hormander: float
    s_hat_hormander_inner: float
    s_hat_pu_inner: float
    s_hat_pu_outer: float
    s_hat_f1: float
    direction_a_pass: bool
    direction_b_pass: bool
    f1_check_pass: bool
    smooth_hormander: bool
    smooth_pu: bool
    inconclusive: bool
    series: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "x0": list(self.x0),
            "xi0": list(self.xi0),
            "s_hat_hormander": _json_float(self.s_hat_hormander),
            "s_hat_hormander_inner": _json_float(self.s_hat_hormander_inner),
            "s_hat_pu_inner": _json_float(self.s_hat_pu_inner),
            "s_hat_pu_outer": _json_float(self.s_hat_pu_outer),
            "s_hat_f1": _json_float(self.s_hat_f1),
            "direction_a_pass": self.direction_a_pass,
            "direction_b_pass": self.direction_b_pass,
            "f1_check_pass": self.f1_check_pass,
            "smooth_hormander": self.smooth_hormander,
            "smooth_pu": self.smooth_pu,
            "inconclusive": self.inconclusive,
            "series": self.series,
        }
        return d


def _json_float(v: float):
    if math.isinf(v):
        return "inf"
    return float(v)


@dataclass
class TheoremReport:
    tolerance: float
    j_range: tuple[int, int]
    verdicts: list[QueryVerdict]

    @property
    def all_pass(self) -> bool:
        return all(v.direction_a_pass and v.direction_b_pass for v in self.verdicts)

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "j_range": list(self.j_range),
            "all_pass": self.all_pass,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


def _holds(lhs: float, rhs: float, tol: float) -> bool:
    """lhs >= rhs - tol with +inf counting as larger than everything."""
    if math.isinf(lhs):
        return True
    if math.isinf(rhs):
        return False
    return lhs >= rhs - tol


def _is_smooth(s_hat: float) -> bool:
    return math.isinf(s_hat) or s_hat >= SMOOTH_ORDER


def _pu_and_f1_for_query(
    f: SampledField,
    fg: FrequencyGrid,
    w: WaveletSpec,
    phi_cutoff: SampledField,
    neighborhood: Neighborhood,
    outer: Cone,
    inner: Cone,
    j_range: tuple[int, int],
    min_shells: int,
):
    """One streaming pass over cone nodes: PU shell sums for both cones plus
    the masked synthesis accumulator for f1."""
    sg = f.grid
    j_lo, j_hi = j_range
    nodes = select_cone_nodes(fg, outer, j_range)
    signs, scales = fg.node_table()
    signed = signs * scales
    weight = fg.node_weight
    pixel = sg.pixel_area
    mask = neighborhood.mask(sg)

    n_shells = j_hi - j_lo + 1
    sums_outer = np.zeros(n_shells)
    sums_inner = np.zeros(n_shells)
    counts_outer = np.zeros(n_shells, dtype=np.int64)
    counts_inner = np.zeros(n_shells, dtype=np.int64)
    f1_hat = np.zeros(sg.shape, dtype=np.complex128)

    cache = _axis_window_cache(sg, fg, w)
    k_table = _node_axis_indices(fg)

    for i, sl in iter_transform_slices(f, fg, w, node_indices=nodes):
        t = signed[i]
        j = int(math.floor(math.log2(float(np.hypot(t[0], t[1])))))
        u_energy = weight * pixel * float(np.sum(np.abs(sl[mask]) ** 2))
        sums_outer[j - j_lo] += u_energy
        counts_outer[j - j_lo] += 1
        if cone_contains(inner, t):
            sums_inner[j - j_lo] += u_energy
            counts_inner[j - j_lo] += 1
        mult = _node_multiplier(cache, sg, fg, signs[i], k_table[i])
        f1_hat += weight * (np.fft.fftn(phi_cutoff.values * sl) * mult)

    j_values = np.arange(j_lo, j_hi + 1)
    series_outer = _finalize(
        ShellEnergySeries(
            j_values=j_values,
            a=sums_outer,
            empty_shells=tuple(int(j) for j, c in zip(j_values, counts_outer) if c == 0),
        ),
        min_shells,
    )
    series_inner = _finalize(
        ShellEnergySeries(
            j_values=j_values,
            a=sums_inner,
            empty_shells=tuple(int(j) for j, c in zip(j_values, counts_inner) if c == 0),
        ),
        min_shells,
    )
    f1 = SampledField(grid=sg, values=np.fft.ifftn(f1_hat) / w.c_psi, domain_tag="space")
    return series_outer, series_inner, f1


def _radial_shell_series(field_: SampledField, j_range: tuple[int, int],
                         min_shells: int = 3) -> ShellEnergySeries:
    """Spectral shell energies over all bins (no cone restriction)."""
    sg = field_.grid
    ghat = field_.physical_fft()
    power = (np.abs(ghat) ** 2) * sg.spectral_cell
    t1 = sg.angular_frequencies(0)
    t2 = sg.angular_frequencies(1)
    mag = np.hypot(t1[:, None], t2[None, :])
    j_lo, j_hi = j_range
    with np.errstate(divide="ignore"):
        jj = np.floor(np.log2(np.where(mag > 0, mag, 1e-300))).astype(np.int64)
    sums = np.zeros(j_hi - j_lo + 1)
    for j in range(j_lo, j_hi + 1):
        sums[j - j_lo] = float(np.sum(power[jj == j]))
    series = ShellEnergySeries(j_values=np.arange(j_lo, j_hi + 1), a=sums)
    return _finalize(series, min_shells)


def theorem_check(cfg: RunConfig, min_shells: int = 3) -> TheoremReport:
    """Run both comparison directions for every configured query."""
    sg, fg = cfg.spatial, cfg.frequency
    w = make_wavelet(cfg.profile_kind, sg.n_dims)
    f = generate(cfg.signal, sg)
    j_range = covered_shell_range(sg, fg)
    possible_shells = j_range[1] - j_range[0] + 1

    verdicts = []
    for q in cfg.queries:
        outer = q.cone
        inner = Cone(center=q.xi0, ratio_factor=INNER_RATIO_FACTOR)
        r = q.neighborhood.radius
        phi = make_cutoff(q.x0, r, 2.0 * r, sg)

        h_outer = shell_energy_hormander(f, phi, outer, j_range=j_range, min_shells=min_shells)
        h_inner = shell_energy_hormander(f, phi, inner, j_range=j_range, min_shells=min_shells)
        pu_outer, pu_inner, f1 = _pu_and_f1_for_query(
            f, fg, w, phi, q.neighborhood, outer, inner, j_range, min_shells
        )
        f1_series = _radial_shell_series(f1, j_range, min_shells)

        tol = cfg.tolerance
        verdicts.append(
            QueryVerdict(
                x0=q.x0,
                xi0=q.xi0,
                s_hat_hormander=h_outer.s_hat,
                s_hat_hormander_inner=h_inner.s_hat,
                s_hat_pu_inner=pu_inner.s_hat,
                s_hat_pu_outer=pu_outer.s_hat,
                s_hat_f1=f1_series.s_hat,
                direction_a_pass=_holds(pu_inner.s_hat, h_outer.s_hat, tol),
                direction_b_pass=_holds(h_inner.s_hat, pu_outer.s_hat, tol),
                f1_check_pass=_holds(f1_series.s_hat, pu_outer.s_hat, tol),
                smooth_hormander=_is_smooth(h_outer.s_hat),
                smooth_pu=_is_smooth(pu_outer.s_hat),
                inconclusive=possible_shells < min_shells,
                series={
                    "hormander_outer": h_outer.to_dict(),
                    "hormander_inner": h_inner.to_dict(),
                    "pu_outer": pu_outer.to_dict(),
                    "pu_inner": pu_inner.to_dict(),
                    "f1": f1_series.to_dict(),
                },
            )
        )
    return TheoremReport(tolerance=cfg.tolerance, j_range=j_range, verdicts=verdicts)


def energy_map(cfg: RunConfig) -> tuple[list[str], list[list]]:
    """s_hat over an (x0 lattice) x (direction fan) of PU queries.

    Neighborhoods are max-norm boxes so per-node pixel sums reduce to four
    integral-image lookups.
    """
    sg, fg = cfg.spatial, cfg.frequency
    w = make_wavelet(cfg.profile_kind, sg.n_dims)
    f = generate(cfg.signal, sg)
    j_range = covered_shell_range(sg, fg)
    j_lo, j_hi = j_range
    n_shells = j_hi - j_lo + 1

    em = cfg.energy_map
    m = sg.samples_per_axis
    h = sg.spacing
    half = [int(math.floor(em.radius / hx)) for hx in h]
    lattice = []
    for i0 in range(0, m, em.stride):
        for i1 in range(0, m, em.stride):
            if (
                half[0] <= i0 < m - half[0]
                and half[1] <= i1 < m - half[1]
            ):
                lattice.append((i0, i1))
    thetas = [(d + 1) * math.pi / (2.0 * (em.directions + 1)) for d in range(em.directions)]
    cones = [Cone(center=(math.cos(t), math.sin(t)), ratio_factor=5.0) for t in thetas]

    signs, scales = fg.node_table()
    signed = signs * scales
    node_shell = {}
    node_cones = {}
    relevant = []
    for i in range(signed.shape[0]):
        t = signed[i]
        in_cones = [ci for ci, c in enumerate(cones) if cone_contains(c, t)]
        if not in_cones:
            continue
        j = int(math.floor(math.log2(float(np.hypot(t[0], t[1])))))
        if j_lo <= j <= j_hi:
            relevant.append(i)
            node_shell[i] = j
            node_cones[i] = in_cones

    weight = fg.node_weight
    pixel = sg.pixel_area
    acc = np.zeros((len(lattice), len(cones), n_shells))
    for i, sl in iter_transform_slices(f, fg, w, node_indices=relevant):
        p = np.abs(sl) ** 2
        integral = np.zeros((m + 1, m + 1))
        integral[1:, 1:] = np.cumsum(np.cumsum(p, axis=0), axis=1)
        j = node_shell[i] - j_lo
        for li, (i0, i1) in enumerate(lattice):
            a0, b0 = i0 - half[0], i0 + half[0] + 1
            a1, b1 = i1 - half[1], i1 + half[1] + 1
            box = (
                integral[b0, b1]
                - integral[a0, b1]
                - integral[b0, a1]
                + integral[a0, a1]
            )
            for ci in node_cones[i]:
                acc[li, ci, j] += weight * pixel * box

    header = ["x0_1", "x0_2", "dir_1", "dir_2", "s_hat", "residual", "n_shells"]
    rows = []
    j_values = np.arange(j_lo, j_hi + 1)
    for li, (i0, i1) in enumerate(lattice):
        x0 = (i0 * h[0], i1 * h[1])
        for ci, cone in enumerate(cones):
            series = _finalize(
                ShellEnergySeries(j_values=j_values, a=acc[li, ci].copy()), 3
            )
            rows.append(
                [
                    x0[0],
                    x0[1],
                    cone.center[0],
                    cone.center[1],
                    series.s_hat,
                    series.residual,
                    series.n_shells_used,
                ]
            )
    return header, rows


def selftest(level: str = "fast", wavelet: WaveletSpec | None = None, stream=print) -> int:
    """Run the named invariant suites; nonzero exit status on first principles
    failures.  ``wavelet`` overrides the default window (used for fault
    injection in tests)."""
    full = level == "full"
    checks: list[tuple[str, bool, str]] = []
    rng = np.random.default_rng(2024)

    w = wavelet if wavelet is not None else make_wavelet("smooth_bump", 2)

    # support: the window must vanish outside [1/2, 2]^n
    n_probe = 10_000
    pts = rng.uniform(-4.0, 4.0, size=(4 * n_probe, 2))
    outside = ~(
        (pts[:, 0] >= 0.5) & (pts[:, 0] <= 2.0) & (pts[:, 1] >= 0.5) & (pts[:, 1] <= 2.0)
    )
    pts = pts[outside][:n_probe]
    vals = w.fourier_window(pts[:, 0], pts[:, 1])
    ok = bool(np.all(vals == 0.0))
    checks.append(("support", ok, f"max |psihat| off-support = {float(np.max(np.abs(vals))):.3g}"))

    # admissibility: analytic box values and smooth-bump quadrature stability
    box1 = make_wavelet("ideal_box", 1)
    box2 = make_wavelet("ideal_box", 2)
    ln4 = math.log(4.0)
    ok = abs(box1.c_psi - ln4) < 1e-9 and abs(box2.c_psi - ln4**2) < 1e-9
    checks.append(("admissibility_analytic", ok, f"1-D {box1.c_psi:.9f}, 2-D {box2.c_psi:.9f}"))
    c_lo = admissibility_constant(w, 512)
    c_hi = admissibility_constant(w, 1024)
    rel = abs(c_hi - c_lo) / c_hi
    checks.append(("admissibility_convergence", rel < 1e-6, f"rel change {rel:.3g}"))

    # proof inequalities
    n_samp = 200_000 if full else 20_000
    ok = proof_bound_check(samples=n_samp, seed=7)
    checks.append(("proof_bound", ok, f"{n_samp} samples"))
    ok = cone_propagation_check(1.25, (0.5, 2.0), 5.0, samples=n_samp, seed=7)
    neg = cone_propagation_check(1.25, (0.5, 2.0), 4.9, samples=n_samp, seed=7)
    checks.append(("cone_propagation", ok and not neg,
                   f"5/4->5 {ok}, 5/4->4.9 negative control {not neg}"))

    # transform invariants on a small end-to-end run; the modulated gaussian's
    # spectrum sits comfortably inside the fully covered band [2*xi_min, xi_max/2]
    m = 256 if full else 128
    sg = SpatialGrid(n_dims=2, extent=(1.0, 1.0), samples_per_axis=m)
    voices = 8 if full else 4
    fg = make_frequency_grid(4.0, voices, 5, [[1, 1]])
    sig = SignalSpec(kind="gaussian", center=(0.5, 0.5), width=0.4, modulation=(24.0, 24.0))
    fld = generate(sig, sg)
    vol = forward_transform(fld, fg, w)

    idx = vol.n_nodes // 2
    fhat = np.fft.fftn(fld.values)
    t1 = sg.angular_frequencies(0)
    t2 = sg.angular_frequencies(1)
    xi = vol.signed_node(idx)
    mult = np.conj(w.fourier_window(t1[:, None] / xi[0], t2[None, :] / xi[1]))
    ref = np.fft.ifftn(fhat * mult)
    err = float(np.max(np.abs(vol.slices[idx] - ref)) / max(np.max(np.abs(ref)), 1e-300))
    checks.append(("fourier_identity", err < 1e-10, f"slice error {err:.3g}"))

    cov = coverage_function(fg, w, sg)
    lhs = analysis_energy(vol)
    rhs = spectral_energy_against_coverage(fld, cov)
    rel = abs(lhs - rhs) / rhs
    checks.append(("parseval_fubini", rel < 1e-10, f"rel mismatch {rel:.3g}"))

    unc = uncovered_energy_fraction(fld, cov, w.c_psi)
    checks.append(("coverage", unc < 1e-3, f"uncovered fraction {unc:.3g}"))

    rec = inverse_transform(vol, w, mode="discrete_frame")
    err_frame = (
        math.sqrt(float(np.sum(np.abs(rec.values - fld.values) ** 2)))
        / math.sqrt(float(np.sum(np.abs(fld.values) ** 2)))
    )
    checks.append(("reconstruction_frame", err_frame < 1e-8, f"rel L2 error {err_frame:.3g}"))
    rec2 = inverse_transform(vol, w, mode="paper_cpsi")
    err_cpsi = (
        math.sqrt(float(np.sum(np.abs(rec2.values - fld.values) ** 2)))
        / math.sqrt(float(np.sum(np.abs(fld.values) ** 2)))
    )
    bound = 1e-2 if full else 1e-1
    checks.append(("reconstruction_cpsi", err_cpsi < bound, f"rel L2 error {err_cpsi:.3g}"))

    failed = [name for name, ok, _ in checks if not ok]
    for name, ok, detail in checks:
        stream(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    if failed:
        stream(f"selftest failed: {', '.join(failed)}")
        return InvariantFailure.exit_code
    return 0
