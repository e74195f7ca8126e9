"""Command-line interface.

Subcommands: analyze, invert, energy, theorem-check, coverage, selftest.
All take a JSON run config via --config and write under --out-dir.
Exit codes: 0 ok, 2 config error, 3 data error, 4 invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .config import load_config
from .errors import PuwaveletError
from .harness import energy_map, selftest, theorem_check
from .profiles import make_wavelet
from .signals import generate
from .transform import coverage_function, forward_transform, inverse_transform

MODE_MAP = {"paper-cpsi": "paper_cpsi", "discrete-frame": "discrete_frame"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="puwavelet",
        description="Separable CWT analysis, synthesis, and microlocal energy tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out-dir", default=".", help="output directory")

    p = sub.add_parser("analyze", help="forward transform -> PUWV1 volume file")
    add_common(p)

    p = sub.add_parser("invert", help="PUWV1 volume -> PUFD1 field file")
    add_common(p)
    p.add_argument("--volume", default=None, help="volume file (default: out-dir/<outputs.volume>)")
    p.add_argument("--mode", choices=sorted(MODE_MAP), default="paper-cpsi")

    p = sub.add_parser("energy", help="s_hat sweep over a query lattice -> CSV/JSON")
    add_common(p)

    p = sub.add_parser("theorem-check", help="comparison-theorem verdicts -> JSON report")
    add_common(p)

    p = sub.add_parser("coverage", help="frame function Phi per FFT bin -> CSV")
    add_common(p)

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--full", action="store_true", help="larger grids and sample counts")
    return parser


def _run(args) -> int:
    if args.command == "selftest":
        return selftest("full" if args.full else "fast")

    cfg = load_config(args.config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.command == "analyze":
        w = make_wavelet(cfg.profile_kind, cfg.spatial.n_dims)
        f = generate(cfg.signal, cfg.spatial)
        vol = forward_transform(f, cfg.frequency, w)
        path = out_dir / cfg.outputs["volume"]
        fileio.write_volume(path, vol)
        print(path)
        return 0

    if args.command == "invert":
        w = make_wavelet(cfg.profile_kind, cfg.spatial.n_dims)
        vol_path = Path(args.volume) if args.volume else out_dir / cfg.outputs["volume"]
        vol = fileio.read_volume(vol_path, cfg.spatial, cfg.frequency)
        rec = inverse_transform(vol, w, mode=MODE_MAP[args.mode])
        path = out_dir / cfg.outputs["field"]
        fileio.write_field(path, rec)
        print(path)
        return 0

    if args.command == "energy":
        header, rows = energy_map(cfg)
        path = out_dir / cfg.outputs["energy"]
        fileio.write_csv(path, header, rows)
        json_path = path.with_suffix(".json")
        fileio.write_json_report(
            json_path,
            {"header": header, "rows": [[_jsonable(v) for v in r] for r in rows]},
        )
        print(path)
        return 0

    if args.command == "theorem-check":
        report = theorem_check(cfg)
        path = out_dir / cfg.outputs["report"]
        fileio.write_json_report(path, report.to_dict())
        print(path)
        return 0

    if args.command == "coverage":
        w = make_wavelet(cfg.profile_kind, cfg.spatial.n_dims)
        cov = coverage_function(cfg.frequency, w, cfg.spatial)
        t1 = cfg.spatial.angular_frequencies(0)
        t2 = cfg.spatial.angular_frequencies(1)
        rows = []
        for i in range(len(t1)):
            for k in range(len(t2)):
                rows.append([float(t1[i]), float(t2[k]), float(cov.values[i, k])])
        path = out_dir / cfg.outputs["coverage"]
        fileio.write_csv(path, ["tau_1", "tau_2", "phi"], rows)
        print(path)
        return 0

    raise AssertionError(f"unhandled command {args.command!r}")  # pragma: no cover


def _jsonable(v):
    if isinstance(v, float) and not np.isfinite(v):
        return "inf"
    return v


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except PuwaveletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
