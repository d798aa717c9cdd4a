"""Command-line front end: ``oqftlab {scan,slice,threshold,channel,verify}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .codes import bit_flip_3, five_qubit
from .config import load_bundle, load_config_file, make_config, range_values
from .errors import ConfigError, OqftError, OutputError, VerificationError
from .oqft import find_threshold
from .pauli import NOISE_MODELS
from .report import (
    CHANNEL_COLUMNS,
    THRESHOLD_COLUMNS,
    channel_rows,
    fmt,
    metadata,
    scan_csv,
    scan_reports,
    write_csv,
)
from .superop.crosscheck import cross_engine_suite
from .superop.eaoqec import eaoqec_pipeline
from .superop.instances import CheckResult, identity_error, reduction_suite
from .superop.qcc import qcc_check

SLICE_PZ = 0.06


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML or JSON config file; flags win on conflict")
    p.add_argument("--code", help="built-in code name (five_qubit, bit_flip_3, phase_flip_3)")
    p.add_argument("--px", help="p_x value or start:stop:steps")
    p.add_argument("--pz", help="p_z value or start:stop:steps")
    p.add_argument("--levels", type=int, help="highest concatenation level L; ratios compare L-1 with L (default 2)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--tol", type=float, help="bisection tolerance on p_x (default 1e-6)")
    p.add_argument("--workers", type=int, help="worker processes for grid evaluation (default 1)")
    p.add_argument("--seed", type=int, help="seed for random states in verification (default 0)")
    p.add_argument("--noise", choices=sorted(NOISE_MODELS), help="physical noise model (default independent)")
    p.add_argument("--bracket", help="threshold search interval lo:hi (default 1e-4:0.2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oqftlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("scan", "ratio report over a (p_x, p_z) grid as CSV"),
        ("slice", "ratio report along p_x at fixed p_z as CSV"),
        ("threshold", "p_x where the QFT- and P-ratios cross 1"),
        ("channel", "logical channel at every concatenation level for one (p_x, p_z)"),
        ("verify", "error-correction hierarchy reductions and cross-engine checks"),
    ]:
        _common(sub.add_parser(name, help=text, description=text))
    return parser


def _config(args, defaults: dict | None = None):
    file_values = load_config_file(args.config) if args.config else {}
    flags = {k: getattr(args, k) for k in ("code", "px", "pz", "levels", "out", "tol", "workers", "seed", "noise", "bracket")}
    merged_defaults = dict(defaults or {})
    merged_defaults.update(file_values)
    return make_config(merged_defaults, flags), file_values


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_bytes(text.encode())
    except OSError as exc:
        raise OutputError(f"cannot write {out}: {exc}") from exc


def _single(r, flag: str) -> float:
    if r[2] != 1:
        raise ConfigError(f"{flag} must be a single value here, got a {r[2]}-step range")
    return r[0]


def cmd_scan(args, kind: str = "scan") -> int:
    cfg, _ = _config(args, {"pz": SLICE_PZ} if kind == "slice" else None)
    if kind == "slice":
        _single(cfg.pz, "--pz")
    code = cfg.build_code()
    reports = scan_reports(
        code, range_values(cfg.px), range_values(cfg.pz),
        noise=cfg.noise, level_pair=cfg.level_pair, workers=cfg.workers,
    )
    _emit(scan_csv(cfg, code, reports, kind), cfg.out)
    return 0


def cmd_threshold(args) -> int:
    cfg, _ = _config(args, {"pz": SLICE_PZ})
    code = cfg.build_code()
    rows, lines = [], []
    for pz in range_values(cfg.pz):
        kw = dict(bracket=cfg.bracket, tol=cfg.tol, noise=cfg.noise, level_pair=cfg.level_pair)
        qft = find_threshold(code, float(pz), "QFT", **kw)
        p = find_threshold(code, float(pz), "P", **kw)
        adv = (p - qft) / qft
        rows.append([fmt(pz), fmt(qft), fmt(p), fmt(adv)])
        lines.append(f"p_z={pz:.6g}  QFT crossing p_x={qft:.6f}  P crossing p_x={p:.6f}  advantage={100 * adv:.2f}%\n")
    if cfg.out:
        extra = [f"bisection: bracket {cfg.bracket[0]:g}:{cfg.bracket[1]:g}, tol {cfg.tol:g}"]
        _emit(write_csv(THRESHOLD_COLUMNS, rows, metadata(cfg, code, "threshold", extra)), cfg.out)
    sys.stdout.write("".join(lines))
    return 0


def cmd_channel(args) -> int:
    cfg, _ = _config(args)
    px, pz = _single(cfg.px, "--px"), _single(cfg.pz, "--pz")
    code = cfg.build_code()
    rows = channel_rows(code, px, pz, cfg.noise, cfg.levels)
    extra = [f"point: p_x={px:g} p_z={pz:g}"]
    _emit(write_csv(CHANNEL_COLUMNS, rows, metadata(cfg, code, "channel", extra, with_ratios=False)), cfg.out)
    return 0


def cmd_verify(args) -> int:
    cfg, file_values = _config(args)
    custom = args.code is not None or "code" in file_values
    code = cfg.build_code() if custom else None
    results = reduction_suite(code, seed=cfg.seed)
    codes = [bit_flip_3(), five_qubit()]
    if custom and code.k == 1 and code.name not in ("bit_flip_3", "five_qubit"):
        codes.append(code)
    results += cross_engine_suite(codes, seed=cfg.seed)
    if "bundle" in file_values:
        spec = load_bundle(args.config)
        err = identity_error(spec, seed=cfg.seed)
        qcc = qcc_check(eaoqec_pipeline(spec), np.eye(spec.dim_logical), 0.0, "grid")
        ok = err <= 1e-10 and qcc.holds
        results.append(CheckResult(
            f"bundle {spec.name}: identity pipeline and QCC (alpha = 0, U = I)",
            ok, f"identity error {err:.2e}, sup >= {qcc.witness_sup:.2e}", err,
        ))
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}\n" for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed\n")
    _emit("".join(lines), cfg.out)
    if failed:
        raise VerificationError(f"{failed} verification check(s) failed")
    return 0


COMMANDS = {
    "scan": cmd_scan,
    "slice": lambda a: cmd_scan(a, "slice"),
    "threshold": cmd_threshold,
    "channel": cmd_channel,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OqftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
