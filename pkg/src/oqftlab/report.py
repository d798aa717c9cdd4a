"""Grid evaluation of the ratio report and its self-describing CSV serialization."""

from __future__ import annotations

import io
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterable, Sequence

from .codes import StabilizerCode, build_decoder, syndrome_str
from .config import RunConfig, format_range
from .effective import concatenate, epsilon_eta
from .oqft import RatioReport, ratio_at, sup_inaccuracy
from .pauli import NOISE_MODELS

SCAN_COLUMNS = ("p_x", "p_z", "eps_l1", "eps_l2", "sup_l1", "sup_l2", "p_ratio", "q_ratio", "qft_ratio")
CHANNEL_COLUMNS = ("level", "p_I", "p_X", "p_Y", "p_Z", "epsilon", "eta_x", "eta_y", "eta_z", "sup")
THRESHOLD_COLUMNS = ("p_z", "qft_crossing", "p_crossing", "advantage")

NOISE_FORMULAS = {
    "independent": "independent flips: p_I=(1-p_x)(1-p_z), p_X=p_x(1-p_z), p_Y=p_x*p_z, p_Z=(1-p_x)p_z",
    "exclusive": "exclusive flips: p_I=1-p_x-p_z, p_X=p_x, p_Y=0, p_Z=p_z",
}


def fmt(v: float | None) -> str:
    """Fixed scientific notation with 12 significant digits; None becomes an empty field."""
    return "" if v is None else f"{float(v):.11e}"


def decoder_rule(code: StabilizerCode) -> str:
    default = build_decoder(code.generators)
    if dict(code.decoder) == default:
        return "minimum-weight lookup table, ties broken by first label in I<X<Y<Z order with qubit 0 leftmost"
    table = ";".join(f"{syndrome_str(s)}->{r.label}" for s, r in code.decoder.items())
    if all(r.weight == default[s].weight for s, r in code.decoder.items()):
        return f"minimum-weight lookup table with explicit tie-breaks: {table}"
    return f"user-supplied lookup table: {table}"


def metadata(
    cfg: RunConfig, code: StabilizerCode, kind: str, extra: Sequence[str] = (), with_ratios: bool = True
) -> list[str]:
    lo, hi = cfg.level_pair
    lines = [
        f"oqftlab {kind}",
        f"code: {code.describe()}",
        f"decoder: {decoder_rule(code)}",
        "recovery: perfect syndrome readout and recovery",
        f"noise: {NOISE_FORMULAS[cfg.noise]}",
        "levels: level 0 is the physical channel; level i+1 applies one code round with the "
        "exact level-i channel (including its Y part) on every qubit",
    ]
    if with_ratios:
        lines += [
            f"level pair: columns *_l1 refer to level {lo}, columns *_l2 to level {hi}",
            "ratios: qft_ratio = eps_l2/eps_l1, p_ratio = sup_l2/sup_l1, q_ratio from the eta vectors",
        ]
    lines += ["undefined values are empty fields", *extra]
    return [f"# {line}" for line in lines]


def write_csv(header: Sequence[str], rows: Iterable[Sequence[str]], comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(line + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def report_row(r: RatioReport) -> list[str]:
    return [
        fmt(r.p_x), fmt(r.p_z),
        fmt(r.epsilon_i), fmt(r.epsilon_i1),
        fmt(r.sup_i), fmt(r.sup_i1),
        fmt(r.p_ratio), fmt(r.q_ratio), fmt(r.qft_ratio),
    ]


def _row_reports(code, pz_values, noise, level_pair, px):
    return [ratio_at(code, px, pz, noise=noise, level_pair=level_pair) for pz in pz_values]


def scan_reports(
    code: StabilizerCode,
    px_values: Sequence[float],
    pz_values: Sequence[float],
    *,
    noise: str = "independent",
    level_pair: tuple[int, int] = (1, 2),
    workers: int = 1,
) -> list[RatioReport]:
    """Reports in row-major order: p_x outer, p_z inner. Results do not depend on ``workers``."""
    px_values = [float(v) for v in px_values]
    pz_values = [float(v) for v in pz_values]
    task = partial(_row_reports, code, pz_values, noise, level_pair)
    if workers == 1 or len(px_values) == 1:
        rows = map(task, px_values)
        return [r for row in rows for r in row]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(task, px_values, chunksize=max(1, len(px_values) // (4 * workers))))
    return [r for row in rows for r in row]


def scan_csv(cfg: RunConfig, code: StabilizerCode, reports: Sequence[RatioReport], kind: str = "scan") -> str:
    extra = [f"grid: p_x={format_range(cfg.px)} p_z={format_range(cfg.pz)} (start:stop:steps, row-major, p_x outer)"]
    return write_csv(SCAN_COLUMNS, map(report_row, reports), metadata(cfg, code, kind, extra))


def channel_rows(code: StabilizerCode, p_x: float, p_z: float, noise: str, max_level: int) -> list[list[str]]:
    rows = []
    for i, ch in enumerate(concatenate(code, NOISE_MODELS[noise](p_x, p_z), max_level)):
        ee = epsilon_eta(ch)
        eta = ee.eta if ee.defined else (None, None, None)
        rows.append([str(i), *map(fmt, ch.p), fmt(ee.epsilon), *map(fmt, eta), fmt(sup_inaccuracy(ch))])
    return rows
