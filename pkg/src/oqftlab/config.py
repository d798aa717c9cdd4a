"""Run configuration, config-file loading and instance-bundle (de)serialization.

Config files are YAML or JSON (JSON is read by the YAML loader). Matrices are
nested lists of ``[re, im]`` pairs, one inner list per row.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .codes import StabilizerCode, code_from_config
from .errors import ConfigError
from .pauli import NOISE_MODELS

DEFAULT_RANGE = (0.001, 0.1, 50)


def parse_range(text) -> tuple[float, float, int]:
    """``"start:stop:steps"`` or a single value -> (start, stop, steps), inclusive of both ends."""
    if isinstance(text, (int, float)):
        parts = [text]
    elif isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(":")
    try:
        if len(parts) == 1:
            start = stop = float(parts[0])
            steps = 1
        elif len(parts) == 3:
            start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
        else:
            raise ValueError
    except ValueError:
        raise ConfigError(f"range must be a value or start:stop:steps, got {text!r}") from None
    if steps < 1:
        raise ConfigError(f"range needs steps >= 1, got {steps}")
    if not (0 <= start <= 1 and 0 <= stop <= 1):
        raise ConfigError(f"probabilities must lie in [0, 1], got {start}..{stop}")
    if steps > 1 and stop < start:
        raise ConfigError(f"range stop {stop} is below start {start}")
    return start, stop, steps


def range_values(r: tuple[float, float, int]) -> np.ndarray:
    start, stop, steps = r
    if steps == 1:
        return np.array([start])
    return np.linspace(start, stop, steps)


def format_range(r: tuple[float, float, int]) -> str:
    start, stop, steps = r
    return f"{start:g}" if steps == 1 else f"{start:g}:{stop:g}:{steps}"


@dataclass
class RunConfig:
    code: Any = "five_qubit"
    px: tuple[float, float, int] = DEFAULT_RANGE
    pz: tuple[float, float, int] = DEFAULT_RANGE
    levels: int = 2
    out: str | None = None
    tol: float = 1e-6
    workers: int = 1
    noise: str = "independent"
    bracket: tuple[float, float] = (1e-4, 0.2)
    seed: int = 0

    def __post_init__(self):
        self.px = parse_range(self.px) if not _is_range(self.px) else self.px
        self.pz = parse_range(self.pz) if not _is_range(self.pz) else self.pz
        if self.levels < 1:
            raise ConfigError(f"levels must be >= 1, got {self.levels}")
        if self.noise not in NOISE_MODELS:
            raise ConfigError(f"noise must be one of {sorted(NOISE_MODELS)}, got {self.noise!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if isinstance(self.bracket, str):
            parts = self.bracket.split(":")
            if len(parts) != 2:
                raise ConfigError(f"bracket must be lo:hi, got {self.bracket!r}")
            self.bracket = (float(parts[0]), float(parts[1]))
        self.bracket = tuple(float(v) for v in self.bracket)

    def build_code(self) -> StabilizerCode:
        return code_from_config(self.code)

    @property
    def level_pair(self) -> tuple[int, int]:
        """Compared levels ``(levels - 1, levels)``; the default 2 gives (1, 2)."""
        return self.levels - 1, self.levels


def _is_range(v) -> bool:
    return isinstance(v, tuple) and len(v) == 3 and isinstance(v[2], int)


def load_config_file(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping at top level")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known - {"bundle"}
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    return data


def make_config(file_values: dict, flag_values: dict) -> RunConfig:
    """Merge config-file values with command-line flags; flags win."""
    merged = dict(file_values)
    merged.pop("bundle", None)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# --- matrices and instance bundles ----------------------------------------


def matrix_from_pairs(rows) -> np.ndarray:
    try:
        m = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"matrix must be nested [re, im] pairs: {exc}") from exc
    if m.ndim != 3 or m.shape[2] != 2:
        raise ConfigError(f"matrix must have shape (rows, cols, 2), got {m.shape}")
    return m[..., 0] + 1j * m[..., 1]


def matrix_to_pairs(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


_CHANNEL_KEYS = ("enc", "noise", "recovery", "dec", "dec_dyn")


def bundle_from_dict(obj: dict):
    """Build an ``EaoqecSpec`` from a mapping; channels are lists of Kraus matrices."""
    from .superop.channels import KrausChannel
    from .superop.eaoqec import EaoqecSpec, eaoqec_stages

    missing = {"k", "s", "c", "enc", "noise", "recovery", "dec"} - set(obj)
    if missing:
        raise ConfigError(f"instance bundle is missing {sorted(missing)}")
    kwargs: dict[str, Any] = {key: int(obj[key]) for key in ("k", "s", "c")}
    kwargs["dim_K"] = int(obj.get("dim_K", 0))
    for key in _CHANNEL_KEYS:
        if obj.get(key) is not None:
            try:
                kwargs[key] = KrausChannel(tuple(matrix_from_pairs(m) for m in obj[key]), True, key)
            except ValueError as exc:
                raise ConfigError(f"bundle channel {key!r}: {exc}") from exc
    if "rho_B" in obj:
        kwargs["rho_B"] = matrix_from_pairs(obj["rho_B"])
    for key in ("ordering", "name"):
        if key in obj:
            kwargs[key] = obj[key]
    try:
        spec = EaoqecSpec(**kwargs)
        eaoqec_stages(spec)
    except ValueError as exc:
        raise ConfigError(f"invalid instance bundle: {exc}") from exc
    return spec


def bundle_to_dict(spec) -> dict:
    out: dict[str, Any] = {"name": spec.name, "k": spec.k, "s": spec.s, "c": spec.c, "dim_K": spec.dim_K}
    for key in _CHANNEL_KEYS:
        ch = getattr(spec, key)
        if ch is not None:
            out[key] = [matrix_to_pairs(k) for k in ch.ops]
    out["rho_B"] = matrix_to_pairs(spec.rho_B)
    out["ordering"] = spec.ordering
    return out


def load_bundle(path: str | Path):
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot load instance bundle {path}: {exc}") from exc
    if isinstance(data, dict) and "bundle" in data:
        data = data["bundle"]
    if not isinstance(data, dict):
        raise ConfigError("instance bundle must be a mapping")
    return bundle_from_dict(data)
