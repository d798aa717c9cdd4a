"""
Stabilizer codes with minimum-weight lookup decoding.

Syndromes are bit tuples with bit ``i`` set iff the error anticommutes with
generator ``i``. When a syndrome is packed into an integer (or written as a
string such as ``"1010"``), generator 0 is the most significant bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import CapacityError, CodeConstructionError, ConfigError, ContractError
from .pauli import (
    MAX_CHANNEL_QUBITS,
    PauliString,
    commutes,
    pauli_digits,
    pauli_mul,
)

Syndrome = tuple[int, ...]

CLASS_NAMES = "IXYZ"
# packed (anticommutes with Zbar, anticommutes with Xbar) -> I/X/Y/Z index
_CLASS_LUT = np.array([0, 3, 1, 2], dtype=np.int8)

_CHUNK = 1 << 16
_SWAP_XZ = str.maketrans("XZ", "ZX")


def gf2_rank(rows: np.ndarray) -> int:
    m = np.array(rows, dtype=np.uint8) % 2
    rank = 0
    n_rows, n_cols = m.shape
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(n_rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def syndrome_of(generators: Sequence[PauliString], e: PauliString) -> Syndrome:
    return tuple(0 if commutes(g, e) else 1 for g in generators)


def syndrome_to_int(s: Syndrome) -> int:
    v = 0
    for b in s:
        v = (v << 1) | b
    return v


def syndrome_from_str(text: str) -> Syndrome:
    if not text or any(c not in "01" for c in text):
        raise ValueError(f"syndrome must be a string of 0/1 characters, got {text!r}")
    return tuple(int(c) for c in text)


def syndrome_str(s: Syndrome) -> str:
    return "".join(str(b) for b in s)


def _labels_of_weight(n: int, w: int) -> list[str]:
    out = []
    for support in itertools.combinations(range(n), w):
        for letters in itertools.product("XYZ", repeat=w):
            label = ["I"] * n
            for q, c in zip(support, letters):
                label[q] = c
            out.append("".join(label))
    # "IXYZ" is already in ASCII order
    return sorted(out)


def build_decoder(generators: Sequence[PauliString]) -> dict[Syndrome, PauliString]:
    """Minimum-weight recovery per syndrome; ties go to the lexicographically smallest label."""
    _validate_generators(generators)
    n = generators[0].n
    n_syndromes = 2 ** len(generators)
    table: dict[Syndrome, PauliString] = {}
    for w in range(n + 1):
        for label in _labels_of_weight(n, w):
            e = PauliString.from_label(label)
            s = syndrome_of(generators, e)
            if s not in table:
                table[s] = e
        if len(table) == n_syndromes:
            break
    if len(table) != n_syndromes:
        # unreachable for independent commuting generators
        raise CodeConstructionError(f"only {len(table)} of {n_syndromes} syndromes are reachable")
    return dict(sorted(table.items()))


def _validate_generators(generators: Sequence[PauliString]):
    if not generators:
        raise CodeConstructionError("a stabilizer code needs at least one generator")
    n = generators[0].n
    for g in generators:
        if g.n != n:
            raise CodeConstructionError(f"generator {g.label} acts on {g.n} qubits, expected {n}")
        if g.phase % 2:
            raise CodeConstructionError(f"generator {g} is not Hermitian")
        if g.weight == 0:
            raise CodeConstructionError("identity cannot be a generator")
    for a, b in itertools.combinations(generators, 2):
        if not commutes(a, b):
            raise CodeConstructionError(f"generators {a.label} and {b.label} anticommute")
    rows = np.array([g.x + g.z for g in generators])
    if gf2_rank(rows) != len(generators):
        raise CodeConstructionError("generators are not independent")


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """[[n, k]] stabilizer code carrying one logical pair and a total decoder table."""

    name: str
    generators: tuple[PauliString, ...]
    logical_x: PauliString
    logical_z: PauliString
    decoder: Mapping[Syndrome, PauliString] = field(default=None)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        _validate_generators(gens)
        n = gens[0].n
        for name, op in (("logical_x", self.logical_x), ("logical_z", self.logical_z)):
            if op.n != n:
                raise CodeConstructionError(f"{name} acts on {op.n} qubits, expected {n}")
            bad = [g.label for g in gens if not commutes(op, g)]
            if bad:
                raise CodeConstructionError(f"{name} {op.label} anticommutes with generator(s) {bad}")
        if commutes(self.logical_x, self.logical_z):
            raise CodeConstructionError("logical_x and logical_z must anticommute")
        if self.decoder is None:
            table = build_decoder(gens)
        else:
            table = dict(self.decoder)
            expected = set(itertools.product((0, 1), repeat=len(gens)))
            if set(table) != expected:
                raise CodeConstructionError(
                    f"decoder table must cover all {len(expected)} syndromes exactly once"
                )
            for s, r in table.items():
                if r.n != n or syndrome_of(gens, r) != s:
                    raise CodeConstructionError(
                        f"recovery {r.label} does not reproduce syndrome {syndrome_str(s)}"
                    )
            table = dict(sorted(table.items()))
        object.__setattr__(self, "decoder", table)

    @classmethod
    def from_labels(cls, name, generators, logical_x, logical_z, decoder=None) -> "StabilizerCode":
        gens = tuple(PauliString.from_label(g) for g in generators)
        table = None
        if decoder is not None:
            table = {syndrome_from_str(s): PauliString.from_label(r) for s, r in decoder.items()}
        return cls(name, gens, PauliString.from_label(logical_x), PauliString.from_label(logical_z), table)

    @property
    def n(self) -> int:
        return self.generators[0].n

    @property
    def k(self) -> int:
        return self.n - len(self.generators)

    def syndrome(self, e: PauliString) -> Syndrome:
        if e.n != self.n:
            raise ValueError(f"error acts on {e.n} qubits, code on {self.n}")
        return syndrome_of(self.generators, e)

    def recovery(self, e: PauliString) -> PauliString:
        return self.decoder[self.syndrome(e)]

    def logical_class(self, net: PauliString) -> str:
        return logical_class(self, net)

    def describe(self) -> str:
        return (
            f"{self.name} [[{self.n},{self.k}]] generators={','.join(g.label for g in self.generators)} "
            f"logical_x={self.logical_x.label} logical_z={self.logical_z.label}"
        )

    @cached_property
    def class_table(self) -> np.ndarray:
        """Logical class (0..3 for I,X,Y,Z) of ``decoder(syndrome(E)) * E`` for every Pauli index."""
        n = self.n
        if n > MAX_CHANNEL_QUBITS:
            raise CapacityError(f"n={n} exceeds the enumeration limit of {MAX_CHANNEL_QUBITS}")
        gx = np.array([g.x for g in self.generators], dtype=np.int64)
        gz = np.array([g.z for g in self.generators], dtype=np.int64)
        weights = 1 << np.arange(len(self.generators) - 1, -1, -1, dtype=np.int64)
        rec_x = np.zeros((2 ** len(self.generators), n), dtype=np.int64)
        rec_z = np.zeros_like(rec_x)
        for s, r in self.decoder.items():
            rec_x[syndrome_to_int(s)] = r.x
            rec_z[syndrome_to_int(s)] = r.z
        lx = np.array(self.logical_x.x), np.array(self.logical_x.z)
        lz = np.array(self.logical_z.x), np.array(self.logical_z.z)

        digits = pauli_digits(n)
        out = np.empty(4**n, dtype=np.int8)
        for start in range(0, 4**n, _CHUNK):
            d = digits[start : start + _CHUNK]
            x = ((d == 1) | (d == 2)).astype(np.int64)
            z = ((d == 2) | (d == 3)).astype(np.int64)
            s_int = (((x @ gz.T) + (z @ gx.T)) % 2) @ weights
            nx = x ^ rec_x[s_int]
            nz = z ^ rec_z[s_int]
            anti_zbar = (nx @ lz[1] + nz @ lz[0]) % 2
            anti_xbar = (nx @ lx[1] + nz @ lx[0]) % 2
            out[start : start + _CHUNK] = _CLASS_LUT[2 * anti_zbar + anti_xbar]
        out.setflags(write=False)
        return out


def syndrome(code: StabilizerCode, e: PauliString) -> Syndrome:
    return code.syndrome(e)


def logical_class(code: StabilizerCode, net: PauliString) -> str:
    """Logical action ('I', 'X', 'Y' or 'Z') of a zero-syndrome Pauli."""
    s = code.syndrome(net)
    if any(s):
        raise ContractError(f"{net.label} has nonzero syndrome {syndrome_str(s)}; not in the normalizer")
    anti_z = not commutes(net, code.logical_z)
    anti_x = not commutes(net, code.logical_x)
    return CLASS_NAMES[int(_CLASS_LUT[2 * anti_z + anti_x])]


def corrected_class(code: StabilizerCode, e: PauliString) -> str:
    """Logical class left behind after lookup recovery of ``e``."""
    return logical_class(code, pauli_mul(code.recovery(e), e))


@lru_cache(maxsize=None)
def five_qubit() -> StabilizerCode:
    return StabilizerCode.from_labels(
        "five_qubit", ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], "XXXXX", "ZZZZZ"
    )


@lru_cache(maxsize=None)
def bit_flip_3() -> StabilizerCode:
    return StabilizerCode.from_labels("bit_flip_3", ["ZZI", "IZZ"], "XXX", "ZZZ")


@lru_cache(maxsize=None)
def phase_flip_3() -> StabilizerCode:
    # generators and decoder are the X<->Z dual of bit_flip_3, logical labels are
    # kept, so Z noise shows up as logical Z; the plain I<X<Y<Z tie-break would
    # pick Y over Z here and turn every single Z error into a logical flip
    dual = {syndrome_str(s): r.label.translate(_SWAP_XZ) for s, r in bit_flip_3().decoder.items()}
    return StabilizerCode.from_labels("phase_flip_3", ["XXI", "IXX"], "XXX", "ZZZ", dual)


BUILTIN_CODES = {
    "five_qubit": five_qubit,
    "bit_flip_3": bit_flip_3,
    "phase_flip_3": phase_flip_3,
}


def get_code(name: str) -> StabilizerCode:
    try:
        return BUILTIN_CODES[name]()
    except KeyError:
        raise ConfigError(f"unknown code {name!r}; built-ins are {sorted(BUILTIN_CODES)}") from None


def code_from_config(obj) -> StabilizerCode:
    """Build a code from a built-in name or a mapping of label strings.

    Mapping keys: ``generators`` (list), ``logical_x``, ``logical_z``, and
    optionally ``name`` and ``decoder`` (syndrome string -> recovery label).
    """
    if isinstance(obj, str):
        return get_code(obj)
    if not isinstance(obj, Mapping):
        raise ConfigError(f"code must be a name or a mapping, got {type(obj).__name__}")
    if "builtin" in obj:
        base = get_code(obj["builtin"])
        if obj.get("decoder") is None:
            return base
        gens = [g.label for g in base.generators]
        lx, lz, name = base.logical_x.label, base.logical_z.label, base.name
    else:
        missing = {"generators", "logical_x", "logical_z"} - set(obj)
        if missing:
            raise ConfigError(f"code mapping is missing {sorted(missing)}")
        gens, lx, lz = obj["generators"], obj["logical_x"], obj["logical_z"]
        name = obj.get("name", "custom")
    decoder = obj.get("decoder")
    if decoder is not None and "builtin" in obj:
        base_table = {syndrome_str(s): r.label for s, r in base.decoder.items()}
        base_table.update({str(k): v for k, v in decoder.items()})
        decoder = base_table
        name = obj.get("name", f"{name}+modified_decoder")
    try:
        return StabilizerCode.from_labels(name, gens, lx, lz, decoder)
    except (CodeConstructionError, ValueError) as exc:
        raise ConfigError(f"invalid code definition: {exc}") from exc

