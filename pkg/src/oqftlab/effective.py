"""Exact logical Pauli channel of one noiseless-recovery round, and its concatenation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import StabilizerCode
from .errors import CapacityError, UnsupportedCodeError
from .pauli import MAX_CHANNEL_QUBITS, PauliChannel1, iid_probabilities

LevelSequence = list  # list[PauliChannel1], index = concatenation level


@dataclass(frozen=True)
class EpsilonEta:
    """Total error probability and its X/Y/Z split; ``eta`` is None when epsilon == 0."""

    epsilon: float
    eta: tuple[float, float, float] | None

    @property
    def defined(self) -> bool:
        return self.eta is not None


def effective_channel(code: StabilizerCode, per_qubit: PauliChannel1) -> PauliChannel1:
    """Logical channel after encoding, i.i.d. ``per_qubit`` noise, and perfect lookup recovery.

    Every one of the 4**n error patterns is enumerated; its probability is
    added to the logical class of ``recovery(syndrome(E)) * E``. The
    accumulation runs sequentially in Pauli-index order, so results do not
    depend on how callers parallelize over channels.
    """
    if code.k != 1:
        raise UnsupportedCodeError(f"effective channels need k == 1, {code.name} has k == {code.k}")
    if code.n > MAX_CHANNEL_QUBITS:
        raise CapacityError(f"n={code.n} exceeds the enumeration limit of {MAX_CHANNEL_QUBITS}")
    probs = iid_probabilities(per_qubit, code.n)
    out = np.bincount(code.class_table, weights=probs, minlength=4)
    return PauliChannel1(tuple(out))


def concatenate(code: StabilizerCode, physical: PauliChannel1, max_level: int) -> LevelSequence:
    """Levels 0..max_level; level i+1 sees the full level-i channel on every qubit."""
    if max_level < 1:
        raise ValueError(f"max_level must be >= 1, got {max_level}")
    levels = [physical]
    for _ in range(max_level):
        levels.append(effective_channel(code, levels[-1]))
    return levels


def epsilon_eta(ch: PauliChannel1) -> EpsilonEta:
    eps = ch.p_x + ch.p_y + ch.p_z
    if eps == 0.0:
        return EpsilonEta(0.0, None)
    return EpsilonEta(eps, (ch.p_x / eps, ch.p_y / eps, ch.p_z / eps))
