"""Exact logical Pauli channels for concatenated stabilizer codes and operator-norm threshold ratios."""

from .codes import StabilizerCode, bit_flip_3, five_qubit, get_code, phase_flip_3
from .effective import concatenate, effective_channel, epsilon_eta
from .errors import OqftError
from .oqft import find_threshold, ratio_at, ratios, sup_inaccuracy, sup_inaccuracy_grid
from .pauli import PauliChannel1, PauliString, biased_channel, exclusive_channel

__all__ = [
    "OqftError",
    "PauliChannel1",
    "PauliString",
    "StabilizerCode",
    "biased_channel",
    "bit_flip_3",
    "concatenate",
    "effective_channel",
    "epsilon_eta",
    "exclusive_channel",
    "find_threshold",
    "five_qubit",
    "get_code",
    "phase_flip_3",
    "ratio_at",
    "ratios",
    "sup_inaccuracy",
    "sup_inaccuracy_grid",
]
