"""Bell labels, Bell-diagonal states and the bilateral XOR transition table.

Canonical basis order is (Phi+, Psi+, Phi-, Psi-).  A label's index is
``2 * phase_bit + amplitude_bit``, so the amplitude bit is the low bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable

import numpy as np

NORM_TOL = 1e-12
RENORM_TOL = 1e-9


class BellLabel(IntEnum):
    PHI_PLUS = 0
    PSI_PLUS = 1
    PHI_MINUS = 2
    PSI_MINUS = 3

    @property
    def phase_bit(self) -> int:
        return self.value >> 1

    @property
    def amplitude_bit(self) -> int:
        return self.value & 1

    @classmethod
    def from_bits(cls, phase_bit: int, amplitude_bit: int) -> "BellLabel":
        if phase_bit not in (0, 1) or amplitude_bit not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got ({phase_bit}, {amplitude_bit})")
        return cls(2 * phase_bit + amplitude_bit)

    @property
    def bits(self) -> tuple[int, int]:
        return self.phase_bit, self.amplitude_bit

    @property
    def short(self) -> str:
        """ASCII name used in CSV files, e.g. ``Phi+``."""
        return _SHORT[self]

    @classmethod
    def parse(cls, text: str) -> "BellLabel":
        try:
            return _FROM_SHORT[text.strip()]
        except KeyError:
            pass
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown Bell label {text!r}") from None

    def __str__(self) -> str:
        return self.short


_SHORT = {
    BellLabel.PHI_PLUS: "Phi+",
    BellLabel.PSI_PLUS: "Psi+",
    BellLabel.PHI_MINUS: "Phi-",
    BellLabel.PSI_MINUS: "Psi-",
}
_FROM_SHORT = {v: k for k, v in _SHORT.items()}
_FROM_SHORT.update({"Φ+": BellLabel.PHI_PLUS, "Ψ+": BellLabel.PSI_PLUS,
                    "Φ-": BellLabel.PHI_MINUS, "Ψ-": BellLabel.PSI_MINUS,
                    "Φ−": BellLabel.PHI_MINUS, "Ψ−": BellLabel.PSI_MINUS})

CANONICAL_ORDER = tuple(BellLabel)


@dataclass(frozen=True, eq=False)
class BellDiagonal:
    """Probability 4-vector over Bell labels in canonical order.

    Inputs within ``RENORM_TOL`` of normalized are renormalized on
    construction; anything further off is rejected.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).reshape(-1)
        if p.shape != (4,):
            raise ValueError(f"expected 4 probabilities, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite")
        if np.any(p < -RENORM_TOL) or np.any(p > 1 + RENORM_TOL):
            raise ValueError(f"probabilities out of [0, 1]: {p}")
        total = p.sum()
        if abs(total - 1.0) > RENORM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        p = np.clip(p, 0.0, None)
        p = p / p.sum()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_unnormalized(cls, weights: Iterable[float]) -> "BellDiagonal":
        w = np.asarray(list(weights), dtype=float)
        total = w.sum()
        if total <= 0:
            raise ValueError("weights have no mass")
        return cls(w / total)

    def __getitem__(self, label: int) -> float:
        return float(self.probs[int(label)])

    def __iter__(self):
        return iter(self.probs.tolist())

    def __len__(self) -> int:
        return 4

    def __eq__(self, other) -> bool:
        if not isinstance(other, BellDiagonal):
            return NotImplemented
        return bool(np.array_equal(self.probs, other.probs))

    def __hash__(self) -> int:
        return hash(tuple(self.probs.tolist()))

    def allclose(self, other: "BellDiagonal", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.probs, np.asarray(other.probs), rtol=0.0, atol=atol))

    @property
    def fidelity(self) -> float:
        return float(self.probs[0])

    def __repr__(self) -> str:
        inner = ", ".join(f"{x:.6g}" for x in self.probs)
        return f"BellDiagonal({inner})"


def werner_state(f: float) -> BellDiagonal:
    """Werner state of fidelity ``f``: ``(f, g, g, g)`` with ``g = (1 - f)/3``."""
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {f}")
    g = (1.0 - f) / 3.0
    return BellDiagonal((f, g, g, g))


def entropy_bits(p) -> float:
    """Shannon entropy in bits of a probability vector, with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum()) + 0.0


def entropy(m: BellDiagonal) -> float:
    """Von Neumann entropy (bits) of a Bell-diagonal state."""
    if not isinstance(m, BellDiagonal):
        m = BellDiagonal(m)
    return entropy_bits(m.probs)


# Hand transcription of the published BXOR table.  Key: (source, target)
# before, value: (source, target) after.
_P0, _S0, _P1, _S1 = (BellLabel.PHI_PLUS, BellLabel.PSI_PLUS,
                      BellLabel.PHI_MINUS, BellLabel.PSI_MINUS)
_TABLE_COLUMNS = (_S1, _P1, _P0, _S0)
_TABLE_ROWS = {
    # target: (sources after, targets after), columns ordered as _TABLE_COLUMNS
    _S1: ((_S0, _P0, _P1, _S1), (_P1, _S1, _S1, _P1)),
    _P1: ((_S0, _P0, _P1, _S1), (_S1, _P1, _P1, _S1)),
    _P0: ((_S1, _P1, _P0, _S0), (_S0, _P0, _P0, _S0)),
    _S0: ((_S1, _P1, _P0, _S0), (_P0, _S0, _S0, _P0)),
}
BXOR_TABLE: dict[tuple[BellLabel, BellLabel], tuple[BellLabel, BellLabel]] = {
    (src, tgt): (new_src, new_tgt)
    for tgt, (src_after, tgt_after) in _TABLE_ROWS.items()
    for src, new_src, new_tgt in zip(_TABLE_COLUMNS, src_after, tgt_after)
}

# Index form of BXOR_TABLE for vectorized and compiled code:
# BXOR_SOURCE[s, t], BXOR_TARGET[s, t].
BXOR_SOURCE = np.zeros((4, 4), dtype=np.int64)
BXOR_TARGET = np.zeros((4, 4), dtype=np.int64)
for (_s, _t), (_s2, _t2) in BXOR_TABLE.items():
    BXOR_SOURCE[_s, _t] = _s2
    BXOR_TARGET[_s, _t] = _t2
BXOR_SOURCE.setflags(write=False)
BXOR_TARGET.setflags(write=False)


def bxor_map(source: BellLabel, target: BellLabel) -> tuple[BellLabel, BellLabel]:
    return BXOR_TABLE[BellLabel(source), BellLabel(target)]


_PAULI_TO_BELL = {
    "I": BellLabel.PHI_PLUS,
    "X": BellLabel.PSI_PLUS,
    "Z": BellLabel.PHI_MINUS,
    "Y": BellLabel.PSI_MINUS,
}
BELL_TO_PAULI = {v: k for k, v in _PAULI_TO_BELL.items()}


def pauli_to_bell(error: str) -> BellLabel:
    """Bell label reached from Phi+ when Bob's half suffers ``error``."""
    try:
        return _PAULI_TO_BELL[error.upper()]
    except (KeyError, AttributeError):
        raise ValueError(f"unknown Pauli label {error!r}") from None


def mix(a: BellDiagonal, b: BellDiagonal, weight: float) -> BellDiagonal:
    return BellDiagonal(weight * a.probs + (1.0 - weight) * b.probs)
