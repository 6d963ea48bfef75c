"""Channel descriptions to working fidelity, and the usability verdict.

Channel spec files are JSON objects with a ``kind`` discriminator::

    {"kind": "depolarizing", "x": 0.75}
    {"kind": "pauli", "probabilities": {"I": 0.82, "X": 0.06, "Y": 0.06, "Z": 0.06}}
    {"kind": "kraus", "operators": [[[[re, im], [re, im]], [[re, im], [re, im]]], ...]}

Pauli probabilities may also be a list ``[pI, pX, pY, pZ]``.  Kraus matrices
are row-major with complex entries as ``[re, im]`` pairs.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from scipy.optimize import minimize

from .bell import BellDiagonal, werner_state
from .recursion import solve_threshold

PAULI_TOL = 1e-12
KRAUS_TOL = 1e-9

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Bell vectors in canonical order, basis |a b> with a = Alice, b = Bob.
_S2 = 1 / np.sqrt(2)
BELL_VECTORS = np.array([
    [_S2, 0, 0, _S2],    # Phi+
    [0, _S2, _S2, 0],    # Psi+
    [_S2, 0, 0, -_S2],   # Phi-
    [0, _S2, -_S2, 0],   # Psi-
], dtype=complex)


class ChannelSpecError(ValueError):
    """Invalid channel description; the message names the offending field."""


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    x: float | None = None
    pauli: tuple[float, float, float, float] | None = None  # (pI, pX, pY, pZ)
    kraus: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        if self.kind == "depolarizing":
            if self.x is None or not 0.0 <= self.x <= 1.0:
                raise ChannelSpecError(f"field 'x': must lie in [0, 1], got {self.x!r}")
        elif self.kind == "pauli":
            p = self.pauli
            if p is None or len(p) != 4:
                raise ChannelSpecError("field 'probabilities': need four values (I, X, Y, Z)")
            if any(v < 0 or v > 1 for v in p) or abs(sum(p) - 1.0) > PAULI_TOL:
                raise ChannelSpecError(f"field 'probabilities': not a probability vector: {p}")
        elif self.kind == "kraus":
            ops = self.kraus
            if not ops:
                raise ChannelSpecError("field 'operators': need at least one Kraus operator")
            for i, k in enumerate(ops):
                if np.shape(k) != (2, 2):
                    raise ChannelSpecError(f"field 'operators[{i}]': expected a 2x2 matrix")
            completeness = sum(k.conj().T @ k for k in ops)
            if np.abs(completeness - _I).max() > KRAUS_TOL:
                raise ChannelSpecError("field 'operators': sum of K^dagger K is not the identity")
        else:
            raise ChannelSpecError(f"field 'kind': unknown channel kind {self.kind!r}")

    @classmethod
    def depolarizing(cls, x: float) -> "ChannelSpec":
        return cls("depolarizing", x=float(x))

    @classmethod
    def pauli_channel(cls, p_i: float, p_x: float, p_y: float, p_z: float) -> "ChannelSpec":
        return cls("pauli", pauli=(float(p_i), float(p_x), float(p_y), float(p_z)))

    @classmethod
    def from_kraus(cls, operators: Sequence[np.ndarray]) -> "ChannelSpec":
        return cls("kraus", kraus=tuple(np.asarray(k, dtype=complex) for k in operators))

    def kraus_operators(self) -> tuple[np.ndarray, ...]:
        if self.kind == "kraus":
            return self.kraus
        p_i, p_x, p_y, p_z = self.pauli_probabilities()
        return tuple(np.sqrt(p) * s for p, s in ((p_i, _I), (p_x, _X), (p_y, _Y), (p_z, _Z)) if p > 0)

    def pauli_probabilities(self) -> tuple[float, float, float, float]:
        if self.kind == "depolarizing":
            q = (1.0 - self.x) / 4.0
            return (depolarizing_fidelity(self.x), q, q, q)
        if self.kind == "pauli":
            return self.pauli
        raise ChannelSpecError("a Kraus channel has no Pauli probability form")


def depolarizing_fidelity(x: float) -> float:
    """Fidelity of a qubit that is left undepolarized with probability ``x``."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return (3.0 * x + 1.0) / 4.0


def pauli_to_bell_diagonal(p: Sequence[float]) -> BellDiagonal:
    """(pI, pX, pY, pZ) to Bell weights in canonical order (Phi+, Psi+, Phi-, Psi-)."""
    p_i, p_x, p_y, p_z = p
    return BellDiagonal((p_i, p_x, p_z, p_y))


def twirl_to_werner(m: BellDiagonal) -> BellDiagonal:
    """Werner state with the largest Bell weight moved to Phi+."""
    if not isinstance(m, BellDiagonal):
        m = BellDiagonal(m)
    return werner_state(float(np.max(m.probs)))


def choi_state(operators: Sequence[np.ndarray]) -> np.ndarray:
    """Two-qubit state after Bob's half of Phi+ passes through the channel."""
    phi = BELL_VECTORS[0]
    rho = np.zeros((4, 4), dtype=complex)
    for k in operators:
        v = np.kron(_I, k) @ phi
        rho += np.outer(v, v.conj())
    return rho


def bell_diagonal_of(rho: np.ndarray) -> BellDiagonal:
    diag = np.real(np.einsum("bi,ij,bj->b", BELL_VECTORS.conj(), rho, BELL_VECTORS))
    return BellDiagonal(np.clip(diag, 0.0, None) / np.clip(diag, 0.0, None).sum())


def _su2(angles: Sequence[float]) -> np.ndarray:
    a, b, c = angles
    rz1 = np.diag([np.exp(-0.5j * a), np.exp(0.5j * a)])
    ry = np.array([[np.cos(b / 2), -np.sin(b / 2)], [np.sin(b / 2), np.cos(b / 2)]])
    rz2 = np.diag([np.exp(-0.5j * c), np.exp(0.5j * c)])
    return rz1 @ ry @ rz2


def _aligned_fidelity(angles, operators) -> float:
    u = _su2(angles)
    return float(sum(abs(np.trace(u @ k)) ** 2 for k in operators) / 4.0)


def entangled_fraction_search(operators: Sequence[np.ndarray], grid: int = 9,
                              refine: int = 3) -> tuple[float, np.ndarray]:
    """Best overlap with a maximally entangled state reachable by a local unitary on Bob.

    Every maximally entangled state is (1 x U)|Phi+> for some U, so this
    searches the right set; the answer is a lower bound only because the
    search is numerical.  Returns (fraction, aligning unitary).
    """
    ops = [np.asarray(k, dtype=complex) for k in operators]
    axis_a = np.linspace(0, 2 * np.pi, 2 * grid, endpoint=False)
    axis_b = np.linspace(0, np.pi, grid)
    scored = []
    for a in axis_a:
        for b in axis_b:
            for c in axis_a:
                scored.append((_aligned_fidelity((a, b, c), ops), (a, b, c)))
    scored.sort(key=lambda t: -t[0])
    best_val, best_ang = scored[0]
    for _, start in scored[:refine]:
        res = minimize(lambda ang: -_aligned_fidelity(ang, ops), np.array(start),
                       method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
        if -res.fun > best_val:
            best_val, best_ang = -res.fun, tuple(res.x)
    return min(best_val, 1.0), _su2(best_ang)


def induced_state(spec: ChannelSpec) -> BellDiagonal:
    """Bell-basis weights of the shared pair, aligned so Phi+ carries the best overlap."""
    if spec.kind in ("depolarizing", "pauli"):
        return pauli_to_bell_diagonal(spec.pauli_probabilities())
    _, u = entangled_fraction_search(spec.kraus)
    ops = [u @ k for k in spec.kraus]
    return bell_diagonal_of(choi_state(ops))


@functools.lru_cache(maxsize=None)
def cutoff_fidelity(k: int) -> float:
    return solve_threshold(k)


@dataclass(frozen=True)
class WorkingFidelity:
    f: float
    f_c: float
    k: int

    @property
    def usable(self) -> bool:
        return self.f >= self.f_c


def channel_usable(spec: ChannelSpec, k: int) -> WorkingFidelity:
    """Twirled fidelity of the channel against the block-size-k cutoff."""
    f = twirl_to_werner(induced_state(spec)).fidelity
    return WorkingFidelity(f, cutoff_fidelity(k), k)


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ChannelSpecError(f"field '{where}': expected a number, got {value!r}")
    return float(value)


def _complex_matrix(raw: Any, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != 2:
        raise ChannelSpecError(f"field '{where}': expected 2 rows")
    out = np.zeros((2, 2), dtype=complex)
    for r, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != 2:
            raise ChannelSpecError(f"field '{where}[{r}]': expected 2 entries")
        for c, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != 2:
                raise ChannelSpecError(f"field '{where}[{r}][{c}]': expected [re, im]")
            out[r, c] = complex(_number(entry[0], f"{where}[{r}][{c}][0]"),
                                _number(entry[1], f"{where}[{r}][{c}][1]"))
    return out


def parse_channel_spec(data: Any) -> ChannelSpec:
    if not isinstance(data, dict):
        raise ChannelSpecError("top level: expected a JSON object")
    kind = data.get("kind")
    if kind == "depolarizing":
        if "x" in data:
            return ChannelSpec.depolarizing(_number(data["x"], "x"))
        if "f" in data:
            f = _number(data["f"], "f")
            return ChannelSpec.depolarizing((4.0 * f - 1.0) / 3.0)
        raise ChannelSpecError("field 'x': missing")
    if kind == "pauli":
        probs = data.get("probabilities")
        if isinstance(probs, dict):
            try:
                values = [_number(probs[key], f"probabilities.{key}") for key in "IXYZ"]
            except KeyError as exc:
                raise ChannelSpecError(f"field 'probabilities.{exc.args[0]}': missing") from None
        elif isinstance(probs, list) and len(probs) == 4:
            values = [_number(v, f"probabilities[{i}]") for i, v in enumerate(probs)]
        else:
            raise ChannelSpecError("field 'probabilities': expected {I, X, Y, Z} or a 4-list")
        return ChannelSpec.pauli_channel(*values)
    if kind == "kraus":
        ops = data.get("operators")
        if not isinstance(ops, list) or not ops:
            raise ChannelSpecError("field 'operators': expected a non-empty list")
        return ChannelSpec.from_kraus([_complex_matrix(op, f"operators[{i}]") for i, op in enumerate(ops)])
    raise ChannelSpecError(f"field 'kind': unknown channel kind {kind!r}")


def load_channel_spec(path: str | Path) -> ChannelSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelSpecError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_channel_spec(data)
