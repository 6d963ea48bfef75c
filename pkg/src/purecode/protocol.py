"""Protocol-level oracles for the block stage.

Two independent views of the same round:

* purification view: k noisy Bell pairs, targets folded into the first pair
  with the BXOR table, target amplitudes compared;
* code view: a cat state whose k qubits cross the channel, decoded with
  CNOTs from qubit 0, tracked as a Pauli frame.

Both are available as seeded Monte Carlo and as exact enumeration.
"""

from __future__ import annotations

import csv
import io
import itertools
from collections import Counter
from typing import Mapping, NamedTuple

import numpy as np

from . import kernels
from .bell import (BELL_TO_PAULI, BXOR_SOURCE, BXOR_TARGET, BellLabel,
                   entropy_bits, pauli_to_bell, werner_state)
from .recursion import leaf_states
from .rng import MASK64, default_seed

MAX_ENUM_K = 12
MAX_CODE_ENUM_K = 8
MAX_SIM_K = 20
PAULIS = ("I", "X", "Z", "Y")  # index = x_bit | z_bit << 1


class BlockOutcome(NamedTuple):
    agreement_bits: str
    residual: BellLabel


class CodeBlockOutcome(NamedTuple):
    syndrome_bits: str
    residual_error: str


def _bits(value: int, width: int) -> str:
    return "".join("1" if (value >> i) & 1 else "0" for i in range(width))


def _cuts(f: float) -> np.ndarray:
    g = (1.0 - f) / 3.0
    return np.array([f, f + g, f + 2.0 * g])


def _validate(k: int, f: float, limit: int) -> None:
    if int(k) != k or k < 1:
        raise ValueError(f"block size must be an integer >= 1, got {k}")
    if k > limit:
        raise ValueError(f"block size {k} exceeds limit {limit}")
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {f}")


def _seed(seed: int | None) -> int:
    return (default_seed() if seed is None else int(seed)) & MASK64


def block_counts(k: int, f: float, shots: int, seed: int | None = None,
                 start: int = 0) -> np.ndarray:
    """Raw counts array [agreement int, residual index] for shots start..start+shots-1."""
    _validate(k, f, MAX_SIM_K)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    return kernels.sample_block(int(k), _cuts(f), int(shots), _seed(seed), int(start),
                                BXOR_SOURCE, BXOR_TARGET)


def simulate_block(k: int, f: float, shots: int, seed: int | None = None,
                   start: int = 0) -> Counter:
    """Monte Carlo histogram over BlockOutcome for the purification view."""
    counts = block_counts(k, f, shots, seed, start)
    hist = Counter()
    for a, r in zip(*np.nonzero(counts)):
        hist[BlockOutcome(_bits(int(a), k - 1), BellLabel(int(r)))] = int(counts[a, r])
    return hist


def simulate_code_block(k: int, f: float, shots: int, seed: int | None = None,
                        start: int = 0) -> Counter:
    """Monte Carlo histogram over CodeBlockOutcome for the cat-state code."""
    _validate(k, f, MAX_SIM_K)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    counts = kernels.sample_code_block(int(k), _cuts(f), int(shots), _seed(seed), int(start))
    hist = Counter()
    for s, r in zip(*np.nonzero(counts)):
        hist[CodeBlockOutcome(_bits(int(s), k - 1), PAULIS[int(r)])] = int(counts[s, r])
    return hist


def enumerate_block(k: int, f: float, source: int = 0) -> dict[BlockOutcome, float]:
    """Exact outcome distribution by summing over all 4**k label assignments.

    Pair ``source`` is the source; the other pairs are folded in ascending
    index order.  Every (agreement string, residual) cell is present,
    including zeros.
    """
    _validate(k, f, MAX_ENUM_K)
    if not 0 <= source < k:
        raise ValueError(f"source index {source} out of range for k={k}")
    targets = [j for j in range(k) if j != source]
    w = np.array(werner_state(f).probs)
    probs = np.zeros((1 << (k - 1), 4))
    chunk = 1 << 20
    total = 4 ** k
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        src = (idx >> (2 * source)) & 3
        weight = w[src].copy()
        agree = np.zeros_like(idx)
        for pos, j in enumerate(targets):
            tgt = (idx >> (2 * j)) & 3
            weight *= w[tgt]
            new_tgt = BXOR_TARGET[src, tgt]
            src = BXOR_SOURCE[src, tgt]
            agree |= (new_tgt & 1) << pos
        probs += np.bincount(agree * 4 + src, weights=weight,
                             minlength=probs.size).reshape(probs.shape)
    return {BlockOutcome(_bits(a, k - 1), BellLabel(r)): float(probs[a, r])
            for a in range(probs.shape[0]) for r in range(4)}


def _cnot(frame: list[list[int]], control: int, target: int) -> None:
    # frame[q] = [x, z]; X spreads control -> target, Z spreads target -> control
    frame[target][0] ^= frame[control][0]
    frame[control][1] ^= frame[target][1]


def _pauli_bits(p: str) -> list[int]:
    return [int(p in "XY"), int(p in "ZY")]


def decode_code_block(errors: str) -> CodeBlockOutcome:
    """Decode one error pattern (one Pauli letter per qubit) through the cat code."""
    frame = [_pauli_bits(p) for p in errors]
    k = len(frame)
    for q in range(1, k):
        _cnot(frame, 0, q)
    syndrome = "".join(str(frame[q][0]) for q in range(1, k))
    x, z = frame[0]
    return CodeBlockOutcome(syndrome, PAULIS[x | (z << 1)])


def enumerate_code_block(k: int, f: float) -> dict[CodeBlockOutcome, float]:
    """Exhaustive mode of the code view: every Pauli pattern on the k qubits."""
    _validate(k, f, MAX_CODE_ENUM_K)
    g = (1.0 - f) / 3.0
    weight_of = {"I": f, "X": g, "Z": g, "Y": g}
    dist = {CodeBlockOutcome(_bits(s, k - 1), p): 0.0
            for s in range(1 << (k - 1)) for p in PAULIS}
    for pattern in itertools.product(PAULIS, repeat=k):
        w = 1.0
        for p in pattern:
            w *= weight_of[p]
        dist[decode_code_block("".join(pattern))] += w
    return dist


def code_to_block(dist: Mapping[CodeBlockOutcome, float]) -> dict[BlockOutcome, float]:
    """Relabel a code-view distribution into purification-view outcomes."""
    out: dict[BlockOutcome, float] = {}
    for key, value in dist.items():
        bk = BlockOutcome(key.syndrome_bits, pauli_to_bell(key.residual_error))
        out[bk] = out.get(bk, 0.0) + value
    return out


def block_to_code(outcome: BlockOutcome) -> CodeBlockOutcome:
    return CodeBlockOutcome(outcome.agreement_bits, BELL_TO_PAULI[outcome.residual])


def conditional_table(dist: Mapping[BlockOutcome, float]) -> dict[str, np.ndarray]:
    """Group outcome weights into a residual 4-vector per agreement string."""
    table: dict[str, np.ndarray] = {}
    for key, value in dist.items():
        table.setdefault(key.agreement_bits, np.zeros(4))[int(key.residual)] += value
    return table


def conditional_entropy(dist: Mapping[BlockOutcome, float]) -> float:
    """Expected entropy of the residual given the agreement string."""
    total = 0.0
    for vec in conditional_table(dist).values():
        mass = vec.sum()
        if mass > 0:
            total += mass * entropy_bits(vec / mass)
    return total


def conditional_tvd(hist: Mapping[BlockOutcome, int], k: int, f: float) -> dict[str, float]:
    """Total-variation distance between empirical and exact conditional residuals."""
    exact = leaf_states(k, f)
    emp = conditional_table(hist)
    out = {}
    for bits, counts in emp.items():
        n = counts.sum()
        ref = exact[bits] / exact[bits].sum()
        out[bits] = 0.5 * float(np.abs(counts / n - ref).sum())
    return out


def weighted_tvd(hist: Mapping[BlockOutcome, int], k: int, f: float) -> float:
    """Conditional TVD averaged over agreement strings, weighted by exact mass.

    The unweighted maximum is dominated by sampling noise on rare strings.
    """
    exact = leaf_states(k, f)
    return float(sum(exact[b].sum() * t for b, t in conditional_tvd(hist, k, f).items()))


def stage_agreement(k: int, f: float, hist: Mapping[BlockOutcome, int] | None = None) -> list[float]:
    """Probability that stage j (1..k-1) agrees; empirical if ``hist`` given."""
    if hist is None:
        source = {b: float(v.sum()) for b, v in leaf_states(k, f).items()}
    else:
        source = {b: float(v.sum()) for b, v in conditional_table(hist).items()}
    total = sum(source.values())
    return [sum(w for b, w in source.items() if b[j] == "0") / total for j in range(k - 1)]


def histogram_csv(hist: Mapping[BlockOutcome, int], k: int) -> str:
    """CSV text with columns agreement_bits,residual,count; all cells listed."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["agreement_bits", "residual", "count"])
    for a in range(1 << (k - 1)):
        bits = _bits(a, k - 1)
        for label in BellLabel:
            writer.writerow([bits, label.short, hist.get(BlockOutcome(bits, label), 0)])
    return buf.getvalue()


def read_histogram_csv(text: str) -> Counter:
    hist = Counter()
    for row in csv.DictReader(io.StringIO(text)):
        count = int(row["count"])
        if count:
            hist[BlockOutcome(row["agreement_bits"], BellLabel.parse(row["residual"]))] = count
    return hist
