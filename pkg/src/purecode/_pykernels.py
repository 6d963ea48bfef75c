"""Numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or ``PURECODE_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import numpy as np

from .rng import uniforms

# Levels expanded in one vectorized step; deeper trees are walked one
# subtree root at a time to cap memory at 2**_CHUNK_LEVELS rows.
_CHUNK_LEVELS = 16
_SHOT_CHUNK = 1 << 17


def _expand(vs: np.ndarray, levels: int, f: float, g: float) -> np.ndarray:
    for _ in range(levels):
        a, b, c, d = vs[:, 0], vs[:, 1], vs[:, 2], vs[:, 3]
        ac = g * (a + c)
        bd = g * (b + d)
        agree = np.stack([f * a + g * c, bd, g * a + f * c, bd], axis=1)
        differ = np.stack([ac, f * b + g * d, ac, g * b + f * d], axis=1)
        vs = np.concatenate([agree, differ])
    return vs


def _leaf_sums(vs: np.ndarray) -> tuple[float, float]:
    p = vs.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(vs > 0, vs * np.log2(vs / p), 0.0)
    return float(-terms.sum()), float(p.sum())


def block_entropy(k: int, f: float) -> tuple[float, float]:
    """Return (expected entropy, total leaf probability) for block size k."""
    g = (1.0 - f) / 3.0
    root = np.array([[f, g, g, g]], dtype=np.float64)
    levels = k - 1
    if levels <= _CHUNK_LEVELS:
        return _leaf_sums(_expand(root, levels, f, g))
    tops = _expand(root, levels - _CHUNK_LEVELS, f, g)
    s_total = 0.0
    p_total = 0.0
    for row in tops:
        s, p = _leaf_sums(_expand(row[None, :], _CHUNK_LEVELS, f, g))
        s_total += s
        p_total += p
    return s_total, p_total


def _draw_labels(seed, k, cuts, start, stop) -> np.ndarray:
    shots = np.arange(start, stop, dtype=np.uint64)
    counters = shots[:, None] * np.uint64(k) + np.arange(k, dtype=np.uint64)[None, :]
    u = uniforms(seed, counters)
    return ((u >= cuts[0]).astype(np.int64) + (u >= cuts[1]) + (u >= cuts[2]))


def sample_block(k: int, cuts: np.ndarray, shots: int, seed: int, start: int,
                 bxor_source: np.ndarray, bxor_target: np.ndarray) -> np.ndarray:
    """Counts indexed [agreement bits as int (bit i = target i+1), residual].

    ``cuts`` are the cumulative label probabilities (3 values); a uniform
    draw ``u`` selects label ``sum(u >= cuts)``.
    """
    counts = np.zeros((1 << (k - 1), 4), dtype=np.int64)
    for lo in range(start, start + shots, _SHOT_CHUNK):
        hi = min(lo + _SHOT_CHUNK, start + shots)
        labels = _draw_labels(seed, k, cuts, lo, hi)
        src = labels[:, 0]
        agree = np.zeros(hi - lo, dtype=np.int64)
        for j in range(1, k):
            tgt = labels[:, j]
            new_tgt = bxor_target[src, tgt]
            src = bxor_source[src, tgt]
            agree |= (new_tgt & 1) << (j - 1)
        counts += np.bincount(agree * 4 + src, minlength=counts.size).reshape(counts.shape)
    return counts


def sample_code_block(k: int, cuts: np.ndarray, shots: int, seed: int, start: int) -> np.ndarray:
    """Pauli-frame run of the cat-state code.

    Error index per qubit is (I, X, Z, Y) = (0, 1, 2, 3): X component is the
    low bit, Z component the high bit.  Counts are indexed
    [syndrome as int, residual Pauli index].
    """
    counts = np.zeros((1 << (k - 1), 4), dtype=np.int64)
    for lo in range(start, start + shots, _SHOT_CHUNK):
        hi = min(lo + _SHOT_CHUNK, start + shots)
        err = _draw_labels(seed, k, cuts, lo, hi)
        x = err & 1
        z = err >> 1
        syndrome = np.zeros(hi - lo, dtype=np.int64)
        for j in range(1, k):
            # decoder CNOT, control qubit 0 -> target j
            x[:, j] ^= x[:, 0]
            z[:, 0] ^= z[:, j]
            syndrome |= x[:, j] << (j - 1)
        residual = x[:, 0] | (z[:, 0] << 1)
        counts += np.bincount(syndrome * 4 + residual, minlength=counts.size).reshape(counts.shape)
    return counts


def decode_scan(n_pairs: int, masks: np.ndarray, parities: np.ndarray,
                prior: np.ndarray) -> tuple[int, float, float, int]:
    """Exhaustive scan of 4**n_pairs candidates.

    Returns (best candidate, its prior weight, summed weight of candidates
    matching every parity, number of matching candidates).  Ties go to the
    lowest candidate index.
    """
    cand = np.arange(1 << (2 * n_pairs), dtype=np.uint64)
    ok = np.ones(cand.shape, dtype=bool)
    for mask, bit in zip(masks.tolist(), parities.tolist()):
        ok &= (np.bitwise_count(cand & np.uint64(mask)) & 1) == bit
    matched = cand[ok]
    if matched.size == 0:
        return -1, 0.0, 0.0, 0
    weight = np.ones(matched.shape, dtype=np.float64)
    for i in range(n_pairs):
        weight = weight * prior[i][((matched >> np.uint64(2 * i)) & np.uint64(3)).astype(np.int64)]
    best = int(np.argmax(weight))
    return int(matched[best]), float(weight[best]), float(weight.sum()), int(matched.size)
