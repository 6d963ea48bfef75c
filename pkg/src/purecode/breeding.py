"""Small-n breeding stage: random subset parities and exhaustive decoding.

A string of ``n_pairs`` Bell labels is packed into a ``2 * n_pairs``-bit
integer: pair ``i`` uses bit ``2i`` for its amplitude bit and bit ``2i + 1``
for its phase bit (the label index itself).  The decoder here enumerates
all candidates and takes the maximum-posterior one, which is at least as
strong as a typical-set decoder.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from ._format import format_float
from .bell import BellLabel, entropy_bits, werner_state
from .recursion import leaf_states

MAX_DECODE_PAIRS = 10


@dataclass(frozen=True)
class ParityMask:
    """Subset selector: bit ``i`` of each field picks pair ``i``."""

    amplitude_subset: int = 0
    phase_subset: int = 0

    @classmethod
    def of(cls, amplitude: Sequence[int] = (), phase: Sequence[int] = ()) -> "ParityMask":
        return cls(sum(1 << i for i in set(amplitude)), sum(1 << i for i in set(phase)))

    def packed(self, n_pairs: int) -> int:
        limit = 1 << n_pairs
        if self.amplitude_subset >= limit or self.phase_subset >= limit:
            raise ValueError(f"mask selects a pair index >= {n_pairs}")
        if self.amplitude_subset < 0 or self.phase_subset < 0:
            raise ValueError("mask fields must be non-negative")
        out = 0
        for i in range(n_pairs):
            out |= ((self.amplitude_subset >> i) & 1) << (2 * i)
            out |= ((self.phase_subset >> i) & 1) << (2 * i + 1)
        return out


def pack(x: Sequence[BellLabel]) -> int:
    if len(x) < 1:
        raise ValueError("syndrome string must contain at least one pair")
    return sum(int(BellLabel(label)) << (2 * i) for i, label in enumerate(x))


def unpack(value: int, n_pairs: int) -> tuple[BellLabel, ...]:
    return tuple(BellLabel((value >> (2 * i)) & 3) for i in range(n_pairs))


def xor_strings(x: Sequence[BellLabel], y: Sequence[BellLabel]) -> tuple[BellLabel, ...]:
    return unpack(pack(x) ^ pack(y), len(x))


def subset_parity(x: Sequence[BellLabel], mask: ParityMask) -> int:
    return (pack(x) & mask.packed(len(x))).bit_count() & 1


def collision_bound(n_pairs: int, entropy_per_pair: float, m: int, delta: float) -> float:
    """Chance that another typical string shares all ``m`` parities, capped at 1."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return min(1.0, 2.0 ** (n_pairs * entropy_per_pair + delta - m))


def random_masks(m: int, n_pairs: int, seed) -> list[ParityMask]:
    """``m`` masks with every amplitude and phase bit set independently w.p. 1/2."""
    if m < 0:
        raise ValueError("m must be >= 0")
    rng = np.random.default_rng(seed)
    raw = rng.integers(0, 1 << n_pairs, size=(m, 2), dtype=np.int64)
    return [ParityMask(int(a), int(p)) for a, p in raw]


def werner_prior(n_pairs: int, f: float) -> np.ndarray:
    return np.tile(np.array(werner_state(f).probs), (n_pairs, 1))


def heterogeneous_prior(k: int, f: float, n_pairs: int, rng: np.random.Generator) -> np.ndarray:
    """Per-pair priors drawn from the block-stage leaf states for block size ``k``.

    Each pair independently lands in a leaf with that leaf's probability; its
    prior row is the normalized leaf state.
    """
    leaves = leaf_states(k, f)
    keys = sorted(leaves)
    mass = np.array([leaves[b].sum() for b in keys])
    picks = rng.choice(len(keys), size=n_pairs, p=mass / mass.sum())
    return np.array([leaves[keys[i]] / mass[i] for i in picks])


def sample_string(prior: np.ndarray, rng: np.random.Generator) -> tuple[BellLabel, ...]:
    u = rng.random(prior.shape[0])
    cdf = np.cumsum(prior, axis=1)
    idx = np.minimum((u[:, None] >= cdf[:, :3]).sum(axis=1), 3)
    return tuple(BellLabel(int(i)) for i in idx)


@dataclass(frozen=True)
class DecodeResult:
    string: tuple[BellLabel, ...]
    success_probability: float
    matched_candidates: int


def decode_posterior(parities: Sequence[int], masks: Sequence[ParityMask], n_pairs: int,
                     f: float | None = None, prior: np.ndarray | None = None) -> DecodeResult:
    """Maximum-posterior string given the parities, by exhaustive enumeration.

    ``success_probability`` is the posterior mass of the returned string among
    all candidates consistent with the parities.  Pass either ``f`` (i.i.d.
    Werner prior) or an explicit ``(n_pairs, 4)`` prior.
    """
    if not 1 <= n_pairs <= MAX_DECODE_PAIRS:
        raise ValueError(f"n_pairs must be in 1..{MAX_DECODE_PAIRS} (exhaustive decoding limit)")
    if len(parities) != len(masks):
        raise ValueError("need one parity bit per mask")
    if prior is None:
        if f is None:
            raise ValueError("give a fidelity or an explicit prior")
        prior = werner_prior(n_pairs, f)
    prior = np.ascontiguousarray(prior, dtype=np.float64)
    if prior.shape != (n_pairs, 4):
        raise ValueError(f"prior must have shape ({n_pairs}, 4)")
    packed = np.array([mk.packed(n_pairs) for mk in masks], dtype=np.uint64)
    bits = np.array([int(b) & 1 for b in parities], dtype=np.int64)
    best, best_w, total, matched = kernels.decode_scan(n_pairs, packed, bits, prior)
    if matched == 0 or total <= 0.0:
        raise ValueError("no candidate string matches the parities")
    return DecodeResult(unpack(best, n_pairs), best_w / total, matched)


@dataclass
class TrialRecord:
    trial: int
    m: int
    n_pairs: int
    f: float
    success_prob: float
    matched_candidates: int
    correct: bool


@dataclass
class BreedingRun:
    n_pairs: int
    m: int
    f: float
    delta: float
    masks: list[list[ParityMask]] = field(repr=False)
    failure_probability: float
    mean_success_probability: float
    collision_bound: float
    records: list[TrialRecord] = field(repr=False)


def run_breeding(n_pairs: int, m: int, f: float, trials: int, seed: int,
                 delta: float = 2.0) -> BreedingRun:
    """Independent trials: draw a Werner string, ``m`` random parities, decode.

    Trial ``t`` uses the generator seeded with ``[seed, t]``, so any trial can
    be reproduced alone.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 1 <= n_pairs <= MAX_DECODE_PAIRS:
        raise ValueError(f"n_pairs must be in 1..{MAX_DECODE_PAIRS} (exhaustive decoding limit)")
    prior = werner_prior(n_pairs, f)
    records, all_masks = [], []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        truth = sample_string(prior, rng)
        masks = random_masks(m, n_pairs, rng)
        parities = [subset_parity(truth, mk) for mk in masks]
        res = decode_posterior(parities, masks, n_pairs, prior=prior)
        records.append(TrialRecord(t, m, n_pairs, f, res.success_probability,
                                   res.matched_candidates, res.string == truth))
        all_masks.append(masks)
    failures = sum(not r.correct for r in records)
    s = entropy_bits(werner_state(f).probs)
    return BreedingRun(n_pairs, m, f, delta, all_masks, failures / trials,
                       float(np.mean([r.success_prob for r in records])),
                       collision_bound(n_pairs, s, m, delta), records)


def collision_rate(m: int, trials: int, seed: int, n_pairs: int = 16) -> float:
    """Fraction of trials where two distinct uniform strings share ``m`` random parities."""
    if not 1 <= n_pairs <= 31:
        raise ValueError("n_pairs must be in 1..31")
    rng = np.random.default_rng(seed)
    width = 2 * n_pairs
    x = rng.integers(0, 1 << width, size=trials, dtype=np.int64)
    y = rng.integers(0, 1 << width, size=trials, dtype=np.int64)
    same = x == y
    while same.any():
        y[same] = rng.integers(0, 1 << width, size=int(same.sum()), dtype=np.int64)
        same = x == y
    diff = (x ^ y).astype(np.uint64)
    masks = rng.integers(0, 1 << width, size=(trials, m), dtype=np.int64).astype(np.uint64)
    odd = (np.bitwise_count(masks & diff[:, None]) & 1).astype(bool)
    return float(np.mean(~odd.any(axis=1)))


def report_csv(run: BreedingRun, precision: int = 6) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "m", "n_pairs", "f", "success_prob", "matched_candidates"])
    for r in run.records:
        writer.writerow([r.trial, r.m, r.n_pairs, format_float(r.f, precision),
                         format_float(r.success_prob, precision), r.matched_candidates])
    return buf.getvalue()

