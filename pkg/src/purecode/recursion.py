"""Branch updates, recursive expected entropy, yields and threshold solving."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels
from .bell import BellDiagonal, entropy, werner_state

DEFAULT_MAX_K = 24
SCAN_LO = 0.75
SCAN_HI = 0.90
SCAN_STEP = 1e-3
BISECT_TOL = 1e-8


class ThresholdBracketError(RuntimeError):
    """No sign change of S(k, f) - 1 was found on the scan grid."""


@dataclass(frozen=True)
class BranchUpdate:
    """Outcome probabilities and conditional source states of one BXOR round.

    ``p0``/``m0`` are the agree branch (target amplitude matches source),
    ``p1``/``m1`` the disagree branch.  A branch with zero probability carries
    a placeholder state and ``reachable`` is False for it.
    """

    p0: float
    m0: BellDiagonal
    p1: float
    m1: BellDiagonal
    reachable: tuple[bool, bool] = (True, True)


class RecursionResult(NamedTuple):
    k: int
    f: float
    s_value: float
    leaf_count: int
    leaf_mass: float


class YieldPoint(NamedTuple):
    f: float
    k: int
    d_value: float


def _check_f(f: float) -> float:
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {f}")
    return f


def branch_images(v: np.ndarray, f: float) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized agree/disagree images of a source weight vector ``v``.

    The target is the Werner state of fidelity ``f``.  The two images sum to
    the total mass of ``v``.
    """
    g = (1.0 - f) / 3.0
    a, b, c, d = v
    agree = np.array([f * a + g * c, g * b + g * d, g * a + f * c, g * b + g * d])
    differ = np.array([g * a + g * c, f * b + g * d, g * a + g * c, g * b + f * d])
    return agree, differ


def branch_update(m: BellDiagonal, f: float) -> BranchUpdate:
    f = _check_f(f)
    if not isinstance(m, BellDiagonal):
        m = BellDiagonal(m)
    u0, u1 = branch_images(m.probs, f)
    p0 = float(u0.sum())
    p1 = float(u1.sum())
    total = p0 + p1
    p0, p1 = p0 / total, p1 / total
    if p1 == 0.0:
        return BranchUpdate(1.0, BellDiagonal.from_unnormalized(u0), 0.0, werner_state(1.0), (True, False))
    if p0 == 0.0:
        return BranchUpdate(0.0, werner_state(1.0), 1.0, BellDiagonal.from_unnormalized(u1), (False, True))
    return BranchUpdate(p0, BellDiagonal.from_unnormalized(u0), p1, BellDiagonal.from_unnormalized(u1))


def _check_k(k: int, max_k: int) -> int:
    if int(k) != k or k < 1:
        raise ValueError(f"block size must be an integer >= 1, got {k}")
    if k > max_k:
        raise ValueError(f"block size {k} exceeds the configured maximum {max_k}")
    return int(k)


def expected_entropy(k: int, f: float, max_k: int = DEFAULT_MAX_K) -> RecursionResult:
    """Expected entropy S(k, f) of the source pair after one block round.

    All 2**(k-1) branches are enumerated exactly with unnormalized weight
    vectors; each leaf is normalized only inside the entropy.
    """
    k = _check_k(k, max_k)
    f = _check_f(f)
    s, mass = kernels.block_entropy(k, f)
    return RecursionResult(k, f, min(max(s, 0.0), 2.0), 1 << (k - 1), mass)


def entropy_recursive(k: int, m: BellDiagonal, f: float) -> float:
    """Direct transcription of the recursion; slow, for cross-checks only."""
    if k == 1:
        return entropy(m)
    up = branch_update(m, f)
    total = 0.0
    if up.reachable[0]:
        total += up.p0 * entropy_recursive(k - 1, up.m0, f)
    if up.reachable[1]:
        total += up.p1 * entropy_recursive(k - 1, up.m1, f)
    return total


def leaf_states(k: int, f: float) -> dict[str, np.ndarray]:
    """Unnormalized source weight vector for every agreement string.

    Character ``i`` of the key is the outcome of folding target pair ``i + 2``
    into the source ('0' agree, '1' disagree).  Values sum to one overall.
    """
    k = _check_k(k, 16)
    f = _check_f(f)
    leaves = {"": np.array(werner_state(f).probs)}
    for _ in range(k - 1):
        nxt = {}
        for bits, v in leaves.items():
            u0, u1 = branch_images(v, f)
            nxt[bits + "0"] = u0
            nxt[bits + "1"] = u1
        leaves = nxt
    return leaves


def yield_at(k: int, f: float, max_k: int = DEFAULT_MAX_K) -> YieldPoint:
    res = expected_entropy(k, f, max_k)
    return YieldPoint(res.f, res.k, max(0.0, (1.0 - res.s_value) / res.k))


def solve_threshold(k: int, lo: float = SCAN_LO, hi: float = SCAN_HI,
                    step: float = SCAN_STEP, tol: float = BISECT_TOL,
                    max_k: int = DEFAULT_MAX_K) -> float:
    """Fidelity where S(k, f) = 1.

    Scans ``[lo, hi]`` for the first sign change of S - 1 and bisects it
    down to width ``tol``.  Monotonicity in ``f`` is not assumed.
    """
    k = _check_k(k, max_k)

    def excess(f: float) -> float:
        return kernels.block_entropy(k, f)[0] - 1.0

    n = int(round((hi - lo) / step))
    grid = [lo + i * step for i in range(n + 1)]
    a = grid[0]
    fa = excess(a)
    for b in grid[1:]:
        fb = excess(b)
        if fa == 0.0:
            return a
        if (fa > 0.0) != (fb > 0.0):
            break
        a, fa = b, fb
    else:
        raise ThresholdBracketError(
            f"S({k}, f) - 1 has no sign change on [{lo}, {hi}] at step {step}")
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = excess(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def f_grid(f_min: float, f_max: float, step: float) -> list[float]:
    """Inclusive grid from ``f_min`` to ``f_max``; points are ``f_min + i*step``."""
    if step <= 0:
        raise ValueError("step must be positive")
    if not 0.0 <= f_min < f_max <= 1.0:
        raise ValueError(f"need 0 <= f_min < f_max <= 1, got {f_min}, {f_max}")
    n = int(np.floor((f_max - f_min) / step + 1e-9))
    pts = [round(f_min + i * step, 12) for i in range(n + 1)]
    return [min(p, 1.0) for p in pts]


def yield_curve(k_list: Iterable[int], f_min: float, f_max: float, step: float,
                max_k: int = DEFAULT_MAX_K) -> list[YieldPoint]:
    ks = list(k_list)
    if not ks:
        raise ValueError("k_list is empty")
    for k in ks:
        _check_k(k, max_k)
    fs = f_grid(f_min, f_max, step)
    return [yield_at(k, f, max_k) for k in ks for f in fs]
