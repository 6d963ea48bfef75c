# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_pykernels`` for the contracts."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, log2
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t key, uint64_t counter) noexcept nogil:
    return <double>(_mix(key + (counter + 1) * GAMMA) >> 11) * (1.0 / 9007199254740992.0)


cdef inline int _label(double u, double c0, double c1, double c2) noexcept nogil:
    return (u >= c0) + (u >= c1) + (u >= c2)


cdef inline void _add(double* acc, double x) noexcept nogil:
    # Neumaier compensated sum: acc[0] running sum, acc[1] correction
    cdef double t = acc[0] + x
    if fabs(acc[0]) >= fabs(x):
        acc[1] += (acc[0] - t) + x
    else:
        acc[1] += (x - t) + acc[0]
    acc[0] = t


cdef void _walk(double a, double b, double c, double d, int depth,
                double f, double g, double* s_acc, double* p_acc) noexcept nogil:
    cdef double p, ac, bd, h
    if depth == 0:
        p = a + b + c + d
        _add(p_acc, p)
        h = 0.0
        if a > 0:
            h -= a * log2(a / p)
        if b > 0:
            h -= b * log2(b / p)
        if c > 0:
            h -= c * log2(c / p)
        if d > 0:
            h -= d * log2(d / p)
        _add(s_acc, h)
        return
    ac = g * (a + c)
    bd = g * (b + d)
    _walk(f * a + g * c, bd, g * a + f * c, bd, depth - 1, f, g, s_acc, p_acc)
    _walk(ac, f * b + g * d, ac, g * b + f * d, depth - 1, f, g, s_acc, p_acc)


def block_entropy(int k, double f):
    cdef double g = (1.0 - f) / 3.0
    cdef double s[2]
    cdef double p[2]
    s[0] = s[1] = p[0] = p[1] = 0.0
    with nogil:
        _walk(f, g, g, g, k - 1, f, g, s, p)
    return s[0] + s[1], p[0] + p[1]


def sample_block(int k, const double[::1] cuts, int64_t shots, uint64_t seed, int64_t start,
                 const int64_t[:, ::1] bxor_source, const int64_t[:, ::1] bxor_target):
    counts_arr = np.zeros((1 << (k - 1), 4), dtype=np.int64)
    cdef int64_t[:, ::1] counts = counts_arr
    cdef uint64_t key = _mix(seed)
    cdef double c0 = cuts[0], c1 = cuts[1], c2 = cuts[2]
    cdef int64_t shot
    cdef int j, src, tgt, new_tgt
    cdef int64_t agree
    cdef uint64_t base
    with nogil:
        for shot in range(start, start + shots):
            base = <uint64_t>shot * <uint64_t>k
            src = _label(_uniform(key, base), c0, c1, c2)
            agree = 0
            for j in range(1, k):
                tgt = _label(_uniform(key, base + j), c0, c1, c2)
                new_tgt = <int>bxor_target[src, tgt]
                src = <int>bxor_source[src, tgt]
                agree |= <int64_t>(new_tgt & 1) << (j - 1)
            counts[agree, src] += 1
    return counts_arr


def sample_code_block(int k, const double[::1] cuts, int64_t shots, uint64_t seed, int64_t start):
    counts_arr = np.zeros((1 << (k - 1), 4), dtype=np.int64)
    cdef int64_t[:, ::1] counts = counts_arr
    cdef uint64_t key = _mix(seed)
    cdef double c0 = cuts[0], c1 = cuts[1], c2 = cuts[2]
    cdef int64_t shot, syndrome
    cdef int j, e, x0, z0, xj
    cdef uint64_t base
    with nogil:
        for shot in range(start, start + shots):
            base = <uint64_t>shot * <uint64_t>k
            e = _label(_uniform(key, base), c0, c1, c2)
            x0 = e & 1
            z0 = e >> 1
            syndrome = 0
            for j in range(1, k):
                e = _label(_uniform(key, base + j), c0, c1, c2)
                # decoder CNOT 0 -> j: X copies forward, Z copies back
                xj = (e & 1) ^ x0
                z0 ^= e >> 1
                syndrome |= <int64_t>xj << (j - 1)
            counts[syndrome, x0 | (z0 << 1)] += 1
    return counts_arr


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _parity(uint64_t v) noexcept nogil:
    return __builtin_popcountll(v) & 1


def decode_scan(int n_pairs, cnp.ndarray masks, cnp.ndarray parities, const double[:, ::1] prior):
    cdef uint64_t[::1] mk = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef int64_t[::1] pb = np.ascontiguousarray(parities, dtype=np.int64)
    cdef int m = mk.shape[0]
    cdef uint64_t n_cand = (<uint64_t>1) << (2 * n_pairs)
    cdef uint64_t cand, best = 0
    cdef int i, ok
    cdef double w, best_w = -1.0, total = 0.0
    cdef int64_t matched = 0
    with nogil:
        for cand in range(n_cand):
            ok = 1
            for i in range(m):
                if _parity(cand & mk[i]) != pb[i]:
                    ok = 0
                    break
            if not ok:
                continue
            w = 1.0
            for i in range(n_pairs):
                w = w * prior[i, (cand >> (2 * i)) & 3]
            matched += 1
            total += w
            if w > best_w:
                best_w = w
                best = cand
    if matched == 0:
        return -1, 0.0, 0.0, 0
    return int(best), best_w, total, int(matched)
