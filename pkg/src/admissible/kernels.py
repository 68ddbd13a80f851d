"""Hot loops over pairs of ball elements and over (t, tau) grids.

Every kernel exists twice: a numba-compiled loop and a vectorised numpy
version. The public names dispatch on :data:`admissible._accel.USE_NUMBA`;
both variants stay importable so they can be compared against each other
(see ``benchmarks/bench_kernels.py``).

Weights enter the kernels as a family code plus two parameters, evaluated on
integer word lengths ``n``:

* ``TRIVIAL``: 1
* ``POLYNOMIAL``: ``(1 + n) ** p1``
* ``SUBEXPONENTIAL``: ``exp(p1 * n ** p2)``
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

TRIVIAL = 0
POLYNOMIAL = 1
SUBEXPONENTIAL = 2


# --------------------------------------------------------------------------
# numpy path
# --------------------------------------------------------------------------

def weight_of_length_numpy(lengths, family, p1, p2):
    n = np.asarray(lengths, dtype=np.float64)
    if family == TRIVIAL:
        return np.ones_like(n)
    if family == POLYNOMIAL:
        return (1.0 + n) ** p1
    return np.exp(p1 * n ** p2)


def _last_argmax(values):
    flat = values.ravel()
    return flat.size - 1 - int(np.argmax(flat[::-1]))


def submultiplicative_scan_numpy(len_x, len_y, len_xy, family, p1, p2):
    wx = weight_of_length_numpy(len_x, family, p1, p2)
    wy = weight_of_length_numpy(len_y, family, p1, p2)
    wxy = weight_of_length_numpy(len_xy, family, p1, p2)
    ratio = wxy / (wx[:, None] * wy[None, :])
    k = _last_argmax(ratio)
    i, j = divmod(k, ratio.shape[1])
    return float(ratio[i, j]), i, j


def splitting_scan_numpy(len_y, len_z, len_zy, wfam, w1, w2, vfam, v1, v2):
    wy = weight_of_length_numpy(len_y, wfam, w1, w2)
    wz = weight_of_length_numpy(len_z, wfam, w1, w2)
    vz = weight_of_length_numpy(len_z, vfam, v1, v2)
    wzy = weight_of_length_numpy(len_zy, wfam, w1, w2)
    vzy = weight_of_length_numpy(len_zy, vfam, v1, v2)
    ratio = wy[:, None] / (wz[None, :] * vzy + vz[None, :] * wzy)
    k = _last_argmax(ratio)
    i, j = divmod(k, ratio.shape[1])
    return float(ratio[i, j]), i, j


def tradeoff_minimum_numpy(a, b, t):
    """Row-wise ``min_k a[k] + b[k] * t[i]`` and the first minimising index."""
    values = a[None, :] + b[None, :] * t[:, None]
    idx = np.argmin(values, axis=1)
    return values[np.arange(t.size), idx], idx


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

@njit
def _weight_nb(n, family, p1, p2):
    if family == 0:
        return 1.0
    if family == 1:
        return (1.0 + n) ** p1
    return math.exp(p1 * float(n) ** p2)


@njit
def _weight_table_nb(max_len, family, p1, p2):
    # lengths are small nonnegative integers: one pow per length, not per pair
    table = np.empty(max_len + 1)
    for n in range(max_len + 1):
        table[n] = _weight_nb(n, family, p1, p2)
    return table


@njit
def submultiplicative_scan_numba(len_x, len_y, len_xy, family, p1, p2):
    top = max(len_x.max(), len_y.max(), len_xy.max())
    w = _weight_table_nb(top, family, p1, p2)
    best = -1.0
    bi = 0
    bj = 0
    for i in range(len_x.shape[0]):
        wx = w[len_x[i]]
        for j in range(len_y.shape[0]):
            r = w[len_xy[i, j]] / (wx * w[len_y[j]])
            if r >= best:
                best = r
                bi = i
                bj = j
    return best, bi, bj


@njit
def splitting_scan_numba(len_y, len_z, len_zy, wfam, w1, w2, vfam, v1, v2):
    top = max(len_y.max(), len_z.max(), len_zy.max())
    w = _weight_table_nb(top, wfam, w1, w2)
    v = _weight_table_nb(top, vfam, v1, v2)
    best = -1.0
    bi = 0
    bj = 0
    for i in range(len_y.shape[0]):
        wy = w[len_y[i]]
        for j in range(len_z.shape[0]):
            c = len_zy[i, j]
            r = wy / (w[len_z[j]] * v[c] + v[len_z[j]] * w[c])
            if r >= best:
                best = r
                bi = i
                bj = j
    return best, bi, bj


@njit
def tradeoff_minimum_numba(a, b, t):
    m = np.empty(t.shape[0])
    idx = np.empty(t.shape[0], dtype=np.int64)
    for i in range(t.shape[0]):
        best = np.inf
        bk = 0
        for k in range(a.shape[0]):
            v = a[k] + b[k] * t[i]
            if v < best:
                best = v
                bk = k
        m[i] = best
        idx[i] = bk
    return m, idx


NUMPY_KERNELS = {
    "submultiplicative_scan": submultiplicative_scan_numpy,
    "splitting_scan": splitting_scan_numpy,
    "tradeoff_minimum": tradeoff_minimum_numpy,
}
NUMBA_KERNELS = {
    "submultiplicative_scan": submultiplicative_scan_numba,
    "splitting_scan": splitting_scan_numba,
    "tradeoff_minimum": tradeoff_minimum_numba,
}
ACTIVE = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS


def submultiplicative_scan(len_x, len_y, len_xy, family, p1=0.0, p2=0.0):
    """Largest ``w(xy) / (w(x) w(y))`` over all index pairs.

    Returns ``(ratio, i, j)``; ties go to the last pair in row-major order.
    """
    fn = ACTIVE["submultiplicative_scan"]
    best, i, j = fn(np.ascontiguousarray(len_x, dtype=np.int64),
                    np.ascontiguousarray(len_y, dtype=np.int64),
                    np.ascontiguousarray(len_xy, dtype=np.int64),
                    int(family), float(p1), float(p2))
    return float(best), int(i), int(j)


def splitting_scan(len_y, len_z, len_zy, w_code, v_code):
    """Largest ``w(y) / (w(z) v(z^-1 y) + v(z) w(z^-1 y))`` over index pairs ``(y, z)``.

    ``w_code`` and ``v_code`` are ``(family, p1, p2)`` triples. Ties go to the
    last pair in row-major order.
    """
    fn = ACTIVE["splitting_scan"]
    best, i, j = fn(np.ascontiguousarray(len_y, dtype=np.int64),
                    np.ascontiguousarray(len_z, dtype=np.int64),
                    np.ascontiguousarray(len_zy, dtype=np.int64),
                    int(w_code[0]), float(w_code[1]), float(w_code[2]),
                    int(v_code[0]), float(v_code[1]), float(v_code[2]))
    return float(best), int(i), int(j)


def tradeoff_minimum(a, b, t):
    fn = ACTIVE["tradeoff_minimum"]
    m, idx = fn(np.ascontiguousarray(a, dtype=np.float64),
                np.ascontiguousarray(b, dtype=np.float64),
                np.ascontiguousarray(t, dtype=np.float64))
    return np.asarray(m), np.asarray(idx, dtype=np.int64)
