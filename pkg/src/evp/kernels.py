"""Resampling kernels used by the Monte-Carlo studies.

Every kernel exists twice: a numba version (``NUMBA``) and a vectorised
numpy version (``NUMPY``). Both consume the same pre-drawn uniforms and
perform floating-point operations in the same order, so they return
bit-identical arrays. The module-level names dispatch to numba when it is
available and ``EVP_DISABLE_NUMBA`` is unset.

Randomness never originates here; callers draw uniforms from a seeded
generator and pass them in. That keeps results independent of the backend
and of how work is split across threads.
"""

from types import SimpleNamespace

import numpy as np

from ._accel import HAVE_NUMBA, USE_NUMBA, njit

# numpy path


def _np_draw_with_replacement(u, size):
    idx = (u * size).astype(np.int64)
    np.minimum(idx, size - 1, out=idx)
    return idx


def _np_draw_without_replacement(u, size):
    # partial Fisher-Yates, one column of uniforms per swap
    n_rows, k = u.shape
    perm = np.tile(np.arange(size, dtype=np.int64), (n_rows, 1))
    rows = np.arange(n_rows)
    for i in range(k):
        j = i + (u[:, i] * (size - i)).astype(np.int64)
        np.minimum(j, size - 1, out=j)
        tmp = perm[rows, i].copy()
        perm[rows, i] = perm[rows, j]
        perm[rows, j] = tmp
    return np.ascontiguousarray(perm[:, :k])


def _np_gather_sorted(values, idx):
    out = values[idx]
    out.sort(axis=1)
    return out


def _np_weighted_sums(rows, weights):
    n_rows, width = rows.shape
    out = np.empty((n_rows, weights.shape[0]))
    for k in range(weights.shape[0]):
        acc = np.zeros(n_rows)
        for i in range(width):
            acc += rows[:, i] * weights[k, i]
        out[:, k] = acc
    return out


def _np_gather_row_max(values, idx):
    return values[idx].max(axis=1)


# numba path


@njit(nogil=True, cache=True)
def _nb_draw_with_replacement(u, size):
    n_rows, k = u.shape
    idx = np.empty((n_rows, k), dtype=np.int64)
    for r in range(n_rows):
        for i in range(k):
            j = np.int64(u[r, i] * size)
            idx[r, i] = j if j < size else size - 1
    return idx


@njit(nogil=True, cache=True)
def _nb_draw_without_replacement(u, size):
    n_rows, k = u.shape
    idx = np.empty((n_rows, k), dtype=np.int64)
    perm = np.empty(size, dtype=np.int64)
    for r in range(n_rows):
        for i in range(size):
            perm[i] = i
        for i in range(k):
            j = i + np.int64(u[r, i] * (size - i))
            if j > size - 1:
                j = size - 1
            tmp = perm[i]
            perm[i] = perm[j]
            perm[j] = tmp
            idx[r, i] = perm[i]
    return idx


@njit(nogil=True, cache=True)
def _nb_gather_sorted(values, idx):
    n_rows, k = idx.shape
    out = np.empty((n_rows, k))
    for r in range(n_rows):
        for i in range(k):
            out[r, i] = values[idx[r, i]]
        out[r, :] = np.sort(out[r, :])
    return out


@njit(nogil=True, cache=True)
def _nb_weighted_sums(rows, weights):
    n_rows, width = rows.shape
    n_w = weights.shape[0]
    out = np.empty((n_rows, n_w))
    for r in range(n_rows):
        for k in range(n_w):
            acc = 0.0
            for i in range(width):
                acc += rows[r, i] * weights[k, i]
            out[r, k] = acc
    return out


@njit(nogil=True, cache=True)
def _nb_gather_row_max(values, idx):
    n_rows, k = idx.shape
    out = np.empty(n_rows)
    for r in range(n_rows):
        best = values[idx[r, 0]]
        for i in range(1, k):
            v = values[idx[r, i]]
            if v > best:
                best = v
        out[r] = best
    return out


NUMPY = SimpleNamespace(
    name="numpy",
    draw_with_replacement=_np_draw_with_replacement,
    draw_without_replacement=_np_draw_without_replacement,
    gather_sorted=_np_gather_sorted,
    weighted_sums=_np_weighted_sums,
    gather_row_max=_np_gather_row_max,
)

NUMBA = None
if HAVE_NUMBA:
    NUMBA = SimpleNamespace(
        name="numba",
        draw_with_replacement=_nb_draw_with_replacement,
        draw_without_replacement=_nb_draw_without_replacement,
        gather_sorted=_nb_gather_sorted,
        weighted_sums=_nb_weighted_sums,
        gather_row_max=_nb_gather_row_max,
    )

ACTIVE = NUMBA if USE_NUMBA else NUMPY
BACKEND = ACTIVE.name


def draw_indices(u, size, replace):
    """Map uniforms of shape (rows, k) to indices into ``range(size)``.

    With ``replace=False`` each row is a uniformly random k-subset (in
    random order) produced by a partial Fisher-Yates shuffle.
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    if replace:
        return ACTIVE.draw_with_replacement(u, size)
    if u.shape[1] > size:
        raise ValueError(f"cannot draw {u.shape[1]} items without replacement from {size}")
    return ACTIVE.draw_without_replacement(u, size)


def gather_sorted(values, idx):
    """Rows ``values[idx[r]]`` sorted ascending."""
    return ACTIVE.gather_sorted(np.ascontiguousarray(values, dtype=np.float64), idx)


def weighted_sums(rows, weights):
    """``out[r, k] = sum_i rows[r, i] * weights[k, i]`` accumulated in ascending i."""
    return ACTIVE.weighted_sums(
        np.ascontiguousarray(rows, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64),
    )


def gather_row_max(values, idx):
    return ACTIVE.gather_row_max(np.ascontiguousarray(values, dtype=np.float64), idx)
