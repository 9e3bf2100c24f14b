"""Hot numeric loops.

Every kernel exists twice: a numpy implementation (``*_numpy``) and, when
numba is importable, a compiled one (``*_numba``).  The public name binds to
the compiled variant unless ``QTOMO_DISABLE_NUMBA`` is set to a non-empty,
non-"0" value before import.  Both variants are kept importable so the
benchmark and the tests can compare them.
"""

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("QTOMO_DISABLE_NUMBA", "")
USE_NUMBA = numba is not None and _flag in ("", "0")


def _maybe_njit(func):
    if numba is None:
        return None
    return numba.njit(cache=True)(func)


# --------------------------------------------------------------------------
# cyclic Jacobi for complex Hermitian matrices


def jacobi_hermitian_numpy(a, tol, max_sweeps):
    """Cyclic Jacobi sweeps on a copy of ``a``.

    Returns ``(eigenvalues, eigenvectors, sweeps, converged)``; eigenvalues are
    in pivot order, unsorted.  Convergence means the off-diagonal Frobenius
    norm dropped to ``tol`` times the Frobenius norm of the input.
    """
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = math.sqrt(np.sum(np.abs(a) ** 2))
    if scale == 0.0:
        return np.zeros(n), v, 0, True
    sweeps = 0
    while True:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * abs(a[p, q]) ** 2
        if math.sqrt(off) <= tol * scale:
            return np.real(np.diag(a)).copy(), v, sweeps, True
        if sweeps >= max_sweeps:
            return np.real(np.diag(a)).copy(), v, sweeps, False
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # plane rotation G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                gpp = c + 0j
                gpq = s + 0j
                gqp = -s * np.conj(phase)
                gqq = c * np.conj(phase)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * gpp + col_q * gqp
                a[:, q] = col_p * gpq + col_q * gqq
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(gpp) * row_p + np.conj(gqp) * row_q
                a[q, :] = np.conj(gpq) * row_p + np.conj(gqq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * gpp + vq * gqp
                v[:, q] = vp * gpq + vq * gqq


jacobi_hermitian_numba = _maybe_njit(jacobi_hermitian_numpy)


# --------------------------------------------------------------------------
# CHSH grid reduction
#
# corr[h, k] is the correlation for first-party frame h and second-party frame
# k.  B(a, b, c, d) = corr[a,b] + corr[a,c] + corr[d,b] - corr[d,c].  The first
# strict maximum in lexicographic (a, b, c, d) order wins.


def chsh_grid_argmax_numpy(corr):
    nh, nk = corr.shape
    ct = corr.T
    best = -np.inf
    best_idx = (0, 0, 0, 0)
    for a in range(nh):
        vals = (
            corr[a][:, None, None]
            + corr[a][None, :, None]
            + ct[:, None, :]
            - ct[None, :, :]
        )
        flat = int(np.argmax(vals))
        val = vals.flat[flat]
        if val > best:
            best = val
            b, c, d = np.unravel_index(flat, vals.shape)
            best_idx = (a, int(b), int(c), int(d))
    return float(best), best_idx[0], best_idx[1], best_idx[2], best_idx[3]


def _chsh_grid_argmax_loops(corr):
    nh, nk = corr.shape
    best = -np.inf
    ba = 0
    bb = 0
    bc = 0
    bd = 0
    for a in range(nh):
        for b in range(nk):
            for c in range(nk):
                for d in range(nh):
                    val = corr[a, b] + corr[a, c] + corr[d, b] - corr[d, c]
                    if val > best:
                        best = val
                        ba = a
                        bb = b
                        bc = c
                        bd = d
    return best, ba, bb, bc, bd


chsh_grid_argmax_numba = _maybe_njit(_chsh_grid_argmax_loops)


# --------------------------------------------------------------------------
# power iteration on the simplex


def power_iterate_numpy(m, p0, tol, max_iter, window):
    """Iterate p <- M p until successive iterates agree within ``tol``.

    Returns ``(p, iterations, converged, tail)`` where ``tail`` holds the last
    ``window`` iterates in chronological order (rows), for Cesàro fallback.
    """
    n = p0.shape[0]
    tail = np.zeros((window, n))
    p = p0.copy()
    pos = 0
    filled = 0
    for it in range(1, max_iter + 1):
        q = m @ p
        q = q / np.sum(q)
        tail[pos] = q
        pos = (pos + 1) % window
        if filled < window:
            filled += 1
        if np.max(np.abs(q - p)) <= tol:
            return q, it, True, _unroll(tail, pos, filled)
        p = q
    return p, max_iter, False, _unroll(tail, pos, filled)


def _unroll(tail, pos, filled):
    window = tail.shape[0]
    out = np.empty((filled, tail.shape[1]))
    start = (pos - filled) % window
    for i in range(filled):
        out[i] = tail[(start + i) % window]
    return out


_unroll_numba = _maybe_njit(_unroll)


def _power_iterate_loops(m, p0, tol, max_iter, window):
    n = p0.shape[0]
    tail = np.zeros((window, n))
    p = p0.copy()
    q = np.empty(n)
    pos = 0
    filled = 0
    for it in range(1, max_iter + 1):
        total = 0.0
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += m[i, j] * p[j]
            q[i] = acc
            total += acc
        diff = 0.0
        for i in range(n):
            q[i] /= total
            tail[pos, i] = q[i]
            d = abs(q[i] - p[i])
            if d > diff:
                diff = d
        pos = (pos + 1) % window
        if filled < window:
            filled += 1
        if diff <= tol:
            return q.copy(), it, True, _unroll_numba(tail, pos, filled)
        p[:] = q
    return p.copy(), max_iter, False, _unroll_numba(tail, pos, filled)


power_iterate_numba = _maybe_njit(_power_iterate_loops)


# --------------------------------------------------------------------------
# Cesàro sum of matrix powers


def power_sum_numpy(m, count):
    """Return sum_{k=1..count} M^k."""
    acc = np.zeros_like(m)
    power = np.eye(m.shape[0])
    for _ in range(count):
        power = power @ m
        acc += power
    return acc


def _power_sum_loops(m, count):
    n = m.shape[0]
    acc = np.zeros((n, n))
    power = np.eye(n)
    nxt = np.empty((n, n))
    for _ in range(count):
        for i in range(n):
            for j in range(n):
                s = 0.0
                for k in range(n):
                    s += power[i, k] * m[k, j]
                nxt[i, j] = s
        for i in range(n):
            for j in range(n):
                power[i, j] = nxt[i, j]
                acc[i, j] += nxt[i, j]
    return acc


power_sum_numba = _maybe_njit(_power_sum_loops)


if USE_NUMBA:
    jacobi_hermitian = jacobi_hermitian_numba
    chsh_grid_argmax = chsh_grid_argmax_numba
    power_iterate = power_iterate_numba
    power_sum = power_sum_numba
else:
    jacobi_hermitian = jacobi_hermitian_numpy
    chsh_grid_argmax = chsh_grid_argmax_numpy
    power_iterate = power_iterate_numpy
    power_sum = power_sum_numpy
