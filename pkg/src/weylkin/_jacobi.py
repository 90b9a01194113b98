"""Cyclic Jacobi sweeps for complex Hermitian matrices.

Pairs are visited in round-robin (tournament) order: each of the
``m - 1`` rounds touches ``m // 2`` disjoint index pairs, so a round is a
block-diagonal unitary and can be applied in one vectorised step.  The
numba kernel visits the same pairs one at a time.
"""

import numpy as np

from ._accel import HAVE_NUMBA, njit


def round_robin(n):
    """Array of shape ``(rounds, n_pairs, 2)`` covering every pair ``p < q`` once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < n and b < n:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    width = max(len(r) for r in rounds) if rounds else 0
    out = np.full((len(rounds), width, 2), -1, dtype=np.int64)
    for r, pairs in enumerate(rounds):
        for k, pq in enumerate(pairs):
            out[r, k] = pq
    return out


def _rotation_params(app, aqq, apq, small):
    """Unitary 2x2 block ``[[g00, g01], [g10, g11]]`` zeroing ``apq``."""
    mag = np.abs(apq)
    active = mag > small
    safe = np.where(active, mag, 1.0)
    phase = np.where(active, apq / safe, 1.0)
    theta = (aqq - app) / (2.0 * safe)
    t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    t = np.where(theta == 0.0, 1.0, t)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    c = np.where(active, c, 1.0)
    s = np.where(active, s, 0.0)
    # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
    g00 = c + 0j
    g01 = s + 0j
    g10 = -s * np.conj(phase)
    g11 = c * np.conj(phase)
    return g00, g01, g10, g11, active


def sweep_numpy(a, v, schedule, small):
    """One full sweep in place; returns the number of rotations applied."""
    applied = 0
    for pairs in schedule:
        pairs = pairs[pairs[:, 0] >= 0]
        p = pairs[:, 0]
        q = pairs[:, 1]
        app = a[p, p].real
        aqq = a[q, q].real
        apq = a[p, q]
        g00, g01, g10, g11, active = _rotation_params(app, aqq, apq, small)
        if not active.any():
            continue
        applied += int(active.sum())
        # columns: A <- A G, V <- V G
        for m in (a, v):
            cp = m[:, p].copy()
            cq = m[:, q]
            m[:, p] = cp * g00 + cq * g10
            m[:, q] = cp * g01 + cq * g11
        # rows: A <- G^H A
        rp = a[p, :].copy()
        rq = a[q, :]
        a[p, :] = np.conj(g00)[:, None] * rp + np.conj(g10)[:, None] * rq
        a[q, :] = np.conj(g01)[:, None] * rp + np.conj(g11)[:, None] * rq
        a[p, q] = 0.0
        a[q, p] = 0.0
        a[p, p] = a[p, p].real
        a[q, q] = a[q, q].real
    return applied


@njit
def _sweep_numba(a, v, schedule, small):
    n = a.shape[0]
    applied = 0
    for r in range(schedule.shape[0]):
        for k in range(schedule.shape[1]):
            p = schedule[r, k, 0]
            q = schedule[r, k, 1]
            if p < 0:
                continue
            apq = a[p, q]
            mag = abs(apq)
            if mag <= small:
                continue
            applied += 1
            phase = apq / mag
            app = a[p, p].real
            aqq = a[q, q].real
            theta = (aqq - app) / (2.0 * mag)
            if theta == 0.0:
                t = 1.0
            else:
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            g00 = c + 0j
            g01 = s + 0j
            g10 = -s * np.conj(phase)
            g11 = c * np.conj(phase)
            for i in range(n):
                ap = a[i, p]
                aq = a[i, q]
                a[i, p] = ap * g00 + aq * g10
                a[i, q] = ap * g01 + aq * g11
                vp = v[i, p]
                vq = v[i, q]
                v[i, p] = vp * g00 + vq * g10
                v[i, q] = vp * g01 + vq * g11
            for j in range(n):
                ap = a[p, j]
                aq = a[q, j]
                a[p, j] = np.conj(g00) * ap + np.conj(g10) * aq
                a[q, j] = np.conj(g01) * ap + np.conj(g11) * aq
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real
    return applied


def sweep(a, v, schedule, small, use_numba=None):
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return _sweep_numba(a, v, schedule, small)
    return sweep_numpy(a, v, schedule, small)
