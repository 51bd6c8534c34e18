"""State-sum inner loops.

Two interchangeable backends compute the same integer arrays:

* ``numba``: per-state loops compiled with ``@njit``;
* ``numpy``: all states of a batch at once, cycles found by pointer doubling.

``VKSPIDER_BACKEND=numpy`` (or ``numba``) selects one; the default is numba
when it imports. Diagram encoding shared by both: passages are numbered
globally, arc ``i`` starts at passage ``i`` and ends at ``succ[i]``;
``mate[p]`` is the other passage of ``p``'s crossing, ``cross[p]`` its
0-based crossing index and ``over[p]`` its role.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "resolve_webs", "kauffman_counts", "available_backends"]

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def _choose_backend() -> str:
    want = os.environ.get("VKSPIDER_BACKEND", "").strip().lower()
    if want in ("numpy", "python", "fallback"):
        return "numpy"
    if want == "numba" and not _HAVE_NUMBA:
        raise ImportError("VKSPIDER_BACKEND=numba but numba is not installed")
    return "numba" if _HAVE_NUMBA else "numpy"


BACKEND = _choose_backend()


def available_backends() -> list[str]:
    return ["numba", "numpy"] if _HAVE_NUMBA else ["numpy"]


# ---------------------------------------------------------------------------
# numpy path


def _doubling_rounds(m: int) -> int:
    return max(1, int(m).bit_length())


def _resolve_webs_numpy(masks, succ, mate, cross):
    masks = np.asarray(masks, dtype=np.int64)
    m = succ.shape[0]
    if m == 0:
        return np.zeros((masks.shape[0], 0), np.int64), np.zeros(masks.shape[0], np.int64)
    head_cross = cross[succ]
    onext = mate[succ]
    ar = np.arange(m, dtype=np.int64)
    webbed_head = ((masks[:, None] >> head_cross[None, :]) & 1).astype(bool)
    webbed_tail = ((masks[:, None] >> cross[None, :]) & 1).astype(bool)
    cur = np.where(webbed_head, ar[None, :], onext[None, :])
    rep = np.broadcast_to(ar, cur.shape).copy()
    for _ in range(_doubling_rounds(m)):
        rep = np.minimum(rep, np.take_along_axis(rep, cur, axis=1))
        cur = np.take_along_axis(cur, cur, axis=1)
    terminated = np.take_along_axis(webbed_head, cur, axis=1)
    circles = np.count_nonzero(~terminated & (rep == ar[None, :]), axis=1).astype(np.int64)
    ends = np.where(webbed_tail & terminated, head_cross[cur], -1).astype(np.int64)
    return ends, circles


def _kauffman_counts_numpy(masks, succ, mate, cross, over, signs):
    masks = np.asarray(masks, dtype=np.int64)
    m = succ.shape[0]
    n = signs.shape[0]
    out_loops = np.zeros(masks.shape[0], np.int64)
    bits = ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)
    n_a = np.count_nonzero(bits == (signs < 0)[None, :], axis=1).astype(np.int64)
    if m == 0:
        return n_a, out_loops
    pred = np.empty(m, np.int64)
    pred[succ] = np.arange(m)
    # arc ends: 2*i tail of arc i, 2*i+1 head of arc i
    partner_arc = np.arange(2 * m) ^ 1
    s_or = np.empty(2 * m, np.int64)
    s_un = np.empty(2 * m, np.int64)
    for p in range(m):
        if not over[p]:
            continue
        q = mate[p]
        hi_o, hi_u = 2 * pred[p] + 1, 2 * pred[q] + 1
        to_o, to_u = 2 * p, 2 * q
        s_or[hi_o], s_or[to_u] = to_u, hi_o
        s_or[hi_u], s_or[to_o] = to_o, hi_u
        s_un[hi_o], s_un[hi_u] = hi_u, hi_o
        s_un[to_o], s_un[to_u] = to_u, to_o
    end_cross = np.empty(2 * m, np.int64)
    end_cross[0::2] = cross
    end_cross[1::2] = cross[succ]
    un = ((masks[:, None] >> end_cross[None, :]) & 1).astype(bool)
    s = np.where(un, s_un[None, :], s_or[None, :])
    sigma = s[:, partner_arc]
    ar = np.arange(2 * m, dtype=np.int64)
    rep = np.broadcast_to(ar, sigma.shape).copy()
    cur = sigma
    for _ in range(_doubling_rounds(2 * m)):
        rep = np.minimum(rep, np.take_along_axis(rep, cur, axis=1))
        cur = np.take_along_axis(cur, cur, axis=1)
    cycles = np.count_nonzero(rep == ar[None, :], axis=1)
    return n_a, (cycles // 2).astype(np.int64)


# ---------------------------------------------------------------------------
# numba path

if _HAVE_NUMBA:

    @njit(cache=True)
    def _resolve_webs_numba(masks, succ, mate, cross):
        n_states = masks.shape[0]
        m = succ.shape[0]
        ends = np.full((n_states, m), -1, np.int64)
        circles = np.zeros(n_states, np.int64)
        visited = np.zeros(m, np.bool_)
        for k in range(n_states):
            mask = masks[k]
            visited[:] = False
            for i in range(m):
                if (mask >> cross[i]) & 1:
                    cur = i
                    visited[cur] = True
                    while not ((mask >> cross[succ[cur]]) & 1):
                        cur = mate[succ[cur]]
                        visited[cur] = True
                    ends[k, i] = cross[succ[cur]]
            c = 0
            for i in range(m):
                if not visited[i]:
                    c += 1
                    cur = i
                    while not visited[cur]:
                        visited[cur] = True
                        cur = mate[succ[cur]]
            circles[k] = c
        return ends, circles

    @njit(cache=True)
    def _kauffman_counts_numba(masks, succ, mate, cross, over, signs):
        n_states = masks.shape[0]
        m = succ.shape[0]
        n = signs.shape[0]
        n_a = np.zeros(n_states, np.int64)
        loops = np.zeros(n_states, np.int64)
        pred = np.empty(m, np.int64)
        for i in range(m):
            pred[succ[i]] = i
        s = np.empty(2 * m, np.int64)
        seen = np.zeros(2 * m, np.bool_)
        for k in range(n_states):
            mask = masks[k]
            a = 0
            for c in range(n):
                un = (mask >> c) & 1
                if (un == 1) == (signs[c] < 0):
                    a += 1
            n_a[k] = a
            for p in range(m):
                if not over[p]:
                    continue
                q = mate[p]
                hi_o = 2 * pred[p] + 1
                hi_u = 2 * pred[q] + 1
                to_o = 2 * p
                to_u = 2 * q
                if (mask >> cross[p]) & 1:
                    s[hi_o] = hi_u
                    s[hi_u] = hi_o
                    s[to_o] = to_u
                    s[to_u] = to_o
                else:
                    s[hi_o] = to_u
                    s[to_u] = hi_o
                    s[hi_u] = to_o
                    s[to_o] = hi_u
            seen[:] = False
            count = 0
            for e in range(2 * m):
                if seen[e]:
                    continue
                count += 1
                cur = e
                while not seen[cur]:
                    seen[cur] = True
                    other = cur ^ 1
                    seen[other] = True
                    cur = s[other]
            loops[k] = count
        return n_a, loops


def resolve_webs(masks, succ, mate, cross, backend: str | None = None):
    """For each state mask (bit ``c`` set = crossing ``c`` webbed) return

    ``ends[k, i]``: for arcs leaving a webbed crossing, the crossing whose sink
    the chain starting at arc ``i`` reaches; ``-1`` otherwise.
    ``circles[k]``: closed vertexless chains.
    """
    backend = backend or BACKEND
    args = (np.ascontiguousarray(masks, np.int64), succ, mate, cross)
    if backend == "numba":
        return _resolve_webs_numba(*args)
    return _resolve_webs_numpy(*args)


def kauffman_counts(masks, succ, mate, cross, over, signs, backend: str | None = None):
    """Per state: number of A-smoothings and number of loops.

    Bit ``c`` set selects the unoriented smoothing at crossing ``c``; that is
    the A-smoothing for negative crossings, the oriented one for positive.
    """
    backend = backend or BACKEND
    args = (np.ascontiguousarray(masks, np.int64), succ, mate, cross, over, signs)
    if backend == "numba":
        return _kauffman_counts_numba(*args)
    return _kauffman_counts_numpy(*args)
