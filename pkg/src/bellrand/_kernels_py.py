"""Pure NumPy/Python implementations of the hot kernels.

Selected by ``bellrand._backend`` when the compiled extension is not
available.  Contracts (inputs, outputs, tie rules) are identical to
``bellrand._kernels``; the parity is enforced by tests.
"""

from __future__ import annotations

import numpy as np

COMPILED = False


def _suffix_array(sym: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling over ``np.lexsort``.

    ``sym`` is a 1-d uint8 array.  Returns int64 start positions in
    lexicographic suffix order.
    """
    n = sym.size
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    rank = sym.astype(np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r1 = rank[order]
        r2 = second[order]
        bump = np.empty(n, dtype=np.int64)
        bump[0] = 0
        bump[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        ranks_sorted = np.cumsum(bump)
        rank = np.empty(n, dtype=np.int64)
        rank[order] = ranks_sorted
        if ranks_sorted[-1] == n - 1:
            return order.astype(np.int64)
        k *= 2
        if k >= n:  # all pairs distinct by now; defensive
            return order.astype(np.int64)


def _lcp_kasai(sym: list, sa: list) -> list:
    """LCP array (Kasai): lcp[r] = common prefix of suffixes sa[r-1], sa[r]."""
    n = len(sym)
    rank = [0] * n
    for r, p in enumerate(sa):
        rank[p] = r
    lcp = [0] * n
    h = 0
    for p in range(n):
        r = rank[p]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while p + h < n and j + h < n and sym[p + h] == sym[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp


def _lpf(sa: list, lcp: list, n: int) -> list:
    """Longest-previous-factor array from SA + LCP (stack algorithm).

    lpf[p] = longest m such that s[p:p+m] also occurs starting at some
    j < p (the occurrence may overlap position p).
    """
    lpf = [0] * n
    sa_ext = sa + [-1]
    lcp_ext = lcp + [0]
    stack = [0]
    for r in range(1, n + 1):
        sa_r = sa_ext[r]
        lcp_r = lcp_ext[r]
        while stack:
            t = stack[-1]
            sa_t = sa_ext[t]
            lcp_t = lcp_ext[t]
            if sa_r < sa_t:
                stack.pop()
                lpf[sa_t] = lcp_t if lcp_t > lcp_r else lcp_r
                if lcp_t < lcp_r:
                    lcp_r = lcp_t
            elif lcp_r <= lcp_t:
                stack.pop()
                lpf[sa_t] = lcp_t
            else:
                break
        lcp_ext[r] = lcp_r
        stack.append(r)
    return lpf


def lz76_parse_positions(bits: np.ndarray) -> np.ndarray:
    """Start indices of the words in the exhaustive copy-production parse.

    The word at position p covers lpf[p] characters reproducible from the
    prefix plus one innovative character; the final word may be cut short
    by the end of the sequence and still counts.
    """
    u8 = np.ascontiguousarray(bits, dtype=np.uint8)
    n = u8.size
    if n == 0:
        raise ValueError("empty bit sequence")
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    sa = _suffix_array(u8).tolist()
    sym = u8.tolist()
    lcp = _lcp_kasai(sym, sa)
    lpf = _lpf(sa, lcp, n)
    positions = []
    p = 0
    while p < n:
        positions.append(p)
        p += lpf[p] + 1
    return np.asarray(positions, dtype=np.int64)


def match_indices(
    a_times: np.ndarray, b_times: np.ndarray, t_w: float, delay: float
) -> tuple[np.ndarray, np.ndarray]:
    """Greedy two-pointer pairing of two sorted time streams.

    Bob times are shifted by ``delay`` before comparison; a pair (i, j) is
    accepted when ``|a[i] - (b[j] + delay)| <= t_w``, after which both
    pointers advance; otherwise the pointer at the smaller time advances.
    Returns the matched index arrays (int64) into each stream.
    """
    a = np.asarray(a_times, dtype=np.float64).tolist()
    b = np.asarray(b_times, dtype=np.float64).tolist()
    na = len(a)
    nb = len(b)
    ia: list[int] = []
    ib: list[int] = []
    i = 0
    j = 0
    while i < na and j < nb:
        tb = b[j] + delay
        d = a[i] - tb
        if -t_w <= d <= t_w:
            ia.append(i)
            ib.append(j)
            i += 1
            j += 1
        elif d < 0.0:
            i += 1
        else:
            j += 1
    return (
        np.asarray(ia, dtype=np.int64),
        np.asarray(ib, dtype=np.int64),
    )


def match_count(a_times: np.ndarray, b_times: np.ndarray, t_w: float, delay: float) -> int:
    """Number of pairs the greedy two-pointer rule accepts (no allocation)."""
    a = np.asarray(a_times, dtype=np.float64).tolist()
    b = np.asarray(b_times, dtype=np.float64).tolist()
    na = len(a)
    nb = len(b)
    count = 0
    i = 0
    j = 0
    while i < na and j < nb:
        tb = b[j] + delay
        d = a[i] - tb
        if -t_w <= d <= t_w:
            count += 1
            i += 1
            j += 1
        elif d < 0.0:
            i += 1
        else:
            j += 1
    return count
