# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: longest-copy parse for the word counter and greedy
two-pointer coincidence matching.

Mirrors bellrand._kernels_py exactly; tests enforce the parity.  The parse
uses a suffix array (prefix doubling with radix sort), the Kasai LCP array
and the stack-based longest-previous-factor construction, so a full parse
of n bits costs O(n log n) instead of the quadratic direct search.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc
from libc.string cimport memset

cnp.import_array()

COMPILED = True


cdef int _suffix_array_c(const unsigned char* s, int n, int* sa) except -1:
    # Doubling over the sentinel-extended text: shifted symbols 1..256,
    # sentinel 0 at index n sorts first and is dropped at the end.
    cdef int m = n + 1
    cdef int alphabet = 257
    cdef int cnt_size = alphabet if alphabet > m else m
    cdef int* p = <int*> malloc(m * sizeof(int))
    cdef int* c = <int*> malloc(m * sizeof(int))
    cdef int* pn = <int*> malloc(m * sizeof(int))
    cdef int* cn = <int*> malloc(m * sizeof(int))
    cdef int* cnt = <int*> malloc(cnt_size * sizeof(int))
    cdef int i, k, classes, sym, sym_prev, cls, a, b, a_prev, b_prev, j
    cdef int* tmp
    if p == NULL or c == NULL or pn == NULL or cn == NULL or cnt == NULL:
        free(p); free(c); free(pn); free(cn); free(cnt)
        raise MemoryError()

    memset(cnt, 0, alphabet * sizeof(int))
    for i in range(n):
        cnt[<int>s[i] + 1] += 1
    cnt[0] += 1
    for i in range(1, alphabet):
        cnt[i] += cnt[i - 1]
    for i in range(m - 1, -1, -1):
        sym = 0 if i == n else <int>s[i] + 1
        cnt[sym] -= 1
        p[cnt[sym]] = i

    c[p[0]] = 0
    classes = 1
    for i in range(1, m):
        sym = 0 if p[i] == n else <int>s[p[i]] + 1
        sym_prev = 0 if p[i - 1] == n else <int>s[p[i - 1]] + 1
        if sym != sym_prev:
            classes += 1
        c[p[i]] = classes - 1

    k = 1
    while classes < m and k < m:
        for i in range(m):
            j = p[i] - k
            if j < 0:
                j += m
            pn[i] = j
        memset(cnt, 0, classes * sizeof(int))
        for i in range(m):
            cnt[c[pn[i]]] += 1
        for i in range(1, classes):
            cnt[i] += cnt[i - 1]
        for i in range(m - 1, -1, -1):
            cls = c[pn[i]]
            cnt[cls] -= 1
            p[cnt[cls]] = pn[i]

        cn[p[0]] = 0
        classes = 1
        for i in range(1, m):
            j = p[i] + k
            if j >= m:
                j -= m
            a = c[p[i]]
            b = c[j]
            j = p[i - 1] + k
            if j >= m:
                j -= m
            a_prev = c[p[i - 1]]
            b_prev = c[j]
            if a != a_prev or b != b_prev:
                classes += 1
            cn[p[i]] = classes - 1
        tmp = c; c = cn; cn = tmp
        k <<= 1

    for i in range(n):
        sa[i] = p[i + 1]

    free(p); free(c); free(pn); free(cn); free(cnt)
    return 0


cdef void _kasai_c(const unsigned char* s, int n, const int* sa, int* rank, int* lcp):
    cdef int pos, r, j, h = 0
    for r in range(n):
        rank[sa[r]] = r
    lcp[0] = 0
    for pos in range(n):
        r = rank[pos]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while pos + h < n and j + h < n and s[pos + h] == s[j + h]:
            h += 1
        lcp[r] = h
        if h > 0:
            h -= 1


cdef void _lpf_c(const int* sa_ext, int* lcp_ext, int n, int* lpf, int* stack):
    # sa_ext/lcp_ext carry the sentinel entry (sa -1, lcp 0) at index n.
    cdef int top = 1
    cdef int r, t, sa_r, lcp_r, sa_t, lcp_t
    stack[0] = 0
    for r in range(1, n + 1):
        sa_r = sa_ext[r]
        lcp_r = lcp_ext[r]
        while top > 0:
            t = stack[top - 1]
            sa_t = sa_ext[t]
            lcp_t = lcp_ext[t]
            if sa_r < sa_t:
                top -= 1
                lpf[sa_t] = lcp_t if lcp_t > lcp_r else lcp_r
                if lcp_t < lcp_r:
                    lcp_r = lcp_t
            elif lcp_r <= lcp_t:
                top -= 1
                lpf[sa_t] = lcp_t
            else:
                break
        lcp_ext[r] = lcp_r
        stack[top] = r
        top += 1


def lz76_parse_positions(bits):
    """Start indices of the words in the exhaustive copy-production parse."""
    u8 = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef Py_ssize_t size = u8.shape[0]
    if size == 0:
        raise ValueError("empty bit sequence")
    if size > 2**31 - 2:
        raise ValueError("sequence too long for the compiled kernel")
    cdef int n = <int> size
    if n == 1:
        return np.zeros(1, dtype=np.int64)

    cdef const unsigned char[::1] sview = u8
    cdef const unsigned char* s = &sview[0]

    cdef int* sa_ext = <int*> malloc((n + 1) * sizeof(int))
    cdef int* lcp_ext = <int*> malloc((n + 1) * sizeof(int))
    cdef int* rank = <int*> malloc(n * sizeof(int))
    cdef int* lpf = <int*> malloc(n * sizeof(int))
    cdef int* stack = <int*> malloc((n + 1) * sizeof(int))
    cdef long long[::1] pos_view
    cdef int p = 0
    cdef Py_ssize_t count = 0
    try:
        if sa_ext == NULL or lcp_ext == NULL or rank == NULL or lpf == NULL or stack == NULL:
            raise MemoryError()

        _suffix_array_c(s, n, sa_ext)
        _kasai_c(s, n, sa_ext, rank, lcp_ext)
        sa_ext[n] = -1
        lcp_ext[n] = 0
        memset(lpf, 0, n * sizeof(int))
        _lpf_c(sa_ext, lcp_ext, n, lpf, stack)

        positions = np.empty(n, dtype=np.int64)
        pos_view = positions
        while p < n:
            pos_view[count] = p
            count += 1
            p += lpf[p] + 1
    finally:
        free(sa_ext); free(lcp_ext); free(rank); free(lpf); free(stack)
    return positions[:count].copy()


def match_indices(a_times, b_times, double t_w, double delay):
    """Greedy two-pointer pairing; returns matched (int64, int64) index arrays.

    Bob times are shifted by ``delay``; a pair is accepted when
    ``|a[i] - (b[j] + delay)| <= t_w`` and then both pointers advance,
    otherwise the pointer at the smaller time advances.
    """
    a = np.ascontiguousarray(a_times, dtype=np.float64)
    b = np.ascontiguousarray(b_times, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0]
    cdef Py_ssize_t nb = b.shape[0]
    cdef Py_ssize_t cap = na if na < nb else nb

    ia = np.empty(cap, dtype=np.int64)
    ib = np.empty(cap, dtype=np.int64)
    cdef Py_ssize_t count = 0
    if cap > 0:
        _fill_matches(a, b, t_w, delay, ia, ib, &count)
    return ia[:count].copy(), ib[:count].copy()


cdef void _fill_matches(const double[::1] a, const double[::1] b,
                        double t_w, double delay,
                        long long[::1] ia, long long[::1] ib,
                        Py_ssize_t* count):
    cdef Py_ssize_t na = a.shape[0]
    cdef Py_ssize_t nb = b.shape[0]
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef double tb, d
    while i < na and j < nb:
        tb = b[j] + delay
        d = a[i] - tb
        if -t_w <= d <= t_w:
            ia[k] = i
            ib[k] = j
            k += 1
            i += 1
            j += 1
        elif d < 0.0:
            i += 1
        else:
            j += 1
    count[0] = k


def match_count(a_times, b_times, double t_w, double delay):
    """Number of pairs the greedy two-pointer rule accepts (no allocation)."""
    a = np.ascontiguousarray(a_times, dtype=np.float64)
    b = np.ascontiguousarray(b_times, dtype=np.float64)
    cdef const double[::1] av = a
    cdef const double[::1] bv = b
    cdef Py_ssize_t na = av.shape[0]
    cdef Py_ssize_t nb = bv.shape[0]
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef double tb, d
    while i < na and j < nb:
        tb = bv[j] + delay
        d = av[i] - tb
        if -t_w <= d <= t_w:
            k += 1
            i += 1
            j += 1
        elif d < 0.0:
            i += 1
        else:
            j += 1
    return int(k)
