# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: identical semantics to chromgh._kernels._pure.

The reduction runs on a dense uint64 bit matrix (little-endian word layout,
bulk-converted from the Python int bitmasks); the map-pair search is a typed
depth-first branch-and-bound.  Both must return bit-identical results to the
pure versions (same minima, same witnesses, same reduced columns).
"""
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset

BACKEND = "compiled"

cdef extern from *:
    int __builtin_clzll(unsigned long long)


cdef inline int _top_word(unsigned long long* row, int start):
    cdef int w
    for w in range(start, -1, -1):
        if row[w] != 0:
            return w
    return -1


def reduce_columns(columns):
    """Dense-word twin of the pure left-to-right F2 column reduction."""
    cdef int m = len(columns)
    cdef int words = (m + 63) >> 6
    cdef int nbytes = words << 3
    if m == 0:
        return [], [], []
    cdef unsigned long long* R = <unsigned long long*> malloc(m * words * sizeof(unsigned long long))
    cdef unsigned long long* V = <unsigned long long*> malloc(m * words * sizeof(unsigned long long))
    cdef int* owner = <int*> malloc(m * sizeof(int))
    cdef int* lows = <int*> malloc(m * sizeof(int))
    cdef int* top = <int*> malloc(m * sizeof(int))      # top word of each reduced column
    cdef int* vtop = <int*> malloc(m * sizeof(int))     # top word of each V column
    if R == NULL or V == NULL or owner == NULL or lows == NULL or top == NULL or vtop == NULL:
        free(R); free(V); free(owner); free(lows); free(top); free(vtop)
        raise MemoryError()
    cdef int j, w, low, k, tw, limit
    cdef unsigned long long* rj
    cdef unsigned long long* rk
    cdef const unsigned char[::1] raw
    cdef object col
    try:
        memset(R, 0, m * words * sizeof(unsigned long long))
        memset(V, 0, m * words * sizeof(unsigned long long))
        for j in range(m):
            owner[j] = -1
        for j in range(m):
            col = columns[j]
            rj = R + j * words
            if col:
                raw = col.to_bytes(nbytes, "little")
                memcpy(rj, &raw[0], nbytes)
            V[j * words + (j >> 6)] = (<unsigned long long> 1) << (j & 63)
            vtop[j] = j >> 6
            tw = _top_word(rj, words - 1)
            while tw >= 0:
                low = (tw << 6) + 63 - __builtin_clzll(rj[tw])
                k = owner[low]
                if k < 0:
                    break
                rk = R + k * words
                for w in range(tw + 1):
                    rj[w] ^= rk[w]
                rk = V + k * words
                limit = vtop[k] if vtop[k] > vtop[j] else vtop[j]
                for w in range(limit + 1):
                    V[j * words + w] ^= rk[w]
                if limit > vtop[j]:
                    vtop[j] = limit
                tw = _top_word(rj, tw)
            if tw >= 0:
                low = (tw << 6) + 63 - __builtin_clzll(rj[tw])
                lows[j] = low
                owner[low] = j
                top[j] = tw
            else:
                lows[j] = -1
                top[j] = -1
        R_out = []
        V_out = []
        lows_out = []
        for j in range(m):
            R_out.append(int.from_bytes((<unsigned char*> (R + j * words))[:nbytes], "little"))
            V_out.append(int.from_bytes((<unsigned char*> (V + j * words))[:nbytes], "little"))
            lows_out.append(lows[j])
        return R_out, V_out, lows_out
    finally:
        free(R)
        free(V)
        free(owner)
        free(lows)
        free(top)
        free(vtop)


cdef struct SearchState:
    int n1
    int n2
    double* d1
    double* d2
    int* cand1
    int* off1
    int* cand2
    int* off2
    int* order1
    int* order2
    int* f
    int* g
    int* best_f
    int* best_g
    double lb
    double best
    long long nodes
    long long budget
    bint aborted
    bint improved


cdef void _dfs_g(SearchState* st, int k, double cur):
    cdef int j, x, kk, jj, i, c
    cdef double m, v, best
    cdef bint ok
    if st.aborted or st.best <= st.lb:
        return
    if k == st.n2:
        if cur < st.best:
            st.best = cur
            st.improved = True
            for i in range(st.n1):
                st.best_f[i] = st.f[i]
            for j in range(st.n2):
                st.best_g[j] = st.g[j]
        return
    j = st.order2[k]
    for c in range(st.off2[j], st.off2[j + 1]):
        x = st.cand2[c]
        st.nodes += 1
        if st.nodes > st.budget:
            st.aborted = True
            return
        best = st.best
        m = cur
        ok = True
        for kk in range(k):
            jj = st.order2[kk]
            v = st.d2[j * st.n2 + jj] - st.d1[x * st.n1 + st.g[jj]]
            if v < 0.0:
                v = -v
            if v > m:
                m = v
                if m >= best:
                    ok = False
                    break
        if ok:
            for i in range(st.n1):
                v = st.d1[x * st.n1 + i] - st.d2[st.f[i] * st.n2 + j]
                if v < 0.0:
                    v = -v
                if v > m:
                    m = v
                    if m >= best:
                        ok = False
                        break
        if ok and m < st.best:
            st.g[j] = x
            _dfs_g(st, k + 1, m)
            if st.aborted or st.best <= st.lb:
                return


cdef void _dfs_f(SearchState* st, int k, double cur):
    cdef int i, y, kk, ii, c
    cdef double m, v, best
    cdef bint ok
    if st.aborted or st.best <= st.lb:
        return
    if k == st.n1:
        _dfs_g(st, 0, cur)
        return
    i = st.order1[k]
    for c in range(st.off1[i], st.off1[i + 1]):
        y = st.cand1[c]
        st.nodes += 1
        if st.nodes > st.budget:
            st.aborted = True
            return
        best = st.best
        m = cur
        ok = True
        for kk in range(k):
            ii = st.order1[kk]
            v = st.d1[i * st.n1 + ii] - st.d2[y * st.n2 + st.f[ii]]
            if v < 0.0:
                v = -v
            if v > m:
                m = v
                if m >= best:
                    ok = False
                    break
        if ok and m < st.best:
            st.f[i] = y
            _dfs_f(st, k + 1, m)
            if st.aborted or st.best <= st.lb:
                return


def pair_search(d1, d2, cands1, cands2, double lb, double ub0, long long budget):
    """Typed twin of the pure map-pair branch-and-bound."""
    cdef int n1 = len(cands1)
    cdef int n2 = len(cands2)
    cdef SearchState st
    cdef int i, j, k, pos
    order1 = sorted(range(n1), key=lambda a: (len(cands1[a]), a))
    order2 = sorted(range(n2), key=lambda a: (len(cands2[a]), a))
    total1 = sum(len(c) for c in cands1)
    total2 = sum(len(c) for c in cands2)
    st.n1 = n1
    st.n2 = n2
    st.lb = lb
    st.best = ub0
    st.nodes = 0
    st.budget = budget
    st.aborted = False
    st.improved = False
    st.d1 = NULL; st.d2 = NULL; st.cand1 = NULL; st.off1 = NULL
    st.cand2 = NULL; st.off2 = NULL; st.order1 = NULL; st.order2 = NULL
    st.f = NULL; st.g = NULL; st.best_f = NULL; st.best_g = NULL
    st.d1 = <double*> malloc(n1 * n1 * sizeof(double))
    st.d2 = <double*> malloc(n2 * n2 * sizeof(double))
    st.cand1 = <int*> malloc(max(total1, 1) * sizeof(int))
    st.off1 = <int*> malloc((n1 + 1) * sizeof(int))
    st.cand2 = <int*> malloc(max(total2, 1) * sizeof(int))
    st.off2 = <int*> malloc((n2 + 1) * sizeof(int))
    st.order1 = <int*> malloc(max(n1, 1) * sizeof(int))
    st.order2 = <int*> malloc(max(n2, 1) * sizeof(int))
    st.f = <int*> malloc(max(n1, 1) * sizeof(int))
    st.g = <int*> malloc(max(n2, 1) * sizeof(int))
    st.best_f = <int*> malloc(max(n1, 1) * sizeof(int))
    st.best_g = <int*> malloc(max(n2, 1) * sizeof(int))
    if (st.d1 == NULL or st.d2 == NULL or st.cand1 == NULL or st.off1 == NULL
            or st.cand2 == NULL or st.off2 == NULL or st.order1 == NULL
            or st.order2 == NULL or st.f == NULL or st.g == NULL
            or st.best_f == NULL or st.best_g == NULL):
        _free_state(&st)
        raise MemoryError()
    try:
        for i in range(n1):
            row = d1[i]
            for j in range(n1):
                st.d1[i * n1 + j] = row[j]
        for i in range(n2):
            row = d2[i]
            for j in range(n2):
                st.d2[i * n2 + j] = row[j]
        pos = 0
        for i in range(n1):
            st.off1[i] = pos
            for y in cands1[i]:
                st.cand1[pos] = y
                pos += 1
        st.off1[n1] = pos
        pos = 0
        for j in range(n2):
            st.off2[j] = pos
            for x in cands2[j]:
                st.cand2[pos] = x
                pos += 1
        st.off2[n2] = pos
        for k in range(n1):
            st.order1[k] = order1[k]
        for k in range(n2):
            st.order2[k] = order2[k]
        if ub0 > lb:
            _dfs_f(&st, 0, 0.0)
        best_f = [st.best_f[i] for i in range(n1)] if st.improved else None
        best_g = [st.best_g[j] for j in range(n2)] if st.improved else None
        return st.best, best_f, best_g, st.nodes, not st.aborted
    finally:
        _free_state(&st)


cdef void _free_state(SearchState* st):
    free(st.d1)
    free(st.d2)
    free(st.cand1)
    free(st.off1)
    free(st.cand2)
    free(st.off2)
    free(st.order1)
    free(st.order2)
    free(st.f)
    free(st.g)
    free(st.best_f)
    free(st.best_g)
