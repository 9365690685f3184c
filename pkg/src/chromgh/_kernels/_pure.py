"""Pure-Python kernels: F2 column reduction and the GH map-pair search.

Reference implementations; chromgh._kernels._speed provides compiled twins
with identical semantics (same minima, same tie-broken witnesses, same
reduced matrices).
"""

BACKEND = "pure"


def reduce_columns(columns):
    """Left-to-right F2 column reduction R = D`V on bitmask columns.

    `columns[j]` is an int whose set bits are the rows of column j. Returns
    (R, V, lows) where lows[j] is the pivot row of R[j] or -1 for zero columns.
    """
    m = len(columns)
    R = [0] * m
    V = [0] * m
    lows = [-1] * m
    low_owner = {}
    for j in range(m):
        r = columns[j]
        v = 1 << j
        while r:
            low = r.bit_length() - 1
            k = low_owner.get(low)
            if k is None:
                break
            r ^= R[k]
            v ^= V[k]
        R[j] = r
        V[j] = v
        if r:
            low = r.bit_length() - 1
            lows[j] = low
            low_owner[low] = j
    return R, V, lows


def pair_search(d1, d2, cands1, cands2, lb, ub0, budget):
    """Exact minimum of max{dis f, dis g, codis(f, g)} over candidate maps.

    d1, d2: symmetric distance matrices as nested lists; cands1[i] lists the
    admissible targets in the second space for source point i (cands2 mirrors
    it).  lb is a certified lower bound on the optimum (the search stops as
    soon as the incumbent reaches it), ub0 an incumbent value achieved by some
    seed pair kept by the caller.  Branches are pruned when the partial max
    meets or exceeds the incumbent; candidates are tried in increasing index
    order so the returned witness is the first optimum in DFS order.

    Returns (best, f, g, nodes, finished); f/g are None when the seed was
    never improved.
    """
    n1 = len(cands1)
    n2 = len(cands2)
    order1 = sorted(range(n1), key=lambda i: (len(cands1[i]), i))
    order2 = sorted(range(n2), key=lambda j: (len(cands2[j]), j))
    f = [0] * n1
    g = [0] * n2
    state = {"best": ub0, "bf": None, "bg": None, "nodes": 0, "aborted": False}

    def dfs_g(k, cur):
        best = state["best"]
        if best <= lb or state["aborted"]:
            return
        if k == n2:
            if cur < best:
                state["best"] = cur
                state["bf"] = f[:]
                state["bg"] = g[:]
            return
        j = order2[k]
        d2j = d2[j]
        for x in cands2[j]:
            state["nodes"] += 1
            if state["nodes"] > budget:
                state["aborted"] = True
                return
            best = state["best"]
            m = cur
            d1x = d1[x]
            ok = True
            for kk in range(k):
                jj = order2[kk]
                v = d2j[jj] - d1x[g[jj]]
                if v < 0.0:
                    v = -v
                if v > m:
                    m = v
                    if m >= best:
                        ok = False
                        break
            if ok:
                for i in range(n1):
                    v = d1x[i] - d2[f[i]][j]
                    if v < 0.0:
                        v = -v
                    if v > m:
                        m = v
                        if m >= best:
                            ok = False
                            break
            if ok and m < best:
                g[j] = x
                dfs_g(k + 1, m)
                if state["aborted"] or state["best"] <= lb:
                    return

    def dfs_f(k, cur):
        if state["best"] <= lb or state["aborted"]:
            return
        if k == n1:
            dfs_g(0, cur)
            return
        i = order1[k]
        d1i = d1[i]
        for y in cands1[i]:
            state["nodes"] += 1
            if state["nodes"] > budget:
                state["aborted"] = True
                return
            best = state["best"]
            m = cur
            d2y = d2[y]
            ok = True
            for kk in range(k):
                ii = order1[kk]
                v = d1i[ii] - d2y[f[ii]]
                if v < 0.0:
                    v = -v
                if v > m:
                    m = v
                    if m >= best:
                        ok = False
                        break
            if ok and m < best:
                f[i] = y
                dfs_f(k + 1, m)
                if state["aborted"] or state["best"] <= lb:
                    return

    if ub0 > lb:
        dfs_f(0, 0.0)
    return state["best"], state["bf"], state["bg"], state["nodes"], not state["aborted"]
