"""Hot integer kernels: normal forms and lattice-point scans.

This module is deliberately plain Python (functions over lists of ints) so
the build can compile it verbatim with Cython into ``satmon._kernels_c``;
``satmon.kernels`` selects whichever twin is importable.  Everything here is
exact arbitrary-precision arithmetic on Python ints.
"""


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n = len(a)
    k = len(b)
    m = len(b[0]) if k else 0
    out = []
    for i in range(n):
        ai = a[i]
        row = []
        for j in range(m):
            s = 0
            for t in range(k):
                if ai[t]:
                    s += ai[t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        s = 0
        for t in range(len(v)):
            if row[t]:
                s += row[t] * v[t]
        out.append(s)
    return out


def snf_with_transforms(a):
    """Smith normal form with all four transforms.

    Returns (U, Uinv, D, V, Vinv) with U*A*V = D, U, V unimodular and the
    diagonal of D nonnegative with d1 | d2 | ...  Deterministic: pivots are
    chosen as the smallest |entry| with ties by position.
    """
    r = len(a)
    c = len(a[0]) if r else 0
    D = [list(row) for row in a]
    U = identity_matrix(r)
    Uinv = identity_matrix(r)
    V = identity_matrix(c)
    Vinv = identity_matrix(c)

    def row_swap(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]
        for t in range(r):
            Uinv[t][i], Uinv[t][k] = Uinv[t][k], Uinv[t][i]

    def row_negate(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for t in range(r):
            Uinv[t][i] = -Uinv[t][i]

    def row_add(i, k, q):
        # row_i += q * row_k
        D[i] = [x + q * y for x, y in zip(D[i], D[k])]
        U[i] = [x + q * y for x, y in zip(U[i], U[k])]
        for t in range(r):
            Uinv[t][k] -= q * Uinv[t][i]

    def col_swap(j, k):
        for t in range(r):
            D[t][j], D[t][k] = D[t][k], D[t][j]
        for t in range(c):
            V[t][j], V[t][k] = V[t][k], V[t][j]
        Vinv[j], Vinv[k] = Vinv[k], Vinv[j]

    def col_negate(j):
        for t in range(r):
            D[t][j] = -D[t][j]
        for t in range(c):
            V[t][j] = -V[t][j]
        Vinv[j] = [-x for x in Vinv[j]]

    def col_add(j, k, q):
        # col_j += q * col_k
        for t in range(r):
            D[t][j] += q * D[t][k]
        for t in range(c):
            V[t][j] += q * V[t][k]
        Vinv[k] = [x - q * y for x, y in zip(Vinv[k], Vinv[j])]

    s = 0
    while s < r and s < c:
        # locate smallest nonzero |entry| in the trailing block
        pi = -1
        pj = -1
        best = 0
        for i in range(s, r):
            for j in range(s, c):
                e = D[i][j]
                if e != 0:
                    e = -e if e < 0 else e
                    if pi < 0 or e < best:
                        pi, pj, best = i, j, e
        if pi < 0:
            break
        if pi != s:
            row_swap(s, pi)
        if pj != s:
            col_swap(s, pj)
        if D[s][s] < 0:
            row_negate(s)

        clean = True
        for i in range(s + 1, r):
            if D[i][s] != 0:
                q = D[i][s] // D[s][s]
                if q:
                    row_add(i, s, -q)
                if D[i][s] != 0:
                    clean = False
        for j in range(s + 1, c):
            if D[s][j] != 0:
                q = D[s][j] // D[s][s]
                if q:
                    col_add(j, s, -q)
                if D[s][j] != 0:
                    clean = False
        if not clean:
            continue

        # enforce divisibility of the remaining block by D[s][s]
        bad = False
        for i in range(s + 1, r):
            for j in range(s + 1, c):
                if D[i][j] % D[s][s] != 0:
                    row_add(s, i, 1)
                    bad = True
                    break
            if bad:
                break
        if bad:
            continue
        s += 1

    return U, Uinv, D, V, Vinv


def hnf_rows(a):
    """Row-style Hermite normal form.

    Returns (H, T, pivots) with T*A = H, T unimodular; H is in row echelon
    form with positive pivots, entries above each pivot reduced into
    [0, pivot), and zero rows at the bottom.
    """
    r = len(a)
    c = len(a[0]) if r else 0
    H = [list(row) for row in a]
    T = identity_matrix(r)

    def row_swap(i, k):
        H[i], H[k] = H[k], H[i]
        T[i], T[k] = T[k], T[i]

    def row_negate(i):
        H[i] = [-x for x in H[i]]
        T[i] = [-x for x in T[i]]

    def row_add(i, k, q):
        H[i] = [x + q * y for x, y in zip(H[i], H[k])]
        T[i] = [x + q * y for x, y in zip(T[i], T[k])]

    pivots = []
    rank = 0
    for j in range(c):
        # reduce column j below the current rank to a single nonzero entry
        while True:
            pi = -1
            best = 0
            for i in range(rank, r):
                e = H[i][j]
                if e != 0:
                    e = -e if e < 0 else e
                    if pi < 0 or e < best:
                        pi, best = i, e
            if pi < 0:
                break
            done = True
            for i in range(rank, r):
                if i != pi and H[i][j] != 0:
                    q = H[i][j] // H[pi][j]
                    row_add(i, pi, -q)
                    if H[i][j] != 0:
                        done = False
            if done:
                if pi != rank:
                    row_swap(rank, pi)
                break
        if rank < r and H[rank][j] != 0:
            if H[rank][j] < 0:
                row_negate(rank)
            p = H[rank][j]
            for i in range(rank):
                q = H[i][j] // p
                if q:
                    row_add(i, rank, -q)
            pivots.append(j)
            rank += 1
            if rank == r:
                break
    return H, T, pivots


def scan_box_points(lows, highs, ineq_rows):
    """Integer points x with lows <= x <= highs and row.x >= 0 for each row.

    Returns a lexicographically sorted list of tuples.  This is the inner
    loop of the zonotope-bounded Hilbert basis computation.
    """
    n = len(lows)
    if n == 0:
        return [()]
    out = []
    x = list(lows)
    m = len(ineq_rows)
    while True:
        ok = True
        for t in range(m):
            row = ineq_rows[t]
            s = 0
            for i in range(n):
                if row[i]:
                    s += row[i] * x[i]
            if s < 0:
                ok = False
                break
        if ok:
            out.append(tuple(x))
        k = n - 1
        while k >= 0:
            if x[k] < highs[k]:
                x[k] += 1
                break
            x[k] = lows[k]
            k -= 1
        if k < 0:
            break
    return out


def cd_minimal_nonneg_solutions(amat, q, budget):
    """Minimal nonzero solutions of A v = 0 with v in N^q (Contejean-Devie).

    ``amat`` is an m x q integer matrix.  Returns the sorted list of minimal
    solutions, or None if more than ``budget`` nodes were expanded.
    """
    m = len(amat)
    acols = [[amat[i][j] for i in range(m)] for j in range(q)]
    sols = []
    frontier = []
    seen = set()
    for j in range(q):
        v = tuple(1 if t == j else 0 for t in range(q))
        frontier.append((v, list(acols[j])))
        seen.add(v)
    nodes = 0
    while frontier:
        nxt = []
        for v, av in frontier:
            nodes += 1
            if nodes > budget:
                return None
            zero = True
            for x in av:
                if x != 0:
                    zero = False
                    break
            if zero:
                dominated = False
                for s in sols:
                    le = True
                    for i in range(q):
                        if s[i] > v[i]:
                            le = False
                            break
                    if le:
                        dominated = True
                        break
                if not dominated:
                    sols.append(v)
                continue
            for j in range(q):
                col = acols[j]
                sp = 0
                for i in range(m):
                    if av[i]:
                        sp += av[i] * col[i]
                if sp < 0:
                    w = list(v)
                    w[j] += 1
                    wt = tuple(w)
                    if wt in seen:
                        continue
                    dominated = False
                    for s in sols:
                        le = True
                        for i in range(q):
                            if s[i] > wt[i]:
                                le = False
                                break
                        if le:
                            dominated = True
                            break
                    if dominated:
                        continue
                    seen.add(wt)
                    nxt.append((wt, [av[i] + col[i] for i in range(m)]))
        nxt.sort(key=lambda p: p[0])
        frontier = nxt
    # final minimalization (frontier order can admit incomparable dupes)
    sols.sort()
    minimal = []
    for v in sols:
        keep = True
        for s in minimal:
            le = True
            for i in range(q):
                if s[i] > v[i]:
                    le = False
                    break
            if le:
                keep = False
                break
        if keep:
            minimal.append(v)
    return minimal
