"""Exact two-phase simplex over an ordered field.

Constraint data is rational (Fractions); the objective row may carry
``Quad`` entries (elements of Q(sqrt(d))).  Since pivoting only ever divides
constraint rows by rational pivots, every visited vertex is rational, and
maximizing a Q(sqrt(d))-linear functional over a rational polyhedron is
exact.  Bland's rule guarantees termination.
"""

from fractions import Fraction

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SimplexResult:
    __slots__ = ("status", "x", "value", "farkas")

    def __init__(self, status, x=None, value=None, farkas=None):
        self.status = status
        self.x = x
        self.value = value
        self.farkas = farkas

    def __repr__(self):
        return f"SimplexResult({self.status}, value={self.value})"


def _pivot(tab, basis, row, col):
    piv = tab[row][col]
    inv = _ONE / piv
    tab[row] = [e * inv for e in tab[row]]
    prow = tab[row]
    for i, r in enumerate(tab):
        if i != row and r[col] != 0:
            f = r[col]
            tab[i] = [a - f * b for a, b in zip(r, prow)]
    basis[row] = col


def _reduced_costs(tab, basis, cost):
    m = len(tab)
    ncols = len(tab[0]) - 1
    red = list(cost)
    for i in range(m):
        cb = cost[basis[i]]
        if cb != 0:
            row = tab[i]
            red = [rj - cb * row[j] for j, rj in enumerate(red)]
    return red

def _run(tab, basis, cost, allowed):
    """Bland-rule simplex loop; cost has one entry per column (no rhs)."""
    while True:
        red = _reduced_costs(tab, basis, cost)
        enter = -1
        for j in allowed:
            if red[j] > 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL, red
        # ratio test
        leave = -1
        best = None
        for i, row in enumerate(tab):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED, red
        _pivot(tab, basis, leave, enter)


def simplex_max(a_rows, b, c):
    """Maximize c.x subject to a_rows . x == b, x >= 0.

    Returns a SimplexResult; on infeasibility, ``farkas`` is a vector y with
    y.A <= 0 componentwise and y.b > 0 (checked by the caller's tests).
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else len(c)
    tab = []
    for i in range(m):
        row = [Fraction(x) for x in a_rows[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        tab.append(row + [_ZERO] * m + [rhs])
    for i in range(m):
        tab[i][n + i] = _ONE
    basis = [n + i for i in range(m)]

    # Phase 1: drive artificials to zero.
    cost1 = [_ZERO] * n + [-_ONE] * m + [_ZERO]
    allowed = list(range(n + m))
    status, red = _run(tab, basis, cost1, allowed)
    value1 = sum((cost1[basis[i]] * tab[i][-1] for i in range(m)), _ZERO)
    if value1 < 0:
        # Dual multipliers off the artificial columns give a Farkas vector.
        y = [-_ONE - red[n + i] for i in range(m)]
        farkas = [-yi for yi in y]
        # Undo the row-sign normalization applied to negative b entries.
        out = []
        for i in range(m):
            sign = -1 if Fraction(b[i]) < 0 else 1
            out.append(sign * farkas[i])
        return SimplexResult(INFEASIBLE, farkas=out)

    # Pivot artificials out of the basis where possible; redundant rows keep a
    # zero-valued artificial which is simply barred from re-entering.
    for i in range(m):
        if basis[i] >= n and tab[i][-1] == 0:
            for j in range(n):
                if tab[i][j] != 0:
                    _pivot(tab, basis, i, j)
                    break

    # Phase 2 on the real columns only.
    cost2 = list(c) + [_ZERO] * m + [_ZERO]
    allowed = [j for j in range(n)]
    status, red = _run(tab, basis, cost2, allowed)
    x = [_ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][-1]
    if status == UNBOUNDED:
        return SimplexResult(UNBOUNDED, x=x)
    value = sum((cost2[j] * x[j] for j in range(n)), _ZERO)
    return SimplexResult(OPTIMAL, x=x, value=value)


class LinearSystem:
    """Constraint builder over ``nvars`` variables, some free, some >= 0.

    Free variables are split into positive/negative parts; ``ge`` rows get
    slack columns.  ``maximize`` and ``feasible_point`` map results back to
    the original variables.
    """

    def __init__(self, nvars, nonneg=None):
        self.nvars = nvars
        self.nonneg = list(nonneg) if nonneg is not None else [True] * nvars
        self.rows = []
        self.rhs = []
        self.kinds = []  # "eq" | "ge"

    def eq(self, coeffs, rhs):
        self.rows.append(list(coeffs))
        self.rhs.append(rhs)
        self.kinds.append("eq")

    def ge(self, coeffs, rhs):
        self.rows.append(list(coeffs))
        self.rhs.append(rhs)
        self.kinds.append("ge")

    def _standardize(self):
        cols = []  # (var index, sign)
        for v in range(self.nvars):
            cols.append((v, 1))
            if not self.nonneg[v]:
                cols.append((v, -1))
        nslack = sum(1 for k in self.kinds if k == "ge")
        width = len(cols) + nslack
        amat = []
        si = len(cols)
        for row, kind in zip(self.rows, self.kinds):
            out = [Fraction(0)] * width
            for j, (v, s) in enumerate(cols):
                if row[v]:
                    out[j] = Fraction(row[v]) * s
            if kind == "ge":
                out[si] = Fraction(-1)
                si += 1
            amat.append(out)
        return amat, cols, width

    def _unpack(self, x, cols):
        vals = [Fraction(0)] * self.nvars
        for j, (v, s) in enumerate(cols):
            vals[v] += s * x[j]
        return vals

    def maximize(self, obj):
        amat, cols, width = self._standardize()
        c = [Fraction(0)] * width
        for j, (v, s) in enumerate(cols):
            if obj[v]:
                c[j] = c[j] + obj[v] * s
        res = simplex_max(amat, list(self.rhs), c)
        if res.x is not None:
            res.x = self._unpack(res.x, cols)
        return res

    def feasible_point(self):
        amat, cols, width = self._standardize()
        res = simplex_max(amat, list(self.rhs), [Fraction(0)] * width)
        if res.status == INFEASIBLE:
            return None
        return self._unpack(res.x, cols)
