"""Shared fixtures: canonical examples from the literature plus seeded corpora."""

import random
from fractions import Fraction

import pytest

from satmon import homs as H
from satmon import monoid as M
from satmon import valuative as V
from satmon.sigma import PrimeSet


# ---------------------------------------------------------------------------
# canonical fixtures


@pytest.fixture(scope="session")
def nat():
    return M.free_monoid(1)


@pytest.fixture(scope="session")
def nat2():
    return M.free_monoid(2)


@pytest.fixture(scope="session")
def half_inclusion(nat):
    """N inside (1/2)N: ambient unit is 1/2, so the map is 1 |-> 2."""
    return H.MonoidHom(nat, M.free_monoid(1), [(2,)])


def ogus_data():
    """The saturated-pushout-of-integral counterexample data.

    Coordinates are the half-grid: the ambient unit is 1/2, so N^2 sits as
    <(2,0),(0,2)> and P = <N^2, (1/2,1/2)> as <(2,0),(0,2),(1,1)>, taken in
    its own groupification.
    """
    n2 = M.free_monoid(2)
    half2 = M.free_monoid(2)
    theta0 = H.MonoidHom(n2, half2, [(2, 0), (0, 2)])
    grid = M.monoid_from_vectors([(2, 0), (0, 2), (1, 1)])
    p, to_p = grid.intrinsic()
    arm = H.MonoidHom(n2, p, [to_p((2, 0)), to_p((0, 2))])
    return theta0, arm, p


@pytest.fixture(scope="session")
def ogus():
    return ogus_data()


@pytest.fixture(scope="session")
def smooth_not_etale():
    """P = N*e1 inside Q = <e1, e2, -e1+2e2>: smooth for every prime set,
    but with ramification index 2 over the closed point."""
    q = M.monoid_from_vectors([(1, 0), (0, 1), (-1, 2)])
    p = M.free_monoid(1)
    return H.MonoidHom(p, q, [(1, 0)])


@pytest.fixture(scope="session")
def lex2():
    return V.lex_lattice(2)


@pytest.fixture(scope="session")
def half_v_presentation(lex2):
    """Q = (1/2)V over V = lex Z^2, chart N^2 -> (1/2)N^2."""
    n2 = M.free_monoid(2)
    half2 = M.free_monoid(2)
    theta0 = H.MonoidHom(n2, half2, [(2, 0), (0, 2)])
    return V.TypeVPresentation(lex2, theta0, [(1, 0), (0, 1)])


@pytest.fixture(scope="session")
def xyz_presentation(lex2):
    """The S^2 = pi*T chart: Q0 = <p,t,s | 2s = p+t> over P0 = N, pi -> (1,0)."""
    fp = M.FpMonoid(3, (((0, 0, 2), (1, 1, 0)),))
    q0, images, _ = M.from_presentation(fp)
    p0 = M.free_monoid(1)
    chart = H.MonoidHom(p0, q0, [images[0]])
    return V.TypeVPresentation(lex2, chart, [(1, 0)])


# ---------------------------------------------------------------------------
# seeded random corpora


def rng_for(name):
    return random.Random(f"satmon:{name}")


def random_fp_monoid(rng, max_gens=4, max_rels=2, max_entry=2):
    n = rng.randint(1, max_gens)
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        u = tuple(rng.randint(0, max_entry) for _ in range(n))
        v = tuple(rng.randint(0, max_entry) for _ in range(n))
        if u != v:
            rels.append((u, v))
    return M.FpMonoid(n, tuple(rels))


def random_affine_monoid(rng, rank=2, max_gens=4, lo=-1, hi=2):
    """Random affine monoid in Z^rank with small generators."""
    while True:
        gens = []
        for _ in range(rng.randint(1, max_gens)):
            v = tuple(rng.randint(lo, hi) for _ in range(rank))
            if any(v) and v not in gens:
                gens.append(v)
        if gens:
            return M.monoid_from_vectors(gens, rank=rank)


def random_saturated_monoid(rng, rank=2, max_gens=3):
    """Random saturated, span-tight monoid (pointed or with units)."""
    m = random_affine_monoid(rng, rank=rank, max_gens=max_gens, lo=0, hi=2)
    sat = m.saturate()
    tight, _ = sat.intrinsic()
    return tight.saturate() if not tight.is_saturated() else tight


def random_endo_map(rng, p):
    """A random valid hom out of p: quotient by a face, scaling, padding."""
    kind = rng.choice(["mult", "quotient", "pad", "self"])
    if kind == "mult":
        k = rng.randint(1, 3)
        return H.MonoidHom(p, p, [p.ambient.scale(k, g) for g in p.gens])
    if kind == "quotient":
        faces = p.faces()
        f = faces[rng.randrange(len(faces))]
        q, images, _ = p.quotient_by_face(f)
        target = q.saturate()
        return H.MonoidHom(p, target, images)
    if kind == "pad":
        from satmon.zlat import FgAbelianGroup

        amb = p.ambient
        new_amb = FgAbelianGroup(amb.rank + 1, amb.torsion)

        def lift(g):
            return g[: amb.rank] + (0,) + g[amb.rank:]

        gens = [lift(g) for g in p.gens] + [
            (0,) * amb.rank + (1,) + (0,) * len(amb.torsion)
        ]
        target = M.AffineMonoid(new_amb, gens)
        return H.MonoidHom(p, target, [lift(g) for g in p.gens])
    return H.MonoidHom.identity(p)


# ---------------------------------------------------------------------------
# oracles


def minors_gcd_invariants(rows):
    """Invariant factors via gcds of k x k minors (naive, matrices <= 4x4)."""
    import itertools
    import math

    r = len(rows)
    c = len(rows[0]) if r else 0

    def minor(rs, cs):
        sub = [[rows[i][j] for j in cs] for i in rs]
        n = len(sub)
        if n == 0:
            return 1
        if n == 1:
            return sub[0][0]
        det = 0
        for j in range(n):
            sign = (-1) ** j
            rest = [row[:j] + row[j + 1:] for row in sub[1:]]
            det += sign * sub[0][j] * _det(rest)
        return det

    def _det(mat):
        n = len(mat)
        if n == 1:
            return mat[0][0]
        out = 0
        for j in range(n):
            rest = [row[:j] + row[j + 1:] for row in mat[1:]]
            out += (-1) ** j * mat[0][j] * _det(rest)
        return out

    dk = []
    prev = 1
    for k in range(1, min(r, c) + 1):
        g = 0
        for rs in itertools.combinations(range(r), k):
            for cs in itertools.combinations(range(c), k):
                g = math.gcd(g, abs(minor(rs, cs)))
        if g == 0:
            break
        dk.append(g // prev)
        prev = g
    return dk


def brute_nonneg_solve(rows, rhs, bound=8):
    """Exhaustive search for x in N^k, |x|_inf <= bound, A x = b."""
    import itertools

    k = len(rows[0]) if rows else 0
    for x in itertools.product(range(bound + 1), repeat=k):
        if all(
            sum(rows[i][j] * x[j] for j in range(k)) == rhs[i] for i in range(len(rows))
        ):
            return x
    return None


def hom_preimage_box_violation(f, radius=4):
    """Box-enumeration oracle for exactness: an x with f(x) in Q but x not in P.

    Walks the source groupification in invariant coordinates within the
    given radius (torsion coordinates in full).
    """
    import itertools

    pres = f.source.gp_presentation()
    gp = pres.group
    ranges = [range(-radius, radius + 1)] * gp.rank + [
        range(d) for d in gp.torsion
    ]
    for coords in itertools.product(*ranges):
        exp = pres.lift(coords)
        x = f.source.element_from_exponents(exp)
        y = f.apply_exponents(exp)
        if f.target.contains(y) and not f.source.contains(x):
            return x
    return None


def integrality_box_violation(f, bound=3, witness_budget=None):
    """Box oracle for the element-wise integrality criterion.

    Enumerates (a1, a2, b1) and looks b2 up by its element value, so the
    scan is cubic rather than quartic in the box size.
    """
    import itertools

    from satmon.homs import _integral_witness_exists

    kp = f.source.ngens
    kq = f.target.ngens
    rng_p = list(itertools.product(range(bound + 1), repeat=kp))
    rng_q = list(itertools.product(range(bound + 1), repeat=kq))
    amb = f.target.ambient
    by_elem = {}
    for b in rng_q:
        by_elem.setdefault(f.target.element_from_exponents(b), []).append(b)
    f_of = {a: f.apply_exponents(a) for a in rng_p}
    checked = set()
    for a1 in rng_p:
        for a2 in rng_p:
            for b1 in rng_q:
                lhs = amb.add(f_of[a1], f.target.element_from_exponents(b1))
                want = amb.sub(lhs, f_of[a2])
                for b2 in by_elem.get(want, ()):
                    key = (a1, a2, b1, b2)
                    if key in checked:
                        continue
                    checked.add(key)
                    if not _integral_witness_exists(
                        f, key, budget=witness_budget
                    ):
                        return key
    return None


def face_preimage(f, face):
    """The preimage face of a target face under a hom (by the facet test)."""
    span, coords, facets, kills = f.target._cone()
    j_active = [
        j for j in range(len(facets)) if all(kills[j][i] for i in face.indices)
    ]
    idxs = []
    for i in range(f.source.ngens):
        c = f.target.cone_coords(f.gen_images[i])
        from satmon.zlat import vdot

        if all(vdot(facets[j], c) == 0 for j in j_active):
            idxs.append(i)
    return f.source.face_from_indices(tuple(idxs))


def same_submonoid(a, b):
    """Do two monoids in the same ambient have the same elements?"""
    if a.ambient != b.ambient:
        return False
    return all(b.contains(g) for g in a.gens) and all(a.contains(g) for g in b.gens)
