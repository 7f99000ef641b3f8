"""Homomorphisms of affine monoids and their classification.

A MonoidHom stores one membership witness per generator image, so the
induced map on groupifications is available as an integer matrix on
exponent vectors.  Verdicts (injective, exact, integral, vertical, smooth,
etale, Kummer etale) are certified: every negative answer carries a witness
that can be re-checked independently.

Integrality is decided by the element-wise four-tuple criterion.  The
solution monoid T = {(a1,a2,b1,b2) : f(a1)+b1 = f(a2)+b2} is generated by
the minimal nonnegative solutions of a homogeneous system (computed by
completion), and the witness condition is additive: if two tuples admit
witnesses (a3,a4,b) and (a3',a4',b'), their sum admits (a3+a3', a4+a4',
b+b'), and the zero tuple admits (0,0,0).  Checking the generators is
therefore sufficient; the brute-force oracle in the test suite guards this
argument.
"""

import math
from dataclasses import dataclass, field

from . import zlat
from .errors import (
    MembershipError,
    PreconditionError,
    TorsionPreconditionError,
)
from .monoid import AffineMonoid, FpMonoid, from_presentation
from .zlat import FgAbelianGroup, Lattice, vdot


class MonoidHom:
    """Map of affine monoids given by generator images (validated)."""

    def __init__(self, source: AffineMonoid, target: AffineMonoid, gen_images, budget=None):
        if len(gen_images) != source.ngens:
            raise ValueError("need one image per source generator")
        self.source = source
        self.target = target
        self.gen_images = tuple(target.ambient.reduce(g) for g in gen_images)
        wits = []
        for im in self.gen_images:
            w = target.membership(im, budget=budget)
            if w is None:
                raise MembershipError(f"image {im} is not a member of the target")
            wits.append(w)
        self.witnesses = tuple(wits)
        for rho in source.relation_lattice().basis:
            acc = target.ambient.zero()
            for c, im in zip(rho, self.gen_images):
                if c:
                    acc = target.ambient.add(acc, target.ambient.scale(c, im))
            if not target.ambient.is_zero(acc):
                raise ValueError(
                    f"images do not respect the source relation {tuple(rho)}"
                )
        self._cache = {}

    @classmethod
    def identity(cls, m: AffineMonoid):
        return cls(m, m, m.gens)

    @classmethod
    def inclusion(cls, sub: AffineMonoid, sup: AffineMonoid, budget=None):
        if sub.ambient != sup.ambient:
            raise ValueError("inclusion requires a shared ambient group")
        return cls(sub, sup, sub.gens, budget=budget)

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def exp_matrix(self):
        """Witness matrix F: exponent vectors of P to exponent vectors of Q."""
        return [list(w) for w in self.witnesses]  # row i = witness of image i

    def apply_exponents(self, a):
        """Image in the target ambient of the source element sum(a_i * g_i)."""
        amb = self.target.ambient
        acc = amb.zero()
        for c, im in zip(a, self.gen_images):
            if c:
                acc = amb.add(acc, amb.scale(c, im))
        return acc

    def apply(self, x, budget=None):
        w = self.source.membership(x, budget=budget)
        if w is None:
            raise MembershipError(f"{x} is not a member of the source")
        return self.apply_exponents(w)

    def exp_image(self, a):
        """Exponent-level image: column combination of the witnesses."""
        k = len(self.target.gens)
        out = [0] * k
        for c, w in zip(a, self.witnesses):
            if c:
                for j in range(k):
                    out[j] += c * w[j]
        return tuple(out)

    def __repr__(self):
        return f"MonoidHom({self.source!r} -> {self.target!r})"


def compose(f: MonoidHom, g: MonoidHom):
    """g after f."""
    if f.target != g.source:
        raise ValueError("composition mismatch")
    images = [g.apply_exponents(w) for w in f.witnesses]
    return MonoidHom(f.source, g.target, images)


def saturation_inclusion(p: AffineMonoid):
    """The saturation together with the inclusion hom P -> P^sat."""
    sat = p.saturate()
    return sat, MonoidHom(p, sat, p.gens)


# ---------------------------------------------------------------------------
# groupification profile


@dataclass(frozen=True)
class GpProfile:
    kernel: FgAbelianGroup
    cokernel: FgAbelianGroup
    cokernel_rank: int
    torsion_order: int
    kernel_witness: tuple = None  # exponent vector in Z^{#gens(P)}, or None

    def kernel_order(self):
        return self.kernel.order()

    def __post_init__(self):
        t = math.prod(self.cokernel.torsion) if self.cokernel.torsion else 1
        if t != self.torsion_order:
            raise ValueError("torsion_order must match the cokernel invariants")


def gp_profile(f: MonoidHom) -> GpProfile:
    """Kernel and cokernel of the induced map on groupifications."""

    def build():
        kp = f.source.ngens
        kq = f.target.ngens
        relp = f.source.relation_lattice()
        relq = f.target.relation_lattice()
        fcols = [f.exp_image(tuple(1 if t == i else 0 for t in range(kp))) for i in range(kp)]
        cols = [list(b) for b in relq.basis] + [list(c) for c in fcols]
        coker = zlat.quotient_by_columns(kq, cols).group
        frows = [[fcols[i][j] for i in range(kp)] for j in range(kq)]
        pre = zlat.preimage_lattice(frows, relq, kp)
        kb = pre.basis
        klat = Lattice([list(b) for b in kb], kp)
        relcoords = []
        for b in relp.basis:
            c = klat.coords(b)
            assert c is not None
            relcoords.append(list(c))
        kpres = zlat.quotient_by_columns(klat.rank, relcoords)
        kernel = kpres.group
        witness = None
        if kernel.rank or kernel.torsion:
            gcoord = (1,) + (0,) * (kernel.dim - 1)
            lifted = kpres.lift(gcoord)
            exp = tuple(
                sum(klat.basis[t][i] * lifted[t] for t in range(klat.rank))
                for i in range(kp)
            )
            witness = exp
        t = math.prod(coker.torsion) if coker.torsion else 1
        return GpProfile(kernel, coker, coker.rank, t, witness)

    return f._get("gp_profile", build)


# ---------------------------------------------------------------------------
# individual predicates, each with a certificate


@dataclass(frozen=True)
class Verdict:
    holds: bool
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def is_injective(f: MonoidHom) -> Verdict:
    prof = gp_profile(f)
    if prof.kernel.rank == 0 and not prof.kernel.torsion:
        return Verdict(True, {"kernel": prof.kernel.describe()})
    elem = f.source.element_from_exponents(prof.kernel_witness)
    return Verdict(
        False,
        {"kernel": prof.kernel.describe(), "nonzero_kernel_element": elem},
    )


def _require_saturated(m: AffineMonoid, which):
    if not m.is_saturated():
        raise PreconditionError(f"{which} monoid must be saturated")


def preimage_generators(f: MonoidHom):
    """Generators of (f^gp)^{-1}(target) inside the source groupification.

    The target must be saturated, so membership in it is the cone condition
    on free parts; the preimage is then (pullback cone cap Z^r) x torsion.
    Returns source-ambient elements.
    """
    _require_saturated(f.target, "target")
    presp = f.source.gp_presentation()
    gp = presp.group
    rdim = gp.rank
    span_q = f.target.span_lattice()
    facets = f.target.cone_facets()

    def image_span_coords(gcoord):
        exp = presp.lift(gcoord)
        y = f.apply_exponents(exp)
        c = span_q.coords(f.target.ambient.free_part(y))
        assert c is not None
        return c

    cols = []
    for t in range(rdim):
        g = tuple(1 if i == t else 0 for i in range(gp.dim))
        cols.append(image_span_coords(g))
    rows = []
    for phi in facets:
        row = tuple(
            sum(phi[s] * cols[t][s] for s in range(len(phi))) for t in range(rdim)
        )
        rows.append(row)
    sharp, units = zlat.hilbert_from_hrep(rows, rdim)

    def to_ambient(gcoord):
        exp = presp.lift(gcoord)
        return f.source.element_from_exponents(exp)

    out = []
    pad = (0,) * len(gp.torsion)
    for h in sharp:
        out.append(to_ambient(tuple(h) + pad))
    for u in units:
        out.append(to_ambient(tuple(u) + pad))
        out.append(to_ambient(tuple(-x for x in u) + pad))
    for j in range(len(gp.torsion)):
        g = (0,) * gp.rank + tuple(1 if t == j else 0 for t in range(len(gp.torsion)))
        out.append(to_ambient(g))
    dedup = []
    for e in sorted(set(out)):
        if not f.source.ambient.is_zero(e):
            dedup.append(e)
    return dedup


def is_exact(f: MonoidHom, budget=None) -> Verdict:
    """P = (f^gp)^{-1}(Q): every generator of the preimage lies in P."""

    def build():
        gens = preimage_generators(f)
        for e in gens:
            if not f.source.contains(e, budget=budget):
                return Verdict(False, {"preimage_element_outside_source": e})
        return Verdict(True, {"preimage_generators_checked": len(gens)})

    return f._get("exact", build)


def is_vertical(f: MonoidHom, budget=None) -> Verdict:
    """The image of the source generates the target as a face."""

    def build():
        face = f.target.face_generated_by(list(f.gen_images), budget=budget)
        if face.is_whole():
            return Verdict(True, {"face": "whole"})
        outside = [i for i in range(f.target.ngens) if i not in face.indices]
        return Verdict(
            False, {"target_generator_outside_face": f.target.gens[outside[0]]}
        )

    return f._get("vertical", build)


def _source_is_valuative(f: MonoidHom):
    """Saturated with sharp part of rank <= 1: then every map out is integral."""
    src = f.source
    if not src.is_saturated():
        return False
    whole = Lattice(
        [src.ambient.free_part(g) for g in src.gens], src.ambient.rank
    ).saturation()
    units = src.units_face()
    udim = Lattice(
        [src.ambient.free_part(g) for g in units.gens], src.ambient.rank
    ).saturation().rank
    return whole.rank - udim <= 1


def integrality_tuple_generators(f: MonoidHom, budget=None):
    """Generating tuples (a1, a2, b1, b2) of the relation monoid T."""
    kp = f.source.ngens
    kq = f.target.ngens
    ambq = f.target.ambient
    nt = len(ambq.torsion)
    imfree = [ambq.free_part(im) for im in f.gen_images]
    imtor = [ambq.torsion_part(im) for im in f.gen_images]
    qfree = [ambq.free_part(g) for g in f.target.gens]
    qtor = [ambq.torsion_part(g) for g in f.target.gens]
    rows = []
    for r in range(ambq.rank):
        row = (
            [imfree[i][r] for i in range(kp)]
            + [-imfree[i][r] for i in range(kp)]
            + [qfree[j][r] for j in range(kq)]
            + [-qfree[j][r] for j in range(kq)]
            + [0] * (2 * nt)
        )
        rows.append(row)
    for t in range(nt):
        d = ambq.torsion[t]
        row = (
            [imtor[i][t] for i in range(kp)]
            + [-imtor[i][t] for i in range(kp)]
            + [qtor[j][t] for j in range(kq)]
            + [-qtor[j][t] for j in range(kq)]
        )
        for s in range(nt):
            row += [d, -d] if s == t else [0, 0]
        rows.append(row)
    if not rows:
        rows = [[0] * (2 * kp + 2 * kq + 2 * nt)]
    sols = zlat.nonneg_kernel_generators(rows, budget=budget)
    tuples = []
    seen = set()
    for v in sols:
        a1 = v[:kp]
        a2 = v[kp: 2 * kp]
        b1 = v[2 * kp: 2 * kp + kq]
        b2 = v[2 * kp + kq: 2 * kp + 2 * kq]
        key = (a1, a2, b1, b2)
        if any(any(part) for part in key) and key not in seen:
            seen.add(key)
            tuples.append(key)
    return tuples


def _integral_witness_exists(f: MonoidHom, tup, budget=None):
    """Is there (a3, a4, b) with b1 = f(a3)+b, b2 = f(a4)+b, a1+a3 = a2+a4?"""
    a1, a2, b1, b2 = tup
    kp = f.source.ngens
    kq = f.target.ngens
    ambq = f.target.ambient
    ambp = f.source.ambient
    ntq = len(ambq.torsion)
    ntp = len(ambp.torsion)
    imv = [f.gen_images[i] for i in range(kp)]
    qg = list(f.target.gens)
    b1v = f.target.element_from_exponents(b1)
    b2v = f.target.element_from_exponents(b2)
    rhs3 = ambp.zero()
    for i in range(kp):
        c = a2[i] - a1[i]
        if c:
            rhs3 = ambp.add(rhs3, ambp.scale(c, f.source.gens[i]))
    ncols = kp + kp + kq + 2 * ntq + 2 * ntq + 2 * ntp
    rows = []
    rhs = []

    def qrow(sel_a, tshift, vec_rhs):
        # rows for: f(a)+b == vec_rhs in the target ambient
        for r in range(ambq.rank):
            row = [0] * ncols
            for i in range(kp):
                row[sel_a * kp + i] = ambq.free_part(imv[i])[r]
            for j in range(kq):
                row[2 * kp + j] = ambq.free_part(qg[j])[r]
            rows.append(row)
            rhs.append(ambq.free_part(vec_rhs)[r])
        for t in range(ntq):
            d = ambq.torsion[t]
            row = [0] * ncols
            for i in range(kp):
                row[sel_a * kp + i] = ambq.torsion_part(imv[i])[t]
            for j in range(kq):
                row[2 * kp + j] = ambq.torsion_part(qg[j])[t]
            base = 2 * kp + kq + tshift * 2 * ntq + 2 * t
            row[base] = d
            row[base + 1] = -d
            rows.append(row)
            rhs.append(ambq.torsion_part(vec_rhs)[t])

    qrow(0, 0, b1v)
    qrow(1, 1, b2v)
    # a3 - a4 == rhs3 as elements of the source ambient
    for r in range(ambp.rank):
        row = [0] * ncols
        for i in range(kp):
            row[i] = ambp.free_part(f.source.gens[i])[r]
            row[kp + i] = -ambp.free_part(f.source.gens[i])[r]
        rows.append(row)
        rhs.append(ambp.free_part(rhs3)[r])
    for t in range(ntp):
        d = ambp.torsion[t]
        row = [0] * ncols
        for i in range(kp):
            row[i] = ambp.torsion_part(f.source.gens[i])[t]
            row[kp + i] = -ambp.torsion_part(f.source.gens[i])[t]
        base = 2 * kp + kq + 4 * ntq + 2 * t
        row[base] = d
        row[base + 1] = -d
        rows.append(row)
        rhs.append(ambp.torsion_part(rhs3)[t])
    res = zlat.solve_nonneg(rows, rhs, budget=budget)
    return res.is_sat


def is_integral(f: MonoidHom, budget=None) -> Verdict:
    """Element-wise integrality via generators of the relation monoid."""

    def build():
        if _source_is_valuative(f):
            return Verdict(True, {"reason": "source is valuative"})
        for tup in integrality_tuple_generators(f, budget=budget):
            if not _integral_witness_exists(f, tup, budget=budget):
                a1, a2, b1, b2 = tup
                return Verdict(
                    False,
                    {
                        "tuple_a1": a1,
                        "tuple_a2": a2,
                        "tuple_b1": b1,
                        "tuple_b2": b2,
                    },
                )
        return Verdict(True, {"reason": "all relation-monoid generators witnessed"})

    return f._get("integral", build)


def reverify_integral_certificate(f: MonoidHom, cert, budget=None):
    """Re-check a negative integrality certificate from scratch."""
    tup = (cert["tuple_a1"], cert["tuple_a2"], cert["tuple_b1"], cert["tuple_b2"])
    lhs = f.target.ambient.add(
        f.apply_exponents(tup[0]), f.target.element_from_exponents(tup[2])
    )
    rhs = f.target.ambient.add(
        f.apply_exponents(tup[1]), f.target.element_from_exponents(tup[3])
    )
    if lhs != rhs:
        return False
    return not _integral_witness_exists(f, tup, budget=budget)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassReport:
    injective: Verdict
    exact: Verdict
    integral: Verdict  # may be None when skipped
    vertical: Verdict
    smooth: Verdict
    etale: Verdict
    kummer_etale: Verdict
    profile: GpProfile

    def __post_init__(self):
        if self.kummer_etale.holds:
            assert self.etale.holds and self.injective.holds and self.exact.holds
        if self.etale.holds:
            assert self.smooth.holds

    def verdict_dict(self):
        out = {}
        for name in ("injective", "exact", "integral", "vertical", "smooth", "etale", "kummer_etale"):
            v = getattr(self, name)
            out[name] = None if v is None else v.holds
        return out


def classify(f: MonoidHom, sigma, budget=None, include_integral=True) -> ClassReport:
    """Full taxonomy relative to the prime set; sources/targets saturated."""
    _require_saturated(f.source, "source")
    _require_saturated(f.target, "target")
    prof = gp_profile(f)
    inj = is_injective(f)
    exact = is_exact(f, budget=budget)
    vertical = is_vertical(f, budget=budget)
    integral = is_integral(f, budget=budget) if include_integral else None
    korder = prof.kernel_order()
    if korder is None:
        smooth = Verdict(False, {"kernel_infinite": prof.kernel.describe()})
    elif not sigma.coprime(korder):
        smooth = Verdict(False, {"kernel_order_not_coprime": korder})
    elif not sigma.coprime(prof.torsion_order):
        smooth = Verdict(
            False, {"cokernel_torsion_order_not_coprime": prof.torsion_order}
        )
    else:
        smooth = Verdict(
            True,
            {"kernel_order": korder, "cokernel_torsion_order": prof.torsion_order},
        )
    if smooth.holds and prof.cokernel_rank == 0:
        etale = Verdict(True, {"cokernel": prof.cokernel.describe()})
    elif smooth.holds:
        etale = Verdict(False, {"cokernel_rank": prof.cokernel_rank})
    else:
        etale = Verdict(False, {"not_smooth": True})
    if etale.holds and inj.holds and exact.holds:
        ke = Verdict(True, {})
    else:
        why = {}
        if not inj.holds:
            why["not_injective"] = True
        if not exact.holds:
            why["not_exact"] = True
        if not etale.holds:
            why["not_etale"] = True
        ke = Verdict(False, why)
    return ClassReport(inj, exact, integral, vertical, smooth, etale, ke, prof)


# ---------------------------------------------------------------------------
# ramification indices


@dataclass(frozen=True)
class RamificationReport:
    indices: tuple  # ((face_indices_in_target, e), ...)
    skipped: tuple  # face index tuples whose preimage is not height one

    def as_dict(self):
        return {
            "indices": [
                {"target_face": list(fi), "e": e} for fi, e in self.indices
            ],
            "skipped": [list(fi) for fi in self.skipped],
        }


def ramification_indices(f: MonoidHom, budget=None) -> RamificationReport:
    """e_q over the height-one primes of the target with height-one preimage."""
    _require_saturated(f.source, "source")
    _require_saturated(f.target, "target")
    out = []
    skipped = []
    span, coords, facets, kills = f.target._cone()
    for face in f.target.faces():
        if face.corank() != 1:
            continue
        j_active = [
            j for j in range(len(facets)) if all(kills[j][i] for i in face.indices)
        ]
        pre_idxs = []
        for i in range(f.source.ngens):
            c = f.target.cone_coords(f.gen_images[i])
            if all(vdot(facets[j], c) == 0 for j in j_active):
                pre_idxs.append(i)
        pre_face = f.source.face_from_indices(tuple(pre_idxs))
        if pre_face.corank() != 1:
            skipped.append(face.indices)
            continue
        vq, _, _ = f.target.height_one_valuation(face)
        vp, _, _ = f.source.height_one_valuation(pre_face)
        vq_of_images = [vdot(f.witnesses[i], vq) for i in range(f.source.ngens)]
        e = None
        for i in range(f.source.ngens):
            if vp[i] > 0:
                if vq_of_images[i] % vp[i] != 0:
                    e = None
                    break
                cand = vq_of_images[i] // vp[i]
                if e is None:
                    e = cand
                elif e != cand:
                    e = None
                    break
        ok = e is not None and e >= 1
        if ok:
            for i in range(f.source.ngens):
                if vq_of_images[i] != e * vp[i]:
                    ok = False
                    break
        if not ok:
            skipped.append(face.indices)
            continue
        out.append((face.indices, e))
    return RamificationReport(tuple(out), tuple(skipped))


# ---------------------------------------------------------------------------
# pushouts


@dataclass(frozen=True)
class PushoutResult:
    category: str
    fp: FpMonoid
    monoid: AffineMonoid  # None in the mon category
    left: MonoidHom  # P -> Q (None in mon)
    right: MonoidHom  # Q0 -> Q (None in mon)


def pushout(along: MonoidHom, arm: MonoidHom, category="sat", budget=None) -> PushoutResult:
    """Pushout of ``arm: P0 -> P`` against ``along: P0 -> Q0``.

    mon: the finitely presented monoid on gens(P) + gens(Q0);
    int: its integralisation (image in the pushout group);
    sat: the saturation of the integralisation.
    """
    if along.source != arm.source:
        raise ValueError("pushout arms must share their source")
    if category not in ("mon", "int", "sat"):
        raise ValueError("category must be one of mon, int, sat")
    p = arm.target
    q0 = along.target
    kp = p.ngens
    kq0 = q0.ngens
    n = kp + kq0
    rels = []

    def pad_left(v):
        return tuple(v) + (0,) * kq0

    def pad_right(v):
        return (0,) * kp + tuple(v)

    for rho in p.relation_lattice().basis:
        u = tuple(max(x, 0) for x in rho)
        v = tuple(max(-x, 0) for x in rho)
        rels.append((pad_left(u), pad_left(v)))
    for rho in q0.relation_lattice().basis:
        u = tuple(max(x, 0) for x in rho)
        v = tuple(max(-x, 0) for x in rho)
        rels.append((pad_right(u), pad_right(v)))
    for i in range(along.source.ngens):
        rels.append((pad_left(arm.witnesses[i]), pad_right(along.witnesses[i])))
    fp = FpMonoid(n, tuple(rels))
    if category == "mon":
        return PushoutResult("mon", fp, None, None, None)
    qint, images, pres = from_presentation(fp)
    target = qint if category == "int" else qint.saturate()
    left = MonoidHom(p, target, images[:kp], budget=budget)
    right = MonoidHom(q0, target, images[kp:], budget=budget)
    return PushoutResult(category, fp, target, left, right)


# ---------------------------------------------------------------------------
# Vidal decomposition


@dataclass(frozen=True)
class VidalResult:
    double: AffineMonoid  # (Q +_P Q)^sat
    product: AffineMonoid  # Q + coker
    forward_on_ambient: tuple  # columns: image of each ambient coordinate
    backward_on_ambient: tuple
    verified: bool


def direct_sum(g1: FgAbelianGroup, g2: FgAbelianGroup):
    """Canonical form of g1 + g2 with the two embeddings (as column maps)."""
    n = g1.dim + g2.dim
    cols = []
    for j, d in enumerate(g1.torsion):
        col = [0] * n
        col[g1.rank + j] = d
        cols.append(col)
    for j, d in enumerate(g2.torsion):
        col = [0] * n
        col[g1.dim + g2.rank + j] = d
        cols.append(col)
    pres = zlat.quotient_by_columns(n, cols)

    def embed1(v):
        return pres.project(tuple(v) + (0,) * g2.dim)

    def embed2(v):
        return pres.project((0,) * g1.dim + tuple(v))

    return pres.group, embed1, embed2


def vidal_decompose(f: MonoidHom, budget=None) -> VidalResult:
    """(Q +_P Q)^sat = Q + Q^gp/P^gp via (a, b) -> (a + b, class of b)."""
    prof = gp_profile(f)
    if prof.cokernel_rank != 0:
        raise TorsionPreconditionError("cokernel of the groupification must be torsion")
    _require_saturated(f.source, "source")
    _require_saturated(f.target, "target")
    q = f.target
    kq = q.ngens
    po = pushout(f, f, "sat", budget=budget)
    dmon = po.monoid
    damb = dmon.ambient
    # presentation of the pushout ambient over the 2*kq exponent generators
    relq = q.relation_lattice()
    cols = []
    for rho in relq.basis:
        cols.append(list(rho) + [0] * kq)
    for rho in relq.basis:
        cols.append([0] * kq + list(rho))
    for i in range(f.source.ngens):
        cols.append(list(f.witnesses[i]) + [-x for x in f.witnesses[i]])
    dpres = zlat.quotient_by_columns(2 * kq, cols)
    assert dpres.group == damb

    # cokernel presentation for classes in N = Q^gp/P^gp
    relq_cols = [list(b) for b in relq.basis]
    fcols = [list(f.exp_image(tuple(1 if t == i else 0 for t in range(f.source.ngens)))) for i in range(f.source.ngens)]
    cokpres = zlat.quotient_by_columns(kq, relq_cols + fcols)
    ncoker = cokpres.group

    eamb, embq, embn = direct_sum(q.gp_presentation().group, ncoker)
    qgp = q.gp_presentation()

    def q_to_e(exp):
        return embq(qgp.project(exp))

    egens = []
    for i in range(kq):
        e = tuple(1 if t == i else 0 for t in range(kq))
        g = q_to_e(e)
        if not eamb.is_zero(g) and g not in egens:
            egens.append(g)
    for j in range(ncoker.dim):
        g = embn(tuple(1 if t == j else 0 for t in range(ncoker.dim)))
        if not eamb.is_zero(g) and g not in egens:
            egens.append(g)
    emon = AffineMonoid(eamb, egens)

    # forward map on D's ambient coordinates
    fwd_cols = []
    for c in range(damb.dim):
        coord = tuple(1 if t == c else 0 for t in range(damb.dim))
        exp2 = dpres.lift(coord)  # exponents over (copy1, copy2)
        e1 = exp2[:kq]
        e2 = exp2[kq:]
        total = tuple(a + b for a, b in zip(e1, e2))
        img = eamb.add(q_to_e(total), embn(cokpres.project(e2)))
        fwd_cols.append(img)
    # backward map on E's ambient coordinates
    lift_n_to_q = []
    for j in range(ncoker.dim):
        y = cokpres.lift(tuple(1 if t == j else 0 for t in range(ncoker.dim)))
        lift_n_to_q.append(y)

    def d_from_pair(e1, e2):
        return damb.reduce(dpres.project(tuple(e1) + tuple(e2)))

    bwd_cols = []
    for c in range(eamb.dim):
        coord = tuple(1 if t == c else 0 for t in range(eamb.dim))
        # solve coord = embq(a) + embn(t): recover (a, t) from the direct sum
        # use the presentation: lift through the construction of direct_sum
        a, t = _split_direct_sum(q.gp_presentation().group, ncoker, eamb, embq, embn, coord)
        aexp = qgp.lift(a)
        yt = [0] * kq
        for j in range(ncoker.dim):
            if t[j]:
                for s in range(kq):
                    yt[s] += t[j] * lift_n_to_q[j][s]
        first = tuple(x - y for x, y in zip(aexp, yt))
        img = d_from_pair(first, yt)
        bwd_cols.append(img)

    def apply_cols(amb_from, amb_to, cols_, v):
        acc = amb_to.zero()
        for c, col in zip(amb_from.reduce(v), cols_):
            if c:
                acc = amb_to.add(acc, amb_to.scale(c, col))
        return acc

    verified = True
    # well-definedness on torsion coordinates
    for j, d in enumerate(damb.torsion):
        col = fwd_cols[damb.rank + j]
        if not eamb.is_zero(eamb.scale(d, col)):
            verified = False
    for j, d in enumerate(eamb.torsion):
        col = bwd_cols[eamb.rank + j]
        if not damb.is_zero(damb.scale(d, col)):
            verified = False
    # mutually inverse on coordinates
    for c in range(damb.dim):
        coord = tuple(1 if t == c else 0 for t in range(damb.dim))
        back = apply_cols(eamb, damb, bwd_cols, fwd_cols[c])
        if damb.reduce(back) != damb.reduce(coord):
            verified = False
    for c in range(eamb.dim):
        coord = tuple(1 if t == c else 0 for t in range(eamb.dim))
        back = apply_cols(damb, eamb, fwd_cols, bwd_cols[c])
        if eamb.reduce(back) != eamb.reduce(coord):
            verified = False
    # monoid level: generators map into the other monoid
    for g in dmon.gens:
        if not emon.contains(apply_cols(damb, eamb, fwd_cols, g), budget=budget):
            verified = False
    for g in emon.gens:
        if not dmon.contains(apply_cols(eamb, damb, bwd_cols, g), budget=budget):
            verified = False
    return VidalResult(dmon, emon, tuple(fwd_cols), tuple(bwd_cols), verified)


def _split_direct_sum(g1, g2, eamb, embq, embn, coord):
    """Invert the direct-sum coordinate change on a single coordinate."""
    # brute-force over the torsion is unnecessary: solve linearly over Z by
    # stacking the embedding columns and reducing modulo eamb relations.
    n1, n2 = g1.dim, g2.dim
    cols = []
    for i in range(n1):
        cols.append(embq(tuple(1 if t == i else 0 for t in range(n1))))
    for j in range(n2):
        cols.append(embn(tuple(1 if t == j else 0 for t in range(n2))))
    # solve sum x_i cols_i = coord in eamb
    nt = len(eamb.torsion)
    rows = []
    rhs = []
    for r in range(eamb.rank):
        rows.append([c[r] for c in cols] + [0] * nt)
        rhs.append(coord[r])
    for t in range(nt):
        row = [c[eamb.rank + t] for c in cols]
        row += [eamb.torsion[t] if s == t else 0 for s in range(nt)]
        rows.append(row)
        rhs.append(coord[eamb.rank + t])
    sol = zlat.solve_integer(rows, rhs)
    assert sol is not None
    x = sol[: n1 + n2]
    return g1.reduce(x[:n1]), g2.reduce(x[n1:])


# ---------------------------------------------------------------------------
# semistable extension


def semistable_extension(p: AffineMonoid, pi, n, budget=None):
    """P -> P_n(pi) = P[e_1..e_n]/(e_1+...+e_n = pi).

    Returns (hom, new_gen_images): the images of the n added generators in
    the target.  n = 0 requires pi = 0 and returns the identity.
    """
    pi = p.ambient.reduce(pi)
    wit = p.membership(pi, budget=budget)
    if wit is None:
        raise MembershipError(f"{pi} is not a member of the monoid")
    if n == 0:
        if not p.ambient.is_zero(pi):
            raise MembershipError("with n = 0 the relation forces pi = 0")
        return MonoidHom.identity(p), []
    kp = p.ngens
    rels = []
    for rho in p.relation_lattice().basis:
        u = tuple(max(x, 0) for x in rho) + (0,) * n
        v = tuple(max(-x, 0) for x in rho) + (0,) * n
        rels.append((u, v))
    rels.append((tuple(wit) + (0,) * n, (0,) * kp + (1,) * n))
    fp = FpMonoid(kp + n, tuple(rels))
    target, images, pres = from_presentation(fp)
    hom = MonoidHom(p, target, images[:kp], budget=budget)
    return hom, images[kp:]
