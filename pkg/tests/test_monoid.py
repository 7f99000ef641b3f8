"""Affine monoids: presentations, saturation, membership, faces, quotients."""

import pytest

from conftest import rng_for, random_fp_monoid, same_submonoid
from satmon import monoid as M
from satmon.errors import InvalidFaceError, MembershipError, NotHeightOneError
from satmon.monoid import AffineMonoid, Face, FpMonoid, free_monoid, from_presentation, monoid_from_vectors
from satmon.zlat import FgAbelianGroup


# ---------------------------------------------------------------------------
# presentations


def test_from_presentation_collapse():
    mono, images, _ = from_presentation(FpMonoid(2, (((1, 0), (0, 1)),)))
    assert mono.ambient == FgAbelianGroup(1)
    assert mono.gens == ((1,),)
    assert images[0] == images[1] == (1,)


def test_from_presentation_free():
    mono, images, _ = from_presentation(FpMonoid(2, ()))
    assert mono.ambient == FgAbelianGroup(2)
    assert len(mono.gens) == 2


def test_from_presentation_single_relation():
    # e1+e2+e3 = 2e1 collapses Z^3 to Z^2 (the relation column is primitive)
    mono, images, _ = from_presentation(
        FpMonoid(3, (((1, 1, 1), (2, 0, 0)),))
    )
    assert mono.ambient == FgAbelianGroup(2)
    assert len(mono.gens) == 3
    amb = mono.ambient
    lhs = amb.add(amb.add(images[0], images[1]), images[2])
    assert lhs == amb.scale(2, images[0])


def test_gens_validation():
    with pytest.raises(ValueError):
        AffineMonoid(FgAbelianGroup(1), [(0,)])
    with pytest.raises(ValueError):
        AffineMonoid(FgAbelianGroup(1), [(1,), (1,)])
    trivial = AffineMonoid(FgAbelianGroup(1), ())
    assert trivial.is_trivial() and trivial.is_saturated()


# ---------------------------------------------------------------------------
# saturation


def test_saturate_numerical_semigroup():
    m = monoid_from_vectors([(2,), (3,)])
    assert m.saturate().gens == ((1,),)


def test_saturate_interior_point():
    m = monoid_from_vectors([(1, 0), (1, 2)])
    assert m.saturate().gens == ((1, 0), (1, 1), (1, 2))


def test_saturate_idempotent_on_free():
    n2 = free_monoid(2)
    assert set(n2.saturate().gens) == set(n2.gens)
    assert n2.is_saturated()


def test_saturate_with_torsion_ambient():
    m = monoid_from_vectors([(1, 0)], rank=1, torsion=(2,))
    sat = m.saturate()
    # saturation picks up the ambient torsion: 2*(0,1) = 0 lies in the monoid
    assert sat.contains((0, 1))
    assert sat.contains((1, 1))
    assert not m.is_saturated()


def test_membership_witnesses():
    m = monoid_from_vectors([(2,), (3,)])
    w = m.membership((7,))
    assert w == (2, 1)
    assert m.membership((1,)) is None
    m2 = monoid_from_vectors([(1, 0), (1, 2)])
    assert m2.membership((1, 1)) is None  # in the saturation, not the monoid
    assert m2.membership((2, 2)) == (1, 1)


# ---------------------------------------------------------------------------
# faces


def test_faces_square():
    n2 = free_monoid(2)
    faces = n2.faces()
    assert [f.indices for f in faces] == [(), (0,), (1,), (0, 1)]


def test_faces_line():
    assert len(free_monoid(1).faces()) == 2


def test_faces_of_saturated_triangle():
    m = monoid_from_vectors([(1, 0), (1, 1), (1, 2)])
    faces = m.faces()
    assert len(faces) == 4
    assert {f.indices for f in faces} == {(), (0,), (2,), (0, 1, 2)}


def test_spec_bijection_under_saturation():
    rng = rng_for("spec-bij")
    for _ in range(30):
        fp = random_fp_monoid(rng)
        mono, _, _ = from_presentation(fp)
        if mono.is_trivial():
            continue
        sat = mono.saturate()
        assert len(mono.faces()) == len(sat.faces())


def test_face_generated_by_interior():
    n2 = free_monoid(2)
    f = n2.face_generated_by([(1, 1)])
    assert f.is_whole()  # (1,0) + (0,1) = (1,1) forces both axes in
    f = n2.face_generated_by([(1, 0)])
    assert f.indices == (0,)
    f = n2.face_generated_by([])
    assert f.indices == ()  # empty intersection convention: the unit face


def test_face_generated_by_equals_intersection_bruteforce():
    rng = rng_for("face-gen")
    for _ in range(25):
        fp = random_fp_monoid(rng, max_gens=3)
        mono, _, _ = from_presentation(fp)
        if mono.is_trivial():
            continue
        faces = mono.faces()
        if len(faces) > 16:
            continue
        for i in range(mono.ngens):
            s = [mono.gens[i]]
            got = mono.face_generated_by(s)
            containing = [
                set(f.indices) for f in faces if i in f.indices
            ]
            expected = set.intersection(*containing) if containing else set()
            assert set(got.indices) == expected


def test_face_generated_by_membership_error():
    n2 = free_monoid(2)
    with pytest.raises(MembershipError):
        n2.face_generated_by([(-1, 0)])


def test_face_validation():
    n2 = free_monoid(2)
    assert n2.face_from_indices((0, 1)).is_whole()
    # the interior generator of the triangle spans no face
    m = monoid_from_vectors([(1, 0), (1, 2), (1, 1)])
    with pytest.raises(InvalidFaceError):
        m.face_from_indices((2,))


# ---------------------------------------------------------------------------
# localization and quotients


def test_localize_axis():
    n2 = free_monoid(2)
    loc = n2.localize(n2.face_from_indices((0,)))
    assert same_submonoid(
        loc, monoid_from_vectors([(1, 0), (0, 1), (-1, 0)])
    )
    # localizing at the whole monoid gives the group
    grp = n2.localize(n2.face_from_indices((0, 1)))
    assert grp.contains((-3, -5))
    # localizing at the unit face is the identity
    same = n2.localize(n2.face_from_indices(()))
    assert same_submonoid(same, n2)


def test_quotient_by_face_examples():
    n2 = free_monoid(2)
    q, images, _ = n2.quotient_by_face(n2.face_from_indices((0,)))
    assert q.ambient == FgAbelianGroup(1)
    assert same_submonoid(q, free_monoid(1))
    q2, _, _ = n2.quotient_by_face(n2.face_from_indices(()))
    assert q2.ambient.rank == 2


def test_quotient_by_ray_of_triangle():
    # quotient of <(1,0),(1,1),(1,2)> by the ray of (1,2): classes map to 2, 1
    m = monoid_from_vectors([(1, 0), (1, 1), (1, 2)])
    face = m.face_from_indices((2,))
    q, images, pres = m.quotient_by_face(face)
    vals, _, _ = m.height_one_valuation(face)
    assert vals == (2, 1, 0)
    assert same_submonoid(q, free_monoid(1)) or q.ambient.rank == 1


def test_localize_quotient_commute_with_saturation():
    rng = rng_for("loc-sat")
    for _ in range(20):
        fp = random_fp_monoid(rng, max_gens=3)
        mono, _, _ = from_presentation(fp)
        if mono.is_trivial():
            continue
        sat = mono.saturate()
        for f in sat.faces():
            loc = sat.localize(f)
            assert same_submonoid(loc.saturate(), loc) or loc.is_saturated()
            q, _, _ = sat.quotient_by_face(f)
            assert q.is_saturated()


# ---------------------------------------------------------------------------
# height-one valuations


def test_height_one_square():
    n2 = free_monoid(2)
    vals, _, _ = n2.height_one_valuation(n2.face_from_indices((0,)))
    assert vals == (0, 1)  # v(a, b) = b


def test_height_one_identity():
    nn = free_monoid(1)
    vals, _, _ = nn.height_one_valuation(nn.face_from_indices(()))
    assert vals == (1,)


def test_height_one_triangle():
    m = monoid_from_vectors([(1, 0), (1, 1), (1, 2)])
    vals, _, _ = m.height_one_valuation(m.face_from_indices((0,)))
    assert vals == (0, 1, 2)


def test_height_one_error():
    n2 = free_monoid(2)
    with pytest.raises(NotHeightOneError):
        n2.height_one_valuation(n2.face_from_indices(()))  # P/{0} = N^2, not N


# ---------------------------------------------------------------------------
# Gordan closure: saturating a presentation regenerates itself


def test_gordan_closure_property():
    rng = rng_for("gordan-closure")
    for _ in range(20):
        fp = random_fp_monoid(rng)
        mono, _, _ = from_presentation(fp)
        sat = mono.saturate()
        again = sat.saturate()
        assert again.gens == sat.gens
        assert all(sat.contains(g) for g in mono.gens)
