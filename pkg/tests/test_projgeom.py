import itertools
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_geometry
from polarinc.errors import ConfigurationError, DegenerateForm, SamePoint
from polarinc.ffield import Chi, make_field
from polarinc.projgeom import (
    Plane,
    PointClass,
    ProjPoint,
    QuadraticSpace,
    bilinear,
    bilinear_vec,
    class_counts,
    classify,
    enumerate_planes,
    enumerate_points,
    gaussian_binomial,
    perp_pair_isotropic_count,
    perp_profile,
    plane_isotropic_count,
    plane_point_indices,
    plane_points,
    quadratic,
)


@lru_cache(maxsize=None)
def space(q, preset="paper-square"):
    return QuadraticSpace.from_preset(make_field(q), preset)


def test_presets():
    F = make_field(3)
    assert space(3).diag == (1, 2, 1, 2)
    assert space(3, "paper-nonsquare").diag == (1, 2, 1, 1)  # -alpha with alpha = 2
    assert space(3, "dim3").diag == (1, 2, 1)
    assert space(3).alpha_class is Chi.SQUARE
    assert space(3, "paper-nonsquare").alpha_class is Chi.NONSQUARE
    assert space(9, "paper-nonsquare").alpha_class is Chi.NONSQUARE
    with pytest.raises(ConfigurationError):
        QuadraticSpace.from_preset(F, "nope")


def test_degenerate_form_rejected():
    with pytest.raises(DegenerateForm):
        QuadraticSpace(make_field(5), (1, 0, 1, 1))


@pytest.mark.parametrize("q, n, count", [(3, 4, 40), (5, 3, 31), (9, 4, 820)])
def test_enumerate_points_count(q, n, count):
    sp = space(q) if n == 4 else space(q, "dim3")
    pts = enumerate_points(sp)
    assert len(pts) == count == sp.num_points
    assert all(P.is_canonical() for P in pts)
    assert list(pts) == sorted(set(pts))


@pytest.mark.parametrize("q, preset", [(3, "paper-square"), (5, "paper-nonsquare"), (9, "paper-square")])
def test_points_and_q_values_match_brute_force(q, preset):
    sp = space(q, preset)
    pts, qvals, _, _ = brute_geometry(q, sp.diag)
    assert [P.coords for P in sp.points] == pts
    assert list(sp.q_values) == qvals


def test_quadratic_examples():
    for alpha_preset in ("paper-square", "paper-nonsquare"):
        assert quadratic(space(5, alpha_preset), (1, 1, 0, 0)) == 0
    assert quadratic(space(3), (1, 0, 0, 0)) == 1
    assert quadratic(space(3), (1, 1, 1, 1)) == 0


def test_bilinear_examples():
    sp = space(3)
    assert bilinear(sp, (1, 0, 0, 0), (0, 1, 0, 0)) == 0
    assert bilinear(sp, (1, 1, 1, 0), (1, 0, 0, 0)) == 1


@pytest.mark.parametrize("q, preset", [(3, "paper-square"), (5, "paper-nonsquare"), (9, "paper-nonsquare")])
def test_polar_form_matches_diagonal_gram(q, preset):
    sp = space(q, preset)
    gram = sp.gram_matrix()
    rng = np.random.default_rng(q)
    for i, j in rng.integers(0, len(sp.points), size=(300, 2)):
        assert bilinear(sp, sp.points[i], sp.points[j]) == gram[i, j]
    for i, P in enumerate(sp.points):
        assert bilinear(sp, P, P) == quadratic(sp, P) == sp.q_values[i]
    assert (gram == gram.T).all()


def test_classify_examples():
    assert classify(space(3), (1, 1, 0, 0)) is PointClass.ISOTROPIC
    assert classify(space(3), (1, 0, 0, 0)) is PointClass.SQUARE_ANISO
    assert classify(space(3), (1, 0, 1, 1)) is PointClass.SQUARE_ANISO
    assert classify(space(3, "paper-nonsquare"), (1, 1, 0, 0)) is PointClass.ISOTROPIC


@pytest.mark.parametrize("q, preset", [(5, "paper-square"), (9, "paper-nonsquare")])
def test_classify_invariant_under_scaling(q, preset):
    sp = space(q, preset)
    F = sp.field
    for P in sp.points[::7]:
        base = classify(sp, P)
        for lam in range(1, q):
            vec = [F.mul(lam, x) for x in P.coords]
            assert ProjPoint.normalize(F, vec) == P
            assert classify(sp, vec) is base


@pytest.mark.parametrize(
    "q, preset, iso, aniso",
    [(3, "paper-square", 16, 24), (3, "paper-nonsquare", 10, 30), (5, "paper-square", 36, 120)],
)
def test_class_counts(q, preset, iso, aniso):
    i, s, t = class_counts(space(q, preset))
    assert (i, s + t) == (iso, aniso)
    assert s == t


def test_class_counts_match_brute_force():
    for q in (3, 5, 7, 9):
        for preset in ("paper-square", "paper-nonsquare"):
            sp = space(q, preset)
            _, qvals, squares, _ = brute_geometry(q, sp.diag)
            brute = (
                sum(v == 0 for v in qvals),
                sum(v in squares for v in qvals),
                sum(v != 0 and v not in squares for v in qvals),
            )
            assert class_counts(sp) == brute


def test_perp_profile_examples():
    sq, nsq = space(3), space(3, "paper-nonsquare")
    iso_sq = next(P for P in sq.points if quadratic(sq, P) == 0)
    assert perp_profile(sq, iso_sq) == (7, 6)
    assert perp_profile(nsq, (1, 1, 0, 0)) == (1, 12)
    for sp in (sq, nsq):
        for P in sp.points:
            if quadratic(sp, P) != 0:
                assert perp_profile(sp, P) == (4, 9)


def test_perp_profile_sums_to_hyperplane():
    sp = space(5, "paper-nonsquare")
    for P in sp.points[::11]:
        prof = perp_profile(sp, P)
        assert prof.iso_count + prof.aniso_count == 31


def test_perp_pair_examples():
    sp = space(3)
    assert perp_pair_isotropic_count(sp, (1, 0, 0, 0), (0, 0, 1, 0)) == 0
    assert perp_pair_isotropic_count(sp, (1, 0, 0, 0), (1, 1, 1, 0)) == 1
    with pytest.raises(SamePoint):
        perp_pair_isotropic_count(sp, (1, 0, 0, 0), (2, 0, 0, 0))


def test_perp_pair_even_for_isotropic_pairs_q3():
    sp = space(3)
    iso = [P for P in sp.points if quadratic(sp, P) == 0]
    for X, Y in itertools.combinations(iso, 2):
        assert perp_pair_isotropic_count(sp, X, Y) % 2 == 0


@pytest.mark.parametrize("q, count", [(3, 130), (5, 806)])
def test_enumerate_planes_count(q, count):
    planes = enumerate_planes(space(q))
    assert len(planes) == count == gaussian_binomial(4, 2, q)
    assert count == (q * q + 1) * (q * q + q + 1)


def test_planes_are_distinct_subspaces():
    sp = space(3)
    seen = set()
    for pl in enumerate_planes(sp):
        pts = plane_points(sp, pl)
        assert len(set(pts)) == 4
        assert all(P.is_canonical() for P in pts)
        seen.add(frozenset(pts))
    assert len(seen) == 130


def test_every_point_pair_lies_on_one_plane():
    sp = space(3)
    idx = plane_point_indices(sp)
    pair_count = np.zeros((40, 40), dtype=int)
    for row in idx:
        for a, b in itertools.combinations(row, 2):
            pair_count[a, b] += 1
            pair_count[b, a] += 1
    off = ~np.eye(40, dtype=bool)
    assert (pair_count[off] == 1).all()


def test_plane_point_indices_match_scalar():
    sp = space(5, "paper-nonsquare")
    planes = enumerate_planes(sp)[::17]
    idx = plane_point_indices(sp, planes)
    for pl, row in zip(planes, idx):
        assert [sp.points[i] for i in row] == plane_points(sp, pl)


def test_plane_isotropic_count_examples():
    e0, e2 = ProjPoint((1, 0, 0, 0)), ProjPoint((0, 0, 1, 0))
    assert plane_isotropic_count(space(3), Plane(e0, e2)) == 0
    assert plane_isotropic_count(space(5), Plane(e0, e2)) == 2
    # two orthogonal isotropic points span a totally isotropic plane
    sp = space(3)
    X, Y = ProjPoint((1, 1, 0, 0)), ProjPoint((0, 0, 1, 1))
    assert quadratic(sp, X) == quadratic(sp, Y) == bilinear(sp, X, Y) == 0
    assert plane_isotropic_count(sp, Plane(X, Y)) == 4


@pytest.mark.parametrize("q, preset", [(3, "paper-square"), (3, "paper-nonsquare"), (5, "paper-square")])
def test_plane_counts_in_allowed_set(q, preset):
    sp = space(q, preset)
    for pl in enumerate_planes(sp)[::5]:
        assert plane_isotropic_count(sp, pl) in {0, 1, 2, q + 1}


vectors = st.lists(st.integers(0, 8), min_size=4, max_size=4)


@settings(max_examples=150, deadline=None)
@given(vectors, vectors, vectors, st.integers(0, 8))
def test_bilinear_symmetric_and_linear_f9(x, y, z, c):
    sp = space(9, "paper-nonsquare")
    F = sp.field
    assert bilinear_vec(sp, x, y) == bilinear_vec(sp, y, x)
    xz = [F.add(a, b) for a, b in zip(x, z)]
    assert bilinear_vec(sp, xz, y) == F.add(bilinear_vec(sp, x, y), bilinear_vec(sp, z, y))
    cx = [F.mul(c, a) for a in x]
    assert bilinear_vec(sp, cx, y) == F.mul(c, bilinear_vec(sp, x, y))
