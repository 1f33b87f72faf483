from functools import lru_cache

import numpy as np
import pytest

from oracles import brute_geometry
from polarinc import gf2mat
from polarinc.ffield import make_field
from polarinc.gf2mat import block2x2, block_diag, deserialize, matmul2, submatrix
from polarinc.incidence import build_B_blocks, build_bundle, dump_bundle, index_map_csv
from polarinc.projgeom import QuadraticSpace, _quadratic_vec, bilinear, bilinear_vec, quadratic


@lru_cache(maxsize=None)
def bundle(q, preset="paper-square"):
    return build_bundle(QuadraticSpace.from_preset(make_field(q), preset))


def test_sizes_q3_square():
    b = bundle(3)
    assert b.G.shape == (40, 40)
    assert b.G_II.shape == (16, 16)
    assert b.G_AA.shape == (24, 24)


def test_nonsquare_G_II_is_identity():
    b = bundle(3, "paper-nonsquare")
    assert b.G_II.shape == (10, 10)
    assert gf2mat.is_identity(b.G_II)


def test_q5_blocks_square_and_equal():
    b = bundle(5)
    assert b.G_AA.shape == (120, 120)
    assert b.G_SS.shape == b.G_TT.shape == (60, 60)
    assert b.G_ST.shape == b.G_TS.shape == (60, 60)


@pytest.mark.parametrize("q, preset", [(3, "paper-square"), (5, "paper-nonsquare"), (9, "paper-square")])
def test_structure(q, preset):
    b = bundle(q, preset)
    assert b.G.is_symmetric()
    diag = np.diag(b.G.to_dense())
    iso = b.space.class_codes == 0
    assert (diag.astype(bool) == iso).all()
    assert (np.diag(b.G_II.to_dense()) == 1).all()
    assert (np.diag(b.G_AA.to_dense()) == 0).all()
    assert b.G_ST == b.G_TS.transpose()
    assert block2x2(b.G_SS, b.G_ST, b.G_TS, b.G_TT) == b.G_AA
    pos = b.A_map.positions
    codes = b.space.class_codes[pos]
    # S points first, then T
    assert list(codes) == sorted(codes, reverse=True)
    assert submatrix(b.G, b.I_map.positions, b.I_map.positions) == b.G_II
    assert submatrix(b.G, pos, pos) == b.G_AA
    assert submatrix(b.G, b.S_map.positions, b.T_map.positions) == b.G_ST


@pytest.mark.parametrize("q, preset", [(3, "paper-nonsquare"), (7, "paper-square"), (9, "paper-nonsquare")])
def test_entry_oracle(q, preset):
    b = bundle(q, preset)
    pts, _, _, form = brute_geometry(q, b.space.diag)
    rng = np.random.default_rng(q)
    N = len(pts)
    for i, j in rng.integers(0, N, size=(1000, 2)):
        assert b.G[i, j] == int(form(pts[i], pts[j]) == 0)


def test_index_map_positions():
    b = bundle(5, "paper-nonsquare")
    for imap in (b.I_map, b.A_map, b.S_map, b.T_map, b.all_map):
        assert sorted(imap.position.values()) == list(range(len(imap)))
        for k, P in enumerate(imap.points):
            assert b.space.points[imap.positions[k]] == P


def test_B_block_examples_q3():
    b = bundle(3)
    assert (np.diag(b.B1.to_dense()) == 0).all() and (np.diag(b.B2.to_dense()) == 0).all()
    assert set(b.B1.row_sums()) == {8}
    assert gf2mat.is_zero(matmul2(b.B1, b.B1))
    assert gf2mat.is_zero(matmul2(b.B2, b.B2))
    B1, B2 = build_B_blocks(b.space)
    assert B1 == b.B1 and B2 == b.B2


def test_B_entries_scalar_criterion():
    b = bundle(5, "paper-nonsquare")
    sp, F = b.space, b.space.field
    for imap, B in ((b.S_map, b.B1), (b.T_map, b.B2)):
        pts = imap.points
        for i in range(0, len(pts), 3):
            for j in range(0, len(pts), 5):
                X, Y = pts[i], pts[j]
                g = bilinear(sp, X, Y)
                want = i != j and F.mul(quadratic(sp, X), quadratic(sp, Y)) == F.mul(g, g)
                assert B[i, j] == int(want)


def test_B_invariant_under_representatives():
    sp = bundle(7).space
    F = sp.field
    for X in sp.points[5:40:3]:
        for Y in sp.points[100:160:7]:
            base = F.mul(quadratic(sp, X), quadratic(sp, Y)) == F.mul(bilinear(sp, X, Y), bilinear(sp, X, Y))
            for lam, mu in ((2, 3), (6, 5)):
                x = [F.mul(lam, c) for c in X.coords]
                y = [F.mul(mu, c) for c in Y.coords]
                g = bilinear_vec(sp, x, y)
                assert (F.mul(_quadratic_vec(sp, x), _quadratic_vec(sp, y)) == F.mul(g, g)) == base


@pytest.mark.parametrize("q, preset", [(3, "paper-square"), (3, "paper-nonsquare"), (5, "paper-square")])
def test_G_AA_square_identity(q, preset):
    b = bundle(q, preset)
    lhs = matmul2(b.G_AA, b.G_AA)
    assert lhs == gf2mat.add_identity(block_diag(b.B1, b.B2))


def test_dump_round_trip(tmp_path):
    b = bundle(3)
    paths = dump_bundle(b, tmp_path)
    names = sorted(p.name for p in paths)
    assert names == sorted(["G.bitmat", "G_II.bitmat", "G_AA.bitmat", "B1.bitmat", "B2.bitmat",
                            "index_map.csv", "config.json"])
    assert (tmp_path / "G_AA.bitmat").read_bytes().startswith(b"BITMAT 1 24 24\n")
    assert deserialize((tmp_path / "G_AA.bitmat").read_bytes()) == b.G_AA
    assert deserialize((tmp_path / "B2.bitmat").read_bytes()) == b.B2
    first = {p.name: p.read_bytes() for p in paths}
    dump_bundle(bundle(3), tmp_path)
    assert {p.name: p.read_bytes() for p in paths} == first
    assert not list(tmp_path.glob(".*tmp"))


def test_index_map_csv():
    text = index_map_csv(bundle(3, "paper-nonsquare")).splitlines()
    assert text[0] == "matrix,position,coordinates,class,Q-value"
    rows = [r.split(",") for r in text[1:]]
    assert sum(r[0] == "G" for r in rows) == 40
    gii = [r for r in rows if r[0] == "G_II"]
    assert len(gii) == 10 and all(r[3] == "isotropic" and r[4] == "0" for r in gii)
    gaa = [r[3] for r in rows if r[0] == "G_AA"]
    assert gaa == ["square"] * 15 + ["nonsquare"] * 15
