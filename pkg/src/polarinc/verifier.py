"""Exhaustive checks of the counting lemmas, matrix identities and rank claims.

Every check scans all points, pairs or planes of the configured space; none
samples.  Counting checks work from the integer orthogonality matrix, while
the identity and rank checks go through the packed GF(2) kernel, so the two
families do not share an evaluation path.

A failing check always carries a witness: full point coordinates and both
sides of the violated equality.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import gf2mat
from .ffield import Chi
from .gf2mat import BitMatrix
from .incidence import IncidenceBundle, IndexMap, build_bundle, class_positions, criterion_matrix
from .projgeom import QuadraticSpace, enumerate_planes, expected_class_counts, gaussian_binomial, plane_point_indices

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckResult:
    name: str
    status: str
    stats: dict = field(default_factory=dict)
    witness: dict | None = None
    reason: str | None = None

    def __post_init__(self):
        if self.status == FAIL and self.witness is None:
            raise ValueError(f"failed check {self.name} must carry a witness")
        if self.status == SKIPPED and not self.reason:
            raise ValueError(f"skipped check {self.name} must carry a reason")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "stats": self.stats}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass
class VerificationReport:
    config: dict
    checks: list[CheckResult]

    @property
    def overall(self) -> bool:
        return all(c.status != FAIL for c in self.checks) and any(c.status == PASS for c in self.checks)

    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == FAIL]

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "overall": PASS if self.overall else FAIL,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_jsonable) + "\n"

    def to_text(self) -> str:
        return report_text(self.to_dict())


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def report_text(data: dict) -> str:
    """Plain-text summary rendered from a report dictionary."""
    cfg = data["config"]
    space = cfg.get("space", cfg)
    head = (
        f"q={space['field']['q']} n={space['n']} diag={space['diag']} "
        f"preset={space.get('preset')} alpha={space['alpha_class']}"
    )
    lines = [head, f"{'check':<22} {'status':<8} detail"]
    for c in data["checks"]:
        if c["status"] == SKIPPED:
            detail = c.get("reason", "")
        elif c["status"] == FAIL:
            detail = c["witness"].get("violation", "")
        else:
            detail = ", ".join(f"{k}={v}" for k, v in c["stats"].items() if not isinstance(v, (dict, list)))
        lines.append(f"{c['name']:<22} {c['status']:<8} {detail}")
    lines.append(f"overall: {data['overall']}")
    return "\n".join(lines) + "\n"


# -- helpers ------------------------------------------------------------------------


def _coords(space: QuadraticSpace, position: int) -> list[int]:
    return list(space.points[int(position)].coords)


def _skip_unless_dim(name: str, space: QuadraticSpace, n: int) -> CheckResult | None:
    if space.n != n:
        return CheckResult(name, SKIPPED, reason=f"only stated for n={n}; this space has n={space.n}")
    return None


def _square_alpha(space: QuadraticSpace) -> bool:
    return space.alpha_class is Chi.SQUARE


def _matrix_witness(violation: str, got: BitMatrix, want: BitMatrix, imap: IndexMap, space) -> dict:
    i, j = gf2mat.first_difference(got, want)
    return {
        "violation": violation,
        "row": i,
        "col": j,
        "row_point": _coords(space, imap.positions[i]),
        "col_point": _coords(space, imap.positions[j]),
        "observed": got[i, j],
        "expected": want[i, j],
    }


# -- counting checks ------------------------------------------------------------------


def check_global_counts(space: QuadraticSpace, bundle: IncidenceBundle | None = None) -> CheckResult:
    name = "global_counts"
    if skip := _skip_unless_dim(name, space, 4):
        return skip
    I, S, T = class_positions(space)
    observed = {"isotropic": len(I), "anisotropic": len(S) + len(T), "square": len(S), "nonsquare": len(T)}
    expected = expected_class_counts(space)
    stats = {**observed, "expected_isotropic": expected["isotropic"], "expected_anisotropic": expected["anisotropic"]}
    for key in ("isotropic", "anisotropic"):
        if observed[key] != expected[key]:
            return CheckResult(name, FAIL, stats, {
                "violation": f"{key} count {observed[key]} != {expected[key]}",
                "observed": observed[key], "expected": expected[key],
            })
    if len(S) != len(T):
        return CheckResult(name, FAIL, stats, {
            "violation": f"|S|={len(S)} != |T|={len(T)}", "observed": len(S), "expected": len(T),
        })
    return CheckResult(name, PASS, stats)


def check_perp_counts(space: QuadraticSpace, bundle: IncidenceBundle | None = None) -> CheckResult:
    name = "perp_counts"
    if skip := _skip_unless_dim(name, space, 4):
        return skip
    q = space.q
    ortho = space.orthogonality
    iso = space.class_codes == 0
    iso_cnt = ortho[:, iso].sum(axis=1)
    aniso_cnt = ortho[:, ~iso].sum(axis=1)
    want_iso_for_iso = 2 * q + 1 if _square_alpha(space) else 1
    hyper = q * q + q + 1
    want_iso = np.where(iso, want_iso_for_iso, q + 1)
    want_aniso = np.where(iso, hyper - want_iso_for_iso, q * q)
    stats = {
        "isotropic_points": int(iso.sum()),
        "anisotropic_points": int((~iso).sum()),
        "isotropic_profile": [want_iso_for_iso, hyper - want_iso_for_iso],
        "anisotropic_profile": [q + 1, q * q],
    }
    bad = np.flatnonzero((iso_cnt != want_iso) | (aniso_cnt != want_aniso))
    if bad.size:
        k = bad[0]
        return CheckResult(name, FAIL, stats, {
            "violation": "hyperplane profile mismatch",
            "point": _coords(space, k),
            "isotropic": bool(iso[k]),
            "observed": [int(iso_cnt[k]), int(aniso_cnt[k])],
            "expected": [int(want_iso[k]), int(want_aniso[k])],
        })
    return CheckResult(name, PASS, stats)


def check_pair_parity(space: QuadraticSpace, bundle: IncidenceBundle | None = None) -> CheckResult:
    """Isotropic points orthogonal to two distinct isotropic points: always even."""
    name = "pair_parity"
    if skip := _skip_unless_dim(name, space, 4):
        return skip
    I, _, _ = class_positions(space)
    M = space.orthogonality[np.ix_(I, I)].astype(np.int64)
    counts = M @ M.T
    iu = np.triu_indices(len(I), k=1)
    values = counts[iu]
    hist = {int(v): int(c) for v, c in zip(*np.unique(values, return_counts=True))}
    stats = {"pairs": int(values.size), "count_histogram": hist}
    odd = np.flatnonzero(values % 2)
    if odd.size:
        a, b = iu[0][odd[0]], iu[1][odd[0]]
        return CheckResult(name, FAIL, stats, {
            "violation": "odd isotropic count on the intersection of two isotropic hyperplanes",
            "points": [_coords(space, I[a]), _coords(space, I[b])],
            "observed": int(values[odd[0]]),
            "expected": "even",
        })
    return CheckResult(name, PASS, stats)


def check_lemma32(space: QuadraticSpace, bundle: IncidenceBundle | None = None) -> CheckResult:
    """Two anisotropic points: exactly one common isotropic perp iff <X,X><Y,Y> = <X,Y>^2, else even."""
    name = "lemma32_criterion"
    if skip := _skip_unless_dim(name, space, 4):
        return skip
    _, mul, _, _ = space.field.tables()
    I, S, T = class_positions(space)
    A = np.concatenate([S, T])
    C = space.orthogonality[np.ix_(A, I)].astype(np.int64)
    counts = C @ C.T
    crit = criterion_matrix(space, A)
    iu = np.triu_indices(len(A), k=1)
    cnt, cr = counts[iu], crit[iu]
    stats = {"pairs": int(cnt.size), "criterion_pairs": int(cr.sum())}
    bad = np.flatnonzero(np.where(cr, cnt != 1, cnt % 2 == 1))
    if bad.size:
        k = bad[0]
        a, b = A[iu[0][k]], A[iu[1][k]]
        qv = space.q_values
        g = int(space.gram_matrix([a], [b])[0, 0])
        return CheckResult(name, FAIL, stats, {
            "violation": "criterion holds but count != 1" if cr[k] else "criterion fails but count is odd",
            "points": [_coords(space, a), _coords(space, b)],
            "lhs": int(mul[qv[a], qv[b]]),
            "rhs": int(mul[g, g]),
            "observed": int(cnt[k]),
        })
    return CheckResult(name, PASS, stats)


def check_plane_profiles(space: QuadraticSpace, bundle: IncidenceBundle | None = None) -> CheckResult:
    name = "plane_profiles"
    if skip := _skip_unless_dim(name, space, 4):
        return skip
    q = space.q
    planes = enumerate_planes(space)
    idx = plane_point_indices(space, planes)
    iso_members = space.class_codes[idx] == 0
    counts = iso_members.sum(axis=1)
    hist = {int(v): int(c) for v, c in zip(*np.unique(counts, return_counts=True))}
    stats = {"planes": len(planes), "expected_planes": gaussian_binomial(space.n, 2, q), "count_histogram": hist}

    def fail(k, violation, **extra):
        pl = planes[k]
        return CheckResult(name, FAIL, stats, {
            "violation": violation,
            "plane": [list(pl.u.coords), list(pl.v.coords)],
            "observed": int(counts[k]),
            **extra,
        })

    if len(planes) != stats["expected_planes"]:
        return CheckResult(name, FAIL, stats, {
            "violation": "plane enumeration size", "observed": len(planes), "expected": stats["expected_planes"],
        })
    allowed = np.isin(counts, [0, 1, 2, q + 1])
    if not allowed.all():
        k = int(np.flatnonzero(~allowed)[0])
        if counts[k] >= 3:
            return fail(k, "three isotropic points on a plane that is not totally isotropic", expected=q + 1)
        return fail(k, "isotropic count outside {0,1,2,q+1}")
    # two isotropic points that are orthogonal must span a totally isotropic plane
    partial = np.flatnonzero((counts >= 2) & (counts <= q))
    ortho = space.orthogonality
    for k in partial:
        members = idx[k][iso_members[k]]
        sub = ortho[np.ix_(members, members)]
        np.fill_diagonal(sub, False)
        if sub.any():
            a, b = np.argwhere(sub)[0]
            return fail(int(k), "orthogonal isotropic pair spans a plane that is not totally isotropic",
                        points=[_coords(space, members[a]), _coords(space, members[b])], expected=q + 1)
    stats["totally_isotropic"] = int((counts == q + 1).sum())
    if not _square_alpha(space) and stats["totally_isotropic"]:
        k = int(np.flatnonzero(counts == q + 1)[0])
        return fail(k, "totally isotropic plane in the nonsquare case", expected="at most 2")
    return CheckResult(name, PASS, stats)


# -- matrix checks ------------------------------------------------------------------------


def check_GII_identity(space: QuadraticSpace, bundle: IncidenceBundle) -> CheckResult:
    name = "GII_identity"
    if skip := _skip_unless_dim(name, space, 4):
        return skip
    n = bundle.G_II.rows
    ident = BitMatrix.identity(n)
    if _square_alpha(space):
        lhs, label = gf2mat.matmul2(bundle.G_II, bundle.G_II), "G_II^2 = I (mod 2)"
    else:
        lhs, label = bundle.G_II, "G_II = I"
    stats = {"order": n, "identity": label}
    if lhs != ident:
        return CheckResult(name, FAIL, stats, _matrix_witness(f"{label} violated", lhs, ident, bundle.I_map, space))
    return CheckResult(name, PASS, stats)


def check_GAA_identities(space: QuadraticSpace, bundle: IncidenceBundle) -> CheckResult:
    name = "GAA_identities"
    if skip := _skip_unless_dim(name, space, 4):
        return skip
    G, B1, B2 = bundle.G_AA, bundle.B1, bundle.B2
    n = G.rows
    ident = BitMatrix.identity(n)
    sq = gf2mat.matmul2(G, G)
    want_sq = gf2mat.add_identity(gf2mat.block_diag(B1, B2))
    b1sq, b2sq = gf2mat.matmul2(B1, B1), gf2mat.matmul2(B2, B2)
    fourth = gf2mat.matmul2(sq, sq)
    sums = np.concatenate([B1.row_sums(), B2.row_sums()])
    stats = {
        "order": n,
        "square_block": B1.rows,
        "nonsquare_block": B2.rows,
        "square_is_I_plus_blockdiag": sq == want_sq,
        "B1_squared_zero": gf2mat.is_zero(b1sq),
        "B2_squared_zero": gf2mat.is_zero(b2sq),
        "fourth_power_identity": fourth == ident,
        "B_row_sums_even": bool((sums % 2 == 0).all()),
        "B1_row_sums": sorted({int(s) for s in B1.row_sums()}),
        "B2_row_sums": sorted({int(s) for s in B2.row_sums()}),
    }
    if not stats["square_is_I_plus_blockdiag"]:
        w = _matrix_witness("G_AA^2 != I + blockdiag(B1, B2) (mod 2)", sq, want_sq, bundle.A_map, space)
        return CheckResult(name, FAIL, stats, w)
    if not stats["B1_squared_zero"]:
        w = _matrix_witness("B1^2 != 0 (mod 2)", b1sq, BitMatrix.zeros(*b1sq.shape), bundle.S_map, space)
        return CheckResult(name, FAIL, stats, w)
    if not stats["B2_squared_zero"]:
        w = _matrix_witness("B2^2 != 0 (mod 2)", b2sq, BitMatrix.zeros(*b2sq.shape), bundle.T_map, space)
        return CheckResult(name, FAIL, stats, w)
    if not stats["fourth_power_identity"]:
        w = _matrix_witness("G_AA^4 != I (mod 2)", fourth, ident, bundle.A_map, space)
        return CheckResult(name, FAIL, stats, w)
    if not stats["B_row_sums_even"]:
        k = int(np.flatnonzero(sums % 2)[0])
        pos = bundle.A_map.positions[k]
        return CheckResult(name, FAIL, stats, {
            "violation": "odd row sum in B1/B2", "point": _coords(space, pos), "observed": int(sums[k]),
            "expected": "even",
        })
    return CheckResult(name, PASS, stats)


def check_theorem(space: QuadraticSpace, bundle: IncidenceBundle) -> CheckResult:
    name = "theorem_full_rank"
    if skip := _skip_unless_dim(name, space, 4):
        return skip
    r_ii, r_aa = gf2mat.rank2(bundle.G_II), gf2mat.rank2(bundle.G_AA)
    stats = {"order_II": bundle.G_II.rows, "rank_II": r_ii, "order_AA": bundle.G_AA.rows, "rank_AA": r_aa}
    if r_ii != bundle.G_II.rows or r_aa != bundle.G_AA.rows:
        which = "G_II" if r_ii != bundle.G_II.rows else "G_AA"
        return CheckResult(name, FAIL, stats, {
            "violation": f"{which} is not of full 2-rank",
            "observed": r_ii if which == "G_II" else r_aa,
            "expected": bundle.G_II.rows if which == "G_II" else bundle.G_AA.rows,
        })
    return CheckResult(name, PASS, stats)


def check_dim3(space: QuadraticSpace, bundle: IncidenceBundle) -> CheckResult:
    name = "dim3_ranks"
    if skip := _skip_unless_dim(name, space, 3):
        return skip
    q = space.q
    r_ii, r_aa = gf2mat.rank2(bundle.G_II), gf2mat.rank2(bundle.G_AA)
    stats = {
        "order_II": bundle.G_II.rows, "rank_II": r_ii, "expected_rank_II": q + 1,
        "order_AA": bundle.G_AA.rows, "rank_AA": r_aa, "expected_rank_AA": q * q - 1,
    }
    if r_ii != q + 1:
        return CheckResult(name, FAIL, stats, {"violation": "rank of G_II != q+1", "observed": r_ii, "expected": q + 1})
    if r_aa != q * q - 1:
        return CheckResult(name, FAIL, stats, {
            "violation": "rank of G_AA != q^2-1", "observed": r_aa, "expected": q * q - 1,
        })
    return CheckResult(name, PASS, stats)


CHECKS: tuple[Callable[..., CheckResult], ...] = (
    check_global_counts,
    check_perp_counts,
    check_pair_parity,
    check_lemma32,
    check_plane_profiles,
    check_GII_identity,
    check_GAA_identities,
    check_theorem,
    check_dim3,
)


def run_all(
    space: QuadraticSpace,
    bundle: IncidenceBundle | None = None,
    workers: int = 1,
    config: dict | None = None,
) -> VerificationReport:
    """Run every check that applies at this dimension.

    Checks only read the space and bundle, so they may run on a thread pool;
    results are always listed in :data:`CHECKS` order.
    """
    if bundle is None:
        bundle = build_bundle(space)
    # warm shared caches before any fan-out
    space.orthogonality, space.class_codes
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda chk: chk(space, bundle), CHECKS))
    else:
        results = [chk(space, bundle) for chk in CHECKS]
    cfg = {"space": space.describe()} if config is None else config
    return VerificationReport(cfg, results)
