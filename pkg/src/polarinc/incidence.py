"""Orthogonality incidence matrix G and its class-restricted pieces."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import gf2mat
from .gf2mat import BitMatrix
from .projgeom import PointClass, ProjPoint, QuadraticSpace, classify_value


@dataclass(frozen=True)
class IndexMap:
    """Matrix position -> projective point, for one row/column ordering.

    ``positions[k]`` is the index into the full point enumeration of the point
    sitting at matrix position ``k``.
    """

    label: str
    positions: np.ndarray
    points: tuple[ProjPoint, ...] = field(repr=False)

    @classmethod
    def from_positions(cls, space: QuadraticSpace, label: str, positions) -> "IndexMap":
        positions = np.asarray(positions, dtype=np.int64)
        positions.setflags(write=False)
        return cls(label, positions, tuple(space.points[i] for i in positions))

    def __len__(self):
        return len(self.positions)

    @property
    def position(self) -> dict[ProjPoint, int]:
        return {P: k for k, P in enumerate(self.points)}


@dataclass(frozen=True)
class IncidenceBundle:
    space: QuadraticSpace
    G: BitMatrix
    G_II: BitMatrix
    G_AA: BitMatrix
    G_SS: BitMatrix
    G_ST: BitMatrix
    G_TS: BitMatrix
    G_TT: BitMatrix
    B1: BitMatrix
    B2: BitMatrix
    all_map: IndexMap
    I_map: IndexMap
    A_map: IndexMap
    S_map: IndexMap
    T_map: IndexMap

    def replace_G_AA(self, G_AA: BitMatrix) -> "IncidenceBundle":
        """Copy with a substituted G_AA (used to inject faults)."""
        return replace(self, G_AA=G_AA)

    def matrices(self) -> dict[str, tuple[BitMatrix, IndexMap]]:
        """Dumpable matrices keyed by file stem, with their index maps."""
        return {
            "G": (self.G, self.all_map),
            "G_II": (self.G_II, self.I_map),
            "G_AA": (self.G_AA, self.A_map),
            "B1": (self.B1, self.S_map),
            "B2": (self.B2, self.T_map),
        }


def class_positions(space: QuadraticSpace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Positions of isotropic, square and nonsquare points in enumeration order."""
    codes = space.class_codes
    return np.flatnonzero(codes == 0), np.flatnonzero(codes == 1), np.flatnonzero(codes == -1)


def criterion_matrix(space: QuadraticSpace, rows, cols=None) -> np.ndarray:
    """Boolean ``<X,X><Y,Y> == <X,Y>^2`` over the given point positions.

    The test is unchanged by rescaling either representative, so no
    normalisation to Q = 1 or Q = beta is needed.
    """
    _, mul, _, _ = space.field.tables()
    rows = np.asarray(rows)
    cols = rows if cols is None else np.asarray(cols)
    gram = space.gram_matrix(rows, cols)
    qv = space.q_values
    lhs = mul[qv[rows][:, None], qv[cols][None, :]]
    return lhs == mul[gram, gram]


def _b_block(space: QuadraticSpace, positions: np.ndarray) -> BitMatrix:
    crit = criterion_matrix(space, positions)
    np.fill_diagonal(crit, False)
    return BitMatrix.from_dense(crit)


def build_B_blocks(space: QuadraticSpace) -> tuple[BitMatrix, BitMatrix]:
    """(B1 over S x S, B2 over T x T): off-diagonal criterion indicators."""
    _, S, T = class_positions(space)
    return _b_block(space, S), _b_block(space, T)


def build_bundle(space: QuadraticSpace) -> IncidenceBundle:
    I, S, T = class_positions(space)
    A = np.concatenate([S, T])
    ortho = space.orthogonality

    def sub(r, c):
        return BitMatrix.from_dense(ortho[np.ix_(r, c)])

    return IncidenceBundle(
        space=space,
        G=BitMatrix.from_dense(ortho),
        G_II=sub(I, I),
        G_AA=sub(A, A),
        G_SS=sub(S, S),
        G_ST=sub(S, T),
        G_TS=sub(T, S),
        G_TT=sub(T, T),
        B1=_b_block(space, S),
        B2=_b_block(space, T),
        all_map=IndexMap.from_positions(space, "G", np.arange(space.num_points)),
        I_map=IndexMap.from_positions(space, "I", I),
        A_map=IndexMap.from_positions(space, "A", A),
        S_map=IndexMap.from_positions(space, "S", S),
        T_map=IndexMap.from_positions(space, "T", T),
    )


# -- dumps -----------------------------------------------------------------------


def atomic_write(path: Path, data: bytes) -> None:
    """Write via a temporary file in the same directory and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def index_map_csv(bundle: IncidenceBundle) -> str:
    """Rows ``matrix, position, coordinates, class, Q-value`` for every dumped matrix."""
    space = bundle.space
    F = space.field
    qv = space.q_values
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["matrix", "position", "coordinates", "class", "Q-value"])
    for name, (_, imap) in bundle.matrices().items():
        for k, (pos, P) in enumerate(zip(imap.positions, imap.points)):
            value = int(qv[pos])
            w.writerow([name, k, " ".join(map(str, P.coords)), classify_value(F, value).value, value])
    return buf.getvalue()


def dump_bundle(bundle: IncidenceBundle, outdir, config: dict | None = None) -> list[Path]:
    """Write ``<name>.bitmat`` files, ``index_map.csv`` and ``config.json``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (M, _) in bundle.matrices().items():
        path = outdir / f"{name}.bitmat"
        atomic_write(path, gf2mat.serialize(M))
        written.append(path)
    path = outdir / "index_map.csv"
    atomic_write(path, index_map_csv(bundle).encode("ascii"))
    written.append(path)
    path = outdir / "config.json"
    cfg = {"space": bundle.space.describe()} if config is None else config
    atomic_write(path, (json.dumps(cfg, indent=2, sort_keys=True) + "\n").encode("ascii"))
    written.append(path)
    return written


def point_class(space: QuadraticSpace, position: int) -> PointClass:
    return classify_value(space.field, int(space.q_values[position]))
