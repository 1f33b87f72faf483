"""Command-line front end.

    polarinc --q 3 --dim 4 --preset paper-square counts
    polarinc --q 3^2 --dim 4 --preset paper-nonsquare build --out build/
    polarinc --sweep 3,5,7 --dim 4 verify --out reports/

Exit status: 0 when everything passes, 1 on verification or I/O failure,
2 on usage errors.  ``POLARINC_WORKERS`` sets how many processes a sweep uses.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import gf2mat
from .errors import ConfigurationError
from .ffield import FieldSpec, parse_field
from .incidence import atomic_write, build_bundle, dump_bundle
from .projgeom import PRESETS, QuadraticSpace, class_counts, classify_value, expected_class_counts
from .verifier import report_text, run_all

WORKERS_ENV = "POLARINC_WORKERS"
COMMANDS = ("counts", "build", "rank", "verify", "dump-points")
FORMATS = ("text", "json", "csv")


class UsageError(ConfigurationError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    q: str | None
    modulus: str | None
    dim: int | None
    preset: str | None
    diag: str | None
    out: str | None
    format: str
    sweep: str | None
    corrupt_gaa: str | None = None

    def echo(self) -> dict:
        out = asdict(self)
        if out["corrupt_gaa"] is None:
            del out["corrupt_gaa"]
        return out


# -- configuration --------------------------------------------------------------------


def _parse_diag(F: FieldSpec, text: str) -> tuple[int, ...]:
    """Comma list of element indices; ``-k`` is the additive inverse of index k."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            v = int(tok)
        except ValueError:
            raise UsageError(f"bad diagonal entry {tok!r}") from None
        if abs(v) >= F.q:
            raise UsageError(f"diagonal entry {v} is not an element index of {F}")
        out.append(F.neg(-v) if v < 0 else v)
    return tuple(out)


def _sweep_values(cfg: RunConfig) -> list[str]:
    vals = [s.strip() for s in cfg.sweep.split(",") if s.strip()]
    if not vals:
        raise UsageError("--sweep needs at least one q")
    return vals


def _presets_for(cfg: RunConfig, dim: int, sweeping: bool) -> list[str | None]:
    if cfg.diag is not None:
        return [None]
    if cfg.preset is not None:
        return [cfg.preset]
    if dim == 3:
        return ["dim3"]
    if dim == 4:
        return ["paper-square", "paper-nonsquare"] if sweeping else ["paper-square"]
    raise UsageError(f"no preset for dimension {dim}; pass --diag")


def make_space(q_text: str, modulus: str | None, dim: int | None, preset: str | None, diag: str | None) -> QuadraticSpace:
    F = parse_field(q_text, modulus)
    if diag is not None:
        if preset is not None:
            raise UsageError("--preset and --diag are mutually exclusive")
        space = QuadraticSpace(F, _parse_diag(F, diag))
    else:
        space = QuadraticSpace.from_preset(F, preset)
    if dim is not None and dim != space.n:
        raise UsageError(f"--dim {dim} does not match the form's dimension {space.n}")
    return space


def resolve_spaces(cfg: RunConfig) -> list[QuadraticSpace]:
    """All spaces a command runs on; raises before any heavy computation."""
    if cfg.preset is not None and cfg.preset not in PRESETS:
        raise UsageError(f"unknown preset {cfg.preset!r}")
    if cfg.preset is not None and cfg.diag is not None:
        raise UsageError("--preset and --diag are mutually exclusive")
    dim = cfg.dim if cfg.dim is not None else (len(cfg.diag.split(",")) if cfg.diag else 4)
    if cfg.preset == "dim3":
        dim = cfg.dim if cfg.dim is not None else 3
    sweeping = cfg.sweep is not None
    if sweeping and cfg.command != "verify":
        raise UsageError("--sweep is only valid with verify")
    qs = _sweep_values(cfg) if sweeping else [cfg.q]
    if qs == [None]:
        raise UsageError("--q is required (or --sweep with verify)")
    spaces = []
    for q in qs:
        for preset in _presets_for(cfg, dim, sweeping):
            spaces.append(make_space(q, cfg.modulus, dim, preset, cfg.diag))
    return spaces


def _parse_flip(text: str) -> tuple[int, int]:
    try:
        i, j = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--corrupt-gaa expects ROW,COL, got {text!r}") from None
    return i, j


# -- rendering --------------------------------------------------------------------------


def _emit(data: dict, fmt: str, text_fn, csv_rows=None) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if fmt == "csv" and csv_rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows(data))
        return buf.getvalue()
    return text_fn(data)


def _config_line(space_desc: dict) -> str:
    return (
        f"# q={space_desc['field']['q']} n={space_desc['n']} diag={space_desc['diag']} "
        f"preset={space_desc['preset']} alpha={space_desc['alpha_class']}\n"
    )


# -- commands ----------------------------------------------------------------------------


def counts_data(space: QuadraticSpace, cfg: RunConfig) -> dict:
    iso, sq, nsq = class_counts(space)
    observed = {
        "points": len(space.points),
        "isotropic": iso,
        "square": sq,
        "nonsquare": nsq,
        "anisotropic": sq + nsq,
    }
    expected = expected_class_counts(space)
    match = all(observed[k] == v for k, v in expected.items())
    return {
        "config": {"run": cfg.echo(), "space": space.describe()},
        "observed": observed,
        "expected": expected,
        "match": match,
    }


def _counts_text(d: dict) -> str:
    o, e = d["observed"], d["expected"]
    lines = [_config_line(d["config"]["space"]).rstrip("\n"), f"{'':<12}{'observed':>10}{'expected':>10}"]
    for key in ("points", "isotropic", "square", "nonsquare", "anisotropic"):
        lines.append(f"{key:<12}{o[key]:>10}{str(e.get(key, '-')):>10}")
    lines.append(f"match: {'yes' if d['match'] else 'no'}")
    return "\n".join(lines) + "\n"


def _counts_csv(d: dict):
    yield ["quantity", "observed", "expected"]
    for key, val in d["observed"].items():
        yield [key, val, d["expected"].get(key, "")]
    yield ["match", d["match"], ""]


def cmd_counts(cfg: RunConfig, out) -> int:
    (space,) = resolve_spaces(cfg)
    d = counts_data(space, cfg)
    out.write(_emit(d, cfg.format, _counts_text, _counts_csv))
    return 0


def rank_data(space: QuadraticSpace, cfg: RunConfig) -> dict:
    bundle = build_bundle(space)
    r_ii, r_aa = gf2mat.rank2(bundle.G_II), gf2mat.rank2(bundle.G_AA)
    q = space.q
    d = {
        "config": {"run": cfg.echo(), "space": space.describe()},
        "G_II": {"order": bundle.G_II.rows, "rank": r_ii, "full": r_ii == bundle.G_II.rows},
        "G_AA": {"order": bundle.G_AA.rows, "rank": r_aa, "full": r_aa == bundle.G_AA.rows},
    }
    if space.n == 4:
        d["G_II"]["expected_rank"], d["G_AA"]["expected_rank"] = bundle.G_II.rows, bundle.G_AA.rows
    elif space.n == 3:
        d["G_II"]["expected_rank"], d["G_AA"]["expected_rank"] = q + 1, q * q - 1
    return d


def _rank_text(d: dict) -> str:
    lines = [_config_line(d["config"]["space"]).rstrip("\n"), f"{'matrix':<8}{'order':>8}{'rank':>8}{'expected':>10}  full"]
    for key in ("G_II", "G_AA"):
        m = d[key]
        lines.append(f"{key:<8}{m['order']:>8}{m['rank']:>8}{str(m.get('expected_rank', '-')):>10}  {'yes' if m['full'] else 'no'}")
    return "\n".join(lines) + "\n"


def _rank_csv(d: dict):
    yield ["matrix", "order", "rank", "expected_rank", "full"]
    for key in ("G_II", "G_AA"):
        m = d[key]
        yield [key, m["order"], m["rank"], m.get("expected_rank", ""), m["full"]]


def cmd_rank(cfg: RunConfig, out) -> int:
    (space,) = resolve_spaces(cfg)
    out.write(_emit(rank_data(space, cfg), cfg.format, _rank_text, _rank_csv))
    return 0


def cmd_build(cfg: RunConfig, out) -> int:
    (space,) = resolve_spaces(cfg)
    if cfg.out is None:
        raise UsageError("build needs --out")
    bundle = build_bundle(space)
    config = {"run": cfg.echo(), "space": space.describe()}
    paths = dump_bundle(bundle, cfg.out, config)
    d = {"config": config, "files": [str(p) for p in paths]}
    out.write(_emit(d, cfg.format, lambda d: _config_line(d["config"]["space"]) + "\n".join(d["files"]) + "\n"))
    return 0


def points_rows(space: QuadraticSpace):
    yield ["coordinates", "Q", "class"]
    for P, value in zip(space.points, space.q_values):
        yield [" ".join(map(str, P.coords)), int(value), classify_value(space.field, int(value)).value]


def cmd_dump_points(cfg: RunConfig, out) -> int:
    (space,) = resolve_spaces(cfg)
    rows = list(points_rows(space))
    if cfg.format == "json":
        d = {
            "config": {"run": cfg.echo(), "space": space.describe()},
            "points": [dict(zip(rows[0], r)) for r in rows[1:]],
        }
        body = json.dumps(d, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        body = buf.getvalue()
    if cfg.out is not None:
        Path(cfg.out).mkdir(parents=True, exist_ok=True)
        atomic_write(Path(cfg.out) / ("points.json" if cfg.format == "json" else "points.csv"), body.encode("ascii"))
        if cfg.format != "json":
            atomic_write(Path(cfg.out) / "points.config.json",
                         (json.dumps({"run": cfg.echo(), "space": space.describe()}, indent=2, sort_keys=True) + "\n").encode())
    else:
        out.write(body)
    return 0


def _verify_one(space: QuadraticSpace, echo: dict, flip: tuple[int, int] | None) -> dict:
    bundle = build_bundle(space)
    if flip is not None:
        bundle = bundle.replace_G_AA(bundle.G_AA.with_flipped(*flip))
    report = run_all(space, bundle, config={"run": echo, "space": space.describe()})
    return json.loads(report.to_json())


def _report_name(d: dict) -> str:
    s = d["config"]["space"]
    tag = s["preset"] or "diag-" + "_".join(map(str, s["diag"]))
    return f"report_q{s['field']['q']}_n{s['n']}_{tag}.json"


def cmd_verify(cfg: RunConfig, out) -> int:
    spaces = resolve_spaces(cfg)
    flip = _parse_flip(cfg.corrupt_gaa) if cfg.corrupt_gaa else None
    if flip is not None:
        for sp in spaces:
            sizes = sp.class_codes != 0
            n_aa = int(sizes.sum())
            if not (0 <= flip[0] < n_aa and 0 <= flip[1] < n_aa):
                raise UsageError(f"--corrupt-gaa {flip} outside the {n_aa}x{n_aa} G_AA of q={sp.q}")
    echo = cfg.echo()
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers > 1 and len(spaces) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_verify_one, spaces, [echo] * len(spaces), [flip] * len(spaces)))
    else:
        reports = [_verify_one(sp, echo, flip) for sp in spaces]
    if cfg.out is not None:
        outdir = Path(cfg.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for d in reports:
            atomic_write(outdir / _report_name(d), (json.dumps(d, indent=2, sort_keys=True) + "\n").encode("ascii"))
    if cfg.format == "json":
        out.write(json.dumps(reports if len(reports) > 1 else reports[0], indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(report_text(d) for d in reports))
    ok = all(d["overall"] == "pass" for d in reports)
    if len(reports) > 1 and cfg.format != "json":
        passed = sum(d["overall"] == "pass" for d in reports)
        out.write(f"\n{passed}/{len(reports)} configurations passed\n")
    return 0 if ok else 1


HANDLERS = {
    "counts": cmd_counts,
    "build": cmd_build,
    "rank": cmd_rank,
    "verify": cmd_verify,
    "dump-points": cmd_dump_points,
}


# -- argument parsing -----------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--q", help="field order: p, p^e or q=p^e", **d)
    p.add_argument("--modulus", help="defining polynomial c0,c1,...,1 (constant term first)", **d)
    p.add_argument("--dim", type=int, help="vector space dimension n", **d)
    p.add_argument("--preset", choices=PRESETS, **d)
    p.add_argument("--diag", help="diagonal coefficients as element indices; -k negates index k", **d)
    p.add_argument("--out", help="output directory", **d)
    p.add_argument("--format", choices=FORMATS, **({"default": argparse.SUPPRESS} if suppress else {"default": "text"}))
    p.add_argument("--sweep", help="comma list of q values (verify only)", **d)
    p.add_argument("--corrupt-gaa", metavar="ROW,COL", help=argparse.SUPPRESS, **d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarinc",
        description="Incidence matrices of polarized projective spaces: counts, dumps, 2-ranks, verification.",
    )
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    helps = {
        "counts": "point class counts against closed forms",
        "build": "write BITMAT dumps and index_map.csv",
        "rank": "2-ranks of G_II and G_AA",
        "verify": "run every check (optionally over a q sweep)",
        "dump-points": "CSV of points with Q value and class",
    }
    for name in COMMANDS:
        _add_common(sub.add_parser(name, help=helps[name]), suppress=True)
    return parser


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(
        command=ns.command,
        q=ns.q,
        modulus=ns.modulus,
        dim=ns.dim,
        preset=ns.preset,
        diag=ns.diag,
        out=ns.out,
        format=ns.format,
        sweep=ns.sweep,
        corrupt_gaa=ns.corrupt_gaa,
    )


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return HANDLERS[cfg.command](cfg, out)
    except ConfigurationError as exc:
        print(f"polarinc: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"polarinc: I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
