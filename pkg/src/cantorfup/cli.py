"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 feasibility error, 4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import __version__
from .cantor import Alphabet
from .classify import (InfeasibleSearchError, VerificationError, default_threads,
                       search_dsp, spectral_pairs_in_M2)
from .norms import (DEFAULT_DENSE_LIMIT, DenseLimitError, NormComputationError,
                    beta_sequence, submatrix_norm, witness_lower_bound)
from .omega import OmegaSpec, omega_grid, superseded_formula, enumerate_omega, omega_formula
from .pairs import evaluate_pair

log = logging.getLogger("cantorfup")

EXIT_OK, EXIT_USAGE, EXIT_FEASIBILITY, EXIT_VERIFICATION = 0, 2, 3, 4
WITNESS_SLACK = 1e-9


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    M: int | None = None
    A: list[int] | None = None
    B: list[int] | None = None
    k: int = 2
    kmax: int = 6
    b1p: int | None = None
    b2p: int | None = None
    sizes: list[int] | None = None
    override: bool = False
    q_max: int = 4
    L_max: int = 4
    k_max: int = 20
    dense_limit: int = DEFAULT_DENSE_LIMIT
    tol: float = 1e-10
    format: str = "text"
    out: str | None = None
    threads: int = field(default_factory=default_threads)

    def validate(self) -> None:
        if self.tol <= 0:
            raise UsageError("--tol must be positive")
        if self.kmax < 1 or self.k < 1:
            raise UsageError("k and kmax must be >= 1")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if self.dense_limit < 1:
            raise UsageError("--dense-limit must be >= 1")
        if self.format not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {self.format!r}")


def parse_alphabet(text: str) -> list[int]:
    """Comma list like '0,8' or '@path' with one integer per line."""
    if text.startswith("@"):
        try:
            raw = Path(text[1:]).read_text().split()
        except OSError as exc:
            raise UsageError(f"cannot read alphabet file: {exc}") from exc
    else:
        raw = [t for t in text.split(",") if t.strip()]
    try:
        return [int(t) for t in raw]
    except ValueError as exc:
        raise UsageError(f"malformed alphabet {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--format", choices=["json", "csv", "text"], default=None)
    g.add_argument("--out", default=None, help="write the report here instead of stdout")
    g.add_argument("--threads", type=int, default=None, help="worker processes (env CANTORFUP_THREADS)")
    g.add_argument("--config", default=None, help="JSON file with option defaults")
    g.add_argument("--emit-config", action="store_true", help="print the effective config and exit")
    g.add_argument("--dense-limit", dest="dense_limit", type=int, default=None)
    g.add_argument("--tol", type=float, default=None)

    def pair_args(p, need_b=True):
        p.add_argument("--M", type=int, default=None)
        p.add_argument("--A", default=None, help="digits as 0,1,9 or @file")
        if need_b:
            p.add_argument("--B", default=None, help="digits as 0,2,8 or @file")

    parser = argparse.ArgumentParser(prog="cantorfup", description=__doc__.splitlines()[0],
                                     parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="exact pair predicates with witnesses")
    pair_args(p)
    p = sub.add_parser("norm", parents=[common], help="norm, rescaled norm and beta for k = 1..kmax")
    pair_args(p)
    p.add_argument("--kmax", type=int, default=None)
    p = sub.add_parser("classify", parents=[common], help="exhaustive distributed spectral pair search")
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--sizes", type=_int_list, default=None, help="restrict |A| = |B| to these sizes")
    p.add_argument("--override", action="store_true", default=None, help="run past the feasibility guard")
    p = sub.add_parser("m2pairs", parents=[common], help="two-element spectral pairs in Z_{M^2}")
    p.add_argument("--M", type=int, default=None)
    p = sub.add_parser("omega", parents=[common], help="validate the Omega counting formula on a grid")
    p.add_argument("--q-max", dest="q_max", type=int, default=None)
    p.add_argument("--L-max", dest="L_max", type=int, default=None)
    p.add_argument("--k-max", dest="k_max", type=int, default=None)
    p = sub.add_parser("witness", parents=[common], help="witness lower bound against norm_{2k}^2")
    pair_args(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--b1p", type=int, default=None)
    p.add_argument("--b2p", type=int, default=None)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Flags override the config file, which overrides built-in defaults."""
    names = {f.name for f in fields(RunConfig)}
    merged = asdict(RunConfig())
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot load config: {exc}") from exc
        unknown = set(loaded) - names
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(loaded)
    for name in names:
        val = getattr(args, name, None)
        if val is not None:
            merged[name] = val
    for key in ("A", "B"):
        if isinstance(merged[key], str):
            merged[key] = parse_alphabet(merged[key])
    cfg = RunConfig(**merged)
    cfg.validate()
    return cfg


def _alphabet(cfg: RunConfig, which: str) -> Alphabet:
    digits = getattr(cfg, which)
    if cfg.M is None or digits is None:
        raise UsageError(f"--M and --{which} are required")
    try:
        alpha = Alphabet(cfg.M, digits)
    except ValueError as exc:
        raise UsageError(f"alphabet {which}: {exc}") from exc
    if not alpha.in_standard_range():
        log.warning("alphabet %s has digits outside 0..%d", which, cfg.M - 1)
    return alpha


# ---------------------------------------------------------------------------
# subcommands: each returns (results payload, csv rows, text lines, exit code)
# ---------------------------------------------------------------------------

def cmd_check(cfg: RunConfig):
    A, B = _alphabet(cfg, "A"), _alphabet(cfg, "B")
    v = evaluate_pair(A.digits, B.digits, cfg.M)
    res = v.to_dict()
    keys = ("spectral_in_M", "spectral_in_M2", "distributed_spectral", "dj_condition")
    rows = [{"predicate": key, "value": res[key],
             "witness": " ".join(map(str, res["witnesses"].get(key, [])))} for key in keys]
    text = [f"A={list(v.A)} B={list(v.B)} M={cfg.M}"]
    text += [f"  {r['predicate']:<22} {str(r['value']).lower():<5} {r['witness']}" for r in rows]
    return res, rows, text, EXIT_OK


def _norm_payload(seq) -> dict:
    return {
        "A": list(seq.A.digits), "B": list(seq.B.digits), "M": seq.A.modulus,
        "most_uncertain_exponent": seq.most_uncertain_exponent,
        "rows": seq.rows(),
    }


def cmd_norm(cfg: RunConfig):
    A, B = _alphabet(cfg, "A"), _alphabet(cfg, "B")
    code = EXIT_OK
    try:
        seq = beta_sequence(A, B, cfg.kmax, dense_limit=cfg.dense_limit, tol=cfg.tol)
    except NormComputationError as exc:
        log.error("%s; emitting completed prefix", exc)
        seq, code = exc.partial, EXIT_FEASIBILITY
    res = _norm_payload(seq)
    if code:
        res["failed_at_k"] = seq.ks[-1] + 1 if seq.ks else 1
    rows = res["rows"]
    text = [f"M={res['M']} A={res['A']} B={res['B']}  (1-delta)/2 = {_fmt(res['most_uncertain_exponent'])}",
            f"{'k':>3} {'norm':>22} {'rescaled':>22} {'beta':>22}"]
    text += [f"{r['k']:>3} {_fmt(r['norm']):>22} {_fmt(r['rescaled']):>22} {_fmt(r['beta']):>22}" for r in rows]
    return res, rows, text, code


def cmd_classify(cfg: RunConfig):
    if cfg.M is None:
        raise UsageError("--M is required")
    try:
        report = search_dsp(cfg.M, cfg.sizes, threads=cfg.threads, override=cfg.override)
    except InfeasibleSearchError as exc:
        log.error("%s", exc)
        return {"M": cfg.M, "error": str(exc), "estimate": exc.estimate}, [], [str(exc)], EXIT_FEASIBILITY
    res = report.to_dict()
    rows = [{"A": " ".join(map(str, p.A)), "B": " ".join(map(str, p.B)), "tag": p.tag,
             "partner_found": p.partner_found} for p in report.pairs]
    counts = report.counts()
    text = [f"M={cfg.M}: {len(report.pairs)} duality classes; "
            + ", ".join(f"{k}={v}" for k, v in counts.items())]
    text += [f"  {r['tag']:<22} A={{{r['A'].replace(' ', ',')}}} B={{{r['B'].replace(' ', ',')}}}"
             for r in rows if r["tag"] != "spectral-in-Z_M"]
    if report.conjecture_counterexamples:
        text.append("  conjecture probe: counterexamples found")
    return res, rows, text, EXIT_OK


def cmd_m2pairs(cfg: RunConfig):
    if cfg.M is None:
        raise UsageError("--M is required")
    fam = spectral_pairs_in_M2(cfg.M)
    res = fam.to_dict()
    rows = res["pairs"]
    text = [f"M={cfg.M}: {len(rows)} pairs" + (f" ({fam.note})" if fam.note else "")]
    text += [f"  A={{0,{r['a']}}} B={{0,{r['b']}}}  {r['provenance']}" for r in rows]
    return res, rows, text, EXIT_OK


def cmd_omega(cfg: RunConfig):
    grid = omega_grid(cfg.q_max, cfg.L_max, cfg.k_max)
    probe = OmegaSpec(2, 10, 3)
    old = superseded_formula(probe)
    res = {
        "total": grid["total"], "feasible": grid["feasible"], "matches": grid["matches"],
        "mismatches": [list(m) for m in grid["mismatches"]],
        "points": grid["points"],
        "superseded_probe": {"q": 2, "k": 10, "L": 3, "enumerated": enumerate_omega(probe),
                             "formula": omega_formula(probe), "superseded": str(old)},
    }
    text = [f"{grid['matches']}/{grid['total']} grid points: enumeration = formula "
            f"({grid['feasible']} with nonempty index set)",
            f"(q,k,L)=(2,10,3): enumerated {res['superseded_probe']['enumerated']}, superseded closed form {old}"]
    code = EXIT_OK if not grid["mismatches"] else EXIT_VERIFICATION
    return res, grid["points"], text, code


def cmd_witness(cfg: RunConfig):
    A, B = _alphabet(cfg, "A"), _alphabet(cfg, "B")
    b1p = B.digits[0] if cfg.b1p is None else cfg.b1p
    b2p = B.digits[0] if cfg.b2p is None else cfg.b2p
    try:
        bound = witness_lower_bound(A, B, cfg.k, b1p, b2p)
        norm = submatrix_norm(A, B, 2 * cfg.k, dense_limit=cfg.dense_limit, tol=cfg.tol)
    except (DenseLimitError, NormComputationError) as exc:
        log.error("%s", exc)
        return {"error": str(exc)}, [], [str(exc)], EXIT_FEASIBILITY
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = bound <= norm * norm + WITNESS_SLACK
    res = {"A": list(A.digits), "B": list(B.digits), "M": cfg.M, "k": cfg.k, "b1p": b1p, "b2p": b2p,
           "bound": bound, "norm_2k_squared": norm * norm, "bound_holds": ok}
    text = [f"witness bound {_fmt(bound)}  norm_{2 * cfg.k}^2 {_fmt(norm * norm)}  "
            + ("bound <= norm^2 confirmed" if ok else "BOUND EXCEEDS NORM^2")]
    return res, [res], text, EXIT_OK if ok else EXIT_VERIFICATION


COMMANDS = {"check": cmd_check, "norm": cmd_norm, "classify": cmd_classify,
            "m2pairs": cmd_m2pairs, "omega": cmd_omega, "witness": cmd_witness}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _fmt(v) if not isinstance(v, bool) else str(v).lower() for k, v in r.items()})
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.emit_config:
            sys.stdout.write(render_json(asdict(cfg)))
            return EXIT_OK
        t0 = time.perf_counter()
        res, rows, text, code = COMMANDS[args.command](cfg)
        elapsed = time.perf_counter() - t0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION

    if cfg.format == "json":
        out = render_json({"command": args.command, "version": __version__, "config": asdict(cfg),
                           "results": res, "timings": {"wall_seconds": elapsed}})
    elif cfg.format == "csv":
        out = render_csv(rows)
    else:
        out = "\n".join(text) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
