"""Command line driver: ``cadlagity {seminorms,audit,mc,gen-corpus}``.

Exit codes: 0 everything passed, 1 some audit or bound check failed,
2 bad input (malformed files, invalid parameters, missing constants).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import zlib
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
from scipy.stats import kendalltau

from . import inequalities as ineq
from .corpus import CorpusSpec, generate_corpus, read_corpus, write_corpus
from .errors import CadlagError, MalformedInput
from .inequalities import AuditReport, corollary1_constants, load_constants
from .integral_norms import besov_report
from .moduli import seminorm_report
from .paths import FunctionalParams, path_from_json
from .processes import (
    MCConfig,
    ProcessSpec,
    mc_besov_moments,
    mc_dyadic_uniform,
    mc_triple_moment,
    poisson_hypothesis,
)

SEED_ENV = "CADLAGITY_SEED"
AUDIT_COLUMNS = ["check_name", "path_id", "mu", "p", "lhs", "rhs", "slack", "ratio", "pass"]
MC_COLUMNS = ["experiment", "quantity", "n", "s", "t", "u", "estimate", "half_width", "M", "bound", "pass"]
DEFAULT_MUS = tuple(round(0.1 * k, 1) for k in range(1, 10))
DEFAULT_PS = (1.5, 2.0, 4.0)
TREND_LEVEL = 0.01
MAX_MIN_RATIO = 3.0


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(rows, columns, out) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) if c not in ("check_name", "path_id", "experiment", "quantity") else r[c]
                    for c in columns])
    if out is None or out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        Path(out).write_text(buf.getvalue())


def _read_single_path(src):
    try:
        text = Path(src).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {src}: {exc}") from None
    return path_from_json(text)


# ---------------------------------------------------------------------------
# seminorms
# ---------------------------------------------------------------------------

def cmd_seminorms(args) -> int:
    f = _read_single_path(args.path)
    params = FunctionalParams(args.mu[0], args.p[0])
    doc = {
        "mu": params.mu,
        "p": params.p,
        "seminorms": seminorm_report(f, params).as_dict(),
        "besov": besov_report(f, params).as_dict(),
    }
    text = json.dumps(doc, indent=2) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

def _random_windows(rng, n):
    out = []
    for _ in range(n):
        a, b = np.sort(rng.random(2))
        if a == b:
            continue
        c, d = np.sort(rng.uniform(a, b, 2))
        if c == d:
            continue
        out.append(((float(a), float(b)), (float(c), float(d))))
    return out


def _random_triples(rng, n):
    out = []
    for _ in range(n):
        s, t, u = np.sort(rng.random(3))
        if s < t < u:
            out.append((float(s), float(t), float(u)))
    return out


def _worst(reports):
    return max(reports, key=lambda r: (not r.passed, r.ratio))


def audit_path(path_id, f, mus, ps, consts, seed, n_random=50) -> list[dict]:
    """All checks for one path; swept checks are reduced to their worst report."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), zlib.crc32(str(path_id).encode())])))
    groups: dict[tuple, list[AuditReport]] = {}

    def add(reports, mu=None, p=None):
        for r in reports:
            groups.setdefault((r.check_name, mu, p), []).append(r)

    for w, sub in _random_windows(rng, n_random):
        add(ineq.check_remark31(f, w, sub))
    for s, t, u in _random_triples(rng, n_random):
        add([ineq.check_lemma_f2(f, s, t, u)])
    for mu in mus:
        add(ineq.check_equivalences(f, mu), mu)
        add([ineq.check_eq10(f, mu)], mu)
        for p in ps:
            params = FunctionalParams(mu, p)
            c = consts.get(mu, p)
            add([ineq.check_remark22(f, params)], mu, p)
            add(ineq.check_theorem1(f, params, c), mu, p)
            add(ineq.check_proof_chain(f, params, c), mu, p)
    rows = []
    for (name, mu, p), reps in groups.items():
        r = _worst(reps)
        rows.append({
            "check_name": name, "path_id": str(path_id), "mu": mu, "p": p,
            "lhs": r.lhs, "rhs": r.rhs, "slack": r.slack, "ratio": r.ratio, "pass": r.passed,
        })
    return rows


def _audit_one(job):
    path_id, f, mus, ps, consts, seed, n_random = job
    return audit_path(path_id, f, mus, ps, consts, seed, n_random)


def cmd_audit(args) -> int:
    consts = load_constants(args.constants)
    if args.path:
        items = [("0", _read_single_path(args.path))]
    elif args.corpus:
        items = read_corpus(args.corpus)
    else:
        spec = CorpusSpec(count=args.count, seed=args.seed)
        items = [(str(i), f) for i, f in enumerate(generate_corpus(spec))]
    mus, ps = tuple(args.mu), tuple(args.p)
    for mu in mus:
        for p in ps:
            consts.get(mu, p)
    jobs = [(pid, f, mus, ps, consts, args.seed, args.random) for pid, f in items]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            results = list(ex.map(_audit_one, jobs, chunksize=8))
    else:
        results = [_audit_one(j) for j in jobs]
    rows = [r for rs in results for r in rs]
    _write_csv(rows, AUDIT_COLUMNS, args.out)
    failed = sum(not r["pass"] for r in rows)
    print(f"audit: {len(rows)} rows, {failed} failed", file=sys.stderr)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# mc
# ---------------------------------------------------------------------------

def default_sweep(k: int = 10) -> list[tuple[float, float, float]]:
    """``k`` centred triples with spans evenly spread over [0.1, 1]."""
    out = []
    for h in np.linspace(0.1, 1.0, k):
        s = 0.5 * (1.0 - h)
        out.append((float(s), float(s + 0.5 * h), float(s + h)))
    return out


def _load_experiment(src) -> dict:
    try:
        cfg = json.loads(Path(src).read_text())
    except OSError as exc:
        raise MalformedInput(f"cannot read {src}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise MalformedInput("experiment config must be a JSON object")
    for key in ("process", "mu", "p", "M"):
        if key not in cfg:
            raise MalformedInput("missing field", key)
    return cfg


def _row(exp, quantity, est=None, bound=None, n=None, stu=(None, None, None), value=None, passed=None):
    s, t, u = stu
    if est is not None:
        value = est.mean
        passed = est.upper <= bound if bound is not None else None
    return {
        "experiment": exp, "quantity": quantity, "n": n, "s": s, "t": t, "u": u,
        "estimate": value,
        "half_width": est.half_width if est is not None else None,
        "M": est.M if est is not None else None,
        "bound": bound, "pass": passed,
    }


def run_corollary1(cfg: dict, mc: MCConfig) -> list[dict]:
    spec = ProcessSpec.from_json(cfg["process"])
    mu, p = float(cfg["mu"]), float(cfg["p"])
    r = float(cfg.get("r", 1.0))
    if "C0" in cfg:
        C0 = float(cfg["C0"])
    else:
        C0 = poisson_hypothesis(spec.lam).C0
    triples = [tuple(x) for x in cfg.get("triples", default_sweep())]
    rows = []
    for stu in triples:
        est = mc_triple_moment(spec, *stu, p, mc)
        h = stu[2] - stu[0]
        rows.append(_row("corollary1", "triple_moment", est, C0 * h ** (1.0 + r), stu=stu))
    k = corollary1_constants(mu, r, p)
    moments = mc_besov_moments(spec, (mu, p), mc)
    rows.append(_row("corollary1", "triple_besov_p", moments["triple"], k.c_triple * C0))
    if "C_end" in cfg or spec.kind == "poisson":
        # E N_t^2 = lam t + lam^2 t^2 <= (lam + lam^2) t on [0, 1]
        C_end = float(cfg.get("C_end", spec.lam + spec.lam ** 2))
        rows.append(_row("corollary1", "left_besov_p", moments["left"], k.c_left * C_end))
        rows.append(_row("corollary1", "right_besov_p", moments["right"], k.c_right * C_end))
    else:
        rows.append(_row("corollary1", "left_besov_p", moments["left"]))
        rows.append(_row("corollary1", "right_besov_p", moments["right"]))
    rows.append(_row("corollary1", "sup_p", moments["sup"]))
    rows.append(_row("corollary1", "lp_p", moments["lp"]))
    return rows


def run_dyadic(cfg: dict, mc: MCConfig) -> list[dict]:
    spec = ProcessSpec.from_json(cfg["process"])
    lo, hi = cfg.get("n_range", [4, 12])
    ns = list(range(int(lo), int(hi) + 1))
    res = mc_dyadic_uniform(spec, (float(cfg["mu"]), float(cfg["p"])), ns, mc)
    rows = [_row("dyadic", "f6_sum", est, n=n) for n, est in res.items()]
    means = [res[n].mean for n in ns]
    if len(ns) >= 3 and max(means) > 0:
        tau, pval = kendalltau(ns, means, alternative="greater")
        rows.append(_row("dyadic", "mann_kendall_increasing_p", value=float(pval),
                         bound=TREND_LEVEL, passed=bool(pval >= TREND_LEVEL)))
        ratio = max(means) / min(means) if min(means) > 0 else float("inf")
        rows.append(_row("dyadic", "max_min_ratio", value=ratio, bound=MAX_MIN_RATIO,
                         passed=bool(ratio <= MAX_MIN_RATIO)))
    return rows


EXPERIMENTS = {"corollary1": run_corollary1, "dyadic": run_dyadic}


def cmd_mc(args) -> int:
    cfg = _load_experiment(args.config)
    kind = cfg.get("experiment", "corollary1")
    if kind not in EXPERIMENTS:
        raise MalformedInput(f"unknown experiment {kind!r}", "experiment")
    seed = args.seed if args.seed_given else int(cfg.get("seed", args.seed))
    mc = MCConfig(M=int(cfg["M"]), seed=seed, confidence=float(cfg.get("confidence", 0.99)),
                  workers=args.workers)
    rows = EXPERIMENTS[kind](cfg, mc)
    _write_csv(rows, MC_COLUMNS, args.out)
    return 1 if any(r["pass"] is False for r in rows) else 0


# ---------------------------------------------------------------------------
# gen-corpus
# ---------------------------------------------------------------------------

def cmd_gen_corpus(args) -> int:
    spec = CorpusSpec(
        count=args.count, min_jumps=args.min_jumps, max_jumps=args.max_jumps,
        min_gap=args.min_gap, law=args.law, dim=args.dim, seed=args.seed,
    )
    out = args.out if args.out not in (None, "-") else "/dev/stdout"
    write_corpus(generate_corpus(spec), out)
    return 0


# ---------------------------------------------------------------------------

class _SeedAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.seed_given = True


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu", type=float, nargs="+", default=list(DEFAULT_MUS))
    common.add_argument("--p", type=float, nargs="+", default=list(DEFAULT_PS))
    common.add_argument("--grid", type=int, default=2048, help="oracle grid resolution")
    common.add_argument("--seed", type=int, default=_default_seed(), action=_SeedAction,
                        help=f"random seed (default from ${SEED_ENV} or 0)")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--constants", default=None, help="derived constants JSON")
    common.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="cadlagity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seminorms", parents=[common], help="exact functionals of one path")
    p.add_argument("path")
    p.set_defaults(func=cmd_seminorms)

    p = sub.add_parser("audit", parents=[common], help="inequality audit over paths")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--corpus", help="JSON-lines corpus file")
    src.add_argument("--path", help="single JSON path file")
    p.add_argument("--count", type=int, default=1000, help="generated corpus size")
    p.add_argument("--random", type=int, default=50, help="random windows/triples per path")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("mc", parents=[common], help="Monte Carlo experiment")
    p.add_argument("config")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("gen-corpus", parents=[common], help="write a random corpus")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--min-jumps", type=int, default=0)
    p.add_argument("--max-jumps", type=int, default=10)
    p.add_argument("--min-gap", type=float, default=0.01)
    p.add_argument("--law", default="normal")
    p.add_argument("--dim", type=int, default=1)
    p.set_defaults(func=cmd_gen_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "seed_given"):
        args.seed_given = False
    try:
        return args.func(args)
    except (CadlagError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
