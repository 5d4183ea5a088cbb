"""Command-line front end.

Output is a pure function of the flags: ``--threads`` only changes wall
time, and timing figures appear only when ``--timing`` is given.
Exit status: 0 success, 1 computation-domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .correlations import CorrelationQuery, r_stat, sweep
from .discrepancy import star_discrepancy
from .errors import BoxCorrError, DomainError
from .gaps import DEFAULT_TOL, gap_profile
from .integral import gh_integral_terms, hinge_sum
from .sequences import PointSet, SequenceSpec, format_points, generate, load
from .verify import check_box_convergence, check_gh_limit, check_non_convergence, gh_target

KIND_ALIASES = {
    "kronecker": "kronecker",
    "vdc": "van_der_corput",
    "van_der_corput": "van_der_corput",
    "random": "uniform_random",
    "uniform_random": "uniform_random",
    "file": "file",
}


class UsageError(Exception):
    pass


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_floats(text, flag):
    try:
        vals = [float(p) for p in str(text).split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated reals, got {text!r}") from None
    if not vals or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{flag}: expected finite reals, got {text!r}")
    return vals


def parse_grid(text, flag="--grid"):
    """``100,1000,5000`` or ``geom:START:STOP:COUNT`` (rounded, deduplicated)."""
    text = str(text)
    try:
        if text.startswith("geom:"):
            _, a, b, c = text.split(":")
            a, b, c = int(a), int(b), int(c)
            if a < 1 or b <= a or c < 2:
                raise ValueError
            vals = sorted({int(round(v)) for v in np.geomspace(a, b, c)})
        else:
            vals = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected N1,N2,... or geom:START:STOP:COUNT, got {text!r}") from None
    if not vals or any(y <= x for x, y in zip(vals, vals[1:])) or vals[0] < 1:
        raise UsageError(f"{flag}: grid must be positive and strictly increasing, got {text!r}")
    return vals


def _add_source(p, need_n=True):
    g = p.add_argument_group("sequence")
    g.add_argument("--kind", choices=sorted(KIND_ALIASES), help="sequence family")
    g.add_argument("--alpha", default="sqrt2", help="kronecker alpha: decimal, sqrt2, sqrt2_over_5 or golden")
    g.add_argument("--base", type=int, default=2, help="van der Corput base")
    g.add_argument("--include-zero", action="store_true", help="van der Corput: start with x_0 = 0")
    g.add_argument("--seed", type=int, default=0, help="uniform_random seed (64-bit unsigned)")
    g.add_argument("--input", help="point file (implies --kind file)")
    if need_n:
        g.add_argument("--n", type=int, help="number of points (default: whole file)")


def _add_query(p, need_s=True):
    g = p.add_argument_group("query")
    g.add_argument("--k", type=int, help="tuple order (default len(s)+1)")
    g.add_argument("--beta", type=float, default=1.0)
    if need_s:
        g.add_argument("--s", default="1.0", help="comma-separated window parameters")


def _add_output(p):
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--threads", type=int, help="worker threads (env BOXCORR_THREADS, default all cores)")
    g.add_argument("--timing", action="store_true", help="include wall time (output no longer byte-stable)")


def build_parser():
    parser = argparse.ArgumentParser(prog="boxcorr", description="Box correlation statistics on [0,1).")
    parser.add_argument("--version", action="version", version=f"boxcorr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a sequence")
    _add_source(p)
    _add_output(p)
    p.set_defaults(format="csv")

    p = sub.add_parser("corr", help="R_{k,beta} for one query")
    _add_source(p)
    _add_query(p)
    _add_output(p)

    p = sub.add_parser("sweep", help="R_{k,beta} along a grid of N")
    _add_source(p, need_n=False)
    _add_query(p)
    p.add_argument("--grid", required=True, help="N1,N2,... or geom:START:STOP:COUNT")
    _add_output(p)

    p = sub.add_parser("gh", help="closed-form integral of G*H, with its hinge and diagonal parts")
    _add_source(p)
    _add_query(p)
    p.add_argument("--target-rule", choices=("phi", "expansion"), default="phi")
    _add_output(p)

    p = sub.add_parser("discrepancy", help="star discrepancy")
    _add_source(p)
    _add_output(p)

    p = sub.add_parser("gaps", help="distinct gap lengths")
    _add_source(p)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_output(p)

    p = sub.add_parser("verify", help="theorem checks")
    p.add_argument("check", choices=("thm-box", "thm-gh", "thm-gaps"))
    _add_source(p, need_n=False)
    _add_query(p)
    p.add_argument("--grid", help="N grid (defaults: thm-box/thm-gh 1000,10000,100000; thm-gaps 2500,5000,10000)")
    p.add_argument("--tol", type=float, help="thm-box/thm-gh tolerance (thm-box default: fluctuation scale)")
    p.add_argument("--s-grid", default="0.1:3.0:0.1", help="thm-gaps window grid START:STOP:STEP or list")
    p.add_argument("--dev-threshold", type=float, default=0.15)
    p.add_argument("--tail-fraction", type=float, default=1.0)
    p.add_argument("--target-rule", choices=("phi", "expansion"), default="phi")
    _add_output(p)
    for name, sp in sub.choices.items():
        sp.set_defaults(_parser=sp)
    return parser


def _spec_from(args):
    kind = "file" if args.input else KIND_ALIASES.get(args.kind or "")
    if kind is None:
        raise UsageError("--kind or --input is required")
    try:
        if kind == "kronecker":
            return SequenceSpec.kronecker(args.alpha)
        if kind == "van_der_corput":
            return SequenceSpec.van_der_corput(args.base, args.include_zero)
        if kind == "uniform_random":
            return SequenceSpec.uniform_random(args.seed)
        if not args.input:
            raise UsageError("--kind file needs --input")
        return SequenceSpec.file(args.input)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _query_from(args, s=None):
    if s is None:
        s = parse_floats(args.s, "--s")
    if args.k is not None and args.k != len(s) + 1:
        raise UsageError(f"--k {args.k} disagrees with --s (k = {len(s) + 1} window parameters + 1)")
    try:
        return CorrelationQuery.make(s, beta=args.beta, k=args.k)
    except DomainError as exc:
        raise UsageError(f"--k/--beta/--s: {exc}") from None


def _points(spec, n):
    if spec.kind == "file":
        pts = load(spec.path)
        return pts if n is None else pts.prefix(n) if n <= pts.n else generate(spec, n)
    if n is None:
        raise UsageError("--n is required for generated sequences")
    return generate(spec, n)


def _check_n(args, minimum=1):
    n = getattr(args, "n", None)
    if n is not None and n < minimum:
        raise UsageError(f"--n must be >= {minimum}, got {n}")


def _s_grid(text):
    if ":" in text:
        try:
            a, b, step = (float(v) for v in text.split(":"))
        except ValueError:
            raise UsageError(f"--s-grid: expected START:STOP:STEP, got {text!r}") from None
        if not (a > 0 and b >= a and step > 0):
            raise UsageError(f"--s-grid: need 0 < START <= STOP and STEP > 0, got {text!r}")
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return [round(a + i * step, 12) for i in range(count)]
    vals = parse_floats(text, "--s-grid")
    if any(v <= 0 for v in vals):
        raise UsageError("--s-grid values must be positive")
    return vals


class Emitter:
    """Collects one run's output and renders it as JSON or CSV."""

    def __init__(self, command, config, fmt):
        self.command = command
        self.config = config
        self.fmt = fmt
        self.columns = None
        self.rows = []
        self.extra = {}

    def render(self) -> str:
        if self.fmt == "json":
            obj = {"command": self.command, "config": self.config, "rows": self.rows}
            obj.update(self.extra)
            return json.dumps(obj, indent=2, sort_keys=False) + "\n"
        buf = io.StringIO()
        buf.write(f"# command={self.command}\n")
        for key, val in self.config.items():
            buf.write(f"# {key}={json.dumps(val)}\n")
        for key, val in self.extra.items():
            buf.write(f"# {key}={json.dumps(val)}\n")
        cols = self.columns or (list(self.rows[0]) if self.rows else [])
        buf.write(",".join(cols) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(row.get(c, "")) if not isinstance(row.get(c), list)
                               else ";".join(_fmt(v) for v in row[c]) for c in cols) + "\n")
        return buf.getvalue()


def _corr_row(n, res):
    return {"N": n, "raw_count": res.raw_count, "R": res.normalized, "target": res.target,
            "abs_error": res.abs_error}


def run(argv=None) -> int:
    """Execute one command; returns the exit status (0 ok, 1 domain error, 2 usage)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors, --help, --version
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        text = _dispatch(args)
    except UsageError as exc:
        try:
            args._parser.error(str(exc))
        except SystemExit as stop:
            return int(stop.code)
    except BoxCorrError as exc:
        print(f"boxcorr: error: {exc}", file=sys.stderr)
        return 1
    if args.timing:
        elapsed = time.perf_counter() - started
        if args.format == "csv":
            text += f"# timing_seconds={elapsed!r}\n"
        else:
            text = json.dumps({**json.loads(text), "timing": elapsed}, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _dispatch(args) -> str:
    spec = _spec_from(args)
    source = spec.describe()
    cmd = args.command
    threads = args.threads
    if threads is not None and threads < 1:
        raise UsageError("--threads must be >= 1")

    if cmd == "gen":
        _check_n(args)
        pts = _points(spec, args.n)
        if args.format == "csv":
            head = "".join(f"# {k}={json.dumps(v)}\n" for k, v in source.items())
            return head + format_points(pts)
        em = Emitter(cmd, {"spec": source, "n": pts.n}, "json")
        em.rows = [float(v) for v in pts.points]
        return em.render()

    if cmd == "corr":
        q = _query_from(args)
        _check_n(args, q.k)
        pts = _points(spec, args.n)
        res = r_stat(pts, q, threads=threads)
        em = Emitter(cmd, {"spec": source, "query": q.describe(), "n": pts.n}, args.format)
        em.rows = [_corr_row(pts.n, res)]
        return em.render()

    if cmd == "sweep":
        q = _query_from(args)
        grid = parse_grid(args.grid)
        if grid[0] < q.k:
            raise UsageError(f"--grid: every N must be >= k={q.k}")
        src = load(spec.path) if spec.kind == "file" else spec
        em = Emitter(cmd, {"spec": source, "query": q.describe(), "grid": grid}, args.format)
        em.rows = [_corr_row(n, res) for n, res in sweep(src, q, grid, threads=threads)]
        return em.render()

    if cmd == "gh":
        q = _query_from(args)
        _check_n(args, q.k)
        pts = _points(spec, args.n)
        terms = gh_integral_terms(pts, q, threads=threads)
        target = gh_target(q, args.target_rule)
        em = Emitter(cmd, {"spec": source, "query": q.describe(), "n": pts.n,
                           "target_rule": args.target_rule}, args.format)
        em.rows = [{"N": pts.n, "integral": terms.value, "tuple_term": terms.tuple_term,
                    "diagonal_term": terms.diagonal_term, "hinge_sum": hinge_sum(pts, q, threads=threads),
                    "target": target, "abs_error": abs(terms.value - target)}]
        return em.render()

    if cmd == "discrepancy":
        _check_n(args)
        pts = _points(spec, args.n)
        res = star_discrepancy(pts)
        em = Emitter(cmd, {"spec": source, "n": pts.n}, args.format)
        em.rows = [{"N": pts.n, "d_star": res.d_star, "argmax_prefix": res.argmax_prefix,
                    "n_d_star_over_log_n": res.d_star * pts.n / math.log(pts.n) if pts.n > 1 else None}]
        return em.render()

    if cmd == "gaps":
        _check_n(args, 2)
        if not args.tol >= 0:
            raise UsageError("--tol must be nonnegative")
        pts = _points(spec, args.n)
        prof = gap_profile(pts, args.tol)
        em = Emitter(cmd, {"spec": source, "n": pts.n, "tol": args.tol}, args.format)
        em.columns = ["gap", "multiplicity", "N_times_gap"]
        em.rows = [{"gap": v, "multiplicity": m, "N_times_gap": v * pts.n} for v, m in prof.gaps]
        em.extra = {"distinct": prof.distinct}
        return em.render()

    # verify
    src = load(spec.path) if spec.kind == "file" else spec
    if args.check == "thm-gaps":
        k = args.k if args.k is not None else 2
        if k < 2:
            raise UsageError("--k must be >= 2")
        if args.beta != 1.0:
            raise UsageError("thm-gaps is defined for --beta 1 only")
        s_grid = _s_grid(args.s_grid)
        grid = parse_grid(args.grid or "2500,5000,10000")
        if grid[0] < k:
            raise UsageError(f"--grid: every N must be >= k={k}")
        if not 0 < args.tail_fraction <= 1:
            raise UsageError("--tail-fraction must lie in (0, 1]")
        rep = check_non_convergence(src, k, s_grid, grid, args.dev_threshold, args.tail_fraction, threads=threads)
    else:
        q = _query_from(args)
        grid = parse_grid(args.grid or "1000,10000,100000")
        if grid[0] < q.k:
            raise UsageError(f"--grid: every N must be >= k={q.k}")
        if args.tol is not None and not args.tol >= 0:
            raise UsageError("--tol must be nonnegative")
        if args.check == "thm-box":
            rep = check_box_convergence(src, q, grid, args.tol, threads=threads)
        else:
            rep = check_gh_limit(src, q, grid, 0.15 if args.tol is None else args.tol,
                                 target_rule=args.target_rule, threads=threads)
    body = rep.as_dict()
    em = Emitter(f"verify {args.check}", {"experiment": body["experiment"], **body["metadata"]}, args.format)
    em.rows = body["rows"]
    em.columns = ["N", "s", "observed", "target", "abs_error"] if args.check == "thm-gaps" \
        else ["N", "observed", "target", "abs_error"]
    em.extra = {"verdict": body["verdict"], "predicate": body["predicate"]}
    return em.render()


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
