"""Command-line front end.

Every subcommand writes one CSV (with a header row) or one JSON document
(carrying ``schema_version`` "1") to standard output or ``--output``.
Exit status: 0 on success, 1 when a verification check fails, 2 on a usage
error (one diagnostic line on stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from fastleja import bounds, core, interp, potential, star
from fastleja.domain import DomainError, ParamCurve, is_real, parse_domain

SCHEMA_VERSION = "1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _stages(text: str) -> list[int]:
    try:
        out = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad stage list {text!r}") from None
    if not out or any(b <= a for a, b in zip(out, out[1:])) or out[0] < 1:
        raise argparse.ArgumentTypeError("stages must be positive and strictly increasing")
    return out


def _uint(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def thread_count() -> int:
    """Worker count from LEJA_THREADS (0 or unset means one per CPU)."""
    raw = os.environ.get("LEJA_THREADS", "0").strip() or "0"
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"LEJA_THREADS must be an integer, got {raw!r}") from None
    if v < 0:
        raise UsageError("LEJA_THREADS must be non-negative")
    return v if v > 0 else (os.cpu_count() or 1)


def _clean(v):
    """JSON-safe float (NaN and infinities become null)."""
    v = float(v)
    return v if math.isfinite(v) else None


def _dump(obj) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **obj}, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fastleja", description="Fast Leja points and their diagnostics")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", default="0,1", help="a,b | a,b;c,d;... | curve:<id>")
    common.add_argument("--s1", type=float, default=0.5, help="first candidate parameter in (0,1)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", type=Path, help="output path (default: stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate fast Leja points")
    g.add_argument("--n", type=_positive, required=True)

    s = sub.add_parser("star", parents=[common], help="half-gap / harmonic-distance ratios")
    s.add_argument("--n", type=_positive, help="full report for the first n points")
    s.add_argument("--stages", type=_stages, help="max-ratio trend (default: powers of two to 1024)")

    gr = sub.add_parser("growth", parents=[common], help="Vandermonde growth and tau ratios")
    gr.add_argument("--n", type=_positive, help="report stages 2..n-1")
    gr.add_argument("--stages", type=_stages)

    le = sub.add_parser("lebesgue", parents=[common], help="Lebesgue constants")
    le.add_argument("--stages", type=_stages, default=[4, 8, 16, 32, 64])
    le.add_argument("--nodes", choices=interp.NODE_SOURCES, default="fast-leja")
    le.add_argument("--grid-multiplier", type=int, default=10)

    it = sub.add_parser("interp", parents=[common], help="interpolation error study")
    it.add_argument("--fn", choices=sorted(interp.FUNCTIONS), default="pole2")
    it.add_argument("--stages", type=_stages, default=[5, 10, 15, 20, 25, 30])
    it.add_argument("--nodes", choices=interp.NODE_SOURCES, default="fast-leja")
    it.add_argument("--digits", type=_positive, help="measure errors with this many digits")

    v = sub.add_parser("verify", parents=[common], help="randomized midpoint-bound checks")
    v.add_argument("which", choices=("lemma2", "prop3", "all"))
    v.add_argument("--trials", type=_positive, default=1000)
    v.add_argument("--seed", type=_uint, default=0)

    sub.add_parser("fig3", parents=[common], help="p_13 graph and 2 p_13 at gap midpoints")
    return p


def _cmd_gen(args, domain) -> tuple[str, int]:
    params = core.generate_params(domain, args.n, args.s1)
    if args.format == "csv":
        return core.sequence_csv(domain, params), 0
    pts = np.asarray(core.generate(domain, args.n, args.s1), dtype=complex)
    rows = [{"index": i, "parameter": float(t), "re": float(z.real), "im": float(z.imag)}
            for i, (t, z) in enumerate(zip(params, pts))]
    return _dump({"domain": domain.to_text(), "s1": args.s1, "points": rows}), 0


def _real_sequence(domain, n, s1) -> np.ndarray:
    if not is_real(domain):
        raise UsageError("this command needs a real domain")
    return core.generate(domain, n, s1)


def _cmd_star(args, domain) -> tuple[str, int]:
    if args.n is not None and args.stages is not None:
        raise UsageError("give either --n or --stages, not both")
    if args.n is not None:
        if args.n < 2:
            raise UsageError("--n must be at least 2")
        rep = star.star_metrics(star.sorted_prefix(_real_sequence(domain, args.n, args.s1), args.n))
        if args.format == "csv":
            return rep.to_csv(), 0
        return json.dumps(rep.to_json(), sort_keys=True) + "\n", 0
    stages = args.stages or [2 ** k for k in range(2, 11)]
    if stages[0] < 2:
        raise UsageError("stages must be at least 2")
    trend = star.star_trend(_real_sequence(domain, stages[-1], args.s1), stages)
    if args.format == "csv":
        return star.trend_csv(trend), 0
    return _dump({"trend": [{"n": n, "max_ratio": r} for n, r in trend]}), 0


def _cmd_growth(args, domain) -> tuple[str, int]:
    if args.stages is None:
        if args.n is None or args.n < 3:
            raise UsageError("growth needs --stages or --n of at least 3")
        stages = list(range(2, args.n))
    else:
        stages = args.stages
    seq = core.generate(domain, stages[-1] + 1, args.s1)
    rows = potential.growth_report(seq, domain, stages)
    if args.format == "csv":
        return potential.growth_csv(rows), 0
    return _dump({"rows": [{"n": r.n, "log_vdm": _clean(r.log_vdm), "dn_root": _clean(r.dn_root),
                            "step_ratio": _clean(r.step_ratio), "tau_ratio": _clean(r.tau_ratio),
                            "pseudo_growth": _clean(r.pseudo_growth)} for r in rows]}), 0


def _cmd_lebesgue(args, domain) -> tuple[str, int]:
    if args.grid_multiplier < 10:
        raise UsageError("--grid-multiplier must be at least 10")
    reps = interp.lebesgue_study(args.nodes, args.stages, domain, args.grid_multiplier, args.s1)
    if args.format == "csv":
        return interp.lebesgue_csv(reps), 0
    return interp.lebesgue_json(reps) + "\n", 0


def _cmd_interp(args, domain) -> tuple[str, int]:
    if args.digits is not None and isinstance(domain, ParamCurve):
        raise UsageError("--digits needs a real domain")
    rows = interp.error_study(args.fn, args.nodes, args.stages, domain, args.s1, args.digits)
    if args.format == "csv":
        return interp.errors_csv(rows), 0
    return interp.errors_json(rows) + "\n", 0


def _cmd_verify(args, domain) -> tuple[str, int]:
    checks = bounds.run_trials(args.trials, args.seed, threads=thread_count())
    ok = {
        "lemma2": all(c.lemma2_ok for c in checks),
        "prop3": all(c.prop3_ok for c in checks),
    }
    ok["all"] = ok["lemma2"] and ok["prop3"]
    status = 0 if ok[args.which] else 1
    if args.format == "csv":
        return bounds.trials_csv(checks), status
    rows = [{"trial": i, "epsilon": c.config.epsilon, "n1": len(c.config.zetas),
             "n2": len(c.config.etas), "m": c.m, "lemma2_ok": c.lemma2_ok,
             "prop3_ok": c.prop3_ok, "prop3_log_margin": c.prop3_margin}
            for i, c in enumerate(checks)]
    return _dump({"check": args.which, "seed": args.seed, "trials": rows, "ok": ok[args.which]}), status


def _cmd_fig3(args, domain) -> tuple[str, int]:
    data = potential.fig3_data(13, args.s1, 2001)
    graph, circles = potential.fig3_csv(data)
    if args.format == "json":
        return _dump({"graph": {"x": data.x.tolist(), "p13": data.p.tolist()},
                      "circles": {"midpoint": data.midpoints.tolist(),
                                  "2p13": data.twice_p.tolist()}}), 0
    if args.output is not None:
        # the circle stream goes next to the graph file
        side = args.output.with_name(args.output.stem + "_midpoints" + (args.output.suffix or ".csv"))
        side.write_text(circles)
        return graph, 0
    return graph + "\n" + circles, 0


COMMANDS = {
    "gen": _cmd_gen, "star": _cmd_star, "growth": _cmd_growth, "lebesgue": _cmd_lebesgue,
    "interp": _cmd_interp, "verify": _cmd_verify, "fig3": _cmd_fig3,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not 0.0 < args.s1 < 1.0:
            raise UsageError(f"--s1 must lie in (0, 1), got {args.s1}")
        domain = parse_domain(args.domain)
        text, status = COMMANDS[args.command](args, domain)
    except (UsageError, DomainError, ValueError) as exc:
        # ValueError covers invalid combinations caught by the library (e.g. n too small)
        print(f"fastleja: error: {' '.join(str(exc).split())}", file=sys.stderr)
        return 2
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
