"""``gls``: command-line front end.

Exit codes: 0 success, 1 computation error, 2 usage or parameter error,
3 inconclusive limit verdict, 4 family check found violations. Errors are
printed to stdout as a single-line JSON object {"error": ...}.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import asymptotics, families, lacunary, okounkov, series
from .export import growth_json, rational, to_csv, to_json
from .lacunary import LacunarySeq

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4

SIGMA_DRIVEN = {"E25", "E1"}

# defaults applied after the config file, so that flags > config > defaults
DEFAULTS = {
    "out": "json", "output": None, "seed": 0, "threads": 1,
    "d": 1, "t": "all", "p": 2, "a": "1,2", "c": 2, "line_degree": 1, "correction": "0",
    "thresholds": None, "nmax": None, "colength": False,
    "q": None, "prog": "0,1", "tol": "1/100", "gap": None, "certify": False, "eps": None,
    "level": 20, "points": None,
    "n": None, "range": None, "witness": None, "residue": None, "r": 1, "m": 1,
}


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def _fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected a rational such as 1/100, got {text!r}") from None


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--out", choices=("csv", "json"), default=None)
    common.add_argument("--output", default=None, help="write to this path instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="reserved; all computation is deterministic")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--config", default=None, help="JSON file mirroring the flags; flags win")

    params = Parser(add_help=False)
    params.add_argument("--d", type=int, default=None)
    params.add_argument("--t", default=None, help="set spec for T, e.g. multiples:3")
    params.add_argument("--p", type=int, default=None)
    params.add_argument("--a", default=None, help="comma list of a_i")
    params.add_argument("--c", type=int, default=None, help="veronese multiple")
    params.add_argument("--line-degree", type=int, default=None)
    params.add_argument("--correction", default=None, help="periodic bounded term, comma list")
    params.add_argument("--thresholds", default=None, help="lacunary thresholds, comma list")

    top = Parser(prog="gls", description="Graded series, ideal families and their growth limits.")
    sub = top.add_subparsers(dest="command", parser_class=Parser)
    sub.required = True

    ex = sub.add_parser("example", parents=[common, params], help="growth table (n, dim)")
    ex.add_argument("name")
    ex.add_argument("--nmax", type=int, default=None)

    fc = sub.add_parser("family-check", parents=[common, params], help="graded family axioms")
    fc.add_argument("name")
    fc.add_argument("--nmax", type=int, default=None)
    fc.add_argument("--colength", action="store_true", default=None)

    li = sub.add_parser("limits", parents=[common, params], help="limit along a progression")
    li.add_argument("--example", required=True)
    li.add_argument("--q", type=int, default=None)
    li.add_argument("--prog", default=None, help="a,r")
    li.add_argument("--nmax", default=None, help="integer or 'auto'")
    li.add_argument("--tol", default=None)
    li.add_argument("--gap", default=None)
    li.add_argument("--certify", action="store_true", default=None)
    li.add_argument("--eps", default=None)

    ok = sub.add_parser("okounkov", parents=[common, params], help="value semigroup and body volume")
    ok.add_argument("--example", required=True)
    ok.add_argument("--level", type=int, default=None)
    ok.add_argument("--q", type=int, default=None)
    ok.add_argument("--points", default=None, help="write the level's lattice points as CSV")

    sg = sub.add_parser("sigma", parents=[common], help="lacunary sigma(n) and witnesses")
    sg.add_argument("--thresholds", default=None)
    sg.add_argument("--n", default=None, help="comma list of n")
    sg.add_argument("--range", default=None, help="lo:hi inclusive")
    sg.add_argument("--witness", choices=("half", "zero"), default=None)
    sg.add_argument("--a", dest="residue", default=None)
    sg.add_argument("--r", type=int, default=None)
    sg.add_argument("--m", type=int, default=None)
    sg.add_argument("--eps", default=None)
    return top


def _subparser(top: Parser, command: str) -> Parser:
    for action in top._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def apply_config(top: Parser, args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the JSON config, then from DEFAULTS. Unknown keys are rejected."""
    parser = _subparser(top, args.command)
    actions = {opt.lstrip("-").replace("-", "_"): a
               for a in parser._actions for opt in a.option_strings}
    actions.update({a.dest: a for a in parser._actions if not a.option_strings})
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        if not isinstance(config, dict):
            raise UsageError("config must be a JSON object")
        for key, value in sorted(config.items()):
            name = key.replace("-", "_")
            if name not in actions or name in ("help", "h", "config", "command"):
                raise UsageError(f"unknown config key {key!r}")
            dest = actions[name].dest
            if getattr(args, dest) is not None:
                continue
            if isinstance(value, list):
                value = ",".join(str(v) for v in value)
            action = actions[name]
            if action.type is not None and value is not None and not isinstance(value, bool):
                try:
                    value = action.type(str(value))
                except ValueError:
                    raise UsageError(f"bad value for config key {key!r}: {value!r}") from None
            if action.choices is not None and value not in action.choices:
                raise UsageError(f"config key {key!r} must be one of {list(action.choices)}")
            setattr(args, dest, value)
    for dest, default in DEFAULTS.items():
        if hasattr(args, dest) and getattr(args, dest) is None:
            setattr(args, dest, default)
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    return args


# ---------------------------------------------------------------- helpers

def _seq(args) -> LacunarySeq:
    if args.thresholds is None:
        return LacunarySeq()
    return LacunarySeq(list(_int_list(args.thresholds)))


def _build(args, name: str):
    """Resolve an example or family name to (object, growth function, label)."""
    seq = _seq(args)
    if name.lower() == "e1":
        fam = families.make_family_E1(args.d, seq)
        return fam, fam.growth, "E1", seq
    obj = series.make_example(name, d=args.d, T=args.t, p=args.p, a=_int_list(args.a), c=args.c,
                              line_degree=args.line_degree, correction=_int_list(args.correction),
                              seq=seq)
    label = obj.label
    return obj, obj.growth, label, seq


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _map(fn, items, threads: int):
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ---------------------------------------------------------------- commands

def cmd_example(args) -> int:
    obj, _, label, _ = _build(args, args.name)
    nmax = 20 if args.nmax is None else args.nmax
    if nmax < 0:
        raise ValueError("--nmax must be >= 0")
    if isinstance(obj, series.GradedSeries):
        count = lambda n: series.dim_piece(obj, n)  # noqa: E731
    else:
        count = obj.growth
    ns = list(range(nmax + 1))
    values = list(zip(ns, _map(count, ns, args.threads)))
    if args.out == "csv":
        _emit(args, to_csv(["n", "dim"], values))
    else:
        _emit(args, to_json(growth_json(label, obj.params, values)))
    return EXIT_OK


def cmd_family_check(args) -> int:
    fam = families.make_family(args.name, args.d, _seq(args))
    horizon = 20 if args.nmax is None else args.nmax
    report = families.check_family(fam, horizon)
    colengths = None
    if args.colength:
        colengths = [(row.n, row.colength, row.model) for row in families.colength_sequence(fam, horizon)]
    if args.out == "csv":
        if colengths is not None:
            _emit(args, to_csv(["n", "colength", "model"], colengths))
        else:
            rows = [(v["m"], v["n"], v["witness"]) for v in report.violations]
            _emit(args, to_csv(["m", "n", "witness"], rows))
    else:
        payload = {"label": fam.label, "params": fam.params, **report.to_json()}
        if colengths is not None:
            payload["colengths"] = [list(row) for row in colengths]
        _emit(args, to_json(payload))
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_limits(args) -> int:
    obj, f, label, seq = _build(args, args.example)
    prog = _int_list(args.prog)
    if len(prog) != 2:
        raise UsageError("--prog takes a,r")
    a, r = prog
    q = args.q if args.q is not None else args.d
    sigma_driven = label in SIGMA_DRIVEN
    if str(args.nmax) == "auto":
        if not sigma_driven:
            raise UsageError("--nmax auto needs a sigma-driven example (E25, E1)")
        nmax = asymptotics.auto_horizon(seq, r)
    else:
        try:
            nmax = 500 if args.nmax is None else int(args.nmax)
        except ValueError:
            raise UsageError(f"--nmax must be an integer or 'auto', got {args.nmax!r}") from None
    extra = asymptotics.lacunary_indices(seq, a % r, r, nmax) if sigma_driven else []
    tol = _fraction(args.tol)
    gap = _fraction(args.gap) if args.gap is not None else None
    report = asymptotics.analyze(f, q, a, r, nmax, tol, gap, extra, threads=args.threads)
    certificate = None
    if args.certify:
        if not sigma_driven:
            raise UsageError("--certify needs a sigma-driven example (E25, E1)")
        eps = _fraction(args.eps) if args.eps is not None else Fraction(1, 20)
        certificate = asymptotics.divergence_certificate(f, q, a, r, seq, obj.sigma_targets, eps)
    if args.out == "csv":
        _emit(args, to_csv(["n", "f", "ratio"], report.values))
    else:
        payload = {"label": label, "params": obj.params, "report": report.to_json()}
        if certificate is not None:
            payload["certificate"] = certificate.to_json()
        _emit(args, to_json(payload))
    return EXIT_INCONCLUSIVE if report.verdict == "inconclusive" else EXIT_OK


def cmd_okounkov(args) -> int:
    obj, _, label, _ = _build(args, args.example)
    if not isinstance(obj, series.GradedSeries):
        raise UsageError(f"{label} is a bare growth model; the pipeline needs a series")
    okounkov.require_reduced(obj)
    N = args.level
    if N < 1:
        raise ValueError("--level must be >= 1")
    m = series.index(obj, N).value
    levels = sorted({m * max(1, N // 4), m * max(1, N // 2), m * N})
    sample = okounkov.semigroup_sample(obj, horizon=m * N, levels=levels)
    q = args.q if args.q is not None else sample.valuation.dimension
    est = okounkov.body_estimate(sample, q, N)
    if args.points:
        cols = [f"v{i}" for i in range(1, est.points.shape[1] + 1)]
        with open(args.points, "w", newline="") as fh:
            fh.write(to_csv(cols, est.points.tolist()))
    level_rows = [(n, size, Fraction(size, (n // sample.index) ** q)) for n, size in sample.sizes()]
    if args.out == "csv":
        _emit(args, to_csv(["n", "size", "count_based"], level_rows))
    else:
        payload = {
            "label": label, "params": obj.params, "index": sample.index, "q": q, "N": N,
            "levels": [{"n": n, "size": size} for n, size, _ in level_rows],
            "estimates": {
                "count_based": rational(est.count_based),
                "hull_based": None if est.hull_based is None else rational(est.hull_based),
                "ratio": None if est.ratio is None else rational(est.ratio),
            },
        }
        if est.hull_reason:
            payload["hull_reason"] = est.hull_reason
        _emit(args, to_json(payload))
    return EXIT_OK


def cmd_sigma(args) -> int:
    seq = _seq(args)
    if args.witness:
        try:
            a = int(args.residue) if args.residue is not None else 0
        except ValueError:
            raise UsageError(f"--a must be an integer, got {args.residue!r}") from None
        eps = _fraction(args.eps) if args.eps is not None else Fraction(1, 10)
        search = lacunary.witness_near_half if args.witness == "half" else lacunary.witness_near_zero
        n = search(seq, a, args.r, args.m, eps)
        s = lacunary.sigma(seq, n)
        scan = lacunary.blind_scan(seq, a, args.r, args.m, eps, args.witness)
        row = {"kind": args.witness, "a": a, "r": args.r, "m": args.m, "eps": rational(eps),
               "n": n, "sigma": s, "ratio": rational(Fraction(s, n)), "blind_scan": scan}
        if args.out == "csv":
            _emit(args, to_csv(list(row), [list(row.values())]))
        else:
            _emit(args, to_json(row))
        return EXIT_OK
    if args.range is not None:
        try:
            lo, hi = (int(t) for t in args.range.split(":"))
        except ValueError:
            raise UsageError("--range takes lo:hi") from None
        ns = list(range(lo, hi + 1))
    elif args.n is not None:
        ns = list(_int_list(args.n))
    else:
        ns = list(range(1, 31))
    if any(n < 1 for n in ns):
        raise ValueError("sigma is defined for n >= 1")
    rows = [(n, s, Fraction(s, n)) for n, s in lacunary.sigma_table(seq, ns)]
    if args.out == "csv":
        _emit(args, to_csv(["n", "sigma", "ratio"], rows))
    else:
        seq.extend_past(max(ns))
        _emit(args, to_json({"thresholds": seq.thresholds,
                             "values": [[n, s, rational(x)] for n, s, x in rows]}))
    return EXIT_OK


COMMANDS = {
    "example": cmd_example, "family-check": cmd_family_check, "limits": cmd_limits,
    "okounkov": cmd_okounkov, "sigma": cmd_sigma,
}


def _fail(message: str, code: int) -> int:
    sys.stdout.write(json.dumps({"error": " ".join(str(message).split())}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    top = build_parser()
    try:
        args = top.parse_args(argv)
        args = apply_config(top, args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(str(exc), EXIT_USAGE)
    except KeyError as exc:
        return _fail(exc.args[0] if exc.args else "unknown name", EXIT_USAGE)
    except okounkov.NonReducedModel as exc:
        return _fail(str(exc), EXIT_ERROR)
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    except (ArithmeticError, RuntimeError, AssertionError, OverflowError) as exc:
        return _fail(str(exc), EXIT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
