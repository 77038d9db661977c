"""Command-line entry point: ``cmunits <command> ...``.

Results go to stdout as JSON (one object per line), diagnostics to stderr.
Exit status: 0 success, 1 verification mismatch, 2 usage error,
3 precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import classnum, invariants, modlevel, reciprocity
from .numerics import ComplexBall, PrecisionError, QuadSurd
from .quadforms import BQF, InvalidDiscriminant, class_number, fundamental_discriminants, theta_K
from .siegel import eval_eta_reduced, eval_gamma2, eval_j, eval_siegel, eval_weber

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3
PREC_ENV = "CMUNITS_PREC"
DEFAULT_PREC = 256
PREC_RANGE = (64, 8192)

TABLE1 = [
    (-3, 0, 0),
    (-4, 12**3, 12),
    (-7, -(15**3), -15),
    (-8, 20**3, 20),
    (-11, -(32**3), -32),
    (-19, -(96**3), -96),
    (-43, -(960**3), -960),
    (-67, -(5280**3), -5280),
    (-163, -(640320**3), -640320),
]

_ORDINAL = {"r1_squares": "first", "r2_squares": "first", "r1_r2": "second", "exponent_sum": "third"}


class UsageError(ValueError):
    pass


@dataclass
class Config:
    precision_bits: int = DEFAULT_PREC
    output: str = "json"
    heegner_bound: int = 1000

    def __post_init__(self):
        lo, hi = PREC_RANGE
        if not lo <= self.precision_bits <= hi:
            raise UsageError(f"precision must lie in [{lo}, {hi}], got {self.precision_bits}")


def _emit(obj, cfg: Config, table_line: str | None = None) -> None:
    if cfg.output == "table" and table_line is not None:
        print(table_line)
    else:
        print(json.dumps(obj))


def _ball_json(z: ComplexBall) -> dict:
    return {"re": z.re.decimal(), "im": z.im.decimal()}


def _matrix_json(m: modlevel.GL2ModN) -> list[int]:
    return m.as_list()


def parse_tau(spec: str):
    kind, _, rest = spec.partition(":")
    try:
        if kind == "d":
            return theta_K(int(rest))
        if kind == "surd":
            p, q, r, d = (int(v) for v in rest.split(","))
            return QuadSurd(p, q, r, d)
    except (ValueError, InvalidDiscriminant) as exc:
        raise UsageError(f"bad point {spec!r}: {exc}") from None
    raise UsageError(f"point must be 'd:<int>' or 'surd:p,q,r,d', got {spec!r}")


def parse_index(text: str) -> modlevel.SiegelIndex:
    try:
        fam = modlevel.parse_family(f"{text}:1")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    (idx,) = fam.entries
    return idx


def _near_integer(z: ComplexBall) -> int | None:
    if not z.is_real():
        return None
    cands = z.re.integers_in()
    if len(cands) != 1:
        return None
    k = cands[0]
    if abs(z.re.midpoint - k) < Fraction(1, 2**32) and z.re.radius < Fraction(1, 2**32):
        return k
    return None


# ---- commands --------------------------------------------------------------------


def cmd_eval(args, cfg: Config) -> int:
    tau = parse_tau(args.tau)
    fn = args.function
    prec = cfg.precision_bits
    if fn == "siegel":
        if args.index is None:
            raise UsageError("siegel needs an index such as 0/2,1/2")
        value = eval_siegel(parse_index(args.index), tau, prec)
    elif args.index is not None:
        raise UsageError(f"{fn} takes no index")
    elif fn == "eta":
        value = eval_eta_reduced(tau, prec)
    elif fn.startswith("weber-"):
        if not isinstance(tau, QuadSurd):
            raise UsageError("Weber functions need an exact point")
        value = eval_weber(fn[len("weber-") :], tau, prec)
    elif fn == "gamma2":
        value = eval_gamma2(tau, prec)
    else:
        value = eval_j(tau, prec)
    k = _near_integer(value)
    out = {"function": fn, "tau": args.tau, "precision_bits": prec, "value": _ball_json(value), "recognized": k}
    if args.index is not None:
        out["index"] = args.index
    line = f"{k} (recognized integer)" if k is not None else value.decimal()
    _emit(out, cfg, line)
    return EXIT_OK


def _recognize_single(fn, tau, max_prec: int) -> int:
    poly = invariants.recognize_with_retry(lambda p: [fn(tau, p)], max_prec=max_prec)
    return -poly.coeffs[1]


def cmd_table1(args, cfg: Config) -> int:
    status = EXIT_OK
    for d, j_exp, g_exp in TABLE1:
        tau = theta_K(d)
        j_val = _recognize_single(eval_j, tau, 1024)
        g_val = _recognize_single(eval_gamma2, tau, 1024)
        ok = j_val == j_exp and g_val == g_exp
        if not ok:
            status = EXIT_MISMATCH
            print(f"mismatch at d = {d}", file=sys.stderr)
        row = {"d": d, "j": j_val, "gamma2": g_val, "ok": ok}
        _emit(row, cfg, f"{d:>6} {j_val:>22} {g_val:>9} {'ok' if ok else 'MISMATCH'}")
    return status


def _parse_range(text: str) -> tuple[int, int]:
    mt = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if mt is None:
        raise UsageError(f"range must look like -30..-1, got {text!r}")
    lo, hi = sorted(int(g) for g in mt.groups())
    if hi >= 0:
        hi = -1
    return lo, hi


def cmd_classnumber(args, cfg: Config) -> int:
    if args.list is not None:
        lo, hi = _parse_range(args.list)
        for d in fundamental_discriminants(lo, hi):
            h = class_number(d)
            _emit({"d": d, "h": h}, cfg, f"{d:>8} {h:>4}")
        return EXIT_OK
    if args.one:
        res = classnum.class_number_one_search(heegner_bound=cfg.heegner_bound)
        _emit(res.found, cfg, json.dumps(res.found))
        for gamma in res.spurious:
            print(f"spurious gamma candidate (no CM realization): {gamma}", file=sys.stderr)
    else:
        res = classnum.class_number_two_split_search()
        found = res.found["cn2_split"]
        _emit(found, cfg, json.dumps(found))
    for cert in res.certificates:
        _emit(cert.to_json(), cfg)
    return EXIT_OK if res.all_pass else EXIT_MISMATCH


def _parse_ints(text: str, count: int, what: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be {count} comma-separated integers") from None
    if len(vals) != count:
        raise UsageError(f"{what} must be {count} comma-separated integers")
    return vals


def _field(d: str) -> reciprocity.FieldData:
    try:
        return reciprocity.FieldData.from_discriminant(int(d))
    except (ValueError, InvalidDiscriminant) as exc:
        raise UsageError(str(exc)) from None


def cmd_reciprocity(args, cfg: Config) -> int:
    if args.w:
        n, d = args.w
        mats = reciprocity.w_group(int(n), _field(d))
        _emit([_matrix_json(m) for m in mats], cfg, "\n".join(map(str, mats)))
    elif args.kernel:
        n, d = args.kernel
        mats = reciprocity.kernel(int(n), _field(d))
        _emit([_matrix_json(m) for m in mats], cfg, "\n".join(map(str, mats)))
    elif args.uq:
        form, p = args.uq
        a, b, c = _parse_ints(form, 3, "form")
        Q = BQF(a, b, c)
        try:
            u = reciprocity.u_Q(Q, int(p), _field(Q.discriminant))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _emit(_matrix_json(u), cfg, str(u))
    else:
        mat, n = args.decompose
        try:
            alpha = modlevel.GL2ModN(int(n), *_parse_ints(mat, 4, "matrix"))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        (x, y), (z, w) = modlevel.decompose(alpha)[0]
        out = {"alpha1": [x, y, z, w], "d": alpha.det}
        _emit(out, cfg, f"[[{x},{y}],[{z},{w}]] * diag(1,{alpha.det})")
    return EXIT_OK


def cmd_check_level(args, cfg: Config) -> int:
    try:
        fam = modlevel.parse_family(args.expr, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    conds = modlevel.level_conditions(fam)
    holds = all(conds.values())
    failing = [k for k, v in conds.items() if not v]
    diag = "; ".join(f"{_ORDINAL[k]} congruence fails ({k})" for k in failing) or "all congruences hold"
    out = {"family": str(fam), "n": fam.n, "holds": holds, "conditions": conds, "diagnostic": diag}
    if failing:
        print(diag, file=sys.stderr)
    _emit(out, cfg, f"{holds}: {diag}")
    return EXIT_OK


def cmd_minpoly(args, cfg: Config) -> int:
    F = _field(args.d)
    if F.d in (-3, -4):
        raise UsageError("the norm is not defined the same way for d = -3, -4")
    poly = invariants.recognize_with_retry(
        lambda p: invariants.hilbert_conjugates(2, F, p), start=min(cfg.precision_bits, 128)
    )
    _emit(poly.to_json(F.d, 2), cfg, " ".join(map(str, poly.coeffs)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help=f"working precision in bits (env {PREC_ENV})")
    common.add_argument("--output", choices=("json", "table"), default="json")

    parser = argparse.ArgumentParser(prog="cmunits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a modular function at a point")
    p.add_argument("function", choices=("siegel", "eta", "weber-f", "weber-f1", "weber-f2", "gamma2", "j"))
    p.add_argument("args", nargs="+", metavar="[index] tau")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table1", parents=[common], help="recompute j and gamma2 for the nine class-number-one fields")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("classnumber", parents=[common], help="class number searches")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--one", action="store_true")
    g.add_argument("--two-split", action="store_true")
    g.add_argument("--list", metavar="LO..HI")
    p.add_argument("--heegner-bound", type=int, default=1000)
    p.set_defaults(func=cmd_classnumber)

    p = sub.add_parser("reciprocity", parents=[common], help="reciprocity matrices")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--w", nargs=2, metavar=("N", "D"))
    g.add_argument("--kernel", nargs=2, metavar=("N", "D"))
    g.add_argument("--uq", nargs=2, metavar=("A,B,C", "P"))
    g.add_argument("--decompose", nargs=2, metavar=("A,B,C,D", "N"))
    p.set_defaults(func=cmd_reciprocity)

    p = sub.add_parser("check-level", parents=[common], help="level criterion for a Siegel product")
    p.add_argument("expr", help='terms like "0/2,1/2:12;1/2,0:12"')
    p.add_argument("n", nargs="?", type=int, default=None)
    p.set_defaults(func=cmd_check_level)

    p = sub.add_parser("minpoly", parents=[common], help="integer minimal polynomial of the level-2 norm")
    p.add_argument("d")
    p.set_defaults(func=cmd_minpoly)
    return parser


def _config(args) -> Config:
    prec = args.prec
    if prec is None:
        env = os.environ.get(PREC_ENV)
        try:
            prec = int(env) if env else DEFAULT_PREC
        except ValueError:
            raise UsageError(f"{PREC_ENV} must be an integer, got {env!r}") from None
    return Config(prec, args.output, getattr(args, "heegner_bound", 1000))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        if args.command == "eval":
            if len(args.args) > 2:
                raise UsageError("eval takes at most an index and a point")
            args.index, args.tau = (None, args.args[0]) if len(args.args) == 1 else args.args
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except invariants.NoInteger as exc:
        print(f"recognition failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
