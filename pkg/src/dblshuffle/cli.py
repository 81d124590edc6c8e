"""Command-line front end.

Exit codes: 0 success, 2 domain error (error JSON on stdout), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .padic import is_prime

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_USAGE = 64
DIGITS_ENV = "DBLSHUFFLE_DIGITS"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    digits: int = 30
    prime: int = 7
    padic_prec: int = 15
    branch: Fraction = Fraction(0)
    output: str = "text"
    degree: int = 5
    seed: int = 0

    def validate(self) -> "Config":
        if self.digits < 1:
            raise UsageError("digits must be positive")
        if self.padic_prec < 1:
            raise UsageError("p-adic precision must be positive")
        if not is_prime(self.prime):
            raise UsageError(f"{self.prime} is not a prime")
        if self.output not in ("json", "text"):
            raise UsageError("format must be json or text")
        if self.degree < 1:
            raise UsageError("degree must be positive")
        return self


def _load_toml(path: str) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc


def load_config(args: argparse.Namespace) -> Config:
    """Defaults, then the TOML file, then the environment, then flags."""
    cfg = Config()
    names = {f.name for f in fields(Config)}
    if args.config:
        data = _load_toml(args.config)
        unknown = set(data) - names
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg = replace(cfg, **data)
    if os.environ.get(DIGITS_ENV):
        try:
            cfg = replace(cfg, digits=int(os.environ[DIGITS_ENV]))
        except ValueError as exc:
            raise UsageError(f"{DIGITS_ENV} must be an integer") from exc
    overrides = {
        "digits": args.digits,
        "prime": args.prime,
        "padic_prec": args.padic_prec,
        "branch": args.branch,
        "output": args.format,
        "degree": args.degree,
        "seed": args.seed,
    }
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    try:
        cfg = replace(cfg, branch=Fraction(cfg.branch))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad branch value {cfg.branch!r}") from exc
    return cfg.validate()


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _index_arg(text: str):
    from .words import parse_index

    try:
        return parse_index(text)
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _point_arg(text: str) -> list[str]:
    parts = [p.strip() for p in text.strip().strip("()[]").split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty point")
    return parts


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None)
    common.add_argument("--config", help="TOML file with Config fields")
    common.add_argument("--digits", type=int)
    common.add_argument("--prime", "-p", type=int)
    common.add_argument("--padic-prec", "-N", type=int, dest="padic_prec")
    common.add_argument("--branch", "-a")
    common.add_argument("--degree", "-D", type=int)
    common.add_argument("--seed", type=int)

    parser = _Parser(prog="dblshuffle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("relations", parents=[common], help="generate double shuffle relations of one weight")
    p.add_argument("--weight", "-w", type=int, required=True)
    p.add_argument("--verify-digits", type=int, help="evaluate every relation numerically")
    p.add_argument("--basis", action="store_true", help="print a reduced basis of the span instead")
    p.add_argument("--contains", help="JSON polynomial to test for membership in the span")

    p = sub.add_parser("regularize", parents=[common], help="integral or series regularization of an index")
    p.add_argument("--mode", choices=("integral", "series", "compare"), required=True)
    p.add_argument("--index", type=_index_arg, required=True)

    p = sub.add_parser("lmap", parents=[common], help="apply the comparison map L")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--t-power", type=int)
    g.add_argument("--index", type=_index_arg, help="apply L to the integral regularization of this index")
    g.add_argument("--poly", help="polynomial in JSON form")

    p = sub.add_parser("eval", parents=[common], help="complex MZV value")
    p.add_argument("--index", type=_index_arg, required=True)
    p.add_argument("--strategy", choices=("holder", "direct"), default="holder")

    p = sub.add_parser("eval-mpl", parents=[common], help="complex multiple polylogarithm")
    p.add_argument("--index", type=_index_arg, required=True)
    p.add_argument("--point", type=_point_arg, required=True)

    p = sub.add_parser("eval-padic", parents=[common], help="p-adic multiple polylogarithm or logarithm")
    p.add_argument("--index", type=_index_arg)
    p.add_argument("--point", type=_point_arg, required=True)
    p.add_argument("--log", action="store_true", help="evaluate log^a at the single point instead")

    p = sub.add_parser("dmr-check", parents=[common], help="test a truncated series for the DMR0 conditions")
    p.add_argument("--series", choices=("kz", "exp"), default="kz")
    p.add_argument("--alpha", default="0")
    p.add_argument("--beta", default="0")
    p.add_argument("--tol", type=float, help="tolerance (default exact for exp, 1e-15 for kz)")

    p = sub.add_parser("moduli", help="boundary combinatorics of the moduli space")
    msub = p.add_subparsers(dest="moduli_command", required=True)
    q = msub.add_parser("divisors", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--count-only", action="store_true")
    q = msub.add_parser("intersect", parents=[common])
    q.add_argument("--p", dest="first", required=True)
    q.add_argument("--q", dest="second", required=True)
    q = msub.add_parser("chart", parents=[common])
    q.add_argument("--tree", required=True, help='splits "1,2|3,4,5;1,2,3|4,5", or "binary:N" / "binary-prime:N"')
    q.add_argument("--n", type=int, help="label count for a tree without splits")
    q = msub.add_parser("point-r", parents=[common])
    q.add_argument("--n", type=int, required=True, help="N (the space has N+3 marked points)")

    sub.add_parser("selftest", parents=[common], help="run the built-in invariant checks")
    return parser


# ---------------------------------------------------------------------------
# commands


def _cmd_relations(args, cfg: Config) -> dict:
    from .relations import (
        format_relation_text,
        generate_double_shuffle,
        relation_span,
        verify_relations_numeric,
    )
    from .symbols import Poly

    rels = generate_double_shuffle(args.weight, seed=cfg.seed)
    span = relation_span(rels)
    out: dict = {"weight": args.weight, "count": len(rels), "rank": span.rank}
    if args.basis:
        out["basis"] = [b.to_json() for b in span.basis()]
        text = [f"{b} = 0" for b in span.basis()]
    else:
        out["relations"] = [r.to_json() for r in rels]
        text = [format_relation_text(r) for r in rels]
    if args.contains:
        try:
            target = Poly.from_json(json.loads(args.contains))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad polynomial JSON: {exc}") from exc
        out["contains"] = span.contains(target)
        text.append(f"contains {target}: {out['contains']}")
    if args.verify_digits:
        report = verify_relations_numeric(rels, args.verify_digits)
        out["numeric"] = report.to_json()
        text.append(f"max residual at {args.verify_digits} digits: {report.max_residual:.3e}")
    text.insert(0, f"weight {args.weight}: {len(rels)} relations, rank {span.rank}")
    out["_text"] = "\n".join(text)
    return out


def _cmd_regularize(args, cfg: Config) -> dict:
    from .regularization import check_regularization_relation, reg_integral, reg_series
    from .words import format_index, index_to_word

    if args.mode == "integral":
        value = reg_integral(index_to_word(args.index))
    elif args.mode == "series":
        value = reg_series(args.index)
    else:
        report = check_regularization_relation(args.index, digits=cfg.digits)
        out = report.to_json()
        out["_text"] = (
            f"series   {report.series}\nL(integral) {report.compared}\n"
            f"difference {report.difference}\nidentical {report.identical}\nholds {report.holds}\n"
            f"numeric residual {report.numeric_residual:.3e}"
        )
        return out
    return {"index": format_index(args.index), "mode": args.mode, "value": value.to_json(), "_text": str(value)}


def _cmd_lmap(args, cfg: Config) -> dict:
    from .regularization import l_map, reg_integral
    from .symbols import Poly
    from .words import index_to_word

    if args.t_power is not None:
        if args.t_power < 0:
            raise UsageError("t-power must be non-negative")
        source = Poly.T(args.t_power)
    elif args.index is not None:
        source = reg_integral(index_to_word(args.index))
    else:
        try:
            source = Poly.from_json(json.loads(args.poly))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad polynomial JSON: {exc}") from exc
    value = l_map(source)
    return {"input": source.to_json(), "value": value.to_json(), "_text": str(value)}


def _cmd_eval(args, cfg: Config) -> dict:
    from .numeric import eval_mzv
    from .words import format_index

    v = eval_mzv(args.index, cfg.digits, args.strategy)
    return dict(v.to_json(), index=format_index(args.index), _text=f"{v.text()}  (± {float(v.error):.1e})")


def _cmd_eval_mpl(args, cfg: Config) -> dict:
    from .numeric import eval_mpl
    from .words import format_index

    v = eval_mpl(args.index, args.point, cfg.digits)
    return dict(v.to_json(), index=format_index(args.index), _text=f"{v.text()}  (± {float(v.error):.1e})")


def _cmd_eval_padic(args, cfg: Config) -> dict:
    from .padic import PAdicContext, eval_mpl_padic, padic_log

    ctx = PAdicContext(cfg.prime, cfg.padic_prec, cfg.branch)
    try:
        point = [Fraction(x) for x in args.point]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"p-adic points must be rationals: {exc}") from exc
    if args.log:
        if len(point) != 1:
            raise UsageError("--log takes a single point")
        v = padic_log(point[0], ctx)
    else:
        if args.index is None:
            raise UsageError("--index is required unless --log is given")
        v = eval_mpl_padic(args.index, point, ctx)
    return dict(v.to_json(), p=cfg.prime, N=cfg.padic_prec, branch=str(cfg.branch), _text=str(v))


def _cmd_dmr(args, cfg: Config) -> dict:
    from .ncseries import NCSeries, check_dmr0, kz_associator, nc_exp

    if args.series == "kz":
        g = kz_associator(cfg.degree, "complex", cfg.digits).substitute_b_sign()
        tol = args.tol if args.tol is not None else 1e-15
        label = f"Φ_KZ(A,-B) to degree {cfg.degree}"
    else:
        try:
            alpha, beta = Fraction(args.alpha), Fraction(args.beta)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(str(exc)) from exc
        g = nc_exp(NCSeries(cfg.degree, {"A": alpha, "B": beta}))
        tol = args.tol if args.tol is not None else 0
        label = f"exp({alpha}A + {beta}B) to degree {cfg.degree}"
    report = check_dmr0(g, tol)
    out = report.to_json()
    out["series"] = label
    out["ok"] = report.ok
    out["_text"] = (
        f"{label}\ncondition 1 {report.condition1}\ncondition 2 {report.condition2}\n"
        f"condition 3 {report.condition3}\nworst residual {report.worst_residual:.3e}"
    )
    return out


def _tree_arg(text: str, n: int | None):
    from .moduli import StableTree, parse_tree

    kind, _, arg = text.partition(":")
    if kind in ("binary", "binary-prime") and arg:
        N = int(arg)
        return StableTree.binary_T(N) if kind == "binary" else StableTree.binary_T_prime(N)
    return parse_tree(text, n)


def _cmd_moduli(args, cfg: Config) -> dict:
    from . import moduli

    c = args.moduli_command
    if c == "divisors":
        if args.n < 4:
            raise UsageError("n must be at least 4")
        divs = moduli.boundary_divisors(args.n)
        out = {"n": args.n, "count": len(divs), "formula": 2 ** (args.n - 1) - args.n - 1}
        if not args.count_only:
            out["divisors"] = [str(d) for d in divs]
        text = [f"{len(divs)} boundary divisors"] + ([] if args.count_only else [str(d) for d in divs])
        out["_text"] = "\n".join(text)
        return out
    if c == "intersect":
        try:
            P, Q = moduli.Partition2.parse(args.first), moduli.Partition2.parse(args.second)
        except ValueError as exc:
            raise UsageError(f"bad partition: {exc}") from exc
        meets = moduli.divisors_intersect(P, Q)
        return {"p": str(P), "q": str(Q), "intersect": meets, "_text": str(meets).lower()}
    if c == "chart":
        try:
            tree = _tree_arg(args.tree, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        coords = moduli.chart_coordinates(tree)
        return {
            "tree": tree.to_json(),
            "coordinates": [{"quadruple": list(q.quadruple), "substituted": q.substituted} for q in coords],
            "_text": ", ".join(str(q) for q in coords),
        }
    if args.n < 1:
        raise UsageError("N must be positive")
    R = moduli.point_R(args.n)
    text = "(" + ", ".join(str(x) for x in R) + ")"
    return {"N": args.n, "point": [str(x) for x in R], "_text": text}


def _cmd_selftest(args, cfg: Config) -> dict:
    from .selftest import run_all

    results = run_all(digits=min(cfg.digits, 30), seed=cfg.seed)
    ok = all(r["ok"] for r in results)
    text = "\n".join(f"{'PASS' if r['ok'] else 'FAIL'}  {r['name']}  {r.get('detail', '')}".rstrip() for r in results)
    return {"ok": ok, "checks": results, "_text": text, "_exit": EXIT_OK if ok else 1}


COMMANDS = {
    "relations": _cmd_relations,
    "regularize": _cmd_regularize,
    "lmap": _cmd_lmap,
    "eval": _cmd_eval,
    "eval-mpl": _cmd_eval_mpl,
    "eval-padic": _cmd_eval_padic,
    "dmr-check": _cmd_dmr,
    "moduli": _cmd_moduli,
    "selftest": _cmd_selftest,
}


def _emit(out: dict, fmt: str, stream) -> None:
    text = out.pop("_text", None)
    out.pop("_exit", None)
    if fmt == "json" or text is None:
        json.dump(out, stream, indent=2, default=str, ensure_ascii=False)
        stream.write("\n")
    else:
        stream.write(text + "\n")


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    random.seed(cfg.seed)
    try:
        out = COMMANDS[args.command](args, cfg)
    except DomainError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, stdout)
        stdout.write("\n")
        return EXIT_DOMAIN
    except (UsageError, ValueError) as exc:
        # argument values the library rejects
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    code = out.get("_exit", EXIT_OK)
    _emit(out, cfg.output, stdout)
    return code


def main() -> int:
    return run()


if __name__ == "__main__":
    raise SystemExit(main())
