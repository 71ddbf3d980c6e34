"""Command-line front end: ``padic <command> ...``.

Exit codes: 0 success, 2 a verification came out negative, 1 usage or
domain error (reported on stderr as a single ``error[<code>]: <message>`` line).

Spec strings
------------
symbols        taibleson:alpha=0.5 | vladimirov:alphas=1,-1 | laplacian1 | laplacian2
               | poly:coeffs=1,0,2;alpha=1 | poly:coeffs=1,3;alphas=1,1
distributions  delta | constant:c=2 | abs_power:beta=0.5 | pi_alpha:alpha=0.5;char=1;m=2
               | p_log_over_abs:m=2 | p_inv_abs | log_abs | riesz_kappa:alpha=1.5
               | multi_riesz:alphas=1,0.5 | character:z=1/2,3
automodels     alpha=0.5;char=1;m=1   (rho(t) = |t|^(alpha-1) pi_1(t) log_p^m |t|)
numbers        integers, fractions "3/4", complex "2+0.3i"
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import Automodel, quasi_limit, verify_th5, verify_th7_th8, verify_th9, verify_th10
from .core import Grid, MultCharacter, NormedCharacter
from .distributions import (abs_power, character, constant, delta, log_abs, multi_riesz, p_inv_abs_n,
                            p_log_over_abs, pi_alpha_log, riesz_kappa)
from .errors import DomainError, GridError, PadicError
from .lizorkin import is_phi, is_psi, project, random_lizorkin
from .operators import apply, parse_symbol, solve
from .schwartz import (TestFunction, delta_k, evaluate, fourier, indicator_ball, indicator_coset,
                       inverse_fourier, omega, parse_point, random_function)
from .special import gamma_p_char, gamma_p_n
from .wavelets import WaveletIndex, eigencheck, enumerate_indices, gram, kozyrev


class UsageError(PadicError):
    code = "usage"


@dataclass
class Config:
    tol: float = 1e-10
    max_cells: int = 10**6
    precision: int = 15

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("tolerance must be positive")
        if self.max_cells < 1 or self.precision < 1:
            raise UsageError("max-cells and precision must be positive")

    def check_grid(self, g: Grid) -> Grid:
        if g.size > self.max_cells:
            raise GridError(f"grid {g} has {g.size} cells, above the limit {self.max_cells}")
        return g


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# Value parsing


def _num(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        if "j" not in t:
            return complex(float(Fraction(t)))
        return complex(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a number: {text!r}") from exc


def _nums(text: str) -> list:
    return [_num(s) for s in text.split(",") if s.strip()]


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _kv(text: str) -> dict:
    out = {}
    for part in filter(None, (s.strip() for s in text.split(";"))):
        k, sep, v = part.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {part!r}")
        out[k.strip()] = v.strip()
    return out


def _fmt_num(z: complex, digits: int) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def _jnum(z, digits: int):
    z = complex(z)
    re = float(f"{z.real:.{digits}g}") + 0.0
    if z.imag == 0:
        return re
    return [re, float(f"{z.imag:.{digits}g}") + 0.0]


def parse_distribution(spec: str, p: int, n: int):
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    kv = _kv(rest)
    try:
        if name == "delta":
            return delta(p, n)
        if name == "constant":
            return constant(p, n, _num(kv.get("c", "1")))
        if name == "abs_power":
            return abs_power(p, n, _num(kv["beta"]))
        if name == "log_abs":
            return log_abs(p, n)
        if name == "p_inv_abs":
            return p_inv_abs_n(p, n)
        if name == "riesz_kappa":
            return riesz_kappa(p, n, _num(kv["alpha"]))
        if name == "character":
            return character(parse_point(p, kv["z"]))
        if name == "multi_riesz":
            a = _nums(kv["alphas"])
            if len(a) != n:
                raise UsageError(f"multi_riesz needs {n} exponents")
            return multi_riesz(p, a)
        if n != 1 and name in ("pi_alpha", "p_log_over_abs"):
            raise UsageError(f"{name} is one-dimensional")
        if name == "pi_alpha":
            pi = MultCharacter(_num(kv["alpha"]), NormedCharacter(p, int(kv.get("char", 0))))
            return pi_alpha_log(pi, int(kv.get("m", 0)))
        if name == "p_log_over_abs":
            return p_log_over_abs(p, int(kv.get("m", 1)))
    except KeyError as exc:
        raise UsageError(f"distribution spec {spec!r} is missing {exc}") from exc
    raise UsageError(f"unknown distribution {name!r}")


def parse_automodel(spec: str, p: int) -> Automodel:
    kv = _kv(spec)
    return Automodel(p, _num(kv.get("alpha", "1")), NormedCharacter(p, int(kv.get("char", 0))), int(kv.get("m", 0)))


# I/O


def _load(path: str, cfg: Config) -> TestFunction:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        obj = json.loads(text)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not JSON: {exc.msg}") from exc
    g = Grid(int(obj["p"]), int(obj["n"]), int(obj["l"]), int(obj["N"])) if isinstance(obj, dict) and "p" in obj else None
    if g is not None:
        cfg.check_grid(g)
    return TestFunction.from_json_obj(obj)


def _fn_obj(phi: TestFunction, digits: int) -> dict:
    obj = phi.to_json_obj()
    for e in obj["coeffs"]:
        e["re"] = float(f"{e['re']:.{digits}g}") + 0.0
        e["im"] = float(f"{e['im']:.{digits}g}") + 0.0
    return obj


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit_fn(phi: TestFunction, args, cfg: Config, out):
    text = _dump(_fn_obj(phi, cfg.precision))
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
        if not args.json:
            print(f"wrote {phi.grid} with {int(np.count_nonzero(phi.coeffs))} nonzero cells to {args.out}", file=out)
        return
    if args.json:
        print(text, file=out)
        return
    print(f"grid {phi.grid}", file=out)
    for e in _fn_obj(phi, cfg.precision)["coeffs"]:
        m = ",".join(str(i) for i in e["m"])
        print(f"  [{m}]  {_fmt_num(complex(e['re'], e['im']), cfg.precision)}", file=out)


def _input_or_random(args, cfg: Config, kind: str) -> TestFunction:
    if args.input:
        return _load(args.input, cfg)
    g = cfg.check_grid(Grid(args.p, args.n, args.l, args.N))
    return random_lizorkin(g, kind, np.random.default_rng(args.seed))


# Commands


def cmd_fn(args, cfg, out):
    p, n = args.p, args.n
    what = args.what
    if what == "omega":
        phi = omega(p, n)
    elif what == "ball":
        phi = indicator_ball(p, n, args.k)
    elif what == "delta":
        phi = delta_k(p, n, args.k)
    elif what == "indicator":
        if not args.center:
            raise UsageError("indicator needs --center")
        phi = indicator_coset(parse_point(p, args.center), args.k)
    elif what == "random":
        g = cfg.check_grid(Grid(p, n, args.l, args.N))
        rng = np.random.default_rng(args.seed)
        phi = random_lizorkin(g, args.lizorkin, rng) if args.lizorkin else random_function(g, rng, integer=True)
    elif what == "kozyrev":
        phi = kozyrev(WaveletIndex(p, args.gamma, args.j, _frac(args.a)))
    elif what == "eval":
        if not args.input or not args.x:
            raise UsageError("eval needs --in and --x")
        phi = _load(args.input, cfg)
        v = evaluate(phi, parse_point(phi.p, args.x))
        print(_dump({"value": _jnum(v, cfg.precision)}) if args.json else _fmt_num(v, cfg.precision), file=out)
        return 0
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(what)
    _emit_fn(phi, args, cfg, out)
    return 0


def cmd_fourier(args, cfg, out):
    phi = _load(args.input, cfg)
    res = inverse_fourier(phi) if args.inverse else fourier(phi)
    if not args.out:
        # the transform is data: JSON even without --json
        print(_dump(_fn_obj(res, cfg.precision)), file=out)
        return 0
    _emit_fn(res, args, cfg, out)
    return 0


def cmd_lizorkin(args, cfg, out):
    phi = _load(args.input, cfg)
    if args.action == "check":
        rep = is_psi(phi, args.kind) if args.side == "xi" else is_phi(phi, args.kind, tol=args.tol or 0.0)
        if args.json:
            print(_dump({"member": rep.ok, "kind": args.kind, "side": args.side, "criterion": rep.criterion,
                         "witness": None if rep.witness is None else list(rep.witness),
                         "value": _jnum(rep.value, cfg.precision)}), file=out)
        else:
            print(rep.describe(), file=out)
        return 0 if rep.ok else 2
    t = _frac(args.t)
    res, dist = project(phi, args.kind, t, return_distance=True)
    if args.json and not args.out:
        print(_dump({"distance": _jnum(dist, cfg.precision), "function": _fn_obj(res, cfg.precision)}), file=out)
        return 0
    _emit_fn(res, args, cfg, out)
    if not args.json:
        print(f"L2 distance {_fmt_num(dist, cfg.precision)}", file=out)
    return 0


def cmd_gamma(args, cfg, out):
    pi = MultCharacter(_num(args.alpha), NormedCharacter(args.p, args.char))
    val = gamma_p_n(args.p, args.n, pi.alpha) if args.n != 1 else gamma_p_char(pi)
    if args.json:
        obj = {"p": args.p, "n": args.n, "alpha": _jnum(pi.alpha, cfg.precision), "char": args.char}
        if val.is_pole:
            obj["pole"] = val.pole
        else:
            obj["value"] = _jnum(val.value, cfg.precision)
            obj["exact"] = None if val.exact is None else str(val.exact)
        print(_dump(obj), file=out)
    else:
        print(val.format(cfg.precision), file=out)
    return 0


def cmd_pair(args, cfg, out):
    phi = _load(args.input, cfg)
    f = parse_distribution(args.dist, phi.p, phi.n)
    v = f.pair(phi)
    print(_dump({"distribution": f.name, "value": _jnum(v, cfg.precision)}) if args.json
          else _fmt_num(v, cfg.precision), file=out)
    return 0


def cmd_op(args, cfg, out):
    phi = _load(args.input, cfg)
    sym = parse_symbol(args.symbol, phi.p, phi.n)
    res = apply(sym, phi, args.kind, rtol=cfg.tol) if args.action == "apply" else solve(sym, phi, args.kind)
    _emit_fn(res, args, cfg, out)
    return 0


def cmd_wavelet(args, cfg, out):
    p = args.p
    if args.action == "build":
        _emit_fn(kozyrev(WaveletIndex(p, args.gamma, args.j, _frac(args.a))), args, cfg, out)
        return 0
    if args.action == "eigencheck":
        idx = WaveletIndex(p, args.gamma, args.j, _frac(args.a))
        rep = eigencheck(idx, _num(args.alpha))
        ok = rep.residual <= cfg.tol
        if args.json:
            print(_dump({"index": {"gamma": idx.gamma, "j": idx.j, "a": str(idx.a)},
                         "alpha": _jnum(rep.alpha, cfg.precision), "eigenvalue": _jnum(rep.eigenvalue, cfg.precision),
                         "residual": float(f"{rep.residual:.3g}"), "ok": ok}), file=out)
        else:
            print(f"{idx}: eigenvalue {_fmt_num(rep.eigenvalue, cfg.precision)}, residual {rep.residual:.3g}"
                  f" {'ok' if ok else 'FAILED'}", file=out)
        return 0 if ok else 2
    gammas = [int(g) for g in args.gammas.split(",")]
    idxs = enumerate_indices(p, gammas, args.depth)
    G = gram(idxs)
    err = float(np.max(np.abs(G - np.eye(len(idxs)))))
    ok = err <= cfg.tol
    if args.json:
        print(_dump({"size": len(idxs), "max_deviation": float(f"{err:.3g}"), "ok": ok}), file=out)
    else:
        print(f"Gram matrix of {len(idxs)} wavelets: max |G - I| = {err:.3g} {'ok' if ok else 'FAILED'}", file=out)
    return 0 if ok else 2


def cmd_taub(args, cfg, out):
    phi = _input_or_random(args, cfg, "first" if args.action == "th7" else "second")
    f = parse_distribution(args.dist, phi.p, phi.n)
    rho = parse_automodel(args.rho, phi.p)
    ks = range(1, args.K + 1)
    d = cfg.precision
    if args.action == "quasi-limit":
        rep = quasi_limit(f, rho, phi, args.direction, args.K)
        obj, ok = rep.to_json_obj(d), True
        lines = [f"k={k:2d}  s_k={_fmt_num(v, d)}" for k, v in zip(rep.ks, rep.values)]
        lines.append(f"stabilized={rep.stabilized} limit={_fmt_num(rep.limit, d)}")
    elif args.action == "th9":
        rep = verify_th9(f, rho, args.order, ks, C=_num(args.C))
        ok = rep.converged(1e-8) if rep.expected is not None else True
        obj = rep.to_json_obj(d)
        lines = [f"k={k:2d}  ratio={_fmt_num(a, d)}" for k, _, a, _ in rep.rows]
        lines.append(f"limit={_fmt_num(rep.limit, d)} expected="
                     + ("n/a" if rep.expected is None else f"{_fmt_num(rep.expected, d)} error={rep.error:.3g}"))
    else:
        if args.action == "th5":
            rep = verify_th5(f, rho, phi, ks)
        elif args.action == "th7":
            rep = verify_th7_th8(f, _nums(args.beta), rho, phi, "first", ks)
        elif args.action == "th8":
            rep = verify_th7_th8(f, _num(args.beta), rho, phi, "second", ks)
        else:
            if not args.symbol:
                raise UsageError("th10 needs --symbol")
            rep = verify_th10(f, parse_symbol(args.symbol, phi.p, phi.n), rho, phi, ks)
        ok = rep.ok(cfg.tol)
        obj = rep.to_json_obj(d)
        lines = [f"{str(k):>10}  lhs={_fmt_num(a, d)}  rhs={_fmt_num(b, d)}  residual={r:.3g}"
                 for k, a, b, r in rep.rows]
        lines.append(f"max residual {rep.max_residual:.3g} {'ok' if ok else 'FAILED'}")
    if args.json:
        obj["ok"] = ok
        print(_dump(obj), file=out)
    else:
        print("\n".join(lines), file=out)
    return 0 if ok else 2


def cmd_selftest(args, cfg, out):
    from .selftest import report_json, run

    nums = [int(x) for x in args.only.split(",")] if args.only else None
    if nums and any(not 1 <= x <= 12 for x in nums):
        raise UsageError("criteria are numbered 1..12")
    results = run(nums)
    if args.json:
        print(report_json(results), file=out)
    else:
        for r in results:
            print(r.line(), file=out)
    return 0 if all(r.passed for r in results) else 2


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="padic", description="p-adic distributions, Lizorkin spaces, operators and Tauberian checks",
                 formatter_class=argparse.RawDescriptionHelpFormatter, epilog="Spec strings" + __doc__.split("Spec strings", 1)[1])
    ap.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--tol", type=float, default=1e-10, help="verification tolerance (default 1e-10)")
    common.add_argument("--max-cells", type=int, default=10**6)
    common.add_argument("--precision", type=int, default=15, help="significant digits in output")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def grid_args(p, need_p=True):
        p.add_argument("--p", type=int, required=need_p, default=None if need_p else 2)
        p.add_argument("--n", type=int, default=1)
        p.add_argument("--l", type=int, default=-2)
        p.add_argument("--N", type=int, default=2)
        p.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("fn", parents=[common], help="build or evaluate a test function")
    s.add_argument("what", choices=["omega", "ball", "delta", "indicator", "random", "kozyrev", "eval"])
    grid_args(s, need_p=False)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--center")
    s.add_argument("--lizorkin", choices=["first", "second"])
    s.add_argument("--gamma", type=int, default=0)
    s.add_argument("--j", type=int, default=1)
    s.add_argument("--a", default="0")
    s.add_argument("--in", dest="input")
    s.add_argument("--x")
    s.add_argument("--out")
    s.set_defaults(func=cmd_fn)

    s = sub.add_parser("fourier", parents=[common], help="Fourier transform of a JSON test function")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--inverse", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_fourier)

    s = sub.add_parser("lizorkin", parents=[common], help="membership check or projection")
    s.add_argument("action", choices=["check", "project"])
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--kind", choices=["first", "second"], default="second")
    s.add_argument("--side", choices=["x", "xi"], default="x")
    s.add_argument("--t", default="1/4")
    s.add_argument("--out")
    s.set_defaults(func=cmd_lizorkin)

    s = sub.add_parser("gamma", parents=[common], help="p-adic Gamma function")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--alpha", required=True)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--char", type=int, default=0, help="index r of the tame character (0 = trivial)")
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("pair", parents=[common], help="pair a distribution with a test function")
    s.add_argument("--dist", required=True)
    s.add_argument("--in", dest="input", required=True)
    s.set_defaults(func=cmd_pair)

    s = sub.add_parser("op", parents=[common], help="apply or invert a pseudo-differential operator")
    s.add_argument("action", choices=["apply", "solve"])
    s.add_argument("--symbol", required=True)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--kind", choices=["first", "second"], default="second")
    s.add_argument("--out")
    s.set_defaults(func=cmd_op)

    s = sub.add_parser("wavelet", parents=[common], help="Kozyrev wavelets")
    s.add_argument("action", choices=["build", "eigencheck", "gram"])
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--gamma", type=int, default=0)
    s.add_argument("--j", type=int, default=1)
    s.add_argument("--a", default="0")
    s.add_argument("--alpha", default="1")
    s.add_argument("--gammas", default="-1,0,1")
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_wavelet)

    s = sub.add_parser("taub", parents=[common], help="quasi-asymptotics and Tauberian checks")
    s.add_argument("action", choices=["quasi-limit", "th5", "th7", "th8", "th9", "th10"])
    s.add_argument("--dist", default="delta")
    s.add_argument("--rho", default="alpha=0")
    s.add_argument("--in", dest="input")
    grid_args(s, need_p=False)
    s.add_argument("--K", type=int, default=8)
    s.add_argument("--direction", choices=["infinity", "zero"], default="infinity")
    s.add_argument("--beta", default="-1")
    s.add_argument("--order", type=int, default=2, help="order N of the primitive (th9)")
    s.add_argument("--C", default="1")
    s.add_argument("--symbol")
    s.set_defaults(func=cmd_taub)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_selftest)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("missing command (try --help)")
        cfg = Config(args.tol, args.max_cells, args.precision)
        return args.func(args, cfg, out)
    except PadicError as exc:
        msg = " ".join(str(exc).split())
        print(f"error[{exc.code}]: {msg}", file=err)
        return 1
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        msg = " ".join(str(exc).split())
        print(f"error[domain]: {msg}", file=err)
        return 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
