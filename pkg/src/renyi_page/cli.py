"""Command-line front end.

Subcommands: entropy, zalpha, exact2, fmn, page-curve, mstar, montecarlo.
Exit codes: 0 success, 2 usage error, 3 domain error, 4 convergence error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import exact_small, moments, montecarlo
from .errors import ConvergenceError, DomainError, NotFoundError, NumericError
from .moments import RenyiOrder, SystemDims

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4

CSV_FIELDS = ("alpha", "m", "ln_m", "entropy", "info", "method")
DEFAULT_MN = 2**4 * 3**6 * 5**2  # 291600
DEFAULT_ALPHAS = "1,10,100,1000,inf"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CurvePoint:
    m: int
    ln_m: float
    entropy: float
    info: float
    alpha_label: str
    method: str


@dataclass
class SweepConfig:
    product_mn: int
    alphas: list = field(default_factory=list)
    threshold: float = 0.1
    output_format: str = "csv"
    output_path: str = "-"

    def __post_init__(self):
        if self.product_mn < 2:
            raise DomainError(f"product mn must be >= 2, got {self.product_mn}")
        if not self.threshold > 0:
            raise DomainError(f"threshold must be > 0, got {self.threshold}")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"unknown output format {self.output_format!r}")
        self.alphas = [a if isinstance(a, RenyiOrder) else RenyiOrder.parse(a) for a in self.alphas]


def divisors(N: int) -> list[int]:
    """All positive divisors of N in ascending order."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    small, large = [], []
    d = 1
    while d * d <= N:
        if N % d == 0:
            small.append(d)
            if d * d != N:
                large.append(N // d)
        d += 1
    return small + large[::-1]


def curve_point(m: int, n: int, order: RenyiOrder) -> CurvePoint:
    res = moments.renyi_tilde(SystemDims.of(m, n), order)
    ln_m = math.log(m)
    return CurvePoint(m, ln_m, res.entropy, ln_m - res.entropy, order.label, res.method)


def page_curve(config: SweepConfig) -> list[CurvePoint]:
    """S~_alpha and I_alpha at every divisor m of the fixed product mn."""
    divs = divisors(config.product_mn)
    rows = [
        curve_point(m, config.product_mn // m, order)
        for order in sorted(config.alphas, key=RenyiOrder.sort_key)
        for m in divs
    ]
    return rows


def m_star(product_mn: int, order, threshold: float = 0.1) -> int:
    """Smallest divisor m of product_mn with I_alpha(m, product_mn/m) > threshold."""
    if not threshold > 0:
        raise DomainError(f"threshold must be > 0, got {threshold}")
    if not isinstance(order, RenyiOrder):
        order = RenyiOrder.parse(order)
    for m in divisors(product_mn):
        if moments.info_alpha((m, product_mn // m), order) > threshold:
            return m
    raise NotFoundError(f"no divisor of {product_mn} has I_{order.label} > {threshold}")


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_curve(rows, path, fmt: str) -> None:
    """Write curve rows as CSV or JSON; ``path='-'`` means stdout."""
    records = [
        {
            "alpha": r.alpha_label,
            "m": r.m,
            "ln_m": r.ln_m,
            "entropy": r.entropy,
            "info": r.info,
            "method": r.method,
        }
        for r in rows
    ]
    if path != "-":
        parent = Path(path).resolve().parent
        if not parent.is_dir():
            raise UsageError(f"output directory does not exist: {parent}")
    stream = sys.stdout if path == "-" else open(path, "w", encoding="utf-8", newline="")
    try:
        if fmt == "json":
            json.dump(records, stream, indent=1)
            stream.write("\n")
        else:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(CSV_FIELDS)
            for rec in records:
                writer.writerow([
                    rec["alpha"], rec["m"], _fmt(rec["ln_m"]), _fmt(rec["entropy"]), _fmt(rec["info"]), rec["method"]
                ])
    finally:
        if stream is not sys.stdout:
            stream.close()


def read_curve_csv(path) -> list[CurvePoint]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            CurvePoint(int(r["m"]), float(r["ln_m"]), float(r["entropy"]), float(r["info"]), r["alpha"], r["method"])
            for r in csv.DictReader(fh)
        ]


def _g(x: float, digits: int) -> str:
    return format(x, f".{digits}g")


def _order_from_args(args) -> RenyiOrder:
    if getattr(args, "alpha_inf", False):
        return RenyiOrder.infinite()
    if args.alpha is None:
        raise UsageError("one of --alpha or --alpha-inf is required")
    return RenyiOrder.parse(args.alpha)


def _cmd_entropy(args) -> None:
    order = _order_from_args(args)
    dims = SystemDims.of(args.m, args.n)
    res = moments.renyi_tilde(dims, order)
    info = moments.info_alpha((args.m, args.n), order)
    print(f"S_tilde = {_g(res.entropy, args.digits)}")
    print(f"I = {_g(info, args.digits)}")
    print(f"method = {res.method}")
    if dims.swapped:
        print(f"note = dimensions swapped to (m, n) = ({dims.m}, {dims.n})")
    if args.asymptotic:
        if order.is_infinite:
            raise DomainError("large-n expansions need a finite alpha")
        asym = moments.renyi_asymptotic(dims, order.value)
        print(f"S_asymptotic = {_g(asym.entropy, args.digits)}")
        print(f"S_asymptotic_linear = {_g(asym.linear, args.digits)}")


def _cmd_zalpha(args) -> None:
    order = RenyiOrder.parse(args.alpha)
    if order.is_infinite:
        raise DomainError("Z_alpha is only tabulated for finite alpha")
    dims = SystemDims.of(args.m, args.n)
    alpha = order.value
    if alpha == 0:
        log_z = math.log(dims.m)
    elif order.integer_fast_path:
        log_z = moments.z_alpha_int(dims, int(alpha)).log_magnitude
    else:
        log_z = moments.z_alpha_real(dims, alpha).log_magnitude
    print(f"ln_Z = {_g(log_z, args.digits)}")
    z = math.exp(log_z) if log_z < 709 else math.inf
    if z == 0.0 or math.isinf(z):
        print("Z = not representable in double precision")
    else:
        print(f"Z = {_g(z, args.digits)}")


def _cmd_exact2(args) -> None:
    n = args.n
    print(f"S2_exact = {_g(exact_small.renyi2_exact_2xn(n), args.digits)}")
    print(f"S2_tilde = {_g(exact_small.renyi2_tilde_2xn(n), args.digits)}")
    print(f"S_von = {_g(moments.page_von_neumann(SystemDims.of(2, n)), args.digits)}")


def _cmd_fmn(args) -> None:
    value = exact_small.f_mn(exact_small.FArgs(args.mx, args.ny), rule_order=args.order)
    print(_g(value, args.digits))


def _cmd_page_curve(args) -> None:
    config = SweepConfig(
        product_mn=args.mn,
        alphas=[a for a in args.alphas.split(",") if a.strip()],
        threshold=args.threshold,
        output_format=args.format,
        output_path=args.out,
    )
    rows = page_curve(config)
    write_curve(rows, config.output_path, config.output_format)
    summary = sys.stderr if config.output_path == "-" else sys.stdout
    for order in sorted(config.alphas, key=RenyiOrder.sort_key):
        try:
            star = str(m_star(config.product_mn, order, config.threshold))
        except NotFoundError:
            star = "none"
        print(f"m_star[alpha={order.label}] = {star}", file=summary)


def _cmd_mstar(args) -> None:
    print(m_star(args.mn, RenyiOrder.parse(args.alpha), args.threshold))


def _cmd_montecarlo(args) -> None:
    order = RenyiOrder.parse(args.alpha)
    if order.is_infinite:
        raise DomainError("Monte-Carlo estimators need a finite alpha")
    m, n, alpha = args.m, args.n, order.value
    if args.estimator == "moments":
        est = montecarlo.mc_moment_sum(m, n, alpha, args.samples, args.seed, workers=args.workers)
    elif args.estimator == "renyi":
        est = montecarlo.mc_average_renyi(m, n, alpha, args.samples, args.seed, workers=args.workers)
    else:
        est = montecarlo.mc_average_von_neumann(m, n, args.samples, args.seed, workers=args.workers)
    print(json.dumps(asdict(est)))


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyi-page",
        description="Average Renyi entropy of a subsystem of a Haar-random pure state.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="S~_alpha(m, n) and I_alpha(m, n)")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha")
    group.add_argument("--alpha-inf", action="store_true")
    p.add_argument("--asymptotic", action="store_true", help="also print the large-n forms")
    p.add_argument("--digits", type=_positive_int, default=5)
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("zalpha", help="ln Z_alpha(m, n)")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--digits", type=_positive_int, default=12)
    p.set_defaults(func=_cmd_zalpha)

    p = sub.add_parser("exact2", help="exact and approximate S_2 for m = 2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--digits", type=_positive_int, default=10)
    p.set_defaults(func=_cmd_exact2)

    p = sub.add_parser("fmn", help="the double integral F(mx, ny)")
    p.add_argument("--mx", type=int, required=True)
    p.add_argument("--ny", type=int, required=True)
    p.add_argument("--order", type=_positive_int, default=64)
    p.add_argument("--digits", type=_positive_int, default=12)
    p.set_defaults(func=_cmd_fmn)

    p = sub.add_parser("page-curve", help="sweep every divisor m of a fixed mn")
    p.add_argument("--mn", type=_positive_int, default=DEFAULT_MN)
    p.add_argument("--alphas", default=DEFAULT_ALPHAS, help="comma list; 'inf' for infinity")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threshold", type=float, default=0.1)
    p.set_defaults(func=_cmd_page_curve)

    p = sub.add_parser("mstar", help="smallest divisor m with I_alpha > threshold")
    p.add_argument("--mn", type=_positive_int, default=DEFAULT_MN)
    p.add_argument("--alpha", required=True)
    p.add_argument("--threshold", type=float, default=0.1)
    p.set_defaults(func=_cmd_mstar)

    p = sub.add_parser("montecarlo", help="Monte-Carlo estimators over Haar-random states")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--alpha", default="2")
    p.add_argument("--samples", type=_positive_int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--estimator", choices=("moments", "renyi", "von-neumann"), default="moments")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=_cmd_montecarlo)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, NotFoundError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


def main() -> None:
    sys.exit(run_cli())
