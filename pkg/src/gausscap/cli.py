"""Command-line interface.

Subcommands:

* ``capacity``    -- one channel, one capacity, JSON on stdout
* ``sweep-modes`` -- capacities versus mode number, CSV "N,method,alloc,bits"
* ``random``      -- random-ensemble capacities (analytic or Monte Carlo),
                     CSV "N,K,M,sigma2,method,mode,bits,stderr"
* ``density``     -- analytic eigenvalue density, CSV "lambda,p_lambda"

Every command is deterministic given its flags and seed.  Flags can also be
supplied through ``--config FILE`` (a JSON object whose keys are the long
flag names with dashes replaced by underscores); explicit flags win.  Exit
codes: 0 ok, 2 input error, 3 unphysical parameters, 4 ensemble-parameter
error, 64 usage.
"""

import argparse
import ast
import json
import sys

import numpy as np

from . import active, capacity, channels, decomposition, ensembles
from .errors import (
    DimensionMismatch,
    InsufficientEnvironment,
    InvalidChannel,
    NegativeArgument,
    NegativeEntropyArgument,
    NoFeasibleWaterlevel,
    NonPositiveDefinite,
    NonThermalNoise,
    NotBlockForm,
    NotHermitian,
    SingularNoise,
    UnphysicalOutput,
    ZeroNoiseClassical,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNPHYSICAL = 3
EXIT_ENSEMBLE = 4
EXIT_USAGE = 64

_INPUT_ERRORS = (InvalidChannel, DimensionMismatch, NotBlockForm,
                 NonThermalNoise, OSError, ValueError)
_UNPHYSICAL_ERRORS = (UnphysicalOutput, NegativeEntropyArgument,
                      NonPositiveDefinite, NegativeArgument, NotHermitian,
                      ZeroNoiseClassical, NoFeasibleWaterlevel, SingularNoise)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; the contract here is 64.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _fmt(x):
    return "%.12g" % x


_RULE_OPS = {ast.Add, ast.Sub, ast.Mult, ast.Div}


def eval_rule(expr, **names):
    """Evaluate a tiny arithmetic expression over the given variable names.

    Supports +, -, *, / and numeric constants; just enough to encode
    per-mode transmission rules like "0.2+0.7*k/N".
    """

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp) and type(node.op) in _RULE_OPS:
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            return ev(node.operand) * (-1.0 if isinstance(node.op, ast.USub) else 1.0)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in names:
            return float(names[node.id])
        raise ValueError("unsupported token in rule %r" % expr)

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError("cannot parse rule %r: %s" % (expr, exc)) from None
    return ev(tree)


def _parse_range(text):
    """An int or an inclusive 'a..b' range, as a list of ints."""
    text = str(text).strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError("empty range %r" % text)
        return list(range(lo, hi + 1))
    return [int(text)]


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _apply_config(args, defaults):
    """Fill unset (None) options from --config JSON, then from defaults."""
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ValueError("config file must hold a JSON object")
    for key, value in cfg.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, value in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _require(parser, args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            parser.error("the following argument is required: --%s"
                         % name.replace("_", "-"))


def _general_channel_bits(ch, P, method, alloc_kind):
    # Channels that do not reduce to parallel single-mode channels are
    # evaluated with the general multivariate formulas under symmetric
    # modulation (aligned with the channel normal modes for homodyne);
    # water-filling needs the diagonal decomposition and is not available.
    if alloc_kind != "uniform":
        raise InvalidChannel(
            "channel is not diagonalizable; only --alloc uniform is "
            "supported for it")
    N = ch.in_modes
    P_mode = P / N
    if method == "holevo":
        return capacity.holevo_general(ch, P_mode * np.eye(2 * N))
    if method == "het":
        return capacity.het_hom_general(ch, P_mode * np.eye(2 * N), "het")
    if method == "hom":
        return capacity.hom_general_aligned(ch, P)
    raise InvalidChannel("classical capacity needs a diagonalizable channel")


def _channel_params(args, parser):
    """Resolve the (lambda_k, n, xi) list and the input-mode count."""
    noise_n = float(args.n)
    xi = float(args.xi)
    if args.lambdas is not None:
        lams = [float(tok) for tok in str(args.lambdas).split(",") if tok.strip()]
        if not lams:
            raise ValueError("--lambdas must list at least one value")
    elif args.lambdas_rule is not None:
        _require(parser, args, "N")
        N = int(args.N)
        lams = [eval_rule(args.lambdas_rule, k=k, N=N) for k in range(1, N + 1)]
    else:
        parser.error("one of --channel, --lambdas or --lambdas-rule is required")
    if min(lams) < 0:
        raise ValueError("transmissions must be nonnegative")
    return [(lam, noise_n, xi) for lam in lams], len(lams)


def _diagonal_bits(params, n_signal, P, method, alloc_kind, xi):
    """Capacity of a diagonal channel; returns (bits, allocation, mu)."""
    if method == "classical":
        if xi <= 0:
            raise ZeroNoiseClassical("classical capacity requires xi > 0")
        lams = [p[0] for p in params]
        if alloc_kind == "waterfill":
            res = capacity.classical_capacity(lams, xi, P)
            return res.bits, res.allocation.per_mode, res.waterlevel
        alloc = capacity.uniform_allocation(len(params), P, n_signal)
        with np.errstate(divide="ignore"):
            rates = np.log2(1.0 + np.asarray(lams) * alloc.per_mode / xi)
        return float(np.sum(rates)), alloc.per_mode, None
    if alloc_kind == "uniform":
        alloc = capacity.uniform_allocation(len(params), P, n_signal)
        if method == "holevo":
            bits = capacity.holevo_diagonal(params, alloc)
        else:
            bits = capacity.het_hom_per_mode(params, alloc, method)
        return bits, alloc.per_mode, None
    if method == "holevo":
        res = capacity.waterfill_holevo(params, P)
    else:
        res = capacity.waterfill_het_hom(params, P, method)
    return res.bits, res.allocation.per_mode, res.waterlevel


def cmd_capacity(args, parser):
    _require(parser, args, "power")
    P = float(args.power)
    per_mode, mu = [], None
    if args.channel is not None:
        with open(args.channel) as fh:
            ch = channels.channel_from_json(fh.read())
        if not channels.validate_channel(ch):
            raise UnphysicalOutput(
                "channel file violates the noise bound Y - (i/2)Sigma >= 0")
        try:
            params = decomposition.diagonal_channel_params(ch)
        except (NotBlockForm, NonThermalNoise):
            bits = _general_channel_bits(ch, P, args.method, args.alloc)
        else:
            xi = ch.noise.xi
            bits, per_mode, mu = _diagonal_bits(params, ch.in_modes, P,
                                                args.method, args.alloc, xi)
    else:
        params, n_signal = _channel_params(args, parser)
        bits, per_mode, mu = _diagonal_bits(params, n_signal, P, args.method,
                                            args.alloc, float(args.xi))
    report = {
        "bits": bits,
        "method": args.method,
        "alloc": args.alloc,
        "allocation": [float(p) for p in per_mode],
        "mu": mu,
        "power": P,
    }
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_sweep_modes(args, parser):
    _require(parser, args, "N_range", "power")
    n_values = _parse_range(args.N_range)
    methods = [tok.strip() for tok in args.methods.split(",") if tok.strip()]
    allocs = [tok.strip() for tok in args.allocs.split(",") if tok.strip()]
    for method in methods:
        if method not in ("holevo", "het", "hom", "classical"):
            raise ValueError("unknown method %r" % method)
    for alloc in allocs:
        if alloc not in ("uniform", "waterfill"):
            raise ValueError("unknown allocation %r" % alloc)
    xi = float(args.xi)
    lines = ["N,method,alloc,bits"]
    for N in n_values:
        lams = [eval_rule(args.lambdas_rule, k=k, N=N) for k in range(1, N + 1)]
        if min(lams) < 0:
            raise ValueError("transmissions must be nonnegative")
        params = [(lam, float(args.n), xi) for lam in lams]
        for method in methods:
            for alloc in allocs:
                bits, _, _ = _diagonal_bits(params, N, float(args.power),
                                            method, alloc, xi)
                lines.append("%d,%s,%s,%s" % (N, method, alloc, _fmt(bits)))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_random(args, parser):
    _require(parser, args, "N", "power")
    if args.mode == "mc" and args.seed is None:
        parser.error("--seed is required in mc mode")
    if args.mode == "analytic" and float(args.sigma2) != 0:
        parser.error("analytic mode requires sigma2 = 0")
    n_values = _parse_range(args.N)
    if args.dump_samples and (len(n_values) != 1 or args.mode != "mc"):
        parser.error("--dump-samples needs mc mode and a single configuration")
    noise = channels.NoiseParams(float(args.n), float(args.xi))
    threads = args.threads if args.threads is None else int(args.threads)
    rows = []
    for N in n_values:
        K = int(eval_rule(str(args.K), N=N)) if args.K is not None else N
        M = int(eval_rule(str(args.M), N=N)) if args.M is not None else N
        spec = ensembles.EnsembleSpec(N=N, K=K, M=M, noise=noise,
                                      sigma2=float(args.sigma2),
                                      seed=int(args.seed or 0))
        if args.mode == "analytic":
            bits = ensembles.expected_capacity_passive(spec, float(args.power),
                                                       args.method)
            rows.append((spec, bits, None))
        else:
            mean, se = active.mc_capacity_active(
                spec, float(args.power), args.method, int(args.samples),
                threads=threads, allow_rect=args.allow_rect_active,
                dump_path=args.dump_samples)
            rows.append((spec, mean, se))
    lines = ["N,K,M,sigma2,method,mode,bits,stderr"]
    for spec, bits, se in rows:
        lines.append("%d,%d,%d,%s,%s,%s,%s,%s" % (
            spec.N, spec.K, spec.M, _fmt(spec.sigma2), args.method, args.mode,
            _fmt(bits), "" if se is None else _fmt(se)))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_density(args, parser):
    _require(parser, args, "N", "K", "M")
    spec = ensembles.EnsembleSpec(N=int(args.N), K=int(args.K), M=int(args.M))
    density = ensembles.spectral_density(spec)
    grid = np.linspace(0.0, 1.0, int(args.grid))
    values = density.pdf(grid)
    lines = ["lambda,p_lambda"]
    lines.extend("%s,%s" % (_fmt(lam), _fmt(p)) for lam, p in zip(grid, values))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="gausscap",
                     description="Capacities of multimode Gaussian channels")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def common(p):
        p.add_argument("--config", help="JSON file of default option values")
        p.add_argument("--output", help="write to this file instead of stdout")

    p_cap = sub.add_parser("capacity", parents=[], description=(
        "Capacity of one channel, as JSON"))
    p_cap.add_argument("--channel", help="channel JSON file")
    p_cap.add_argument("--lambdas", help="comma-separated transmissions")
    p_cap.add_argument("--lambdas-rule", dest="lambdas_rule",
                       help="per-mode rule over k and N, e.g. '0.2+0.7*k/N'")
    p_cap.add_argument("--N", type=int, help="mode count for --lambdas-rule")
    p_cap.add_argument("--n", default=None, help="thermal photons per env mode")
    p_cap.add_argument("--xi", default=None, help="additive noise")
    p_cap.add_argument("--power", type=float, help="total mean photons P")
    p_cap.add_argument("--method", choices=["holevo", "het", "hom", "classical"],
                       default=None)
    p_cap.add_argument("--alloc", choices=["uniform", "waterfill"], default=None)
    common(p_cap)
    p_cap.set_defaults(func=cmd_capacity,
                       defaults={"n": 0.0, "xi": 0.0, "method": "holevo",
                                 "alloc": "waterfill"})

    p_sweep = sub.add_parser("sweep-modes", description=(
        "Capacity versus mode count, as CSV"))
    p_sweep.add_argument("--N-range", dest="N_range",
                         help="inclusive range 'a..b' or single N")
    p_sweep.add_argument("--lambdas-rule", dest="lambdas_rule", default=None)
    p_sweep.add_argument("--power", type=float)
    p_sweep.add_argument("--methods", default=None,
                         help="comma list of holevo,het,hom,classical")
    p_sweep.add_argument("--allocs", default=None,
                         help="comma list of uniform,waterfill")
    p_sweep.add_argument("--n", default=None)
    p_sweep.add_argument("--xi", default=None)
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep_modes,
                         defaults={"lambdas_rule": "1", "methods": "holevo",
                                   "allocs": "waterfill", "n": 0.0, "xi": 0.0})

    p_rand = sub.add_parser("random", description=(
        "Random-ensemble capacities, analytic or Monte Carlo, as CSV"))
    p_rand.add_argument("--N", help="signal modes: int or range 'a..b'")
    p_rand.add_argument("--K", help="receiver modes: int or rule over N")
    p_rand.add_argument("--M", help="environment modes: int or rule over N")
    p_rand.add_argument("--sigma2", default=None, help="squeezing variance")
    p_rand.add_argument("--mode", choices=["analytic", "mc"], default=None)
    p_rand.add_argument("--samples", default=None, help="MC sample count")
    p_rand.add_argument("--seed", type=int, help="base seed (required for mc)")
    p_rand.add_argument("--power", type=float)
    p_rand.add_argument("--method", choices=["holevo", "het", "hom"], default=None)
    p_rand.add_argument("--n", default=None)
    p_rand.add_argument("--xi", default=None)
    p_rand.add_argument("--threads", default=None,
                        help="worker cap (GAUSSCAP_THREADS as fallback)")
    p_rand.add_argument("--allow-rect-active", dest="allow_rect_active",
                        action="store_true",
                        help="allow K > N active sampling by truncating the "
                             "enlarged transform")
    p_rand.add_argument("--dump-samples", dest="dump_samples",
                        help="per-sample CSV (single configuration only)")
    common(p_rand)
    p_rand.set_defaults(func=cmd_random,
                        defaults={"sigma2": 0.0, "mode": "analytic",
                                  "samples": 1000, "method": "holevo",
                                  "n": 0.0, "xi": 0.0})

    p_dens = sub.add_parser("density", description=(
        "Analytic transmission-eigenvalue density, as CSV"))
    p_dens.add_argument("--N", type=int)
    p_dens.add_argument("--K", type=int)
    p_dens.add_argument("--M", type=int)
    p_dens.add_argument("--grid", default=None, help="grid points on [0, 1]")
    common(p_dens)
    p_dens.set_defaults(func=cmd_density, defaults={"grid": 1001})

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, args.defaults)
        return args.func(args, parser)
    except InsufficientEnvironment as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ENSEMBLE
    except _UNPHYSICAL_ERRORS as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_UNPHYSICAL
    except _INPUT_ERRORS as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
