"""flagcurve command line: sequence, curvature, degrees, maximize, plot, certify.

Data goes to stdout, diagnostics to stderr.  Exit codes: 2 bad input, 3
pipeline failure, 4 wrong number of weights, 5 area on a non-compact curve,
6 exact backend required.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
import warnings

import numpy as np

from .algebra.ratfn import RationalFn
from .curvefile import CurveFile
from .curves import HolCurve, lift_curve
from .errors import FlagCurveError, NonCompactDomain, PolySyntaxError, WeightCountMismatch
from .flagmetric import degrees, maximize_area
from .geometry import (
    InvariantMetric,
    constant_value,
    curvature,
    float_constancy,
    induced_metric,
    latitude_grid,
    phase_grid,
)
from .oracle import float_harmonic_sequence, latitude_points
from .veronese import Verdict, congruence_test

EXIT_PARSE, EXIT_PIPELINE, EXIT_WEIGHTS, EXIT_NONCOMPACT, EXIT_EXACT = 2, 3, 4, 5, 6
PLOT_PHASES = 8


class ExactRequired(FlagCurveError):
    pass


def _ratfn_json(f: RationalFn) -> dict:
    return {"num": str(f.num), "den": str(f.den)}


def _float_str(x) -> str:
    return repr(float(x))


def _load(path):
    spec = CurveFile.load(path)
    curve = spec.build()
    if isinstance(curve, HolCurve):
        return spec, lift_curve(curve)
    return spec, float_harmonic_sequence(curve)


def _metric(args, lift) -> InvariantMetric:
    if args.weights is None:
        return InvariantMetric((1,) * lift.p)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        m = InvariantMetric.parse(args.weights)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if len(m) != lift.p:
        raise WeightCountMismatch(f"{len(m)} weights given for {lift.p} levels")
    return m


def _is_exact(lift) -> bool:
    return hasattr(lift, "gammas")


# -- commands ---------------------------------------------------------------------------

def cmd_sequence(args, out):
    _, lift = _load(args.file)
    data = {"ranks": list(lift.ranks), "flag": "F_{" + ",".join(map(str, lift.ranks)) + "}"}
    if _is_exact(lift):
        data["gamma"] = [_ratfn_json(g) for g in lift.gammas]
    else:
        data["gamma_at_unit_circle"] = [_float_str(lift.gamma(j, np.array(1.0 + 0j))) for j in range(lift.p)]
    if args.json:
        out.write(json.dumps(data, sort_keys=True) + "\n")
        return
    out.write(f"ranks: {', '.join(map(str, lift.ranks))}\n")
    out.write(f"flag: {data['flag']}\n")
    for j in range(lift.p):
        if _is_exact(lift):
            out.write(f"gamma_{j} = {lift.gammas[j]}\n")
        else:
            out.write(f"gamma_{j}(1) = {data['gamma_at_unit_circle'][j]}\n")


def cmd_curvature(args, out):
    _, lift = _load(args.file)
    m = _metric(args, lift)
    rho = induced_metric(lift, m)
    k = curvature(rho)
    data = {"weights": [str(w) for w in m.weights]}
    if isinstance(k, RationalFn):
        c = constant_value(k)
        data.update(K=_ratfn_json(k), constant=c is not None, value=None if c is None else str(c))
        text = f"K = {k}\n" + (f"constant, K = {c}\n" if c is not None else "nonconstant\n")
    else:
        const, mean, spread = float_constancy(k)
        data.update(constant=const, value=_float_str(mean) if const else None, spread=_float_str(spread))
        text = (f"constant, K = {mean!r} (spread {spread:.3e})\n" if const
                else f"nonconstant (spread {spread:.3e})\n")
    out.write(json.dumps(data, sort_keys=True) + "\n" if args.json else text)


def cmd_degrees(args, out):
    spec, lift = _load(args.file)
    if not spec.compact:
        raise NonCompactDomain("degrees need a curve defined on the whole sphere")
    ds = degrees(lift)
    if args.json:
        out.write(json.dumps({"degrees": list(ds)}) + "\n")
    else:
        out.write(f"degrees: {', '.join(map(str, ds))}\n")


def cmd_maximize(args, out):
    spec, lift = _load(args.file)
    if not spec.compact:
        raise NonCompactDomain("area maximisation needs a curve defined on the whole sphere")
    ds = degrees(lift)
    best = maximize_area(ds)
    data = {"degrees": list(ds), "direction": list(best.direction), "norm_square": best.norm_square,
            "weights": [_float_str(w) for w in best.weights], "max_area": _float_str(best.max_area)}
    if args.json:
        out.write(json.dumps(data) + "\n")
        return
    out.write(f"degrees: {', '.join(map(str, ds))}\n")
    out.write(f"maximizer: ({', '.join(map(str, best.direction))}) / sqrt({best.norm_square})\n")
    out.write(f"weights: {', '.join(f'{w:.12f}' for w in best.weights)}\n")
    out.write(f"max area: pi*sqrt({best.norm_square}) = {best.max_area:.12f}\n")


def plot_rows(lift, m: InvariantMetric, samples: int):
    """(phi, mean K over PLOT_PHASES phases or None at a pole) per latitude."""
    k = curvature(induced_metric(lift, m))
    phis = latitude_grid(samples)
    thetas = phase_grid(PLOT_PHASES)
    rows = []
    for phi in phis:
        z = latitude_points(phi, thetas)
        if isinstance(k, RationalFn):
            den = k.den(z)
            if np.any(np.abs(den) <= 1e-12):
                rows.append((float(phi), None))
                continue
            vals = np.real(k.num(z) / den)
        else:
            vals = np.asarray(k(z))
        rows.append((float(phi), float(np.mean(vals)) if np.all(np.isfinite(vals)) else None))
    return rows


def cmd_plot(args, out):
    _, lift = _load(args.file)
    m = _metric(args, lift)
    if args.samples < 2:
        raise ValueError("--samples must be at least 2")
    rows = plot_rows(lift, m, args.samples)
    buf = io.StringIO(newline="")
    buf.write("phi,K\n")
    for phi, val in rows:
        buf.write(f"{phi!r},{'' if val is None else repr(val)}\n")
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_certify(args, out):
    spec = CurveFile.load(args.file)
    if spec.backend != "exact":
        raise ExactRequired("certify needs the exact backend")
    lift = lift_curve(spec.build())
    cert = congruence_test(lift)
    levels = []
    for c in cert.levels:
        levels.append(None if c is None else
                      {"exponent": c.exponent, "constant": str(c.constant), "factor": str(c.factor),
                       "base": str(c.base)})
    data = {"verdict": cert.verdict.value, "levels": levels}
    if cert.alphas is not None:
        data["alphas"] = list(cert.alphas)
    if args.json:
        out.write(json.dumps(data) + "\n")
        return
    if cert.alphas is not None:
        out.write(f"{cert.verdict.value}({', '.join(map(str, cert.alphas))})\n")
    elif cert.verdict is Verdict.LOCALLY_VERONESE:
        out.write(f"{cert.verdict.value}({', '.join(str(h) for h in cert.factors)})\n")
    else:
        out.write(cert.verdict.value + "\n")
    for j, c in enumerate(cert.levels):
        if c is None:
            out.write(f"level {j}: no factorisation\n")
        else:
            out.write(f"level {j}: beta = {c.constant} |{c.factor}|^2 ({c.base})^{c.exponent}\n")


COMMANDS = {
    "sequence": cmd_sequence,
    "curvature": cmd_curvature,
    "degrees": cmd_degrees,
    "maximize": cmd_maximize,
    "plot": cmd_plot,
    "certify": cmd_certify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flagcurve", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("file")
    parser.add_argument("--lambda", dest="weights", metavar="L",
                        help="comma-separated weights, e.g. 1,1 or 0.894,0.447")
    parser.add_argument("--samples", type=int, default=64, metavar="N")
    parser.add_argument("--out", metavar="PATH")
    parser.add_argument("--json", action="store_true")
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args, out)
    except (PolySyntaxError, OSError) as exc:
        print(f"{args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WeightCountMismatch as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_WEIGHTS
    except NonCompactDomain as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_NONCOMPACT
    except ExactRequired as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_EXACT
    except (FlagCurveError, ValueError, ArithmeticError) as exc:
        print(f"{args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())


def main_entry() -> None:
    sys.exit(main())
