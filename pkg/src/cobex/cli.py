"""Command-line front end (``cobex``).

Exit codes: 0 success, 2 usage error, 3 budget exceeded, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction

from . import complex as cx
from .cochain import Q_MAX, W_CAP, Cochain, cohomology_dim
from .errors import BudgetExceeded, CobexError, NumericFailure
from .expansion import (
    BUDGET,
    FAMILIES,
    coboundary_expansion,
    filling_norm,
    predicted_bounds,
)
from .gf2 import GF2Vector

EXIT_USAGE, EXIT_BUDGET, EXIT_NUMERIC = 2, 3, 4


def frac(x) -> str | None:
    """Exact rationals travel as "num/den" strings."""
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _label_json(lab):
    return lab if isinstance(lab, str) else list(lab)


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- complex selection ------------------------------------------------------------------


def _add_complex_args(p: argparse.ArgumentParser, with_k: bool = True) -> None:
    p.add_argument("path", nargs="?", help="complex JSON file (alternative to --family)")
    p.add_argument("--family", choices=FAMILIES, help="generate a standard complex")
    p.add_argument("--n", type=int, help="family size parameter")
    p.add_argument("--dim", type=int, help="simplex: top dimension of the skeleton (default k+1)")
    p.add_argument("--family-k", type=int, help="multipartite: join k+2 parts (default: --k)")
    if with_k:
        p.add_argument("--k", type=int, default=0, help="cochain dimension (default 0)")


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q-max", type=int, default=Q_MAX, help=f"max quotient dimension (default {Q_MAX})")
    p.add_argument("--w-cap", type=int, default=W_CAP, help=f"leader weight cap (default {W_CAP})")
    p.add_argument("--budget", type=int, default=BUDGET, help=f"max coset visits (default {BUDGET:g})")
    p.add_argument("--workers", type=int, default=None,
                   help="worker count (default $COBEX_WORKERS or 1)")
    p.add_argument("--unreduced", action="store_true", help="use the unreduced cochain complex")


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return args.workers
    return int(os.environ.get("COBEX_WORKERS", "1"))


def _solver(args) -> dict:
    return {"q_max": args.q_max, "w_cap": args.w_cap, "budget": args.budget,
            "workers": _workers(args)}


def _complex(args, parser, k: int | None = None) -> cx.Complex:
    if args.path:
        return cx.load(args.path)
    if not args.family or args.n is None:
        parser.error("give a complex file or --family with --n")
    k = getattr(args, "k", 0) if k is None else k
    if args.family == "simplex":
        dim = args.dim if args.dim is not None else min(k + 1, args.n - 1)
        return cx.build_simplex_skeleton(args.n, dim)
    if args.family == "cube":
        return cx.build_cube(args.n)
    if args.family == "cross":
        return cx.build_cross_polytope(args.n)
    fk = args.family_k if args.family_k is not None else k
    return cx.build_multipartite(args.n, fk)


def _predicted(args) -> str | None:
    if not args.family or args.path:
        return None
    k = getattr(args, "k", 0)
    return frac(predicted_bounds(args.family, args.n, k))


def _cells(x: cx.Complex, k: int, text: str) -> Cochain:
    labels = json.loads(text)
    return Cochain.from_labels(x, k, labels)


# -- subcommands ------------------------------------------------------------------------------


def cmd_gen(args, parser):
    x = _complex(args, parser, k=args.dim - 1 if args.dim else (args.n or 1) - 1)
    _emit(x.to_json(), args.out)


def cmd_info(args, parser):
    x = _complex(args, parser)
    degrees = []
    for k in range(x.top_dim):
        prof = cx.degree_profile(x, k)
        degrees.append({"k": k, "max": prof.max_degree, "min": prof.min_degree,
                        "mean": frac(prof.mean_degree)})
    _emit({"kind": x.kind, "top_dim": x.top_dim, "cells_per_dim": list(x.cells_per_dim),
           "degree_profiles": degrees})


def cmd_cohomology(args, parser):
    x = _complex(args, parser)
    dims = {str(k): cohomology_dim(x, k, not args.unreduced) for k in range(x.top_dim + 1)}
    _emit({"reduced": not args.unreduced, "cells_per_dim": list(x.cells_per_dim), "dims": dims})


def cmd_expansion(args, parser):
    x = _complex(args, parser)
    solver = _solver(args)
    rep = coboundary_expansion(x, args.k, not args.unreduced, **solver)
    out = {
        "h": frac(rep.value),
        "status": rep.status,
        "predicted": _predicted(args),
        "k": args.k,
        "lower": frac(rep.lower),
        "upper": frac(rep.upper),
        "quotient_dim": rep.quotient_dim,
        "cosets_enumerated": rep.cosets_enumerated,
        "cells_per_dim": list(x.cells_per_dim),
        "witness": [_label_json(l) for l in rep.witness.support_labels()] if rep.witness else None,
    }
    if rep.notes:
        out["notes"] = rep.notes
    _emit(out)
    return 0 if rep.status != "bounds" or not args.strict else EXIT_BUDGET


def cmd_filling_norm(args, parser):
    x = _complex(args, parser)
    solver = _solver(args)
    rep = filling_norm(x, args.k, q_max=solver["q_max"], w_cap=solver["w_cap"],
                       budget=solver["budget"], workers=solver["workers"])
    out = {"k": args.k, "filling_norm": frac(rep.value), "quotient_dim": rep.quotient_dim,
           "cohomology_dim": cohomology_dim(x, args.k)}
    if rep.witness is not None:
        out["witness_coboundary"] = [_label_json(l) for l in rep.witness.support_labels()]
        out["cheapest_fill"] = [_label_json(l) for l in rep.fill.support_labels()]
    if out["cohomology_dim"] == 0:
        h = coboundary_expansion(x, args.k, **solver)
        if h.exact and h.value:
            out["h"] = frac(h.value)
            out["identity_holds"] = rep.value * h.value * x.count(args.k) == x.count(args.k + 1)
    _emit(out)


def cmd_fill_cube(args, parser):
    from .filling import _cube, cube_fill, min_fill_oracle, random_cycle

    cube = _cube(args.n)
    if args.cycle:
        z = GF2Vector.from_support(cube.count(args.j),
                                   (cube.index_of(args.j, lab) for lab in json.loads(args.cycle)))
    else:
        z = random_cycle(args.n, args.j, random.Random(args.seed))
    res = cube_fill(args.n, args.j, z, args.strategy)
    out = {
        "n": args.n, "j": args.j, "strategy": args.strategy,
        "z": [cube.labels(args.j)[i] for i in z.support()],
        "y": [cube.labels(args.j + 1)[i] for i in res.y.support()],
        "vol_z": z.weight(), "vol_y": res.y.weight(),
        "achieved_ratio": frac(res.achieved_ratio), "bound": frac(res.bound),
        "within_bound": res.within_bound,
    }
    if args.oracle:
        out["min_fill"] = min_fill_oracle(args.n, args.j, z)
    _emit(out)


def cmd_dual(args, parser):
    from .filling import _cross, _cube, dual_index_map, duality_commutes

    cross, cube = _cross(args.n), _cube(args.n)
    idx = dual_index_map(args.n, args.k)
    pairs = [[list(cross.labels(args.k)[i]), cube.labels(args.n - args.k - 1)[c]]
             for i, c in enumerate(idx)]
    out = {"n": args.n, "k": args.k, "map": pairs}
    if args.k < args.n - 1:
        m = cross.count(args.k)
        bad = sum(not duality_commutes(args.n, args.k, GF2Vector(m, 1 << i)) for i in range(m))
        out["commuting_mismatches"] = bad
    _emit(out)


def cmd_cheeger(args, parser):
    from .spectral import cheeger_buser_check

    x = _complex(args, parser, k=0)
    rep = cheeger_buser_check(x, **_solver(args))
    _emit({"lambda1": rep.lambda1, "max_degree": rep.max_degree, "h": frac(rep.h_z2),
           "cheeger_lower": rep.cheeger_lower, "buser_upper": rep.buser_upper,
           "lower_ok": rep.lower_ok, "upper_ok": rep.upper_ok})
    return 0 if rep.ok else EXIT_NUMERIC


def cmd_spectral(args, parser):
    from .spectral import (eigenvalues_sym, graph_laplacian, real_expansion_probe,
                           up_down_laplacian_gap)

    x = _complex(args, parser)
    vals = eigenvalues_sym(graph_laplacian(x))
    out = {"laplacian_eigenvalues": vals, "lambda1": vals[1] if len(vals) > 1 else 0.0}
    if args.probes and out["lambda1"] > 1e-9:
        pr = real_expansion_probe(x, args.probes, args.seed)
        out["probe"] = {"sqrt_lambda1": pr.sqrt_lambda1, "eigvec_quotient": pr.eigvec_quotient,
                        "min_probe_quotient": pr.min_probe_quotient, "ok": pr.ok}
    if args.k:
        out["up_down_gap"] = {"k": args.k, "gap": up_down_laplacian_gap(x, args.k),
                              "exploratory": True}
    _emit(out)


def _ambient_for(args, parser):
    from .random_models import ambient_complex

    if args.model == "p-subcomplex":
        amb = _complex(args, parser, k=args.k)
        return ambient_complex(args.model, amb.count(0), args.k, amb)
    return ambient_complex(args.model, args.n, args.k)


def cmd_sample(args, parser):
    from .random_models import SampleSpec, sample, MODEL_ALIASES

    args.model = MODEL_ALIASES.get(args.model, args.model)
    amb = _ambient_for(args, parser) if args.model == "p-subcomplex" else None
    spec = SampleSpec(args.model, args.n or 0, args.k, args.p, args.seed, args.trial, amb)
    y = sample(spec)
    _emit(y.to_json(), args.out)


def _write_curve(points, args, extra: dict) -> None:
    from .random_models import curve_to_csv

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(curve_to_csv(points))
    rows = [{"p": pt.p, "trials": pt.trials, "successes": pt.successes,
             "fraction": pt.fraction, "std_err": pt.std_err, "mean_value": pt.mean_value,
             "indeterminate": pt.indeterminate} for pt in points]
    _emit({**extra, "points": rows})


def cmd_sweep(args, parser):
    from .random_models import (MODEL_ALIASES, ExperimentConfig, crossing_point, load_config,
                                parse_p_grid, threshold_sweep)

    if args.config:
        cfg = load_config(args.config)
        if args.workers:
            cfg.workers = args.workers
    else:
        if args.n is None or not args.p_grid:
            parser.error("sweep needs --n and --p-grid (or --config)")
        model = MODEL_ALIASES.get(args.model, args.model)
        measure = args.measure or ("connectivity" if args.k == 0 else "cohomology-vanishing")
        cfg = ExperimentConfig(model, args.n, args.k, parse_p_grid(args.p_grid), args.trials,
                               seed=args.seed, measure=measure, workers=_workers(args))
    pts = threshold_sweep(cfg)
    lm = (cfg.k + 1) * math.log(cfg.n) / cfg.n if cfg.n > 1 else None
    _write_curve(pts, args, {"model": cfg.model, "n": cfg.n, "k": cfg.k,
                             "crossing": crossing_point(pts), "predicted_threshold": lm})


def cmd_inherit_mc(args, parser):
    from .random_models import (ExperimentConfig, expansion_inheritance_mc, parse_p_grid,
                                theoretical_threshold)

    amb = _complex(args, parser)
    cfg = ExperimentConfig("p-subcomplex", amb.count(0), args.k, parse_p_grid(args.p_grid),
                           args.trials, seed=args.seed, epsilon=args.epsilon, omega=args.omega,
                           measure="exact-expansion", workers=_workers(args))
    solver = {"q_max": args.q_max, "w_cap": args.w_cap, "budget": args.budget}
    h_x, pts = expansion_inheritance_mc(amb, args.k, cfg, solver)
    _write_curve(pts, args, {
        "h_ambient": frac(h_x), "epsilon": args.epsilon,
        "theoretical_threshold": theoretical_threshold(amb.count(args.k), h_x, args.epsilon,
                                                       args.omega),
    })


def cmd_concentration(args, parser):
    from .random_models import coboundary_concentration

    amb = _complex(args, parser)
    beta = _cells(amb, args.k, args.cells)
    eps = [float(e) for e in args.epsilons.split(",")]
    rows = []
    for p in (float(v) for v in args.p.split(",")):
        st = coboundary_concentration(amb, args.k, beta, p, args.trials, args.seed, eps)
        rows.append({"p": p, "full_norm": st.full_norm, "mean": st.mean, "std_err": st.std_err,
                     "expected_mean": st.expected_mean,
                     "tails": [{"epsilon": t.epsilon, "frequency": t.frequency,
                                "chernoff_bound": t.bound, "sigma": t.sigma, "ok": t.ok}
                               for t in st.tails]})
    _emit({"k": args.k, "cochain": json.loads(args.cells), "results": rows})


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cobex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a standard complex as JSON")
    _add_complex_args(p, with_k=False)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("info", help="cell counts and degree profiles")
    _add_complex_args(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("cohomology", help="Z2 cohomology dimensions")
    _add_complex_args(p)
    p.add_argument("--unreduced", action="store_true")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("expansion", help="exact coboundary expansion h^k")
    _add_complex_args(p)
    _add_solver_args(p)
    p.add_argument("--strict", action="store_true", help="exit 3 when only bounds are available")
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("filling-norm", help="filling norm ||d^-1_k||")
    _add_complex_args(p)
    _add_solver_args(p)
    p.set_defaults(func=cmd_filling_norm)

    p = sub.add_parser("fill-cube", help="fill a j-cycle in the n-cube")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--cycle", help='JSON list of cube cell labels, e.g. \'["000","111"]\'')
    p.add_argument("--seed", type=int, default=0, help="seed for a random cycle")
    p.add_argument("--strategy", choices=("exhaustive", "greedy"), default="exhaustive")
    p.add_argument("--oracle", action="store_true", help="also report the exact minimum fill")
    p.set_defaults(func=cmd_fill_cube)

    p = sub.add_parser("dual", help="cross-polytope/cube duality map")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("cheeger", help="Cheeger-Buser sandwich for a graph")
    _add_complex_args(p, with_k=False)
    _add_solver_args(p)
    p.set_defaults(func=cmd_cheeger)

    p = sub.add_parser("spectral", help="Laplacian spectrum, R-expansion probe, up-down gap")
    _add_complex_args(p)
    p.add_argument("--probes", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_spectral)

    def random_args(p, with_family=True):
        p.add_argument("--model", default="lm",
                       help="erdos-renyi|er, linial-meshulam|lm, p-subcomplex")
        if with_family:
            _add_complex_args(p)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sample", help="draw one random complex")
    random_args(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("sweep", help="H^k-vanishing / connectivity threshold sweep")
    random_args(p, with_family=False)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p-grid", help="start:stop:step (inclusive) or comma list")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--measure", choices=("cohomology-vanishing", "connectivity"))
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--csv", help="write the curve as CSV")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("inherit-mc", help="expansion inheritance Monte Carlo")
    _add_complex_args(p)
    _add_solver_args(p)
    p.add_argument("--p-grid", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_inherit_mc)

    p = sub.add_parser("concentration", help="Chernoff tail of |d beta| under p-thinning")
    _add_complex_args(p)
    p.add_argument("--cells", required=True, help="JSON list of k-cell labels forming beta")
    p.add_argument("--p", required=True, help="probability or comma list")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--epsilons", default="0.3,0.5")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_concentration)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code = args.func(args, parser)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"cobex: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NumericFailure as exc:
        print(f"cobex: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CobexError, ValueError, KeyError, OSError) as exc:
        print(f"cobex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code or 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
