"""Command-line front end.

Commands::

    nmlregret info      --family bernoulli
    nmlregret classify  --family exp_cauchy --format json
    nmlregret integrals --family gamma2 --range -1 0
    nmlregret regret    --family gaussian_restricted --n 10,100 --format csv
    nmlregret capacity  --family bernoulli --range -2 2 --n 16

Every command selects a family either by catalog name (``--family``) or
from a declarative JSON file (``--file``).  ``info --format json`` emits
that declarative form, so families round-trip through files.

Exit codes: 0 success (for ``classify``: indicator consensus), 2 usage
error, 3 indicator disagreement, 4 all indicators inconclusive.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .catalog import get as catalog_get, names as catalog_names
from .errors import NmlRegretError, BadParameter
from .family import ExpFamily
from .measure import BaseMeasure
from .quadrature import DEFAULT_CONFIG, QuadConfig

_LOG2 = math.log(2.0)
_TOL_ENV = "NMLREGRET_TOL"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DISAGREEMENT = 3
EXIT_INCONCLUSIVE = 4


# ---------------------------------------------------------------------------
# family selection and serialization


def family_to_dict(fam: ExpFamily) -> dict:
    return {
        "name": fam.name,
        "beta_inf": fam.beta_inf,
        "beta_sup": fam.beta_sup,
        "base": fam.base.to_dict(),
    }


def family_from_dict(d: dict) -> ExpFamily:
    try:
        base = BaseMeasure.from_dict(d["base"])
    except KeyError as e:
        raise BadParameter(f"family file missing key {e}")
    return ExpFamily(
        base=base,
        beta_inf=float(d.get("beta_inf", -math.inf)),
        beta_sup=float(d.get("beta_sup", math.inf)),
        name=str(d.get("name", "family")),
    )


def _load_family(args) -> ExpFamily:
    if args.family is not None:
        return catalog_get(args.family).family
    try:
        with open(args.file) as fh:
            d = json.load(fh)
    except OSError as e:
        raise BadParameter(f"cannot read family file: {e}")
    except json.JSONDecodeError as e:
        raise BadParameter(f"family file is not valid JSON: {e}")
    return family_from_dict(d)


def _apply_tol(fam: ExpFamily, args) -> ExpFamily:
    tol = args.tol
    if tol is None:
        env = os.environ.get(_TOL_ENV)
        if env is not None:
            try:
                tol = float(env)
            except ValueError:
                raise BadParameter(f"{_TOL_ENV} must be a number, got {env!r}")
    if tol is None:
        return fam
    if not 0.0 < tol < 1.0:
        raise BadParameter(f"tolerance must lie in (0, 1), got {tol}")
    from dataclasses import replace
    cfg = replace(fam.quad_config, rel_tol=tol)
    return replace(fam, quad_config=cfg, _cache={})


def _scale(args) -> float:
    return 1.0 if args.units == "nats" else 1.0 / _LOG2


# ---------------------------------------------------------------------------
# rendering


def _render_table(rows, header=None, out=None) -> None:
    out = out or sys.stdout
    rows = [[str(c) for c in r] for r in rows]
    if header:
        rows.insert(0, [str(c) for c in header])
    if not rows:
        return
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for i, r in enumerate(rows):
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip(), file=out)
        if header and i == 0:
            print("  ".join("-" * w for w in widths), file=out)


def _emit_json(obj, out=None) -> None:
    out = out or sys.stdout
    json.dump(obj, out, indent=2, default=_json_default)
    out.write("\n")


def _json_default(o):
    try:
        return float(o)
    except (TypeError, ValueError):
        return str(o)


# ---------------------------------------------------------------------------
# commands


def cmd_info(args) -> int:
    fam = _apply_tol(_load_family(args), args)
    mr = fam.mean_range()
    if args.format == "json":
        d = family_to_dict(fam)
        d["mean_range"] = {"mu_inf": mr.mu_inf, "mu_sup": mr.mu_sup,
                           "inf_attained": mr.inf_attained,
                           "sup_attained": mr.sup_attained}
        _emit_json(d)
        return EXIT_OK
    rows = [
        ("family", fam.name),
        ("beta domain", f"({fam.beta_inf:g}, {fam.beta_sup:g})"),
        ("mean range", f"({mr.mu_inf:g}, {mr.mu_sup:g})"
                       f" inf_attained={mr.inf_attained}"
                       f" sup_attained={mr.sup_attained}"),
        ("atoms", len(fam.base.atoms)),
        ("density pieces", len(fam.base.density_pieces)),
        ("lattice part", fam.base.counting is not None),
    ]
    _render_table(rows)
    samples = _info_samples(fam)
    if samples:
        print()
        _render_table(samples, header=("beta", "log Z", "mean", "variance"))
    return EXIT_OK


def _info_samples(fam: ExpFamily):
    from .capacity import _anchor
    c = _anchor(fam.beta_inf, fam.beta_sup)
    s = max(abs(c), 1.0)
    betas = [b for b in (c - s, c - s / 2, c, c + s / 2, c + s)
             if fam.contains(b, interior=True)]
    rows = []
    for b in betas:
        try:
            rows.append((f"{b:g}", f"{fam.log_partition(b):.6g}",
                         f"{fam.mean_value(b):.6g}", f"{fam.variance(b):.6g}"))
        except NmlRegretError:
            rows.append((f"{b:g}", "n/a", "n/a", "n/a"))
    return rows


def cmd_classify(args) -> int:
    from .integrals import classify

    fam = _apply_tol(_load_family(args), args)
    rep = classify(fam)
    d = rep.to_dict()
    if args.format == "json":
        _emit_json(d)
    else:
        rows = [("consensus", d["consensus"])]
        rows += [(f"indicator: {k}", v) for k, v in d["indicators"].items()]
        rows += [
            ("jeffreys", d["jeffreys"]["status"]),
            ("tail_alpha", d["tail_alpha"]),
            ("left_end", d["left_end"]["status"] if d["left_end"] else "n/a"),
            ("left_end_atom", d["left_end_atom"]),
            ("theorem2_violation", d["theorem2_violation"]),
        ]
        _render_table(rows)
    if d["consensus"].startswith("Disagreement"):
        return EXIT_DISAGREEMENT
    if d["consensus"] == "Inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_integrals(args) -> int:
    from .integrals import jeffreys_canonical, jeffreys_mean, shtarkov_integral

    fam = _apply_tol(_load_family(args), args)
    rng = tuple(args.range) if args.range is not None else None
    s = _scale(args)
    shk = shtarkov_integral(fam)
    jc = jeffreys_canonical(fam, rng)
    out = {
        "family": fam.name,
        "units": args.units,
        "shtarkov": shk.to_dict(),
        "log_shtarkov": math.log(shk.value) * s if shk.is_finite else None,
        "jeffreys_canonical": jc.to_dict(),
    }
    if rng is None:
        jm = jeffreys_mean(fam)
        out["jeffreys_mean"] = jm.to_dict()
    if args.format == "json":
        _emit_json(out)
    else:
        rows = [("shtarkov", shk.status,
                 f"{shk.value:.10g}" if shk.is_finite else "-"),
                ("log shtarkov", "",
                 f"{out['log_shtarkov']:.10g} {args.units}"
                 if out["log_shtarkov"] is not None else "-"),
                ("jeffreys (canonical)", jc.status,
                 f"{jc.value:.10g}" if jc.is_finite else jc.detail)]
        if "jeffreys_mean" in out:
            jm_d = out["jeffreys_mean"]
            rows.append(("jeffreys (mean)", jm_d["status"],
                         f"{jm_d['value']:.10g}" if jm_d["value"] is not None
                         else jm_d["detail"]))
        _render_table(rows, header=("quantity", "status", "value"))
    return EXIT_OK


def cmd_regret(args) -> int:
    from .regret import curve_to_csv, regret_gap_curve

    fam = _apply_tol(_load_family(args), args)
    ineccsi = tuple(args.range) if args.range is not None else None
    ns = args.n or [1]
    reports = regret_gap_curve(fam, ineccsi, ns)
    if args.format == "csv":
        sys.stdout.write(curve_to_csv(reports, args.units))
    elif args.format == "json":
        _emit_json({"family": fam.name, "units": args.units,
                    "curve": [r.to_dict(args.units) for r in reports]})
    else:
        rows = [(r.n,) + tuple(f"{v:.8g}" for v in
                               (r.to_dict(args.units)["log_shtarkov"],
                                r.to_dict(args.units)["asymptote"],
                                r.to_dict(args.units)["gap"],
                                r.j_value))
                for r in reports]
        _render_table(rows, header=("n", f"log_shtarkov ({args.units})",
                                    "asymptote", "gap", "j_value"))
    return EXIT_OK


def cmd_capacity(args) -> int:
    from .capacity import blahut_arimoto, capacity_refinement

    fam = _apply_tol(_load_family(args), args)
    s = _scale(args)
    if args.range is not None:
        lo, hi = args.range
        n = args.n[0] if args.n else 16
        if n < 1:
            raise BadParameter("need at least one grid point")
        if n == 1:
            grid = [0.5 * (lo + hi)]
        else:
            step = (hi - lo) / (n - 1)
            grid = [lo + step * i for i in range(n)]
        res = blahut_arimoto(fam, grid)
        out = {"family": fam.name, "units": args.units, "mode": "grid",
               "grid_points": len(grid),
               "capacity": res.capacity_nats * s,
               "iterations": res.iterations}
        rows = [("capacity", f"{res.capacity_nats * s:.10g} {args.units}"),
                ("grid points", len(grid)),
                ("iterations", res.iterations)]
    else:
        v = capacity_refinement(fam)
        caps = [c * s for c in v.capacities]
        out = {"family": fam.name, "units": args.units, "mode": "refinement",
               "status": v.status, "capacities": caps, "detail": v.detail}
        rows = [("status", v.status), ("detail", v.detail)] + \
               [(f"stage {i}", f"{c:.8g} {args.units}")
                for i, c in enumerate(caps)]
    if args.format == "json":
        _emit_json(out)
    else:
        _render_table(rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit with code 2
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(p: argparse.ArgumentParser, formats=("table", "json")) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", metavar="NAME",
                     help="catalog family name (one of: %s)" % ", ".join(catalog_names()))
    src.add_argument("--file", metavar="PATH",
                     help="declarative family JSON file")
    p.add_argument("--format", choices=formats, default="table",
                   help="output format (default table)")
    p.add_argument("--units", choices=("nats", "bits"), default="nats",
                   help="unit for logarithmic quantities (default nats)")
    p.add_argument("--tol", type=float, default=None,
                   help="relative quadrature tolerance "
                        f"(default from ${_TOL_ENV} when set)")


def _int_list(text: str):
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nmlregret",
                 description="Finiteness classification and minimax-regret "
                             "computation for 1-d exponential families")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="domain, mean range, and sample statistics")
    _add_common(p)
    p.set_defaults(fn=cmd_info)

    p = sub.add_parser("classify", help="evaluate every finiteness indicator")
    _add_common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("integrals", help="NML and Fisher-root integrals")
    _add_common(p)
    p.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"),
                   help="canonical parameter window for the Fisher-root integral")
    p.set_defaults(fn=cmd_integrals)

    p = sub.add_parser("regret", help="minimax regret and asymptotic gap curve")
    _add_common(p, formats=("table", "json", "csv"))
    p.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"),
                   help="compact mean-value window (required when the full "
                        "family has infinite regret)")
    p.add_argument("--n", type=_int_list, metavar="N[,N...]",
                   help="sample sizes (default 1)")
    p.set_defaults(fn=cmd_regret)

    p = sub.add_parser("capacity", help="channel capacity of a parameter grid")
    _add_common(p)
    p.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"),
                   help="canonical parameter interval for a uniform grid "
                        "(omit to run the refinement sequence)")
    p.add_argument("--n", type=_int_list, metavar="N",
                   help="number of grid points (default 16)")
    p.set_defaults(fn=cmd_capacity)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except NmlRegretError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
