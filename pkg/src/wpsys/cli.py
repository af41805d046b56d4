"""Command-line interface: ``wpsys <command> ...``.

Every command renders its result to a string first, so the same bytes go to
stdout, to ``--out`` and into the sha256 recorded by ``--manifest``.  Floats
are printed with 17 significant digits.

Exit codes: 0 ok, 1 replay mismatch, 2 bad input / unknown surface type,
3 quadrature tolerance not met, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from decimal import Decimal, InvalidOperation
from importlib import metadata

from .errors import ArityMismatch, EmptyRange, ToleranceNotMet, UnknownType
from .estimators import BoundConstants, regime_classify, systole_prob_estimate
from .multicurve import case_table, separating_bound
from .poisson import SimConfig, count_moments, empirical_systole_cdf, simulate, window_mean
from .quadrature import DEFAULT_QUAD, QuadratureConfig
from .spectral import critical_length, expected_count, expected_count_result, growth, growth_inverse, growth_result
from .wp_poly import evaluate, load_table

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_TOLERANCE, EXIT_IO = 0, 1, 2, 3, 4
MANIFEST_VERSION = 1


class UsageError(ValueError):
    pass


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return fmt(x)
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


def dump_json(doc) -> str:
    # json uses repr() for floats, which already round-trips; keep it for stable bytes
    return json.dumps(_json_safe(doc), indent=2, sort_keys=False) + "\n"


def dump_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: fmt(v) for k, v in r.items()})
    return buf.getvalue()


def dump_text(title: str, fields: dict, rows: list[dict] | None = None) -> str:
    lines = [title]
    width = max((len(k) for k in fields), default=0)
    lines += [f"  {k.ljust(width)}  {fmt(v)}" for k, v in fields.items()]
    if rows:
        lines.append("")
        lines.append(",".join(rows[0]))
        lines += [",".join(fmt(v) for v in r.values()) for r in rows]
    return "\n".join(lines) + "\n"


# ---- argument parsing helpers -------------------------------------------------

def exact_int(text: str) -> int:
    """'1e6', '1000000', '2.5e3' -> exact int; rejects non-integral values."""
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not d.is_finite() or d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def positive_int(text: str) -> int:
    v = exact_int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def float_list(text: str) -> list[float]:
    if text.strip() == "":
        return []
    return [finite_float(t) for t in text.split(",")]


def _quad(args) -> QuadratureConfig:
    return QuadratureConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol, max_subdivisions=args.max_subdivisions)


def _consts(args) -> BoundConstants:
    if getattr(args, "constants", None):
        try:
            return BoundConstants.from_file(args.constants)
        except OSError as e:
            raise OSError(f"cannot read constants file: {e}") from e
    return BoundConstants()


def _render(args, title: str, fields: dict, rows: list[dict] | None = None, schema: str = "") -> str:
    if getattr(args, "json", False):
        doc = {"command": args.command, "schema": schema, **fields}
        if rows is not None:
            doc["rows"] = rows
        return dump_json(doc)
    if getattr(args, "csv", False):
        return dump_csv(rows if rows else [fields])
    return dump_text(title, fields, rows)


# ---- commands -------------------------------------------------------------------

def cmd_volume(args) -> str:
    table = load_table(args.table)
    poly = table[(args.g, args.n)]
    lengths = args.at if args.at is not None else [0.0] * args.n
    if len(lengths) == 1 and args.n > 1:
        lengths = lengths * args.n
    if len(lengths) != args.n:
        raise ArityMismatch(f"V_{{{args.g},{args.n}}} takes {args.n} lengths, got {len(lengths)}")
    value = evaluate(poly, lengths)
    fields = {"g": args.g, "n": args.n, "polynomial": str(poly), "lengths": lengths, "value": value}
    rows = [{"g": args.g, "n": args.n, **{f"L{i + 1}": x for i, x in enumerate(lengths)}, "value": value}]
    if args.csv:
        return dump_csv(rows)
    if args.json:
        return _render(args, "", fields, schema="volume")
    return dump_text(f"V_{{{args.g},{args.n}}}", {k: v for k, v in fields.items() if k != "lengths"}
                     | {"lengths": ",".join(fmt(x) for x in lengths)})


def cmd_integrals(args) -> str:
    cfg = _quad(args)
    which = args.which
    fields: dict = {"quantity": which}
    if which == "I":
        r = expected_count_result(_need(args.L, "--L"), cfg)
        fields.update(L=args.L, value=r.value, abserr=r.abserr, panels=r.intervals)
    elif which == "T":
        r = growth_result(_need(args.L, "--L"), cfg)
        fields.update(L=args.L, value=r.value, abserr=r.abserr, panels=r.intervals)
    elif which == "C":
        r = expected_count_result(1.0, cfg)
        fields.update(value=r.value, abserr=r.abserr, panels=r.intervals)
    elif which == "Tinv":
        y = _need(args.y, "--y")
        L = growth_inverse(y, cfg)
        fwd = growth(L, cfg)
        fields.update(y=y, value=L, forward=fwd, residual=abs(fwd - y))
    elif which == "L0":
        g = _need(args.g, "--g")
        L = critical_length(g, cfg)
        target = 0.5 * math.log(g)
        fwd = growth(L, cfg)
        fields.update(g=g, value=L, target_half_log_g=target, forward=fwd, residual=abs(fwd - target))
    return _render(args, f"integrals {which}", fields, schema="integrals")


def _need(v, flag):
    if v is None:
        raise UsageError(f"this quantity requires {flag}")
    return v


def cmd_estimate(args) -> str:
    cfg = _quad(args)
    consts = _consts(args)
    g = args.g
    if g < 2:
        raise UsageError("--g must be >= 2")
    if (args.L is None) == (not args.L_from_L0):
        raise UsageError("give exactly one of --L and --L-from-L0")
    L = critical_length(g, cfg) if args.L_from_L0 else args.L
    n_terms = args.n_terms if args.n_terms is not None else 2 * math.ceil(math.log(g))
    if n_terms < 2 or n_terms % 2:
        raise UsageError(f"--n-terms must be a positive even integer, got {n_terms}")
    est = systole_prob_estimate(g, L, n_terms, consts, cfg)
    fields = {"g": g, "L": L, "n_terms": n_terms, "value": est.value, "lower": est.lower, "upper": est.upper}
    fields.update({f"term_{k}": v for k, v in est.terms.items()})
    if g >= 16:
        rep = regime_classify(g, L, args.eps, args.delta, cfg)
        fields["regime"] = rep.regime.value
        fields.update({f"witness_{k}": v for k, v in rep.witnesses.items()})
    if L >= 1:
        fields["T_of_L"] = growth(L, cfg)
        fields["half_log_g"] = 0.5 * math.log(g)
    return _render(args, "systole probability estimate (non-rigorous constants)", fields, schema="estimate")


def cmd_bound(args) -> str:
    consts = _consts(args)
    if args.sweep:
        rows = []
        for e in range(args.sweep[0], args.sweep[1] + 1):
            g = 10**e
            L = args.L_factor * math.log(g)
            n = math.floor(math.log(g))
            b = separating_bound(g, n, L, consts)
            rows.append({"g": g, "n": n, "L": L, **b.terms, "total": b.total})
        fields = {"L_factor": args.L_factor,
                  "strictly_decreasing": all(b["total"] < a["total"] for a, b in zip(rows, rows[1:]))}
        return _render(args, "separating-multicurve bound sweep, L = factor*ln g, n = floor(ln g)",
                       fields, rows, schema="bound")
    g, n, L = _need(args.g, "--g"), _need(args.n, "--n"), _need(args.L, "--L")
    b = separating_bound(g, n, L, consts)
    rows = [{"m": r["m"], "case": r["case"], "bound": r["bound"]} for r in case_table(g, n, L, consts)]
    fields = {"g": g, "n": n, "L": L, **b.terms, "total": b.total}
    return _render(args, "separating-multicurve bound (non-rigorous constants)", fields, rows, schema="bound")


def cmd_simulate(args) -> str:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    cfg = SimConfig(trials=args.trials, seed=args.seed, L=args.L, inversion_grid=args.grid)
    points = args.points if args.points else [t for t in (1.0, 2.0, 3.0) if t <= args.L] or [args.L]
    summary = simulate(cfg)
    cdf = empirical_systole_cdf(cfg, points, summary)
    mean, var = count_moments(cfg, summary)
    rows = []
    for t, p, se in cdf:
        void = math.exp(-expected_count(t))
        rows.append({"t": t, "fraction": p, "stderr": se, "survival": 1.0 - p,
                     "poisson_void": void, "z": (1.0 - p - void) / se if se > 0 else 0.0})
    fields = {"trials": cfg.trials, "seed": cfg.seed, "L": cfg.L, "inversion_grid": cfg.inversion_grid,
              "expected_count": window_mean(cfg), "count_mean": mean, "count_variance": var}
    return _render(args, "Poisson short-spectrum simulation", fields, rows, schema="simulate")


COMMANDS = {"volume": cmd_volume, "integrals": cmd_integrals, "estimate": cmd_estimate,
            "bound": cmd_bound, "simulate": cmd_simulate}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wpsys", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=tool_version())
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, quad=True, formats=True):
        sp.add_argument("--manifest", metavar="PATH", help="write a run manifest here")
        sp.add_argument("--out", metavar="PATH", help="also write the output here")
        if formats:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--json", action="store_true")
            g.add_argument("--csv", action="store_true")
        if quad:
            sp.add_argument("--abs-tol", type=finite_float, default=DEFAULT_QUAD.abs_tol)
            sp.add_argument("--rel-tol", type=finite_float, default=DEFAULT_QUAD.rel_tol)
            sp.add_argument("--max-subdivisions", type=positive_int, default=DEFAULT_QUAD.max_subdivisions)

    v = sub.add_parser("volume", help="print and evaluate a volume polynomial")
    v.add_argument("--g", type=exact_int, required=True)
    v.add_argument("--n", type=exact_int, required=True)
    v.add_argument("--at", type=float_list, help="comma-separated boundary lengths (one value is broadcast)")
    v.add_argument("--table", help="volume table path (default: $WPSYS_TABLE or the shipped table)")
    common(v, quad=False)

    i = sub.add_parser("integrals", help="I, T, T^-1, L0 and C")
    i.add_argument("which", choices=["I", "T", "Tinv", "L0", "C"])
    i.add_argument("--L", type=finite_float)
    i.add_argument("--y", type=finite_float)
    i.add_argument("--g", type=exact_int)
    common(i)

    e = sub.add_parser("estimate", help="systole probability estimate with error budget")
    e.add_argument("--g", type=exact_int, required=True)
    e.add_argument("--L", type=finite_float)
    e.add_argument("--L-from-L0", action="store_true", help="use L = L0(g)")
    e.add_argument("--n-terms", type=exact_int, help="even truncation order (default 2*ceil(ln g))")
    e.add_argument("--constants", metavar="JSON")
    e.add_argument("--eps", type=finite_float, default=0.5)
    e.add_argument("--delta", type=finite_float, default=1.0)
    common(e)

    b = sub.add_parser("bound", help="separating-multicurve length bound and per-m case table")
    b.add_argument("--g", type=exact_int)
    b.add_argument("--n", type=exact_int)
    b.add_argument("--L", type=finite_float)
    b.add_argument("--sweep", type=exact_int, nargs=2, metavar=("E_LO", "E_HI"),
                   help="g = 10^E_LO .. 10^E_HI with L = factor*ln g, n = floor(ln g)")
    b.add_argument("--L-factor", type=finite_float, default=1.5)
    b.add_argument("--constants", metavar="JSON")
    common(b, quad=False)

    s = sub.add_parser("simulate", help="Monte Carlo systole CDF under the Poisson model")
    s.add_argument("--trials", type=exact_int, required=True)
    s.add_argument("--seed", type=exact_int, default=0)
    s.add_argument("--L", type=finite_float, default=4.0)
    s.add_argument("--points", type=float_list, help="comma-separated evaluation points in (0, L]")
    s.add_argument("--grid", type=positive_int, default=4096)
    common(s, quad=False)

    r = sub.add_parser("replay", help="re-run a manifest and check the output digest")
    r.add_argument("manifest_path", metavar="MANIFEST")
    r.add_argument("--out", metavar="PATH")
    return p


def _strip_io_flags(argv: list[str]) -> list[str]:
    """argv without --manifest/--out, so replay recomputes into stdout."""
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in ("--manifest", "--out"):
            skip = True
            continue
        if a.startswith(("--manifest=", "--out=")):
            continue
        out.append(a)
    return out


def make_manifest(argv: list[str], args, text: str) -> dict:
    params = {k: v for k, v in vars(args).items() if k not in ("manifest", "out")}
    consts = _consts(args) if hasattr(args, "constants") else None
    return {
        "manifest_version": MANIFEST_VERSION,
        "tool": "wpsys",
        "tool_version": tool_version(),
        "command": args.command,
        "argv": _strip_io_flags(argv),
        "parameters": _json_safe(params),
        "constants": None if consts is None else _json_safe(vars(consts)),
        "seed": getattr(args, "seed", None),
        "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def run(argv: list[str]) -> tuple[int, str]:
    """Execute a command; returns (exit code, output text)."""
    args = build_parser().parse_args(argv)
    if args.command == "replay":
        with open(args.manifest_path, encoding="utf-8") as fh:
            man = json.load(fh)
        code, text = run(list(man["argv"]))
        if code == EXIT_OK and hashlib.sha256(text.encode()).hexdigest() != man["output_sha256"]:
            sys.stderr.write("wpsys: replay output differs from the manifest digest\n")
            code = EXIT_MISMATCH
        if args.out:
            _write(args.out, text)
        return code, text
    text = COMMANDS[args.command](args)
    if args.out:
        _write(args.out, text)
    if args.manifest:
        _write(args.manifest, dump_json(make_manifest(argv, args, text)))
    return EXIT_OK, text


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code, text = run(argv)
    except SystemExit as e:  # argparse usage errors
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    except (UnknownType, ArityMismatch, EmptyRange, UsageError, ValueError) as e:
        sys.stderr.write(f"wpsys: {e}\n")
        return EXIT_INPUT
    except ToleranceNotMet as e:
        sys.stderr.write(f"wpsys: tolerance not met: {e}\n")
        return EXIT_TOLERANCE
    except OSError as e:
        sys.stderr.write(f"wpsys: I/O error: {e}\n")
        return EXIT_IO
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
