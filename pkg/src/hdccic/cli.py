"""Command-line interface.

Single-point verbs print one JSON object; sweeps print CSV.  Exit status is
2 for bad flags, 1 for an invariant or audit violation and 0 otherwise.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import enum
import io
import json
import math
import sys
from fractions import Fraction

from . import analysis, lda
from .channel import (
    ExponentPoint,
    Topology,
    classify_regime_exponents,
    classify_regime_gains,
    gains_from_exponents,
)
from .gdof import cooperation_classification, gdof_closed_form
from .inner_bounds import inner_best
from .outer_bounds import outer_min

VERBS = ("gdof", "regime", "bounds", "inner", "gap-sweep", "region-map", "lda-verify", "audit")


class CliError(Exception):
    """Bad flag value; maps to exit status 2."""


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def _range(text: str):
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}")
    if not (math.isfinite(lo) and math.isfinite(hi) and step > 0 and lo <= hi):
        raise argparse.ArgumentTypeError(f"need finite lo <= hi and step > 0, got {text!r}")
    return lo, hi, step


def _gamma(text: str):
    if text == "auto":
        return "auto"
    try:
        g = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"gamma must be 'auto' or a number, got {text!r}")
    if not 0 <= g <= 1:
        raise argparse.ArgumentTypeError("gamma must lie in [0, 1]")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--topology", choices=[t.value for t in Topology], default="sym")
    common.add_argument("--alpha", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--snr-db", type=float)
    common.add_argument("--snr-range", type=_range)
    common.add_argument("--alpha-range", type=_range)
    common.add_argument("--beta-range", type=_range)
    common.add_argument("--gamma", type=_gamma, default="auto")
    common.add_argument("--optimize", action="store_true")
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--out")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="hdccic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        sub.add_parser(verb, parents=[common])
    return parser


def _point(args, need_beta: bool = True) -> ExponentPoint:
    if args.alpha is None or (need_beta and args.beta is None):
        raise CliError("--alpha and --beta are required")
    for name in ("alpha", "beta"):
        v = getattr(args, name)
        if v is not None and (not math.isfinite(v) or v < 0):
            raise CliError(f"--{name} must be finite and >= 0")
    return ExponentPoint(args.alpha, args.beta if args.beta is not None else 0.0, args.topology)


def _snr(args) -> float:
    if args.snr_db is None or not math.isfinite(args.snr_db):
        raise CliError("--snr-db is required")
    return args.snr_db


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _single(obj: dict, fmt: str | None) -> str:
    if fmt == "csv":
        return _rows_to_csv(list(obj), [list(obj.values())])
    return json.dumps(obj, sort_keys=False) + "\n"


def _records(header, rows, fmt: str | None) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows]) + "\n"
    return _rows_to_csv(header, rows)


def _run(args) -> tuple[int, str]:
    verb = args.verb
    top = Topology.parse(args.topology)
    if verb == "gdof":
        p = _point(args)
        res = gdof_closed_form(p)
        doc = {"alpha": p.alpha, "beta": p.beta, "topology": top.value}
        doc.update(_jsonable(res))
        doc["cooperation"] = str(cooperation_classification(p))
        return 0, _single(doc, args.format)
    if verb == "regime":
        p = _point(args)
        doc = {"alpha": p.alpha, "beta": p.beta}
        doc.update(_jsonable(classify_regime_exponents(p)))
        if args.snr_db is not None:
            doc["gains_regime_index"] = classify_regime_gains(gains_from_exponents(p, _snr(args)), top).index
        return 0, _single(doc, args.format)
    if verb == "bounds":
        p = _point(args)
        gains = gains_from_exponents(p, _snr(args))
        doc = {"snr_db": args.snr_db}
        doc.update(_jsonable(gains))
        doc.update(_jsonable(outer_min(gains, args.gamma)))
        return 0, _single(doc, args.format)
    if verb == "inner":
        p = _point(args)
        gains = gains_from_exponents(p, _snr(args))
        doc = {"snr_db": args.snr_db}
        doc.update(_jsonable(gains))
        doc.update(_jsonable(inner_best(gains, top)))
        return 0, _single(doc, args.format)
    if verb == "gap-sweep":
        p = _point(args)
        lo, hi, step = args.snr_range or (0.0, 80.0, 5.0)
        try:
            recs = analysis.gap_sweep(p, (lo, hi), step, args.optimize)
        except analysis.GapViolation as exc:
            return 1, f"invariant violation: {exc}\n"
        header = ["snr_db", "ob_bits", "ib_bits", "gap_bits", "regime", "scheme"]
        rows = [[r.snr_db, r.ob_bits, r.ib_bits, r.gap_bits, r.regime_index, r.scheme_id] for r in recs]
        return 0, _records(header, rows, args.format)
    if verb == "region-map":
        a_lo, a_hi, a_step = args.alpha_range or (0.0, 4.0, 0.01)
        b_lo, b_hi, b_step = args.beta_range or (0.0, 6.0, a_step)
        if not math.isclose(a_step, b_step):
            raise CliError("--alpha-range and --beta-range must share one step")
        cells = analysis.region_map(top, (a_lo, a_hi), (b_lo, b_hi), a_step)
        header = ["alpha", "beta", "region", "d", "d_nocoop", "d_ideal", "coop"]
        rows = [[c.alpha, c.beta, c.region, c.d, c.d_nocoop, c.d_ideal, c.coop] for c in cells]
        return 0, _records(header, rows, args.format)
    if verb == "lda-verify":
        return _lda_verify(args.seed)
    if verb == "audit":
        grids = {}
        if args.alpha_range:
            grids["alpha_grid"] = analysis._axis(args.alpha_range[:2], args.alpha_range[2])
        if args.beta_range:
            grids["beta_grid"] = analysis._axis(args.beta_range[:2], args.beta_range[2])
        if args.snr_range:
            grids["snr_grid"] = analysis._axis(args.snr_range[:2], args.snr_range[2])
        rep = analysis.theorem_gap_audit(top, raise_on_violation=False, **grids)
        text = "\n".join(rep.summary_lines()) + "\n"
        if not rep.passed:
            a, b, s, gap = rep.violations[0]
            text += f"VIOLATION gap={gap} at alpha={a}, beta={b}, snr_db={s}\n"
            return 1, text
        return 0, text
    raise CliError(f"unknown verb {verb!r}")


def _lda_verify(seed: int) -> tuple[int, str]:
    lines, status = [], 0
    for cfg in lda.LDA_TEST_POINTS:
        tag = f"{cfg.topology.value} n_d={cfg.n_d} n_i={cfg.n_i} n_f={cfg.n_f}"
        try:
            scheme = lda.lda_scheme_for(cfg)
            trace = lda.lda_simulate(cfg, scheme, seed=seed)
            rate = lda.lda_normalized_sumrate(trace, cfg, scheme.slots)
            d = Fraction(gdof_closed_form(ExponentPoint(cfg.alpha, cfg.beta, cfg.topology)).d)
            ok = rate == d
            lines.append(
                f"{'PASS' if ok else 'FAIL'} {scheme.scheme_id} {tag} gamma={scheme.gamma} "
                f"sumrate={rate} gdof={d}"
            )
        except (lda.LdaSchemeError, lda.LdaDecodeError) as exc:
            ok = False
            lines.append(f"FAIL {tag}: {exc}")
        status = status or (0 if ok else 1)
    return status, "\n".join(lines) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, text = _run(args)
    except (CliError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
