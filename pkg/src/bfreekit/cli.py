"""Command-line front end: construct instances, report on them, re-verify.

Configs are JSON (the one supported format; see README for the schema).
Exit codes: 0 ok, 1 internal error, 2 config error, 3 infeasible constants
or schedule, 4 verification failure. Report files come in pairs: a CSV with
one row per level/window and a JSON mirror with the full nesting; every
number carries a tag (exact, estimate(window), or float(tol)).
"""

import argparse
import csv
import datetime
import json
import os
import sys
from fractions import Fraction

from . import archive as arch, constructions as C, toeplitz as tz
from .arith import format_rational
from .entropy import FLOAT_TOL, Word, entropy_inequality_check
from .errors import (
    BFreeError,
    ConfigError,
    HorizonExceeded,
    InfeasibleConstants,
    InfeasibleSchedule,
    RangeExceeded,
    VerificationError,
)
from .sequence import two_measure_witness

REPORT_KINDS = ("toeplitz", "density", "entropy", "two-measures", "lemma-checks")


def _exact(value):
    return {"value": format_rational(value), "tag": "exact"}


def _estimate(value, window):
    return {"value": format_rational(value), "tag": "estimate(%d)" % window}


def _tagged(entry):
    return _exact(entry.value) if entry.exact else _estimate(entry.value, entry.window)


def _float(value):
    return {"value": repr(float(value)), "tag": "float(%g)" % FLOAT_TOL}


def cmd_construct(args):
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    try:
        kind, recipe = arch.recipe_from_config(cfg)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    try:
        inst = arch.build_from_recipe(kind, recipe)
    except (InfeasibleConstants, InfeasibleSchedule) as exc:
        print("infeasible: %s" % exc, file=sys.stderr)
        return 3
    except BFreeError as exc:
        print("build failed: %s" % exc, file=sys.stderr)
        return 1
    created = datetime.datetime.now(datetime.timezone.utc).isoformat()
    arc = arch.make_archive(kind, inst, created=created)
    arch.save_archive(arc, args.out)
    print("wrote %s (%s, content %s)" % (args.out, kind, arc["content_hash"][:16]))
    if kind == "prime_tower":
        print("generators: %s" % (inst.generators,))
        print("level lcms: %s" % (inst.lcms,))
    elif kind == "besicovitch":
        print("interval starts: %s" % (inst.starts,))
        print("prefix size: %d" % len(inst.g_prefix))
    else:
        print(
            "windows: %s"
            % ([(lev.T, lev.T + lev.L) for lev in inst.levels],)
        )
        print("prefix: %s" % (inst.prefix,))
    print("%-22s %-12s %-7s %-7s" % ("certificate", "scope", "strict", "relaxed"))
    for cert in inst.certificates:
        print(
            "%-22s %-12s %-7s %-7s"
            % (cert.name, cert.scope, cert.strict_ok, cert.relaxed_ok)
        )
    return 0


def _load_for_report(path):
    arc = arch.load_archive(path)
    kind = arc["kind"]
    _, recipe = arch.recipe_from_config(dict(arc["recipe"]))
    inst = arch.build_from_recipe(kind, recipe)
    # reports must describe the archive, not a silently different rebuild
    fresh = arch.instance_payload(kind, inst)
    arch._deep_compare("payload", arc["payload"], fresh)
    return kind, inst


def _report_toeplitz(kind, inst, args):
    if kind != "prime_tower":
        raise ConfigError("toeplitz reports need a prime_tower archive")
    levels = [args.level] if args.level else list(range(1, inst.depth + 1))
    rows = []
    for k in levels:
        rep = tz.level_report(inst.level_data(k))
        bound = tz.irregularity_lower_bound(inst, k)
        rows.append(
            {
                "level": k,
                "ell": inst.lcms[k - 1],
                "d_zero": _exact(rep.d_zero),
                "d_one": _exact(rep.d_one),
                "d_undecided": _exact(rep.d_undecided),
                "certified_periodic": _exact(rep.d_zero + rep.d_one),
                "irregularity_lower_bound": _exact(bound),
            }
        )
    return rows


def _report_density(kind, inst, args):
    rows = []
    if kind == "prime_tower":
        from .multiples import exact_density

        for k in range(1, inst.depth + 1):
            rows.append(
                {
                    "level": k,
                    "level_multiples_density": _exact(
                        exact_density(inst.generators[:k])
                    ),
                    "reciprocal_sum": _exact(
                        sum((Fraction(1, b) for b in inst.generators[:k]), Fraction(0))
                    ),
                }
            )
        rows.append(
            {
                "level": "tail",
                "level_multiples_density": _exact(inst.tail_reciprocal_bound),
                "reciprocal_sum": _exact(inst.tail_reciprocal_bound),
            }
        )
    elif kind == "besicovitch":
        for k, (T, e) in enumerate(zip(inst.starts, inst.e_table), start=1):
            rows.append({"level": k, "start": T, "interval_density": _tagged(e)})
        ch = inst.chain
        rows.append(
            {
                "level": "chain",
                "start": ch.head,
                "interval_density": _exact(ch.measured),
            }
        )
    elif kind == "entropy_seeded":
        for lev in inst.levels:
            rows.append(
                {
                    "level": lev.k,
                    "start": lev.T,
                    "length": lev.L,
                    "interval_density": _tagged(lev.e_entry),
                }
            )
    return rows


def _report_entropy(kind, inst, args):
    if kind != "entropy_seeded":
        raise ConfigError("entropy reports need an entropy_seeded archive")
    rows = []
    for lev in inst.levels:
        cert = lev.word_cert
        ineq = entropy_inequality_check(Word.from01(cert.word01), cert.n)
        rows.append(
            {
                "level": lev.k,
                "length": lev.L,
                "weight": cert.weight,
                "block_n": cert.n,
                "entropy_rate": _float(cert.h_value),
                "threshold": _float(cert.threshold),
                "pass": cert.pass_ok,
                "attempts": cert.attempts,
                "inequality_slack": _float(ineq.slack),
            }
        )
    return rows


def _report_two_measures(kind, inst, args):
    if kind not in ("entropy_seeded", "besicovitch"):
        raise ConfigError("two-measures reports need a scheduled instance")
    n_max = args.n or 3
    levels = [args.level] if args.level else [len(inst.levels) if kind == "entropy_seeded" else len(inst.starts)]
    rows = []
    for k in levels:
        for n in range(1, n_max + 1):
            rep = two_measure_witness(inst, n, k)
            rows.append(
                {
                    "level": k,
                    "block_n": n,
                    "head_ones": _exact(rep.head_ones),
                    "level_ones": _exact(rep.level_ones),
                    "tv_distance": _exact(rep.tv),
                }
            )
    return rows


def _report_structural(kind, inst, args):
    rows = []
    if kind == "entropy_seeded":
        for lev in inst.levels:
            rep = C.window_word_identity_check(inst, lev.k)
            size = C.correction_size_check(inst, lev.k)
            rows.append(
                {
                    "check": "window_word_identity",
                    "scope": "level:%d" % lev.k,
                    "ok": rep.ok,
                    "detail": "deletions=%d insertions=%d"
                    % (len(rep.deletions), len(rep.insertions)),
                }
            )
            rows.append(
                {
                    "check": "correction_sizes",
                    "scope": "level:%d" % lev.k,
                    "ok": size.excluded_ok and size.carry_ok,
                    "detail": "excluded %d vs %s, carried %d vs %s"
                    % (
                        size.excluded_count,
                        size.excluded_bound,
                        size.carry_count,
                        size.carry_bound,
                    ),
                }
            )
        for name, ok, detail in C.structure_checks(inst):
            rows.append({"check": name, "scope": "all", "ok": ok, "detail": detail})
        if inst.recipe.mode == "thin":
            rs = C.reciprocal_sum_report(inst)
            rows.append(
                {
                    "check": "reciprocal_sum_chain",
                    "scope": "all",
                    "ok": rs.holds,
                    "detail": "%s + %s < %s"
                    % (rs.prefix_sum, rs.tail_bound, float(rs.chain_floor)),
                }
            )
    elif kind == "prime_tower":
        for k in range(1, inst.depth + 1):
            lev = inst.level_data(k)
            rep = tz.level_report(lev)
            rows.append(
                {
                    "check": "gcd_set_and_lcm_identity",
                    "scope": "level:%d" % k,
                    "ok": rep.d_zero + rep.d_one + rep.d_undecided == 1,
                    "detail": "ell=%d gcd_set_size=%d" % (lev.ell, len(lev.gcd_set)),
                }
            )
        if inst.depth >= 3:
            g = C.gcd_separation_check(inst, 0, 2, 3)
            rows.append(
                {
                    "check": "gcd_separation",
                    "scope": "generators 2,3",
                    "ok": g.structural_ok,
                    "detail": "gcd=%d bound=%d" % (g.gcd, g.structural_bound),
                }
            )
    elif kind == "besicovitch":
        ch = inst.chain
        rows.append(
            {
                "check": "front_window_chain",
                "scope": "head:%d" % ch.head,
                "ok": ch.count_le_density_bound,
                "detail": "measured=%s schedule_bound=%s eps=%s"
                % (ch.measured, ch.sum_schedule_bound, ch.eps),
            }
        )
    return rows


_REPORTS = {
    "toeplitz": _report_toeplitz,
    "density": _report_density,
    "entropy": _report_entropy,
    "two-measures": _report_two_measures,
    "lemma-checks": _report_structural,
}


def _flatten(row):
    flat = {}
    for key, val in row.items():
        if isinstance(val, dict):
            flat[key] = val["value"]
            flat[key + "_tag"] = val["tag"]
        else:
            flat[key] = val
    return flat


def cmd_report(args):
    try:
        kind, inst = _load_for_report(args.archive)
        rows = _REPORTS[args.kind](kind, inst, args)
    except VerificationError as exc:
        print("archive validation error: %s" % exc, file=sys.stderr)
        return 4
    except ConfigError as exc:
        print("report error: %s" % exc, file=sys.stderr)
        return 2
    except (HorizonExceeded, RangeExceeded) as exc:
        print("range error: %s" % exc, file=sys.stderr)
        return 1
    out_dir = args.out_dir or os.path.dirname(os.path.abspath(args.archive))
    stem = os.path.splitext(os.path.basename(args.archive))[0]
    base = os.path.join(out_dir, "%s.%s" % (stem, args.kind.replace("-", "_")))
    flat_rows = [_flatten(r) for r in rows]
    fields = []
    for row in flat_rows:
        for key in row:
            if key not in fields:
                fields.append(key)
    with open(base + ".csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(flat_rows)
    with open(base + ".json", "w") as fh:
        json.dump({"archive": args.archive, "kind": args.kind, "rows": rows}, fh,
                  indent=1, sort_keys=True)
        fh.write("\n")
    print("wrote %s.csv and %s.json (%d rows)" % (base, base, len(rows)))
    return 0


def cmd_verify(args):
    try:
        arc = arch.load_archive(args.archive)
        arch.verify_archive(arc)
    except VerificationError as exc:
        print("verification failed: %s" % exc, file=sys.stderr)
        return 4
    except BFreeError as exc:
        print("verification failed: %s" % exc, file=sys.stderr)
        return 4
    print("archive verified: all identities and certificates reproduce")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bfreekit",
        description="construct, report on, and verify base-set instances",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_con = sub.add_parser("construct", help="build an instance from a JSON config")
    p_con.add_argument("--config", required=True)
    p_con.add_argument("--out", required=True)
    p_con.set_defaults(func=cmd_construct)
    p_rep = sub.add_parser("report", help="write CSV+JSON reports for an archive")
    p_rep.add_argument("--archive", required=True)
    p_rep.add_argument("--kind", required=True, choices=REPORT_KINDS)
    p_rep.add_argument("--n", type=int, default=None)
    p_rep.add_argument("--level", type=int, default=None)
    p_rep.add_argument("--out-dir", default=None)
    p_rep.set_defaults(func=cmd_report)
    p_ver = sub.add_parser("verify", help="re-run all certificates of an archive")
    p_ver.add_argument("--archive", required=True)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BFreeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
