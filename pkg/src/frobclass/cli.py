"""Command-line front end: one-shot classification, multi-prime scans with
timing, SL2 class tables, and the self-test suite.

Exit codes: 0 success, 1 input or computation error, 2 inconclusive or
ambiguous classification.  FROBCLASS_SEED serves as the seed fallback.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import conj, nf
from .classify import (
    MODE_MINPOLY,
    MODE_VALUE,
    ClassificationJob,
    classify,
)
from .errors import Ambiguous, FrobclassError, Inconclusive
from .scan import ScanConfig, render_jsonl, render_tsv, run_scan
from .selftest import run_selftest


def _resolve_seed(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("FROBCLASS_SEED")
    return int(env) if env else 0


def _parse_field_element(field: nf.NumberField, obj):
    """JSON field-element formats: an int, a rational [num, den], or a list
    of [num, den] coefficient pairs for the powers of the generator."""
    if isinstance(obj, int):
        return field.element(obj)
    if isinstance(obj, list):
        if len(obj) == 2 and all(isinstance(v, int) for v in obj):
            return field.element(Fraction(obj[0], obj[1]))
        coeffs = []
        for entry in obj:
            if isinstance(entry, int):
                coeffs.append(Fraction(entry))
            elif (isinstance(entry, list) and len(entry) == 2
                  and all(isinstance(v, int) for v in entry)):
                coeffs.append(Fraction(entry[0], entry[1]))
            else:
                raise ValueError(f"bad coefficient entry {entry!r}")
        return field.element(coeffs)
    raise ValueError(f"cannot parse field element from {obj!r}")


def _parse_curve(data, field: nf.NumberField) -> tuple:
    if "short" in data:
        coeffs = data["short"]
        if len(coeffs) != 2:
            raise ValueError("short model takes [a, b]")
        return ("short", tuple(_parse_field_element(field, c) for c in coeffs))
    if "long" in data:
        coeffs = data["long"]
        if len(coeffs) != 5:
            raise ValueError("long model takes [a1, a2, a3, a4, a6]")
        return ("long", tuple(_parse_field_element(field, c) for c in coeffs))
    raise ValueError("curve spec needs a 'short' or 'long' entry")


def load_job(path: str) -> ClassificationJob:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    field = nf.nf_create(data["field"]["minpoly"])
    l = int(data["l"])
    prime = nf.prime_datum(field, int(data["prime"]["p"]), data["prime"]["g"])
    curve = _parse_curve(data["curve"], field)
    gspec = data["global"]
    if "pairing_value" in gspec:
        datum = nf.GlobalPairingDatum.from_value(
            field, l, _parse_field_element(field, gspec["pairing_value"]))
    elif "pairing_minpoly" in gspec:
        coeffs = [_parse_field_element(field, c)
                  for c in gspec["pairing_minpoly"]]
        datum = nf.GlobalPairingDatum.from_minpoly(field, l, coeffs)
    else:
        raise ValueError(
            "global datum needs 'pairing_value' or 'pairing_minpoly'")
    mode = data.get("mode", MODE_VALUE)
    if mode not in (MODE_VALUE, MODE_MINPOLY):
        raise ValueError(f"mode must be '{MODE_VALUE}' or '{MODE_MINPOLY}'")
    return ClassificationJob(
        field=field, curve=curve, l=l, prime=prime, global_datum=datum,
        mode=mode,
        subgroup_hypothesis_asserted=bool(
            data.get("subgroup_hypothesis_asserted", False)))


def _mat_str(rows) -> str:
    return json.dumps([list(r) for r in rows], separators=(",", ":"))


def _value_str(v) -> str:
    if isinstance(v, list):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _print_result(res, fmt: str):
    if fmt == "json":
        print(json.dumps(res.to_dict(), sort_keys=True))
        return
    ev = res.evidence
    accepted = [c for c in ev.candidates if c.accepted]
    lines = [
        f"l: {ev.l}",
        f"p: {ev.p}",
        f"q: {ev.q}",
        f"count: {ev.count}",
        f"trace_mod_l: {ev.trace_mod_l}",
        f"q_mod_l: {ev.q_mod_l}",
        f"path: {res.determined_by}",
        f"gl_class: kind={res.gl_class.kind} charpoly={res.gl_class.charpoly}",
        f"split: {str(res.split).lower()}",
        f"sl_class: {_mat_str(res.sl_class) if res.sl_class else 'not-in-SL2'}",
        f"class_label: {res.class_label()}",
    ]
    if ev.torsion_degree is not None:
        lines.append(f"torsion_degree: {ev.torsion_degree}")
    if ev.rational_torsion is not None:
        lines.append(f"rational_torsion: {ev.rational_torsion}")
    if ev.frobenius_matrix is not None:
        lines.append(f"frobenius_matrix: {_mat_str(ev.frobenius_matrix)}")
    if accepted:
        lines.append(f"pairing_local: {_value_str(accepted[0].pairing_value)}")
    if ev.global_reduced is not None:
        lines.append(f"global_reduced: {_value_str(ev.global_reduced)}")
    for c in ev.candidates:
        lines.append(
            f"candidate: sigma={_mat_str(c.sigma)} "
            f"pairing={_value_str(c.pairing_value)} "
            f"accepted={str(c.accepted).lower()} reason={c.reason}")
    lines.append(f"seed: {ev.seed}")
    print("\n".join(lines))


def _cmd_classify(args) -> int:
    job = load_job(args.job)
    res = classify(job, seed=_resolve_seed(args.seed))
    _print_result(res, args.format)
    return 0


def _cmd_scan(args) -> int:
    with open(args.curve, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    ls = tuple(int(v) for v in args.l.split(","))
    model = "short" if "short" in data["curve"] else "long"
    coeffs = tuple(data["curve"][model])
    config = ScanConfig(
        curve=(model, coeffs), ls=ls, primes=args.primes,
        seed=_resolve_seed(args.seed),
        global_exponent=int(data.get("global_exponent", 1)),
        threads=args.threads)
    result = run_scan(config)
    if args.format == "json":
        sys.stdout.write(render_jsonl(result))
    else:
        sys.stdout.write(render_tsv(result))
    return 0


def _cmd_selftest(args) -> int:
    ok, lines = run_selftest(seed=_resolve_seed(args.seed), scale=args.scale)
    print("\n".join(lines))
    print("selftest:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_classtable(args) -> int:
    l = args.l
    reps = conj.sl2_class_representatives(l)
    print("representative\tsize\tgl_class\tsplits\tpartner\tlabel")
    for rep, desc, size in reps:
        splits = conj.class_splits(rep)
        partner = "-"
        if splits:
            from .selftest import _split_partner
            other = _split_partner(rep)
            for rep2, _d2, _s2 in reps:
                if conj.sl_conjugate(rep2, other):
                    partner = _mat_str(rep2.rows)
                    break
        print(f"{_mat_str(rep.rows)}\t{size}\t{desc.kind}"
              f"\t{str(splits).lower()}\t{partner}\t{conj.class_label(rep)}")
    total = sum(size for _, _, size in reps)
    print(f"# classes={len(reps)} total={total} group_order={l * (l * l - 1)}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="frobclass",
        description="Conjugacy classes of Frobenius elements acting on "
                    "elliptic-curve torsion, via Weil pairing comparisons.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify one prime from a job file")
    c.add_argument("--job", required=True, help="JSON job file")
    c.add_argument("--format", choices=("tsv", "json"), default="tsv")
    c.add_argument("--seed", type=int, default=None)

    s = sub.add_parser("scan", help="classify many primes, with timing")
    s.add_argument("--curve", required=True, help="JSON curve file")
    s.add_argument("--l", required=True, help="comma-separated odd primes")
    s.add_argument("--primes", type=int, required=True)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--format", choices=("tsv", "json"), default="tsv")

    st = sub.add_parser("selftest", help="run the invariant suites")
    st.add_argument("--seed", type=int, default=None)
    st.add_argument("--scale", type=float, default=1.0,
                    help="trial-count multiplier")

    ct = sub.add_parser("classtable", help="print the SL2 conjugacy classes")
    ct.add_argument("--l", type=int, required=True)

    args = parser.parse_args(argv)
    handlers = {
        "classify": _cmd_classify,
        "scan": _cmd_scan,
        "selftest": _cmd_selftest,
        "classtable": _cmd_classtable,
    }
    try:
        return handlers[args.command](args)
    except (Inconclusive, Ambiguous) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except FrobclassError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
