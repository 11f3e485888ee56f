"""Multi-prime scans: classify the Frobenius class of one curve at many
degree-1 primes of the l-th cyclotomic field, with per-prime timing.

Prime selection: rational primes p = 1 mod l of good reduction, each paired
with the smallest root r of the l-th cyclotomic polynomial mod p, giving
the degree-1 prime (p, x - r).  The global pairing datum is a fixed power
of the canonical root of unity; its exponent shifts which of two split
classes gets which label but not the statistics, which is why the 50/50
split-class frequency check at the end is label-agnostic.
"""

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import sqrt

from . import ec, ff, nf
from .classify import MODE_VALUE, ClassificationJob, classify
from .errors import BadReduction, FrobclassError, OddPrimeRequired

_SOFT_L_CAP = 11


@dataclass
class ScanConfig:
    curve: tuple  # ("short"|"long", integer/rational coefficient tuple)
    ls: tuple
    primes: int
    seed: int = 0
    global_exponent: int = 1
    threads: int = 1
    allow_large_l: bool = False


@dataclass
class ScanResult:
    rows: list = dc_field(default_factory=list)
    summaries: list = dc_field(default_factory=list)


@lru_cache(maxsize=None)
def cyclotomic_field(l: int) -> nf.NumberField:
    """Q(zeta_l) for an odd prime l."""
    return nf.nf_create([1] * l)


def _job_for_prime(l: int, p: int, r: int, curve: tuple,
                   exponent: int) -> ClassificationJob:
    K = cyclotomic_field(l)
    model, coeffs = curve
    pd = nf.prime_datum(K, p, [-r, 1])
    datum = nf.GlobalPairingDatum.from_value(K, l, K.gen() ** exponent)
    return ClassificationJob(
        field=K, curve=(model, tuple(K.element(c) for c in coeffs)),
        l=l, prime=pd, global_datum=datum, mode=MODE_VALUE)


def select_primes(l: int, count: int, curve: tuple, seed: int = 0) -> list:
    """The first `count` suitable rational primes: p = 1 mod l, good
    reduction, paired with the canonical residue root."""
    if count < 1:
        raise ValueError("prime count must be >= 1")
    K = cyclotomic_field(l)
    out = []
    p = l + 1
    while len(out) < count:
        p += 1
        if p % l != 1 or not ff.is_prime(p):
            continue
        F = ff.prime_field(p)
        roots = ff.poly_roots(F, [c % p for c in K.minpoly])
        r = roots[0].lift()
        job = _job_for_prime(l, p, r, curve, 1)
        try:
            from .classify import _reduce_curve
            _reduce_curve(job)
        except BadReduction:
            continue
        out.append((p, r))
    return out


def _scan_row(args) -> dict:
    l, p, r, curve, exponent, seed = args
    row = {"l": l, "p": p, "q_mod_l": p % l}
    t0 = time.perf_counter()
    try:
        job = _job_for_prime(l, p, r, curve, exponent)
        res = classify(job, seed=seed)
        row.update({
            "trace_mod_l": res.evidence.trace_mod_l,
            "class": res.class_label(),
            "path": res.determined_by,
        })
    except FrobclassError as exc:
        row.update({
            "trace_mod_l": "-",
            "class": f"error:{type(exc).__name__}",
            "path": "error",
        })
    row["micros"] = int(1e6 * (time.perf_counter() - t0))
    return row


def run_scan(config: ScanConfig) -> ScanResult:
    result = ScanResult()
    for l in config.ls:
        if l < 3 or l % 2 == 0 or not ff.is_prime(l):
            raise OddPrimeRequired(f"scan level {l} must be an odd prime")
        if l > _SOFT_L_CAP and not config.allow_large_l:
            raise OddPrimeRequired(
                f"l = {l} exceeds the soft cap {_SOFT_L_CAP}; "
                "pass allow_large_l to override")
    for l in config.ls:
        t_start = time.perf_counter()
        primes = select_primes(l, config.primes, config.curve, config.seed)
        args = [(l, p, r, config.curve, config.global_exponent, config.seed)
                for p, r in primes]
        if config.threads > 1:
            with ProcessPoolExecutor(max_workers=config.threads) as pool:
                rows = list(pool.map(_scan_row, args))
        else:
            rows = [_scan_row(a) for a in args]
        total = time.perf_counter() - t_start
        result.rows.extend(rows)
        result.summaries.append(_summarize(l, rows, total))
    return result


def _summarize(l: int, rows: list, total_seconds: float) -> dict:
    split_rows = [r for r in rows if r["path"] == "pairing"]
    qr = sum(1 for r in split_rows if r["class"].endswith(",qr)"))
    qnr = len(split_rows) - qr
    n = len(split_rows)
    warning = None
    if n:
        sigma3 = 3 * sqrt(n) / 2
        if abs(qr - n / 2) > sigma3:
            warning = (f"split-class frequencies {qr}/{qnr} deviate from "
                       f"1/2 by more than 3 sigma (n={n})")
    return {
        "l": l,
        "rows": len(rows),
        "errors": sum(1 for r in rows if r["path"] == "error"),
        "split_rows": n,
        "qr": qr,
        "qnr": qnr,
        "chebotarev_warning": warning,
        "total_seconds": round(total_seconds, 3),
    }


def render_tsv(result: ScanResult) -> str:
    lines = ["l\tp\tq_mod_l\ttrace_mod_l\tclass\tpath\tmicros"]
    for r in result.rows:
        lines.append(
            f"{r['l']}\t{r['p']}\t{r['q_mod_l']}\t{r['trace_mod_l']}"
            f"\t{r['class']}\t{r['path']}\t{r['micros']}")
    for s in result.summaries:
        lines.append(
            f"# summary l={s['l']} rows={s['rows']} errors={s['errors']} "
            f"split={s['split_rows']} qr={s['qr']} qnr={s['qnr']} "
            f"total_s={s['total_seconds']}")
        if s["chebotarev_warning"]:
            lines.append(f"# warning l={s['l']}: {s['chebotarev_warning']}")
    return "\n".join(lines) + "\n"


def render_jsonl(result: ScanResult) -> str:
    lines = [json.dumps(r, sort_keys=True) for r in result.rows]
    lines += [json.dumps({"summary": s}, sort_keys=True)
              for s in result.summaries]
    return "\n".join(lines) + "\n"
