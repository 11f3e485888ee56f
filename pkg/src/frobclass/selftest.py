"""Self-test suites: invariants of the field, pairing, conjugacy and
classification layers, runnable from the CLI and reused (at larger trial
counts) by the acceptance tests.

The oracle harness simulates a global pairing datum from a reference
torsion basis: choosing the datum as a square power of the reference
pairing value declares a hypothetical global basis SL2-compatible with the
reference one, so the classifier's accepted candidate must land in the same
SL2-class as the directly computed Frobenius matrix; a non-square power
must land in the partner class.
"""

import random
from fractions import Fraction
from functools import lru_cache

from . import conj, ec, ff, nf
from .classify import (
    MODE_MINPOLY,
    MODE_VALUE,
    ClassificationJob,
    brute_force_class,
    classify,
    consistency_audit,
)
from .conj import MatrixModL
from .errors import FrobclassError, SingularCurve
from .pairing import weil_pairing
from .scan import cyclotomic_field


@lru_cache(maxsize=None)
def _primes_1_mod(l: int, bound: int) -> tuple:
    return tuple(p for p in range(l + 2, bound)
                 if p % l == 1 and ff.is_prime(p))


def random_curve(l: int, rng: random.Random, p_max: int = 500):
    """A random nonsingular curve over GF(p) with p = 1 mod l, p < p_max."""
    primes = _primes_1_mod(l, p_max)
    while True:
        p = rng.choice(primes)
        a, b = rng.randrange(p), rng.randrange(p)
        try:
            return ec.Curve(ff.prime_field(p), a, b)
        except SingularCurve:
            continue


def oracle_instance(l: int, rng: random.Random, p_max: int = 500,
                    exponent_square: bool = True):
    """A random classification instance with its brute-force answer.

    Returns (job, expected_rep): the job's global datum reduces to
    zeta_ref^(k^2) (or a non-square multiple when exponent_square is
    False), and expected_rep is the SL2-class representative the pipeline
    must produce.
    """
    E = random_curve(l, rng, p_max)
    p = E.field.p
    k = ec.torsion_field_degree(E, l, seed=rng.randrange(1 << 20))
    ext = ff.ext_field_create(p, k, seed=rng.randrange(1 << 20))
    ref = ec.torsion_basis(E, l, ext, seed=rng.randrange(1 << 20))
    oracle_rep, _desc = brute_force_class(E, l, ref)

    e = rng.randrange(1, l)
    exp = e * e % l
    if not exponent_square:
        exp = exp * conj.smallest_nonsquare(l) % l
        # the simulated global basis has a non-square determinant over the
        # reference one, which moves the true class to the split partner
        expected_rep = _split_partner(oracle_rep)
    else:
        expected_rep = oracle_rep

    zeta = ref.zeta
    target = zeta ** exp
    K = cyclotomic_field(l)
    roots = ff.poly_roots(ff.prime_field(p), [c % p for c in K.minpoly])
    r = roots[0].lift()
    rext = ref.ext.element(r)
    dlog = ff.mu_l_dlog(rext, target, l)
    datum = nf.GlobalPairingDatum.from_value(K, l, K.gen() ** dlog)
    pd = nf.prime_datum(K, p, [-r, 1])
    a = E.a.coeffs[0]
    b = E.b.coeffs[0]
    job = ClassificationJob(
        field=K, curve=("short", (K.element(a), K.element(b))), l=l,
        prime=pd, global_datum=datum, mode=MODE_VALUE)
    return job, expected_rep


def _split_partner(rep: MatrixModL) -> MatrixModL:
    """The other SL2-class in the same GL2-class, when the class splits;
    the class itself otherwise."""
    try:
        if not conj.class_splits(rep):
            return rep
    except FrobclassError:
        return rep
    l = rep.l
    nu = conj.smallest_nonsquare(l)
    eps = 1 if rep.trace() == 2 % l else -1
    lbl = conj.gl_class_of(rep).sl_label
    c = nu if lbl == "qr" else 1
    return MatrixModL([[eps, eps * c], [0, eps]], l)


def split_instance(l: int, rng: random.Random, p_max: int = 500):
    """An oracle instance whose Frobenius class splits."""
    while True:
        job, rep = oracle_instance(l, rng, p_max)
        try:
            if conj.class_splits(rep):
                return job, rep
        except FrobclassError:
            continue


# ---------------------------------------------------------------------------
# Pairing-law fixtures: one torsion basis per l with a small torsion field
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def pairing_fixture(l: int, seed: int = 0) -> ec.TorsionBasis:
    """A torsion basis over an extension of degree 2..4, so the Frobenius
    acts nontrivially on coordinates but arithmetic stays fast."""
    rng = random.Random(f"fixture:{l}:{seed}")
    while True:
        E = random_curve(l, rng, p_max=300)
        k = ec.torsion_field_degree(E, l, seed=seed)
        if not 2 <= k <= 4:
            continue
        ext = ff.ext_field_create(E.field.p, k, seed=seed)
        return ec.torsion_basis(E, l, ext, seed=seed)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_field(seed: int = 0, trials: int = 200) -> list:
    checks = []
    rng = random.Random(f"selftest-field:{seed}")
    fields = [ff.prime_field(13), ff.ext_field_create(13, 3, [11, 2, 0, 1]),
              ff.ext_field_create(31, 5, [28, 7, 0, 0, 0, 1]),
              ff.ext_field_create(7, 2, seed=seed)]
    bad = 0
    for _ in range(trials):
        F = rng.choice(fields)
        x, y, z = (F.random_element(rng) for _ in range(3))
        if (x + y) * z != x * z + y * z:
            bad += 1
        if not x.is_zero() and x * x.inverse() != F.one():
            bad += 1
        if x ** F.q != x:
            bad += 1
        fx = ff.frobenius_power(x, F.p)
        fy = ff.frobenius_power(y, F.p)
        if ff.frobenius_power(x * y, F.p) != fx * fy:
            bad += 1
        if ff.frobenius_power(x + y, F.p) != fx + fy:
            bad += 1
    checks.append(("field-axioms", bad == 0, f"{bad} violations"))
    bad = 0
    for _ in range(max(20, trials // 10)):
        F = rng.choice(fields)
        coeffs = [F.random_element(rng) for _ in range(rng.randrange(2, 6))]
        if all(c.is_zero() for c in coeffs):
            continue
        try:
            roots = ff.poly_roots(F, coeffs)
        except ff.ZeroPolynomial:
            continue
        deg = len(ff.p_from_elements(F, coeffs)) - 1
        if len(roots) > max(deg, 0):
            bad += 1
        for r in roots:
            val = F.zero()
            for c in reversed(coeffs):
                val = val * r + c
            if not val.is_zero():
                bad += 1
    checks.append(("poly-roots-exact", bad == 0, f"{bad} violations"))
    bad = 0
    for l in (3, 5, 7, 11):
        F = ff.prime_field(23 if (23 - 1) % l == 0 else
                           next(p for p in range(2 * l, 5000)
                                if ff.is_prime(p) and p % l == 1))
        gen = next(x for x in (F.element(v) for v in range(2, F.p))
                   if x ** l == F.one() and x != F.one())
        for e in range(l):
            if ff.mu_l_dlog(gen, gen ** e, l) != e:
                bad += 1
    checks.append(("mu-l-dlog-roundtrip", bad == 0, f"{bad} violations"))
    return checks


def suite_pairing(seed: int = 0, trials: int = 60, ls=(3, 5, 7, 11)) -> list:
    checks = []
    rng = random.Random(f"selftest-pairing:{seed}")
    bil = alt = det = gal = 0
    per_l = max(1, trials // len(ls))
    for l in ls:
        basis = pairing_fixture(l, 0)
        E = basis.curve
        q_base = E.field.p ** (E.field.k // _fixture_reldeg(basis))
        for _ in range(per_l):
            P1 = basis.point_at(rng.randrange(l), rng.randrange(l))
            P2 = basis.point_at(rng.randrange(l), rng.randrange(l))
            Q = basis.point_at(rng.randrange(l), rng.randrange(l))
            s = rng.randrange(1 << 20)
            e1 = weil_pairing(E, E.add(P1, P2), Q, l, seed=s).value
            e2 = (weil_pairing(E, P1, Q, l, seed=s).value
                  * weil_pairing(E, P2, Q, l, seed=s).value)
            if e1 != e2:
                bil += 1
            if weil_pairing(E, P1, P1, l, seed=s).value != E.field.one():
                alt += 1
            a, b, c, d = (rng.randrange(l) for _ in range(4))
            if (a * d - b * c) % l == 0:
                continue
            A1 = basis.point_at(a, c)
            A2 = basis.point_at(b, d)
            lhs = weil_pairing(E, A1, A2, l, seed=s).value
            rhs = basis.zeta ** ((a * d - b * c) % l)
            if lhs != rhs:
                det += 1
            FP = ec.CurvePoint(ff.frobenius_power(P1.x, q_base),
                               ff.frobenius_power(P1.y, q_base)) \
                if not P1.is_infinity else P1
            FQ = ec.CurvePoint(ff.frobenius_power(Q.x, q_base),
                               ff.frobenius_power(Q.y, q_base)) \
                if not Q.is_infinity else Q
            e3 = weil_pairing(E, FP, FQ, l, seed=s).value
            e4 = ff.frobenius_power(
                weil_pairing(E, P1, Q, l, seed=s).value, q_base)
            if e3 != e4:
                gal += 1
    checks.append(("pairing-bilinear", bil == 0, f"{bil} violations"))
    checks.append(("pairing-alternating", alt == 0, f"{alt} violations"))
    checks.append(("pairing-determinant-law", det == 0, f"{det} violations"))
    checks.append(("pairing-galois-equivariant", gal == 0, f"{gal} violations"))
    return checks


def _fixture_reldeg(basis: ec.TorsionBasis) -> int:
    # fixtures are built over prime base fields, so the relative degree is
    # the full extension degree
    return basis.ext.k


def centralizer_determinants(sigma: MatrixModL) -> set:
    """Determinant image of the GL2-centralizer via the commutant linear
    system: independent of the exhaustive path in splitting_data_general."""
    l = sigma.l
    s = sigma.rows
    rows = []
    for i in range(2):
        for j in range(2):
            coeffs = [0] * 4
            for k in range(2):
                coeffs[i * 2 + k] = (coeffs[i * 2 + k] + s[k][j]) % l
                coeffs[k * 2 + j] = (coeffs[k * 2 + j] - s[i][k]) % l
            rows.append(coeffs)
    basis = conj._nullspace_mod(rows, 4, l)
    dets = set()
    for combo in conj._all_combos(len(basis), l):
        x = [0] * 4
        for c, vec in zip(combo, basis):
            if c:
                for idx in range(4):
                    x[idx] = (x[idx] + c * vec[idx]) % l
        d = (x[0] * x[3] - x[1] * x[2]) % l
        if d:
            dets.add(d)
    return dets


def suite_conj(ls=(3, 5, 7, 11)) -> list:
    checks = []
    for l in ls:
        bad = 0
        squares = conj.squares_mod(l)
        for flat in conj._sl2_flat(l):
            sigma = MatrixModL([flat[:2], flat[2:]], l)
            brute = centralizer_determinants(sigma) == squares
            if conj.class_splits(sigma) != brute:
                bad += 1
        checks.append((f"class-splits-brute-l{l}", bad == 0, f"{bad} mismatches"))
        reps = conj.sl2_class_representatives(l)
        total = sum(size for _, _, size in reps)
        checks.append((f"class-sizes-l{l}", total == l * (l * l - 1),
                       f"sum {total}"))
        ok = True
        for rep, desc, _ in reps:
            data = conj.splitting_data_general(rep)
            splits = conj.class_splits(rep)
            if splits != (data.m == 2) or (not splits) != (data.m == 1):
                ok = False
            if data.m == 2 and data.H != squares:
                ok = False
        checks.append((f"splitting-data-l{l}", ok, ""))
    ru = MatrixModL([[1, 1, 0], [0, 1, 1], [0, 0, 1]], 7)
    d3 = conj.splitting_data_general(ru)
    checks.append(("splitting-data-n3-regular-unipotent",
                   d3.m == 3 and d3.H == frozenset({1, 6}),
                   f"m={d3.m} H={sorted(d3.H)}"))
    return checks


def suite_oracle(seed: int = 0, per_l: int = 2, ls=(3, 5, 7)) -> list:
    checks = []
    rng = random.Random(f"selftest-oracle:{seed}")
    for l in ls:
        bad = 0
        for _ in range(per_l):
            job, expected = oracle_instance(l, rng)
            res = classify(job, seed=rng.randrange(1 << 20))
            got = MatrixModL(res.sl_class, l)
            if not conj.sl_conjugate(got, expected):
                bad += 1
        checks.append((f"oracle-agreement-l{l}", bad == 0, f"{bad} of {per_l}"))
    return checks


def suite_goldens(seed: int = 0) -> list:
    checks = []
    K3 = nf.nf_create([1, 1, 1])
    pd = nf.prime_datum(K3, 13, [-3, 1])
    datum = nf.GlobalPairingDatum.from_value(K3, 3, K3.gen())
    job = ClassificationJob(K3, ("short", (K3.one(), K3.one())), 3, pd,
                            datum, MODE_VALUE)
    res = classify(job, seed=seed)
    ok = (res.sl_class == ((1, 1), (0, 1)) and res.evidence.count == 18
          and res.evidence.trace_mod_l == 2 and res.evidence.torsion_degree == 3)
    checks.append(("golden-496a1-mod13", ok, res.class_label()))
    try:
        consistency_audit(job, res, seed=seed)
        checks.append(("golden-496a1-audit", True, ""))
    except FrobclassError as exc:
        checks.append(("golden-496a1-audit", False, str(exc)))

    K5 = nf.nf_create([-5, 0, 1])
    pd5 = nf.prime_datum(K5, 31, [-6, 1])
    half = K5.element([Fraction(1, 2), Fraction(-1, 2)])
    datum5 = nf.GlobalPairingDatum.from_minpoly(
        K5, 5, [K5.one(), half, K5.one()])
    job5 = ClassificationJob(
        K5, ("long", tuple(K5.element(c) for c in (0, -1, 1, 0, 0))), 5, pd5,
        datum5, MODE_MINPOLY, subgroup_hypothesis_asserted=True)
    res5 = classify(job5, seed=seed)
    ok5 = (res5.sl_class == ((1, 2), (0, 1)) and res5.evidence.count == 25
           and res5.evidence.torsion_degree == 5
           and res5.evidence.global_reduced == [1, 13, 1])
    checks.append(("golden-11a3-mod31", ok5, res5.class_label()))
    return checks


def run_selftest(seed: int = 0, scale: float = 1.0):
    """All suites; returns (ok, report lines)."""
    suites = [
        ("field", lambda: suite_field(seed, max(20, int(200 * scale)))),
        ("pairing", lambda: suite_pairing(seed, max(8, int(60 * scale)))),
        ("conj", lambda: suite_conj((3, 5, 7, 11) if scale >= 1 else (3, 5))),
        ("oracle", lambda: suite_oracle(seed, max(1, int(2 * scale)))),
        ("goldens", lambda: suite_goldens(seed)),
    ]
    lines = []
    all_ok = True
    for name, fn in suites:
        for check, ok, detail in fn():
            status = "PASS" if ok else "FAIL"
            all_ok = all_ok and ok
            suffix = f"  ({detail})" if detail and not ok else ""
            lines.append(f"[{status}] {name}/{check}{suffix}")
    return all_ok, lines
