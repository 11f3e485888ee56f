"""End-to-end classification of the Frobenius conjugacy class.

Pipeline: reduce the curve at the prime, count points, read trace and
determinant mod l off the characteristic polynomial; if those already pin
the class (they do unless the trace is +-2 with determinant 1), stop.
Otherwise separate the scalar case by an actual torsion computation, and
split the remaining unipotent-type pair of SL2-classes by comparing the
reduced global pairing datum against locally computed Weil pairings, one
adjusted basis per candidate class:

  * value mode: the global pairing value lies in F; the candidate is
    accepted iff its local pairing value matches up to a square exponent.
  * minpoly mode: only the minimal polynomial of the global pairing value
    over F is known; the candidate is accepted iff some square power of its
    local pairing value is a root of the reduced polynomial.

A brute-force oracle (direct Frobenius permutation of all l^2 torsion
points, no pairings) and a consistency audit are provided for validation.
"""

from dataclasses import dataclass, field as dc_field

from . import conj, ec, ff, nf
from .conj import ClassDescriptor, MatrixModL
from .errors import (
    Ambiguous,
    BadReduction,
    DenominatorDividesP,
    HypothesisViolated,
    Inconclusive,
    NotRootOfUnity,
    NotSL2,
    OddPrimeRequired,
    OrderMismatch,
    SingularCurve,
)
from .pairing import PairingValue, pairing_power_class, weil_pairing

MODE_VALUE = "value"
MODE_MINPOLY = "minpoly"

PATH_CHARPOLY = "charpoly"
PATH_SCALAR = "scalar"
PATH_PAIRING = "pairing"


@dataclass
class ClassificationJob:
    """Inputs of one classification: a curve over the number field, a
    torsion level l, a prime of the field, and the global pairing datum."""
    field: nf.NumberField
    curve: tuple  # ("short", coeffs) or ("long", coeffs), coeffs over F
    l: int
    prime: nf.PrimeDatum
    global_datum: nf.GlobalPairingDatum
    mode: str = MODE_VALUE
    subgroup_hypothesis_asserted: bool = False


@dataclass
class CandidateVerdict:
    sigma: tuple
    pairing_value: object
    pairing_dlog: int | None
    accepted: bool
    h: int | None
    reason: str

    def to_dict(self):
        return {
            "sigma": [list(r) for r in self.sigma],
            "pairing_value": self.pairing_value,
            "pairing_dlog": self.pairing_dlog,
            "accepted": self.accepted,
            "h": self.h,
            "reason": self.reason,
        }


@dataclass
class Evidence:
    l: int
    p: int
    q: int
    count: int
    trace: int
    trace_mod_l: int
    q_mod_l: int
    path: str
    seed: int
    rational_torsion: str | None = None
    torsion_degree: int | None = None
    ext_modulus: tuple | None = None
    frobenius_matrix: tuple | None = None
    global_reduced: object = None
    candidates: list = dc_field(default_factory=list)

    def to_dict(self):
        d = {
            "l": self.l, "p": self.p, "q": self.q, "count": self.count,
            "trace": self.trace, "trace_mod_l": self.trace_mod_l,
            "q_mod_l": self.q_mod_l, "path": self.path, "seed": self.seed,
            "rational_torsion": self.rational_torsion,
            "torsion_degree": self.torsion_degree,
            "ext_modulus": list(self.ext_modulus) if self.ext_modulus else None,
            "frobenius_matrix": ([list(r) for r in self.frobenius_matrix]
                                 if self.frobenius_matrix else None),
            "global_reduced": self.global_reduced,
            "candidates": [c.to_dict() for c in self.candidates],
        }
        return d


@dataclass
class ClassificationResult:
    gl_class: ClassDescriptor
    split: bool
    sl_class: tuple | None  # rows of the SL2 representative, if applicable
    determined_by: str
    evidence: Evidence

    def class_label(self) -> str:
        if self.sl_class is not None:
            return conj.class_label(MatrixModL(self.sl_class, self.evidence.l))
        t, d = self.gl_class.charpoly
        if self.gl_class.kind == conj.KIND_NONSEMISIMPLE:
            return f"N({t},{d})"
        return f"S({t},{d})"

    def to_dict(self):
        return {
            "gl_class": {
                "charpoly": list(self.gl_class.charpoly),
                "kind": self.gl_class.kind,
                "sl_label": self.gl_class.sl_label,
            },
            "split": self.split,
            "sl_class": [list(r) for r in self.sl_class] if self.sl_class else None,
            "determined_by": self.determined_by,
            "class_label": self.class_label(),
            "evidence": self.evidence.to_dict(),
        }


def _fe_render(x: ff.FieldElement):
    if x.is_constant():
        return x.coeffs[0]
    return list(x.coeffs)


def _reduce_curve(job: ClassificationJob) -> ec.Curve:
    model, coeffs = job.curve
    pd = job.prime
    try:
        red = [nf.reduce_element(c, pd) for c in coeffs]
    except DenominatorDividesP as exc:
        raise BadReduction(f"curve coefficient not integral at p: {exc}") from exc
    try:
        if model == "short":
            if len(red) != 2:
                raise BadReduction("short model needs coefficients (a, b)")
            return ec.Curve(pd.residue, red[0], red[1])
        if model == "long":
            if len(red) != 5:
                raise BadReduction(
                    "long model needs coefficients (a1, a2, a3, a4, a6)")
            return ec.short_model(red, pd.residue)
    except SingularCurve as exc:
        raise BadReduction(f"prime divides the curve discriminant: {exc}") from exc
    raise BadReduction(f"unknown curve model {model!r}")


def minpoly_divisibility(m_reduced, candidate_value: PairingValue, l: int,
                         H) -> bool:
    """Whether the minimal polynomial of candidate_value^h divides the
    reduced global polynomial for some h in H.  Since the candidate value
    lies in the residue field when q = 1 mod l, this is root membership."""
    ok, _, _ = _minpoly_divisibility_detail(m_reduced, candidate_value, l, H)
    return ok


def _minpoly_divisibility_detail(m_reduced, candidate_value, l, H):
    if not candidate_value.order_is_l():
        raise OrderMismatch("candidate pairing value must have exact order l")
    v = candidate_value.value
    F = v.field
    coeffs = [F.element(c) if not isinstance(c, ff.FieldElement) else c
              for c in m_reduced]
    if any(c.field != F for c in coeffs):
        raise OrderMismatch("polynomial and value live in different fields")
    for h in sorted(x % l for x in H):
        w = v ** h
        acc = F.zero()
        for c in reversed(coeffs):
            acc = acc * w + c
        if acc.is_zero():
            return True, h, w
    return False, None, None


def classify(job: ClassificationJob, seed: int = 0, basis_override=None,
             _flip_exponent: int = 1) -> ClassificationResult:
    l = job.l
    pd = job.prime
    if l < 3 or l % 2 == 0 or not ff.is_prime(l):
        raise OddPrimeRequired(f"l = {l} must be an odd prime")
    if job.mode not in (MODE_VALUE, MODE_MINPOLY):
        raise HypothesisViolated(f"unknown mode {job.mode!r}")
    if pd.p == l:
        raise HypothesisViolated("residue characteristic divides l")
    if job.mode == MODE_MINPOLY:
        if not job.subgroup_hypothesis_asserted:
            raise HypothesisViolated(
                "minpoly mode requires the subgroup-image hypothesis to be asserted")
        if pd.q % l != 1:
            raise HypothesisViolated(
                f"minpoly mode requires q = 1 mod l; q = {pd.q}")
        if job.global_datum.minpoly is None:
            raise HypothesisViolated("minpoly mode needs a minimal-polynomial datum")
    else:
        if job.global_datum.value is None:
            raise HypothesisViolated("value mode needs a pairing-value datum")

    E = _reduce_curve(job)
    q = pd.q
    N = ec.count_points(E, seed)
    t = q + 1 - N
    tl, ql = t % l, q % l
    disc = (tl * tl - 4 * ql) % l
    ev = Evidence(l=l, p=pd.p, q=q, count=N, trace=t, trace_mod_l=tl,
                  q_mod_l=ql, path=PATH_CHARPOLY, seed=seed)

    if disc != 0:
        rep = MatrixModL([[0, -ql], [1, tl]], l)
        desc = conj.gl_class_of(rep)
        return ClassificationResult(
            gl_class=desc, split=False,
            sl_class=rep.rows if ql == 1 else None,
            determined_by=PATH_CHARPOLY, evidence=ev)

    lam = tl * pow(2, -1, l) % l
    k = ec.torsion_field_degree(E, l, seed)
    o0 = k if k % l else k // l
    if ql == 1 and q <= 1 << 12:
        ev.rational_torsion = ec.rational_torsion_check(E, l)
    if k == o0:
        # Frobenius acts as the scalar lam on the l-torsion
        rep = MatrixModL.scalar(lam, 2, l)
        ev.path = PATH_SCALAR
        ev.torsion_degree = k
        return ClassificationResult(
            gl_class=conj.gl_class_of(rep), split=False,
            sl_class=rep.rows if ql == 1 else None,
            determined_by=PATH_SCALAR, evidence=ev)
    if ql != 1:
        # unipotent type with non-trivial determinant: no SL2 question
        rep = MatrixModL([[lam, 1], [0, lam]], l)
        ev.torsion_degree = k
        return ClassificationResult(
            gl_class=conj.gl_class_of(rep), split=False, sl_class=None,
            determined_by=PATH_CHARPOLY, evidence=ev)

    # split pair of SL2-classes: eps*[[1,1],[0,1]] vs eps*[[1,nu],[0,1]]
    ev.path = PATH_PAIRING
    ev.torsion_degree = k
    if basis_override is not None:
        basis = basis_override
        if basis.l != l or basis.ext.p != pd.p:
            raise HypothesisViolated("basis override does not match the job")
    else:
        ext = ff.ext_field_create(pd.p, pd.f * k, seed=seed)
        basis = ec.torsion_basis(E, l, ext, seed=seed)
    ev.ext_modulus = basis.ext.modulus
    M = ec.frobenius_matrix(basis, q)
    if M.trace() != tl or M.det() != ql:
        raise RuntimeError("Frobenius matrix contradicts the point count")
    ev.frobenius_matrix = M.rows

    _, emb = ec.embed_curve(E, basis.ext)
    eps = 1 if lam == 1 else -1
    nu = conj.smallest_nonsquare(l)
    H = conj.squares_mod(l)
    flip = _flip_exponent % l

    if job.mode == MODE_VALUE:
        gbar = nf.reduce_element(job.global_datum.value, pd)
        if gbar == pd.residue.one() or gbar ** l != pd.residue.one():
            raise Inconclusive(
                "reduced global value is not a primitive l-th root of unity")
        gbar = gbar ** flip
        glob_ext = emb(gbar)
        ev.global_reduced = _fe_render(gbar)
        decider = ("value", glob_ext)
    else:
        mbar = nf.reduce_poly(job.global_datum.minpoly, pd)
        roots = ff.poly_roots(pd.residue, mbar)
        if len(roots) != len(mbar) - 1:
            raise Inconclusive(
                "reduced minimal polynomial does not split over the residue field")
        for r in roots:
            if r == pd.residue.one() or r ** l != pd.residue.one():
                raise Inconclusive(
                    "reduced minimal polynomial has a root that is not a "
                    "primitive l-th root of unity")
        if flip != 1:
            mbar = _poly_from_roots(pd.residue, [r ** flip for r in roots])
        ev.global_reduced = [_fe_render(c) for c in mbar]
        m_ext = [emb(c) for c in mbar]
        decider = ("minpoly", m_ext)

    verdicts = []
    accepted = []
    for c in (1, nu):
        sigma = MatrixModL([[eps, eps * c], [0, eps]], l)
        adjusted = ec.basis_for_representative(basis, M, sigma, q=q)
        w = PairingValue(adjusted.zeta, l)
        if decider[0] == "value":
            try:
                e = ff.mu_l_dlog(w.value, decider[1], l)
            except NotRootOfUnity as exc:
                raise Inconclusive(str(exc)) from exc
            ok = pairing_power_class(decider[1], w, l, H)
            h = e if ok else None
            reason = (f"global = local^{e}, {e} is a square mod {l}" if ok else
                      f"global = local^{e}, {e} is not a square mod {l}")
            verdicts.append(CandidateVerdict(
                sigma.rows, _fe_render(w.value), e, ok, h, reason))
        else:
            ok, h, root = _minpoly_divisibility_detail(decider[1], w, l, H)
            if ok:
                reason = (f"local^{h} = {_fe_render(root)} is a root of the "
                          "reduced minimal polynomial")
            else:
                tested = sorted(x % l for x in H)
                reason = (f"no power local^h, h in {tested}, is a root of "
                          "the reduced minimal polynomial")
            verdicts.append(CandidateVerdict(
                sigma.rows, _fe_render(w.value), None, ok, h, reason))
        if verdicts[-1].accepted:
            accepted.append(sigma)
    ev.candidates = verdicts

    if len(accepted) == 0:
        raise Inconclusive(
            "no candidate accepted; the global pairing datum is inconsistent "
            f"with this prime (evidence: {ev.to_dict()})")
    if len(accepted) > 1:
        raise Ambiguous(
            "both candidates accepted; the global pairing datum is "
            f"inconsistent (evidence: {ev.to_dict()})")
    rep = accepted[0]
    return ClassificationResult(
        gl_class=conj.gl_class_of(rep), split=True, sl_class=rep.rows,
        determined_by=PATH_PAIRING, evidence=ev)


def _poly_from_roots(F: ff.ExtField, roots):
    poly = [F.one()]
    for r in roots:
        poly = [F.zero()] + poly
        for i in range(len(poly) - 1):
            poly[i] = poly[i] - poly[i + 1] * r
    return poly


def brute_force_class(E: ec.Curve, l: int, reference_basis: ec.TorsionBasis):
    """Independent oracle: apply the q-power Frobenius to every nonzero
    torsion point, check it permutes them linearly, and classify the
    resulting matrix by exhaustive SL2-conjugation.  No pairings, no basis
    adjustment.  Returns (representative, descriptor)."""
    q = E.field.q
    basis = reference_basis
    lat = basis.lattice()
    basis.point_at(0, 0)
    images = {}
    for (a, b), P in basis._points.items():
        if P.is_infinity:
            img = P
        else:
            img = ec.CurvePoint(ff.frobenius_power(P.x, q),
                                ff.frobenius_power(P.y, q))
        coords = lat.get(img.key())
        if coords is None:
            raise RuntimeError("Frobenius image escaped the torsion lattice")
        images[(a, b)] = coords
    if len(set(images.values())) != l * l:
        raise RuntimeError("Frobenius does not permute the torsion points")
    c1 = images[(1, 0)]
    c2 = images[(0, 1)]
    M = MatrixModL([[c1[0], c2[0]], [c1[1], c2[1]]], l)
    for (a, b), (ia, ib) in images.items():
        if ((M.rows[0][0] * a + M.rows[0][1] * b) % l != ia
                or (M.rows[1][0] * a + M.rows[1][1] * b) % l != ib):
            raise RuntimeError("Frobenius permutation is not linear in the basis")
    if M.det() != 1:
        raise NotSL2(f"Frobenius matrix has determinant {M.det()} != 1")
    for rep, desc, _size in conj.sl2_class_representatives(l):
        if conj.sl_conjugate(M, rep):
            return rep, desc
    raise RuntimeError("matrix matched no conjugacy class")  # pragma: no cover


@dataclass
class AuditReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(ok for _name, ok, _detail in self.checks)


def consistency_audit(job: ClassificationJob, result: ClassificationResult,
                      seed: int = 0, basis_override=None) -> AuditReport:
    """Re-derives the result and its accept/reject pattern: determinant and
    trace congruences, exact reproducibility, single-candidate acceptance,
    and the flip of the accepted candidate under a non-square twist of the
    global datum.  Raises AuditFailed at the first violated identity."""
    from .errors import AuditFailed

    checks = []

    def check(name, ok, detail=""):
        checks.append((name, ok, detail))
        if not ok:
            raise AuditFailed(f"{name}: {detail}")

    rerun = classify(job, seed, basis_override=basis_override)
    check("reproducible", rerun.to_dict() == result.to_dict(),
          "re-running the pipeline did not reproduce the result")
    ev = result.evidence
    l = job.l
    check("trace-congruence", ev.trace_mod_l == (ev.q + 1 - ev.count) % l,
          "trace mod l is inconsistent with the point count")
    if ev.frobenius_matrix is not None:
        M = MatrixModL(ev.frobenius_matrix, l)
        check("determinant-is-q", M.det() == ev.q % l,
              f"det {M.det()} != q mod l = {ev.q % l}")
        check("trace-matches-matrix", M.trace() == ev.trace_mod_l,
              "matrix trace differs from the counted trace")
    if result.split:
        n_acc = sum(1 for c in ev.candidates if c.accepted)
        check("single-acceptance", n_acc == 1,
              f"{n_acc} candidates accepted")
        nu = conj.smallest_nonsquare(l)
        flipped = classify(job, seed, basis_override=basis_override,
                           _flip_exponent=nu)
        check("nonsquare-flip", flipped.sl_class != result.sl_class,
              "non-square twist of the global datum did not flip the candidate")
        acc = [tuple(map(tuple, c.sigma)) for c in ev.candidates if c.accepted]
        check("sl-class-is-accepted", acc[0] == tuple(map(tuple, result.sl_class)),
              "reported class is not the accepted candidate")
    return AuditReport(checks)
