"""Elliptic curves over finite fields: group law, point counting, division
polynomials, l-torsion bases over extension fields, and the matrix of the
q-power Frobenius acting on the l-torsion.

Point counting is exhaustive for q <= 2^16 and baby-step giant-step inside
the Hasse interval above that, with a quadratic-twist combination step to
settle the rare ambiguous cases.  Orders over extension fields are then
exact integers from the trace recurrence t_j = t*t_{j-1} - q*t_{j-2}, which
is what makes torsion construction by cofactor multiplication cheap.

A torsion basis is found by division-polynomial root extraction when the
extension is small enough for that to be sensible, and by cofactor
multiplication of random points otherwise; either way the result is
certified (pairing of exact order l, and the full l^2-point span when the
lattice is materialized).
"""

import random
from dataclasses import dataclass
from math import gcd, isqrt

from . import ff
from .conj import MatrixModL
from .errors import (
    BadPower,
    BoundExceeded,
    DegreeMismatch,
    DependentPoints,
    NotABasis,
    NotConjugate,
    NotTorsionField,
    OddPrimeRequired,
    OffCurve,
    SingularCurve,
)
from .ff import FieldElement, p_from_elements, poly_roots

_EXHAUSTIVE_COUNT_BOUND = 1 << 16
_COUNT_SIZE_BOUND = 1 << 32
_ROOT_ROUTE_COST_BOUND = 1 << 20


@dataclass(frozen=True)
class CurvePoint:
    """Affine point or the point at infinity (x = y = None)."""
    x: FieldElement | None
    y: FieldElement | None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def key(self):
        if self.x is None:
            return "O"
        return (self.x.coeffs, self.y.coeffs)

    def __repr__(self):
        if self.x is None:
            return "O"
        return f"({self.x!r}, {self.y!r})"


INFINITY = CurvePoint(None, None)


class Curve:
    """y^2 = x^3 + a x + b over a finite field of characteristic > 3.

    When built from a long Weierstrass model the substitution data is kept
    so points can be moved between the two models exactly.
    """

    __slots__ = ("field", "a", "b", "long_model", "_xshift", "_a1", "_a3",
                 "_count", "_divpolys")

    def __init__(self, field: ff.ExtField, a, b, long_model=None, _shift=None):
        if field.p <= 3:
            raise SingularCurve(
                f"characteristic {field.p} <= 3 is not supported")
        self.field = field
        self.a = field.element(a)
        self.b = field.element(b)
        disc = -16 * (4 * self.a ** 3 + 27 * self.b ** 2)
        if disc.is_zero():
            raise SingularCurve("curve discriminant vanishes")
        self.long_model = long_model
        if _shift is not None:
            self._xshift, self._a1, self._a3 = _shift
        else:
            self._xshift = self._a1 = self._a3 = None
        self._count = None
        self._divpolys = None

    def discriminant(self) -> FieldElement:
        return -16 * (4 * self.a ** 3 + 27 * self.b ** 2)

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        return P.y * P.y == P.x ** 3 + self.a * P.x + self.b

    def point(self, x, y) -> CurvePoint:
        P = CurvePoint(self.field.element(x), self.field.element(y))
        if not self.contains(P):
            raise OffCurve(f"({x}, {y}) does not satisfy the curve equation")
        return P

    def neg(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if (P.y + Q.y).is_zero():
                return INFINITY
            lam = (3 * P.x * P.x + self.a) / (2 * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = lam * lam - P.x - Q.x
        y3 = lam * (P.x - x3) - P.y
        return CurvePoint(x3, y3)

    def mul(self, n: int, P: CurvePoint) -> CurvePoint:
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = INFINITY
        A = P
        while n:
            if n & 1:
                R = self.add(R, A)
            A = self.add(A, A)
            n >>= 1
        return R

    def random_point(self, rng: random.Random) -> CurvePoint:
        """A uniformly-ish random affine point (deterministic per rng)."""
        F = self.field
        while True:
            x = F.random_element(rng)
            rhs = x ** 3 + self.a * x + self.b
            if rhs.is_zero():
                return CurvePoint(x, F.zero())
            if ff.is_square(rhs):
                return CurvePoint(x, ff.sqrt_element(rhs))

    def to_short_point(self, P: CurvePoint) -> CurvePoint:
        """Map a point on the recorded long model to this short model."""
        if self._xshift is None:
            raise DegreeMismatch("curve has no long-model provenance")
        if P.is_infinity:
            return P
        x = P.x + self._xshift
        y = P.y + (self._a1 * P.x + self._a3) / 2
        Q = CurvePoint(x, y)
        if not self.contains(Q):
            raise OffCurve("transformed point misses the short model")
        return Q

    def to_long_point(self, P: CurvePoint) -> CurvePoint:
        if self._xshift is None:
            raise DegreeMismatch("curve has no long-model provenance")
        if P.is_infinity:
            return P
        x = P.x - self._xshift
        y = P.y - (self._a1 * x + self._a3) / 2
        return CurvePoint(x, y)

    def __repr__(self):
        return f"y^2 = x^3 + {self.a!r}*x + {self.b!r} over {self.field!r}"


def short_model(coefficients, field: ff.ExtField) -> Curve:
    """Complete the square and depress the cubic of a long Weierstrass model
    (a1, a2, a3, a4, a6); the point substitution is recorded on the curve."""
    a1, a2, a3, a4, a6 = (field.element(c) for c in coefficients)
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
    A = -c4 / 48
    B = -c6 / 864
    shift = (b2 / 12, a1, a3)
    return Curve(field, A, B,
                 long_model=tuple(c.coeffs for c in (a1, a2, a3, a4, a6)),
                 _shift=shift)


# ---------------------------------------------------------------------------
# Point counting
# ---------------------------------------------------------------------------

def count_points(E: Curve, seed: int = 0) -> int:
    """Exact order of E(GF(q)): exhaustive character sum for q <= 2^16,
    baby-step giant-step in the Hasse interval otherwise.  The result is
    cross-checked by annihilating random points."""
    if E._count is not None:
        return E._count
    q = E.field.q
    if q > _COUNT_SIZE_BOUND:
        raise BoundExceeded(f"field size {q} exceeds the counting bound 2^32")
    if q <= _EXHAUSTIVE_COUNT_BOUND:
        N = _count_exhaustive(E)
    else:
        N = _count_bsgs(E, seed)
    rng = random.Random(f"countcheck:{E.field._key}:{seed}")
    for _ in range(3):
        P = E.random_point(rng)
        if not E.mul(N, P).is_infinity:
            raise RuntimeError("point count failed its annihilation check")
    E._count = N
    return N


def _count_exhaustive(E: Curve) -> int:
    F = E.field
    q = F.q
    if F.k == 1:
        p = F.p
        a = E.a.coeffs[0]
        b = E.b.coeffs[0]
        e = (p - 1) // 2
        n = q + 1
        for x in range(p):
            r = (x * x * x + a * x + b) % p
            if r:
                n += 1 if pow(r, e, p) == 1 else -1
        return n
    a = E.a.coeffs
    b = E.b.coeffs
    e = (q - 1) // 2
    one = F._one
    n = q + 1
    for x in ff._raw_elements(F):
        r = F._add(F._mul(F._mul(x, x), x), F._add(F._mul(a, x), b))
        if any(r):
            n += 1 if F._pow(r, e) == one else -1
    return n


def _annihilators(E: Curve, P: CurvePoint, lo: int, hi: int) -> list:
    """All n in [lo, hi] with n*P = O, by baby-step giant-step."""
    m = isqrt(hi - lo + 1) + 1
    table: dict = {}
    R = INFINITY
    for j in range(m):
        table.setdefault(R.key(), []).append(j)
        R = E.add(R, P)
    G = R  # m*P
    U = E.mul(lo, P)
    out = []
    steps = (hi - lo) // m + 2
    for i in range(steps):
        mk = E.neg(U).key()
        if mk in table:
            for j in table[mk]:
                n = lo + i * m + j
                if lo <= n <= hi:
                    out.append(n)
        U = E.add(U, G)
    return sorted(set(out))


def _nonsquare_element(F: ff.ExtField, rng: random.Random) -> FieldElement:
    while True:
        d = F.random_element(rng)
        if not d.is_zero() and not ff.is_square(d):
            return d


def _count_bsgs(E: Curve, seed: int) -> int:
    q = E.field.q
    B = isqrt(4 * q) + 1
    lo, hi = q + 1 - B, q + 1 + B
    rng = random.Random(f"bsgs:{E.field._key}:{E.a.coeffs}:{E.b.coeffs}:{seed}")

    def refine(curve, known):
        P = curve.random_point(rng)
        ms = _annihilators(curve, P, lo, hi)
        if not ms:
            raise RuntimeError("no group-order candidate in the Hasse interval")
        if len(ms) == 1:
            return ms[0], known
        return None, (known * (ms[1] - ms[0])) // gcd(known, ms[1] - ms[0])

    L = 1
    for _ in range(10):
        exact, L = refine(E, L)
        if exact is not None:
            return exact
        mults = [n for n in range(lo + (-lo) % L, hi + 1, L)]
        if len(mults) == 1:
            return mults[0]
    # the group exponent is small; pin the order through the quadratic twist
    d = _nonsquare_element(E.field, rng)
    Et = Curve(E.field, E.a * d * d, E.b * d ** 3)
    target = 2 * q + 2
    Lt = 1
    for _ in range(10):
        exact, Lt = refine(Et, Lt)
        if exact is not None:
            n = target - exact
            if lo <= n <= hi and n % L == 0:
                return n
            raise RuntimeError("twist order contradicts the curve order")
        cands = [n for n in range(lo + (-lo) % L, hi + 1, L)
                 if (target - n) % Lt == 0]
        if len(cands) == 1:
            return cands[0]
    raise RuntimeError("point count remained ambiguous")


def trace_mod_l(E: Curve, q: int, l: int) -> int:
    """Frobenius trace mod l: (q + 1 - #E) mod l."""
    _require_odd_prime_l(l)
    if q != E.field.q:
        raise BadPower(f"q = {q} does not match the field size {E.field.q}")
    return (q + 1 - count_points(E)) % l


def _require_odd_prime_l(l: int):
    if l == 2 or not ff.is_prime(l):
        raise OddPrimeRequired(f"torsion level {l} must be an odd prime")


# ---------------------------------------------------------------------------
# Division polynomials (x-only form)
# ---------------------------------------------------------------------------

def _divpoly_raw(E: Curve, n: int):
    """The x-part g_n of the n-th division polynomial: psi_n = g_n for odd
    n and psi_n = y*g_n for even n, with y^2 eliminated via the curve
    equation."""
    if E._divpolys is None:
        F = E.field
        a = E.a.coeffs
        b = E.b.coeffs
        el = F.element
        Y = p_from_elements(F, [E.b, E.a, el(0), el(1)])
        a2 = F._mul(a, a)
        ab = F._mul(a, b)
        b2 = F._mul(b, b)
        a3 = F._mul(a2, a)
        g3 = p_from_elements(F, [
            el(0) - FieldElement(F, a2), 12 * E.b, 6 * E.a, el(0), el(3)])
        g4 = p_from_elements(F, [
            -4 * (8 * FieldElement(F, b2) + FieldElement(F, a3)),
            -16 * FieldElement(F, ab),
            -20 * FieldElement(F, a2),
            80 * E.b, 20 * E.a, el(0), el(4)])
        E._divpolys = {
            "Y2": ff.p_mul(F, Y, Y),
            0: [], 1: [F._one], 2: [F._add(F._one, F._one)],
            3: g3, 4: g4,
        }
    cache = E._divpolys
    if n in cache:
        return cache[n]
    F = E.field
    Y2 = cache["Y2"]
    m = n // 2
    if n % 2:
        A = ff.p_mul(F, _divpoly_raw(E, m + 2),
                     _p_cube(F, _divpoly_raw(E, m)))
        B = ff.p_mul(F, _divpoly_raw(E, m - 1),
                     _p_cube(F, _divpoly_raw(E, m + 1)))
        if m % 2 == 0:
            res = ff.p_sub(F, ff.p_mul(F, Y2, A), B)
        else:
            res = ff.p_sub(F, A, ff.p_mul(F, Y2, B))
    else:
        t = ff.p_sub(
            F,
            ff.p_mul(F, _divpoly_raw(E, m + 2),
                     _p_square(F, _divpoly_raw(E, m - 1))),
            ff.p_mul(F, _divpoly_raw(E, m - 2),
                     _p_square(F, _divpoly_raw(E, m + 1))))
        res = ff.p_smul(F, F._inv(F._add(F._one, F._one)),
                        ff.p_mul(F, _divpoly_raw(E, m), t))
    cache[n] = res
    return res


def _p_square(F, a):
    return ff.p_mul(F, a, a)


def _p_cube(F, a):
    return ff.p_mul(F, ff.p_mul(F, a, a), a)


def division_polynomial(E: Curve, l: int) -> list:
    """psi_l as a polynomial in x alone, for odd l; its roots are exactly
    the x-coordinates of the nonzero l-torsion."""
    if l < 1 or l % 2 == 0:
        raise OddPrimeRequired(f"x-only division polynomial needs odd l, got {l}")
    raw = _divpoly_raw(E, l)
    if l >= 3 and ff.is_prime(l) and len(raw) - 1 != (l * l - 1) // 2:
        raise RuntimeError("division polynomial has the wrong degree")
    return [FieldElement(E.field, c) for c in raw]


def rational_torsion_check(E: Curve, l: int) -> str:
    """Shape of the l-torsion already rational over the base field:
    "full" for (Z/l)^2, "partial" for Z/l, "none" otherwise."""
    _require_odd_prime_l(l)
    if E.field.p == l:
        raise NotTorsionField(f"characteristic equals l = {l}")
    F = E.field
    roots = poly_roots(F, division_polynomial(E, l))
    good = 0
    for r in roots:
        rhs = r ** 3 + E.a * r + E.b
        if rhs.is_zero():
            raise RuntimeError("l-torsion x-coordinate with y = 0")
        if ff.is_square(rhs):
            good += 1
    if good == (l * l - 1) // 2:
        return "full"
    if good == (l - 1) // 2:
        return "partial"
    if good == 0:
        return "none"
    raise RuntimeError(f"impossible rational l-torsion count {good}")


# ---------------------------------------------------------------------------
# Torsion field degree
# ---------------------------------------------------------------------------

def _trace_power(t: int, q: int, j: int) -> int:
    """alpha^j + beta^j for alpha, beta the Frobenius eigenvalues, via the
    integer recurrence t_j = t*t_{j-1} - q*t_{j-2}."""
    t0, t1 = 2, t
    for _ in range(j - 1):
        t0, t1 = t1, t * t1 - q * t0
    return t1 if j >= 1 else 2


def group_order_ext(E: Curve, j: int) -> int:
    """#E(GF(q^j)) exactly, from the base count and the trace recurrence."""
    q = E.field.q
    t = q + 1 - count_points(E)
    return q ** j + 1 - _trace_power(t, q, j)


def _mult_order(x: int, l: int) -> int:
    x %= l
    if x == 0:
        raise ZeroDivisionError("order of zero residue")
    o, acc = 1, x
    while acc != 1:
        acc = acc * x % l
        o += 1
    return o


def _matrix_order(tl: int, ql: int, l: int) -> int:
    """Multiplicative order of the companion matrix of x^2 - t x + q mod l
    (the semisimple case: distinct eigenvalues)."""
    M = MatrixModL([[0, -ql], [1, tl]], l)
    acc = M
    I = MatrixModL.identity(2, l)
    for o in range(1, l * l):
        if acc == I:
            return o
        acc = acc * M
    raise BoundExceeded("companion matrix order exceeded l^2 - 1")


def torsion_field_degree(E: Curve, l: int, seed: int = 0) -> int:
    """Smallest k with the full l-torsion defined over GF(q^k).

    The order of the Frobenius matrix mod l is pinned by its characteristic
    polynomial except when the discriminant vanishes, where the scalar and
    unipotent-type cases are separated by an actual torsion computation at
    the lower candidate degree.
    """
    _require_odd_prime_l(l)
    if E.field.p == l:
        raise NotTorsionField(f"characteristic equals l = {l}")
    q = E.field.q
    t = q + 1 - count_points(E, seed)
    tl, ql = t % l, q % l
    disc = (tl * tl - 4 * ql) % l
    bound = l * (l * l - 1)
    if disc != 0:
        if ff.is_square_mod_l(disc, l):
            s = next(s for s in range(l) if s * s % l == disc)
            inv2 = pow(2, -1, l)
            k = _lcm(_mult_order((tl + s) * inv2, l),
                     _mult_order((tl - s) * inv2, l))
        else:
            k = _matrix_order(tl, ql, l)
        if k > bound:
            raise BoundExceeded(f"torsion degree {k} exceeds {bound}")
        return k
    lam = tl * pow(2, -1, l) % l
    o0 = _mult_order(lam, l)
    # scalar lambda*I needs mu_l in the degree-o0 field and l^2 | the order
    if pow(q, o0, l) != 1 or group_order_ext(E, o0) % (l * l) != 0:
        return l * o0
    if lam == 1 or lam == l - 1:
        # scalar iff the Frobenius sends every torsion point to +-itself,
        # i.e. iff every torsion x-coordinate is already rational: a root
        # count of the division polynomial over the base field
        full = _psi_root_count(E, l) == (l * l - 1) // 2
    else:
        full = _full_torsion_at_degree(E, l, o0, seed)
    return o0 if full else l * o0


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _psi_root_count(E: Curve, l: int) -> int:
    """Number of roots of the l-th division polynomial in the base field:
    deg gcd(x^q - x, psi_l), no extraction."""
    F = E.field
    psi = ff.p_monic(F, list(_divpoly_raw(E, l)))
    xq = ff.p_powmod(F, [F._zero, F._one], F.q, psi)
    h = ff.p_gcd(F, ff.p_sub(F, xq, [F._zero, F._one]), psi)
    return len(h) - 1


def _full_torsion_at_degree(E: Curve, l: int, j: int, seed: int) -> bool:
    """Whether E[l] is entirely rational over the degree-j extension,
    decided by points: the division-polynomial check over the base field,
    or a (bounded) basis construction attempt upstairs."""
    if j == 1:
        return rational_torsion_check(E, l) == "full"
    F = E.field
    ext = ff.ext_field_create(F.p, F.k * j, seed=seed)
    EL, _ = embed_curve(E, ext)
    N = group_order_ext(E, j)
    if N % (l * l):
        return False
    rng = random.Random(f"fulltorsion:{ext._key}:{seed}")
    try:
        _cofactor_basis(EL, l, N, rng, attempts=24)
        return True
    except DependentPoints:
        return False


def embed_curve(E: Curve, ext: ff.ExtField):
    """Base-change E along the canonical embedding of its field into ext;
    returns the new curve and the element-embedding function."""
    F = E.field
    if F == ext:
        return E, lambda x: x
    if F.p != ext.p or ext.k % F.k != 0:
        raise DegreeMismatch(
            f"{ext!r} is not an extension of {F!r}")
    if F.k == 1:
        emb = lambda x: ext.element(x.coeffs[0])  # noqa: E731
    else:
        root = ff.find_embedding(F, ext)
        emb = lambda x: ff.embed_element(x, ext, root)  # noqa: E731
    return Curve(ext, emb(E.a), emb(E.b)), emb


# ---------------------------------------------------------------------------
# Torsion bases
# ---------------------------------------------------------------------------

class TorsionBasis:
    """An ordered pair (Q1, Q2) generating E[l] over the extension field,
    together with zeta = <Q1, Q2>_l of exact order l."""

    __slots__ = ("curve", "l", "ext", "Q1", "Q2", "zeta", "_lattice", "_points")

    def __init__(self, curve: Curve, l: int, Q1: CurvePoint, Q2: CurvePoint,
                 zeta: FieldElement):
        self.curve = curve
        self.l = l
        self.ext = curve.field
        self.Q1 = Q1
        self.Q2 = Q2
        self.zeta = zeta
        self._lattice = None
        self._points = None

    def lattice(self):
        """key -> (a, b) for every combination a*Q1 + b*Q2; materializing it
        certifies that (Q1, Q2) spans the full l^2 points of E[l]."""
        if self._lattice is None:
            l = self.l
            E = self.curve
            lat = {}
            pts = {}
            rowP = INFINITY
            for a in range(l):
                P = rowP
                for b in range(l):
                    lat[P.key()] = (a, b)
                    pts[(a, b)] = P
                    P = E.add(P, self.Q2)
                rowP = E.add(rowP, self.Q1)
            if len(lat) != l * l:
                raise NotABasis("basis points do not span l^2 points")
            self._lattice = lat
            self._points = pts
        return self._lattice

    def point_at(self, a: int, b: int) -> CurvePoint:
        self.lattice()
        return self._points[(a % self.l, b % self.l)]

    def __repr__(self):
        return f"TorsionBasis(l={self.l}, Q1={self.Q1!r}, Q2={self.Q2!r})"


def torsion_basis(E: Curve, l: int, ext: ff.ExtField, seed: int = 0,
                  points=None) -> TorsionBasis:
    """Build (or validate, when points are supplied) an ordered basis of
    E[l] over ext, which must be the torsion field of E at l.

    Root extraction from the division polynomial is used when the field is
    small enough; otherwise random points are pushed into E[l] by cofactor
    multiplication.  Both routes are deterministic for a fixed seed.
    """
    from .pairing import weil_pairing  # local: pairing depends on this module

    _require_odd_prime_l(l)
    F = E.field
    if ext.p != F.p or ext.k % F.k != 0:
        raise NotTorsionField(f"{ext!r} does not extend the base field {F!r}")
    kdeg = ext.k // F.k
    expected = torsion_field_degree(E, l, seed)
    if kdeg != expected:
        raise NotTorsionField(
            f"extension degree {kdeg}, but the torsion field has degree {expected}")
    EL, emb = embed_curve(E, ext)

    if points is not None:
        Q1, Q2 = points
        for Q in (Q1, Q2):
            if Q.is_infinity or not EL.contains(Q):
                raise NotABasis("supplied point is not an affine curve point")
            if not EL.mul(l, Q).is_infinity:
                raise NotABasis("supplied point is not l-torsion")
        zeta = weil_pairing(EL, Q1, Q2, l, seed=seed).value
        if zeta == ext.one():
            raise DependentPoints("supplied points pair trivially")
        return TorsionBasis(EL, l, Q1, Q2, zeta)

    cost = ext.q.bit_length() * ((l * l - 1) // 2) ** 2 * ext.k ** 2
    if cost <= _ROOT_ROUTE_COST_BOUND:
        Q1, Q2, zeta = _rootfind_basis(E, EL, emb, l, seed)
    else:
        N = group_order_ext(E, kdeg)
        rng = random.Random(f"torsion:{ext._key}:{seed}")
        Q1, Q2, zeta = _cofactor_basis(EL, l, N, rng)
    return TorsionBasis(EL, l, Q1, Q2, zeta)


def _rootfind_basis(E, EL, emb, l, seed):
    from .pairing import weil_pairing

    F = EL.field
    psi = [emb(c) for c in division_polynomial(E, l)]
    roots = poly_roots(F, psi)
    if len(roots) != (l * l - 1) // 2:
        raise NotTorsionField(
            "division polynomial does not split over the given extension")
    pts = []
    for r in roots:
        rhs = r ** 3 + EL.a * r + EL.b
        y = ff.sqrt_element(rhs)
        if y is None:
            raise NotTorsionField(
                "torsion x-coordinate does not lift over the given extension")
        pts.append(CurvePoint(r, y))
    Q1 = pts[0]
    for cand in pts[1:]:
        zeta = weil_pairing(EL, Q1, cand, l, seed=seed).value
        if zeta != F.one():
            return Q1, cand, zeta
    raise DependentPoints("no independent partner among the torsion points")


def _cofactor_basis(EL, l, N, rng, attempts=64):
    from .pairing import weil_pairing

    v = 0
    M = N
    while M % l == 0:
        M //= l
        v += 1
    if v < 2:
        raise DependentPoints(
            f"group order has l-valuation {v} < 2; no full torsion here")

    def sample() -> CurvePoint:
        for _ in range(4 * attempts):
            P = EL.random_point(rng)
            R = EL.mul(M, P)
            if R.is_infinity:
                continue
            while True:
                T = EL.mul(l, R)
                if T.is_infinity:
                    return R
                R = T
        raise DependentPoints("failed to sample a point of order l")

    Q1 = sample()
    for _ in range(attempts):
        Q2 = sample()
        zeta = weil_pairing(EL, Q1, Q2, l,
                            seed=rng.randrange(1 << 30)).value
        if zeta != EL.field.one():
            return Q1, Q2, zeta
    raise DependentPoints("could not find an independent second generator")


# ---------------------------------------------------------------------------
# The Frobenius matrix and basis adjustment
# ---------------------------------------------------------------------------

def frobenius_matrix(basis: TorsionBasis, q: int) -> MatrixModL:
    """Matrix of the q-power Frobenius on E[l] with respect to the basis:
    images are expressed by exhaustive search over the l^2 combinations, and
    the determinant is checked against q mod l."""
    l = basis.l
    lat = basis.lattice()
    cols = []
    for Q in (basis.Q1, basis.Q2):
        img = CurvePoint(ff.frobenius_power(Q.x, q),
                         ff.frobenius_power(Q.y, q))
        coords = lat.get(img.key())
        if coords is None:
            raise NotABasis("Frobenius image escapes the span of the basis")
        cols.append(coords)
    M = MatrixModL([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]], l)
    if M.det() != q % l:
        raise RuntimeError("Frobenius determinant differs from q mod l")
    return M


def basis_for_representative(basis: TorsionBasis, M: MatrixModL,
                             sigma: MatrixModL, q: int | None = None
                             ) -> TorsionBasis:
    """A new basis in the span of the old one with respect to which the
    Frobenius acts as sigma, given that it acts as M now: the first C in
    GL2 (lexicographic order) with C^-1 M C = sigma is applied."""
    from .pairing import weil_pairing

    l = basis.l
    fm = M.rows[0] + M.rows[1]
    fs = sigma.rows[0] + sigma.rows[1]
    C = None
    for a in range(l):
        for b in range(l):
            for c in range(l):
                for d in range(l):
                    if (a * d - b * c) % l == 0:
                        continue
                    cf = (a, b, c, d)
                    if _flat_mul2(fm, cf, l) == _flat_mul2(cf, fs, l):
                        C = cf
                        break
                if C:
                    break
            if C:
                break
        if C:
            break
    if C is None:
        raise NotConjugate("target matrix is not GL2-conjugate to M")
    a, b, c, d = C
    Q1 = basis.point_at(a, c)
    Q2 = basis.point_at(b, d)
    zeta = weil_pairing(basis.curve, Q1, Q2, l).value
    out = TorsionBasis(basis.curve, l, Q1, Q2, zeta)
    if q is not None and frobenius_matrix(out, q) != sigma:
        raise RuntimeError("adjusted basis fails its Frobenius postcondition")
    return out


def _flat_mul2(x, y, l):
    return ((x[0] * y[0] + x[1] * y[2]) % l, (x[0] * y[1] + x[1] * y[3]) % l,
            (x[2] * y[0] + x[3] * y[2]) % l, (x[2] * y[1] + x[3] * y[3]) % l)
