"""Minimal exact arithmetic in small number fields Q(alpha), and reduction
of elements and polynomials modulo a prime of the field.

A prime is specified as (p, g) with g a monic irreducible factor of the
defining polynomial mod p; the residue field is GF(p)[x]/(g) and the
reduction map sends alpha to the class of x.  Ideal arithmetic, ramification
and general prime decomposition are deliberately out of scope: the caller
names the factor g.
"""

from fractions import Fraction
import random

from . import ff
from .errors import (
    BadOrder,
    DegreeMismatch,
    DenominatorDividesP,
    NonMonic,
    NotAFactor,
    NotRootOfUnity,
    OddPrimeRequired,
    Reducible,
    ReducibleResiduePoly,
)

# large enough for the cyclotomic fields the scanner uses (degree l - 1,
# l <= 11) with a little headroom
_MAX_DEGREE = 12


class NumberField:
    """Q(alpha) for alpha a root of a monic irreducible integer polynomial.

    Elements are polynomials in alpha of degree < d with exact Fraction
    coefficients.
    """

    __slots__ = ("minpoly", "d")

    def __init__(self, minpoly):
        minpoly = tuple(int(c) for c in minpoly)
        if len(minpoly) < 2:
            raise DegreeMismatch("defining polynomial must have degree >= 1")
        if minpoly[-1] != 1:
            raise NonMonic("defining polynomial must be monic")
        if len(minpoly) - 1 > _MAX_DEGREE:
            raise DegreeMismatch(
                f"degree {len(minpoly) - 1} exceeds the supported bound {_MAX_DEGREE}")
        if not _is_irreducible_over_q(minpoly):
            raise Reducible(f"{list(minpoly)} is reducible over the rationals")
        self.minpoly = minpoly
        self.d = len(minpoly) - 1

    def element(self, coeffs) -> "NFElement":
        if isinstance(coeffs, NFElement):
            if coeffs.field != self:
                raise DegreeMismatch("element from a different number field")
            return coeffs
        if isinstance(coeffs, (int, Fraction)):
            coeffs = [coeffs]
        vals = [_as_fraction(c) for c in coeffs]
        if len(vals) > self.d:
            raise DegreeMismatch(
                f"{len(vals)} coefficients in a degree-{self.d} field")
        vals += [Fraction(0)] * (self.d - len(vals))
        return NFElement(self, tuple(vals))

    def zero(self) -> "NFElement":
        return self.element(0)

    def one(self) -> "NFElement":
        return self.element(1)

    def gen(self) -> "NFElement":
        if self.d == 1:
            return self.element(-self.minpoly[0])
        return self.element([0, 1])

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(("NumberField", self.minpoly))

    def __repr__(self):
        return f"Q[x]/({list(self.minpoly)})"


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, (tuple, list)) and len(c) == 2:
        return Fraction(int(c[0]), int(c[1]))
    raise DegreeMismatch(f"cannot interpret {c!r} as a rational number")


class NFElement:
    """An element of a NumberField, reduced mod the defining polynomial."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = coeffs

    def __add__(self, other):
        other = self.field.element(other)
        return NFElement(self.field, tuple(
            a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self.field.element(other)
        return NFElement(self.field, tuple(
            a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self.field.element(other) - self

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return NFElement(self.field, tuple(a * c for a in self.coeffs))
        other = self.field.element(other)
        d = self.field.d
        t = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    t[i + j] += a * b
        mp = self.field.minpoly
        for i in range(2 * d - 2, d - 1, -1):
            c = t[i]
            if c:
                for j in range(d):
                    t[i - d + j] -= c * mp[j]
        return NFElement(self.field, tuple(t[:d]))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DegreeMismatch("negative powers are not supported")
        r = self.field.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.element(other)
        return (isinstance(other, NFElement)
                and self.field == other.field and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.minpoly, self.coeffs))

    def __repr__(self):
        return str([str(c) for c in self.coeffs])


# ---------------------------------------------------------------------------
# Irreducibility over Q for monic integer polynomials
# ---------------------------------------------------------------------------

_SCAN_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113)


def _is_irreducible_over_q(f) -> bool:
    d = len(f) - 1
    if d == 1:
        return True
    # monic, so any rational root is an integer dividing the constant term
    if f[0] == 0:
        return False
    for r in _divisors(abs(f[0])):
        for s in (r, -r):
            if _int_eval(f, s) == 0:
                return False
    if d <= 3:
        return True  # degree 2-3 reducible only via a linear factor
    if _rational_gcd_degree(f) > 0:
        return False  # repeated factor
    for p in _SCAN_PRIMES:
        if ff._is_irreducible_fp([c % p for c in f], p):
            return True
    # complete decision: factor mod one large prime and test whether any
    # sub-product lifts to a true integer factor
    return not _has_integer_factor(f)


def _divisors(n: int):
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def _int_eval(f, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _rational_gcd_degree(f) -> int:
    """deg gcd(f, f') over Q."""
    a = [Fraction(c) for c in f]
    b = [Fraction(i * c) for i, c in enumerate(f)][1:]
    while any(b):
        a, b = b, _q_polymod(a, b)
    while a and a[-1] == 0:
        a.pop()
    return len(a) - 1


def _q_polymod(a, b):
    a = list(a)
    while b and b[-1] == 0:
        b.pop()
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / b[-1]
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    while a and a[-1] == 0:
        a.pop()
    return a


def _has_integer_factor(f) -> bool:
    """Exhaustive factor search for a monic squarefree integer polynomial:
    factor mod a single prime large enough that the Mignotte bound applies,
    then test every sub-product for exact integer division."""
    d = len(f) - 1
    norm2 = isqrt_ceil(sum(c * c for c in f))
    bound = (1 << d) * norm2 + 1
    p = 2 * bound + 1
    while True:
        while not ff.is_prime(p):
            p += 1
        fp = [c % p for c in f]
        deriv = [(i * c) % p for i, c in enumerate(fp)][1:]
        if len(ff._fp_gcd(fp, deriv, p)) == 1:
            break
        p += 1
    factors = _fp_factor(fp, p)
    if len(factors) == 1:
        return False
    m = len(factors)
    for mask in range(1, (1 << m) - 1):
        deg = sum(len(factors[i]) - 1 for i in range(m) if mask & (1 << i))
        if deg == 0 or deg > d // 2:
            continue
        prod = [1]
        for i in range(m):
            if mask & (1 << i):
                prod = ff._fp_mul(prod, factors[i], p)
        cand = [c if c <= p // 2 else c - p for c in prod]
        if _int_divides(cand, f):
            return True
    return False


def isqrt_ceil(n: int) -> int:
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else r + 1


def _int_divides(g, f) -> bool:
    """Exact division test of monic integer polynomials."""
    a = list(f)
    for i in range(len(a) - len(g), -1, -1):
        c = a[i + len(g) - 1]
        if c:
            for j, gj in enumerate(g):
                a[i + j] -= c * gj
    return not any(a)


def _fp_factor(f, p: int):
    """Full factorization of a monic squarefree polynomial over GF(p):
    distinct-degree split followed by seeded equal-degree splitting."""
    factors = []
    g = list(f)
    u = [0, 1]
    i = 0
    rng = random.Random(f"fpfactor:{p}:{tuple(f)}")
    while len(g) - 1 >= 2 * (i + 1):
        i += 1
        u = ff._fp_powmod(u, p, g, p)
        h = ff._fp_gcd(ff._fp_sub(u, [0, 1], p), g, p)
        if len(h) > 1:
            factors.extend(_fp_equal_degree(h, i, p, rng))
            g = ff._fp_divmod(g, h, p)[0]
            u = ff._fp_divmod(u, g, p)[1]
    if len(g) > 1:
        factors.append(g)
    return factors


def _fp_equal_degree(h, d: int, p: int, rng) -> list:
    """Split a product of distinct irreducibles, all of degree d."""
    if len(h) - 1 == d:
        return [h]
    e = (p ** d - 1) // 2
    while True:
        r = [rng.randrange(p) for _ in range(len(h) - 1)]
        if not any(r):
            continue
        w = ff._fp_powmod(r, e, h, p)
        g = ff._fp_gcd(ff._fp_sub(w, [1], p), h, p)
        if 0 < len(g) - 1 < len(h) - 1:
            rest = ff._fp_divmod(h, g, p)[0]
            return _fp_equal_degree(g, d, p, rng) + _fp_equal_degree(rest, d, p, rng)


# ---------------------------------------------------------------------------
# Primes of the field and reduction
# ---------------------------------------------------------------------------

class PrimeDatum:
    """A prime of F given by (p, g): g a monic irreducible factor of the
    defining polynomial mod p.  Knows its residue field GF(p^f) and the
    image theta of the field generator there."""

    __slots__ = ("field", "p", "g", "f", "q", "residue", "theta")

    def __init__(self, field: NumberField, p: int, g):
        if not ff.is_prime(p):
            raise NotAFactor(f"{p} is not prime")
        g = tuple(int(c) % p for c in g)
        while g and g[-1] == 0:
            g = g[:-1]
        if len(g) < 2:
            raise DegreeMismatch("residue polynomial must have degree >= 1")
        if g[-1] != 1:
            raise NonMonic("residue polynomial must be monic")
        fdeg = len(g) - 1
        if fdeg > 1 and not ff._is_irreducible_fp(list(g), p):
            raise ReducibleResiduePoly(
                f"{list(g)} is reducible modulo {p}")
        mp_red = [c % p for c in field.minpoly]
        if ff._fp_divmod(mp_red, list(g), p)[1]:
            raise NotAFactor(
                f"{list(g)} does not divide the defining polynomial mod {p}")
        self.field = field
        self.p = p
        self.g = g
        self.f = fdeg
        self.q = p ** fdeg
        self.residue = ff.ExtField(ff.PrimeField(p), fdeg, g)
        if fdeg == 1:
            self.theta = self.residue.element(-g[0] % p)
        else:
            self.theta = self.residue.gen()

    def __repr__(self):
        return f"({self.p}, {list(self.g)})"

    def __eq__(self, other):
        return (isinstance(other, PrimeDatum) and self.field == other.field
                and self.p == other.p and self.g == other.g)

    def __hash__(self):
        return hash((self.field.minpoly, self.p, self.g))


def nf_create(minpoly) -> NumberField:
    return NumberField(minpoly)


def prime_datum(field: NumberField, p: int, g) -> PrimeDatum:
    return PrimeDatum(field, p, g)


def reduce_element(e, pd: PrimeDatum) -> ff.FieldElement:
    """Reduce an element of F modulo the prime: alpha maps to theta and
    rational coefficients are reduced mod p (denominators inverted)."""
    e = pd.field.element(e)
    p = pd.p
    res = []
    for c in e.coeffs:
        if c.denominator % p == 0:
            raise DenominatorDividesP(
                f"denominator of {c} vanishes modulo {p}")
        res.append(c.numerator * pow(c.denominator, -1, p) % p)
    acc = pd.residue.zero()
    for r in reversed(res):
        acc = acc * pd.theta + pd.residue.element(r)
    return acc


def reduce_poly(poly, pd: PrimeDatum) -> list:
    """Coefficient-wise reduce_element; returns FieldElement coefficients
    with trailing zeros stripped."""
    out = [reduce_element(c, pd) for c in poly]
    while out and out[-1].is_zero():
        out.pop()
    return out


# ---------------------------------------------------------------------------
# The global pairing datum
# ---------------------------------------------------------------------------

class GlobalPairingDatum:
    """Either the pairing value of the fixed global basis as an element of F
    (requires the l-th roots of unity to lie in F), or its minimal
    polynomial over F."""

    __slots__ = ("field", "l", "value", "minpoly")

    def __init__(self, field: NumberField, l: int, value=None, minpoly=None,
                 _unchecked=False):
        self.field = field
        self.l = l
        self.value = value
        self.minpoly = minpoly
        if _unchecked:
            return
        if l < 3 or l % 2 == 0 or not ff.is_prime(l):
            raise OddPrimeRequired(f"torsion level {l} must be an odd prime")
        if (value is None) == (minpoly is None):
            raise DegreeMismatch(
                "exactly one of value and minpoly must be given")
        if value is not None:
            self.value = field.element(value)
            if self.value == field.one():
                raise BadOrder("pairing value 1 has trivial order")
            if self.value ** l != field.one():
                raise NotRootOfUnity(
                    "pairing value is not an l-th root of unity in F")
        else:
            coeffs = tuple(field.element(c) for c in minpoly)
            deg = len(coeffs) - 1
            if deg < 1:
                raise DegreeMismatch("pairing minimal polynomial is constant")
            if coeffs[-1] != field.one():
                raise NonMonic("pairing minimal polynomial must be monic")
            if (l - 1) % deg != 0:
                raise DegreeMismatch(
                    f"degree {deg} does not divide {l - 1}")
            self.minpoly = coeffs

    @classmethod
    def from_value(cls, field, l, value):
        return cls(field, l, value=value)

    @classmethod
    def from_minpoly(cls, field, l, coeffs):
        return cls(field, l, minpoly=coeffs)

    def __repr__(self):
        if self.value is not None:
            return f"pairing value {self.value!r}"
        return f"pairing minpoly {self.minpoly!r}"
