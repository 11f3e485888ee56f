"""Exact arithmetic in prime fields GF(p) and extensions GF(p^k).

Elements are stored in the polynomial basis as fully reduced little-endian
coefficient tuples, so equality is structural and values hash cleanly.  The
module also carries the polynomial machinery (gcd, powmod, root extraction,
irreducibility) that the curve and classification layers are built on.

Everything is deterministic: random searches (irreducible moduli, root
splitting) draw from generators seeded with explicit strings.
"""

import random
from math import isqrt

from .errors import (
    BadOrder,
    BadPower,
    DegreeMismatch,
    NonPrime,
    NotRootOfUnity,
    ReducibleModulus,
    ZeroPolynomial,
    ZeroResidue,
)

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_WORD_BOUND = 1 << 63


def is_prime(n: int) -> bool:
    """Deterministic primality test for word-sized integers."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """Descriptor of the prime field GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise NonPrime(f"modulus {p} is not prime")
        if p >= _WORD_BOUND:
            raise NonPrime(f"modulus {p} exceeds the word-size bound 2^63")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class ExtField:
    """Descriptor of GF(p^k) = GF(p)[x]/(modulus), with k = 1 degenerating
    to the prime field (modulus x by convention).

    Raw arithmetic operates on reduced little-endian coefficient tuples of
    length exactly k; FieldElement wraps these for operator syntax.
    """

    __slots__ = ("base", "p", "k", "modulus", "q", "_mtail", "_key", "_one",
                 "_zero", "_gen")

    def __init__(self, base: PrimeField, k: int, modulus):
        p = base.p
        if k < 1:
            raise DegreeMismatch(f"extension degree {k} < 1")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise DegreeMismatch(
                f"modulus must be monic of degree {k}, got {list(modulus)}")
        if k > 1 and not _is_irreducible_fp(modulus, p):
            raise ReducibleModulus(
                f"modulus {list(modulus)} is reducible over GF({p})")
        self.base = base
        self.p = p
        self.k = k
        self.modulus = modulus
        self.q = p ** k
        self._mtail = modulus[:-1]
        self._key = (p, k, modulus)
        self._zero = (0,) * k
        one = [0] * k
        one[0] = 1
        self._one = tuple(one)
        gen = [0] * k
        if k > 1:
            gen[1] = 1
        self._gen = tuple(gen)

    # -- raw coefficient-tuple arithmetic ------------------------------

    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def _mul(self, a, b):
        p = self.p
        k = self.k
        if k == 1:
            return (a[0] * b[0] % p,)
        t = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    t[i + j] += ai * bj
        mtail = self._mtail
        for i in range(2 * k - 2, k - 1, -1):
            c = t[i] % p
            if c:
                base = i - k
                for j in range(k):
                    t[base + j] -= c * mtail[j]
        return tuple(v % p for v in t[:k])

    def _smul(self, c, a):
        p = self.p
        c %= p
        return tuple(c * x % p for x in a)

    def _pow(self, a, e: int):
        if e < 0:
            return self._pow(self._inv(a), -e)
        if self.k == 1:
            return (pow(a[0], e, self.p),)
        r = self._one
        while e:
            if e & 1:
                r = self._mul(r, a)
            a = self._mul(a, a)
            e >>= 1
        return r

    def _inv(self, a):
        p = self.p
        if self.k == 1:
            if a[0] == 0:
                raise ZeroDivisionError("division by zero field element")
            return (pow(a[0], p - 2, p),)
        if not any(a):
            raise ZeroDivisionError("division by zero field element")
        # extended Euclid in GF(p)[x] against the modulus
        r0, r1 = list(self.modulus), _fp_trim(list(a))
        s0, s1 = [], [1]
        while r1:
            q, rem = _fp_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _fp_sub(s0, _fp_mul(q, s1, p), p)
        lead_inv = pow(r0[-1], p - 2, p)
        s0 = [c * lead_inv % p for c in s0]
        s0 += [0] * (self.k - len(s0))
        return tuple(s0[: self.k])

    # -- element constructors -------------------------------------------

    def element(self, value) -> "FieldElement":
        """Coerce an int, an iterable of ints, or a FieldElement of this
        field into a canonical element."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise DegreeMismatch("element belongs to a different field")
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.k - 1)
            return FieldElement(self, tuple(coeffs))
        coeffs = [c % self.p for c in value]
        if len(coeffs) > self.k:
            raise DegreeMismatch(
                f"{len(coeffs)} coefficients for a degree-{self.k} extension")
        coeffs += [0] * (self.k - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def zero(self) -> "FieldElement":
        return FieldElement(self, self._zero)

    def one(self) -> "FieldElement":
        return FieldElement(self, self._one)

    def gen(self) -> "FieldElement":
        """The class of x (zero in the degenerate k = 1 case)."""
        return FieldElement(self, self._gen)

    def elements(self):
        """Iterate over all q elements.  Only sensible for small fields."""
        if self.k == 1:
            for v in range(self.p):
                yield FieldElement(self, (v,))
            return
        import itertools
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield FieldElement(self, coeffs)

    def random_element(self, rng: random.Random) -> "FieldElement":
        return FieldElement(
            self, tuple(rng.randrange(self.p) for _ in range(self.k)))

    def __eq__(self, other):
        return isinstance(other, ExtField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"


class FieldElement:
    """An element of an ExtField, held as a reduced coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ExtField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def __add__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        return FieldElement(self.field, self.field._add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        return FieldElement(self.field, self.field._sub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return self.field.element(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.field, self.field._smul(other, self.coeffs))
        return FieldElement(self.field, self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        return FieldElement(
            self.field, self.field._mul(self.coeffs, self.field._inv(other.coeffs)))

    def __rtruediv__(self, other):
        return self.field.element(other) / self

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.coeffs))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field._pow(self.coeffs, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field._inv(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == self.field.element(other).coeffs
        return (isinstance(other, FieldElement)
                and self.field._key == other.field._key
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field._key, self.coeffs))

    def is_constant(self) -> bool:
        return not any(self.coeffs[1:])

    def lift(self) -> int:
        """Integer value of a prime-subfield constant."""
        if not self.is_constant():
            raise DegreeMismatch("element is not in the prime subfield")
        return self.coeffs[0]

    def __repr__(self):
        if self.field.k == 1 or self.is_constant():
            return str(self.coeffs[0])
        return f"{list(self.coeffs)}"


# ---------------------------------------------------------------------------
# Polynomials over GF(p): plain little-endian int lists, trailing zeros
# stripped, [] is the zero polynomial.  Used for modulus validation and as
# the k = 1 backend of the generic machinery below.
# ---------------------------------------------------------------------------

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    r = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        r[i] = (x - y) % p
    return _fp_trim(r)


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                r[i + j] += ai * bj
    return _fp_trim([v % p for v in r])


def _fp_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], p - 2, p)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] % p
        if c:
            c = c * inv_lead % p
            q[i] = c
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return _fp_trim(q), _fp_trim([v % p for v in a])


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _fp_powmod(base, e, mod, p):
    r = [1]
    base = _fp_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            r = _fp_divmod(_fp_mul(r, base, p), mod, p)[1]
        base = _fp_divmod(_fp_mul(base, base, p), mod, p)[1]
        e >>= 1
    return r


def _is_irreducible_fp(f, p: int) -> bool:
    """Irreducibility over GF(p): x^(p^i) != x mod f for i <= deg/2, and
    x^(p^deg) = x mod f."""
    f = _fp_trim(list(f))
    k = len(f) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    u = [0, 1]
    for i in range(1, k // 2 + 1):
        u = _fp_powmod(u, p, f, p)
        if len(_fp_gcd(_fp_sub(u, [0, 1], p), f, p)) > 1:
            return False
    for i in range(k // 2 + 1, k + 1):
        u = _fp_powmod(u, p, f, p)
    return u == [0, 1]


def _find_irreducible_fp(p: int, k: int, seed) -> tuple:
    """Seeded search for a monic irreducible of degree k over GF(p)."""
    if k == 1:
        return (0, 1)
    # fast path: x^k - a is irreducible iff a is an r-th non-residue for
    # every prime r | k (and q = 1 mod 4 when 4 | k); applicable when k | p-1
    if (p - 1) % k == 0 and (k % 4 != 0 or p % 4 == 1):
        rads = _prime_divisors(k)
        for a in range(2, p):
            if all(pow(a, (p - 1) // r, p) != 1 for r in rads):
                return tuple([-a % p] + [0] * (k - 1) + [1])
    rng = random.Random(f"irreducible:{p}:{k}:{seed}")
    for _ in range(200 * k):
        f = [rng.randrange(p) for _ in range(k)] + [1]
        if _is_irreducible_fp(f, p):
            return tuple(f)
    raise ReducibleModulus(
        f"no irreducible modulus of degree {k} over GF({p}) found")


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomials over an ExtField: little-endian lists of raw coefficient
# tuples, trailing zeros stripped.
# ---------------------------------------------------------------------------

def p_trim(F: ExtField, a):
    while a and not any(a[-1]):
        a.pop()
    return a


def p_from_elements(F: ExtField, coeffs):
    """Build a raw polynomial from FieldElements / ints / tuples."""
    out = []
    for c in coeffs:
        if isinstance(c, FieldElement):
            if c.field != F:
                raise DegreeMismatch("coefficient from a different field")
            out.append(c.coeffs)
        elif isinstance(c, int):
            out.append(F.element(c).coeffs)
        else:
            out.append(F.element(c).coeffs)
    return p_trim(F, out)


def p_add(F: ExtField, a, b):
    n = max(len(a), len(b))
    r = []
    for i in range(n):
        x = a[i] if i < len(a) else F._zero
        y = b[i] if i < len(b) else F._zero
        r.append(F._add(x, y))
    return p_trim(F, r)


def p_sub(F: ExtField, a, b):
    n = max(len(a), len(b))
    r = []
    for i in range(n):
        x = a[i] if i < len(a) else F._zero
        y = b[i] if i < len(b) else F._zero
        r.append(F._sub(x, y))
    return p_trim(F, r)


def p_mul(F: ExtField, a, b):
    if not a or not b:
        return []
    r = [F._zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if any(ai):
            for j, bj in enumerate(b):
                if any(bj):
                    r[i + j] = F._add(r[i + j], F._mul(ai, bj))
    return p_trim(F, r)


def p_smul(F: ExtField, c, a):
    return p_trim(F, [F._mul(c, x) for x in a])


def p_divmod(F: ExtField, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [F._zero] * max(0, len(a) - len(b) + 1)
    inv_lead = F._inv(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1]
        if any(c):
            c = F._mul(c, inv_lead)
            q[i] = c
            for j, bj in enumerate(b):
                if any(bj):
                    a[i + j] = F._sub(a[i + j], F._mul(c, bj))
    return p_trim(F, q), p_trim(F, a)


def p_mod(F: ExtField, a, b):
    return p_divmod(F, a, b)[1]


def p_gcd(F: ExtField, a, b):
    a, b = p_trim(F, list(a)), p_trim(F, list(b))
    while b:
        a, b = b, p_mod(F, a, b)
    if a:
        a = p_smul(F, F._inv(a[-1]), a)
    return a


def p_powmod(F: ExtField, base, e: int, mod):
    r = [F._one]
    base = p_mod(F, list(base), mod)
    while e:
        if e & 1:
            r = p_mod(F, p_mul(F, r, base), mod)
        base = p_mod(F, p_mul(F, base, base), mod)
        e >>= 1
    return r


def p_eval(F: ExtField, a, x):
    acc = F._zero
    for c in reversed(a):
        acc = F._add(F._mul(acc, x), c)
    return acc


def p_monic(F: ExtField, a):
    if not a:
        return a
    return p_smul(F, F._inv(a[-1]), a)


# ---------------------------------------------------------------------------
# Public field operations
# ---------------------------------------------------------------------------

def ext_field_create(p: int, k: int, modulus=None, seed=0) -> ExtField:
    """Create GF(p^k).  If no modulus is given, a monic irreducible of
    degree k is found by seeded search (deterministic per seed)."""
    base = PrimeField(p)
    if modulus is None:
        modulus = _find_irreducible_fp(p, k, seed)
    else:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise DegreeMismatch(
                f"modulus has degree {len(modulus) - 1}, expected monic degree {k}")
    return ExtField(base, k, modulus)


def prime_field(p: int) -> ExtField:
    """GF(p) as a degree-1 extension (modulus x)."""
    return ExtField(PrimeField(p), 1, (0, 1))


def frobenius_power(x: FieldElement, q: int) -> FieldElement:
    """x -> x^q for q a power of the field characteristic."""
    p = x.field.p
    m = q
    if m < p:
        raise BadPower(f"{q} is not a positive power of the characteristic {p}")
    while m > 1:
        if m % p:
            raise BadPower(f"{q} is not a power of the characteristic {p}")
        m //= p
    return x ** q


def mu_l_dlog(zeta: FieldElement, v: FieldElement, l: int) -> int:
    """Discrete log in the order-l group of roots of unity: the e in [0, l)
    with zeta^e = v, found by enumerating powers."""
    F = zeta.field
    if zeta == F.one() or (zeta ** l) != F.one():
        raise BadOrder("generator does not have exact multiplicative order l")
    if (v ** l) != F.one() or v.is_zero():
        raise NotRootOfUnity("value is not an l-th root of unity")
    acc = F.one()
    for e in range(l):
        if acc == v:
            return e
        acc = acc * zeta
    raise NotRootOfUnity("value is not a power of the given generator")


def is_square_mod_l(u: int, l: int) -> bool:
    """Euler criterion in GF(l), l an odd prime."""
    u %= l
    if u == 0:
        raise ZeroResidue("square test of the zero residue")
    return pow(u, (l - 1) // 2, l) == 1


_EXHAUST_BOUND = 1 << 12


def poly_roots(field: ExtField, f) -> list:
    """All roots of f in the field, each reported once, sorted by
    coefficient tuple.

    The product of the distinct linear factors is split off via
    gcd(x^q - x, f); roots are then extracted by direct exhaustion for small
    fields and by seeded equal-degree splitting otherwise.
    """
    raw = f if (f and isinstance(f[0], tuple)) else p_from_elements(field, f)
    raw = p_trim(field, list(raw))
    if not raw:
        raise ZeroPolynomial("root extraction of the zero polynomial")
    if len(raw) == 1:
        return []
    raw = p_monic(field, raw)
    xq = p_powmod(field, [field._zero, field._one], field.q, raw)
    h = p_gcd(field, p_sub(field, xq, [field._zero, field._one]), raw)
    roots = _linear_roots(field, h)
    return [FieldElement(field, r) for r in sorted(roots)]


def _linear_roots(F: ExtField, h):
    """Roots of a monic product of distinct linear factors."""
    deg = len(h) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [F._neg(h[0])]
    if F.q <= _EXHAUST_BOUND:
        out = []
        for x in _raw_elements(F):
            if not any(p_eval(F, h, x)):
                out.append(x)
                if len(out) == deg:
                    break
        return out
    rng = random.Random(f"polyroots:{F._key}")
    return _split_linear(F, h, rng)


def _raw_elements(F: ExtField):
    if F.k == 1:
        for v in range(F.p):
            yield (v,)
        return
    import itertools
    for coeffs in itertools.product(range(F.p), repeat=F.k):
        yield coeffs


def _split_linear(F: ExtField, h, rng):
    if len(h) - 1 == 1:
        return [F._neg(h[0])]
    e = (F.q - 1) // 2
    for _ in range(128):
        a = tuple(rng.randrange(F.p) for _ in range(F.k))
        w = p_powmod(F, [a, F._one], e, h)
        g = p_gcd(F, p_sub(F, w, [F._one]), h)
        if 0 < len(g) - 1 < len(h) - 1:
            rest = p_divmod(F, h, g)[0]
            return _split_linear(F, g, rng) + _split_linear(F, rest, rng)
    raise ZeroPolynomial("equal-degree splitting failed to converge")


def sqrt_element(x: FieldElement):
    """A square root of x in its field, or None; the smaller root by
    coefficient order is returned so the choice is deterministic."""
    F = x.field
    if x.is_zero():
        return F.zero()
    roots = poly_roots(F, [F._neg(x.coeffs), F._zero, F._one])
    return roots[0] if roots else None


def is_square(x: FieldElement) -> bool:
    if x.is_zero():
        return True
    return x ** ((x.field.q - 1) // 2) == x.field.one()


# ---------------------------------------------------------------------------
# Subfield embeddings
# ---------------------------------------------------------------------------

def find_embedding(sub: ExtField, sup: ExtField) -> FieldElement:
    """Image of sub's generator under the canonical embedding into sup
    (the smallest root of sub's modulus there)."""
    if sub.p != sup.p or sup.k % sub.k != 0:
        raise DegreeMismatch(
            f"GF({sub.p}^{sub.k}) does not embed in GF({sup.p}^{sup.k})")
    if sub.k == 1:
        return sup.gen()  # unused; constants embed directly
    roots = poly_roots(sup, [(c,) + (0,) * (sup.k - 1) for c in sub.modulus])
    if not roots:
        raise DegreeMismatch("modulus of the subfield has no root upstairs")
    return roots[0]


def embed_element(x: FieldElement, sup: ExtField,
                  gen_image: FieldElement) -> FieldElement:
    """Map x along the embedding sending x's field generator to gen_image."""
    if x.field == sup:
        return x
    if x.field.k == 1 or x.is_constant():
        return sup.element(x.coeffs[0])
    acc = sup.zero()
    for c in reversed(x.coeffs):
        acc = acc * gen_image + sup.element(c)
    return acc
