"""Conjugacy-class bookkeeping in GL_n/SL_n over GF(l) for small n and l.

The central notion: the GL2-conjugacy class of sigma in SL2 *splits* when
its SL2-class is properly contained in its GL2-class.  For n = 2 this
happens exactly for the non-scalar classes of trace +-2, and the two SL2
classes inside such a GL2 class are told apart by the square class of the
off-diagonal parameter in the normal form +-[[1,c],[0,1]].

All conjugacy decisions at this scale are backed by exhaustive search over
the full matrix groups (|SL2(GF(11))| = 1320), which keeps the fast
invariant-based paths honest.
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DimensionMismatch,
    NotConjugate,
    NotSL2,
    NotSLn,
    OddPrimeRequired,
    ScaleBound,
    Singular,
)
from .ff import is_prime, is_square_mod_l

KIND_SCALAR = "scalar"
KIND_SPLIT_SS = "split-semisimple"
KIND_NONSPLIT_SS = "nonsplit-semisimple"
KIND_NONSEMISIMPLE = "nonsemisimple"

_MAX_L = 13


class MatrixModL:
    """A small square matrix over GF(l), entries reduced, immutable."""

    __slots__ = ("n", "l", "rows")

    def __init__(self, rows, l: int):
        rows = tuple(tuple(int(e) % l for e in r) for r in rows)
        n = len(rows)
        if n < 1 or n > 3 or any(len(r) != n for r in rows):
            raise DimensionMismatch(
                f"expected a square matrix of dimension <= 3, got {rows}")
        self.n = n
        self.l = l
        self.rows = rows

    @classmethod
    def identity(cls, n: int, l: int) -> "MatrixModL":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], l)

    @classmethod
    def scalar(cls, c: int, n: int, l: int) -> "MatrixModL":
        return cls([[c if i == j else 0 for j in range(n)] for i in range(n)], l)

    def __mul__(self, other: "MatrixModL") -> "MatrixModL":
        if self.n != other.n or self.l != other.l:
            raise DimensionMismatch("matrix shape or modulus mismatch")
        n, l = self.n, self.l
        a, b = self.rows, other.rows
        return MatrixModL(
            [[sum(a[i][k] * b[k][j] for k in range(n)) % l
              for j in range(n)] for i in range(n)], l)

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n)) % self.l

    def det(self) -> int:
        r, l = self.rows, self.l
        if self.n == 1:
            return r[0][0] % l
        if self.n == 2:
            return (r[0][0] * r[1][1] - r[0][1] * r[1][0]) % l
        return (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])) % l

    def inverse(self) -> "MatrixModL":
        d = self.det()
        if d == 0:
            raise Singular("matrix is not invertible")
        dinv = pow(d, -1, self.l)
        r, l = self.rows, self.l
        if self.n == 1:
            return MatrixModL([[dinv]], l)
        if self.n == 2:
            return MatrixModL(
                [[r[1][1] * dinv, -r[0][1] * dinv],
                 [-r[1][0] * dinv, r[0][0] * dinv]], l)
        cof = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                sub = [[r[a][b] for b in range(3) if b != j]
                       for a in range(3) if a != i]
                m = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
                cof[j][i] = (-1) ** (i + j) * m * dinv
        return MatrixModL(cof, l)

    def is_scalar(self) -> bool:
        r = self.rows
        c = r[0][0]
        return all(r[i][j] == (c if i == j else 0)
                   for i in range(self.n) for j in range(self.n))

    def __pow__(self, e: int) -> "MatrixModL":
        if e < 0:
            return self.inverse() ** (-e)
        r = MatrixModL.identity(self.n, self.l)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other):
        return (isinstance(other, MatrixModL) and self.l == other.l
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.l, self.rows))

    def __repr__(self):
        return str([list(r) for r in self.rows])


@dataclass(frozen=True)
class ClassDescriptor:
    """GL-conjugacy class of an invertible 2x2 matrix: characteristic data
    plus, when the class splits, the square-class label that separates the
    two SL2-classes inside it."""
    l: int
    charpoly: tuple  # (trace, det)
    kind: str
    sl_label: str | None = None  # "qr" or "qnr", present iff the class splits


@dataclass(frozen=True)
class SplittingData:
    """The GL_n-class of sigma meets SL_n in m classes; H is the unique
    index-m subgroup of GF(l)^*, realized as the determinant image of the
    GL_n-centralizer of sigma."""
    m: int
    H: frozenset


def squares_mod(l: int) -> frozenset:
    return frozenset(x * x % l for x in range(1, l))


def smallest_nonsquare(l: int) -> int:
    sq = squares_mod(l)
    for v in range(2, l):
        if v not in sq:
            return v
    raise OddPrimeRequired(f"no non-square modulo {l}")


def _require_odd_prime(l: int):
    if l == 2 or not is_prime(l):
        raise OddPrimeRequired(f"{l} is not an odd prime")
    if l > _MAX_L:
        raise ScaleBound(f"l = {l} exceeds the exhaustive-search bound {_MAX_L}")


@lru_cache(maxsize=None)
def _sl2_flat(l: int) -> tuple:
    """All of SL2(GF(l)) as flat (a, b, c, d) tuples, lexicographic."""
    out = []
    for a in range(l):
        for b in range(l):
            for c in range(l):
                for d in range(l):
                    if (a * d - b * c) % l == 1:
                        out.append((a, b, c, d))
    return tuple(out)


@lru_cache(maxsize=None)
def _gl2_flat(l: int) -> tuple:
    out = []
    for a in range(l):
        for b in range(l):
            for c in range(l):
                for d in range(l):
                    if (a * d - b * c) % l:
                        out.append((a, b, c, d))
    return tuple(out)


def sl2_elements(l: int) -> list:
    _require_odd_prime(l)
    return [MatrixModL([t[:2], t[2:]], l) for t in _sl2_flat(l)]


def _flat_mul(x, y, l):
    return ((x[0] * y[0] + x[1] * y[2]) % l, (x[0] * y[1] + x[1] * y[3]) % l,
            (x[2] * y[0] + x[3] * y[2]) % l, (x[2] * y[1] + x[3] * y[3]) % l)


def gl_class_of(M: MatrixModL) -> ClassDescriptor:
    """GL2-class of an invertible 2x2 matrix from its characteristic
    polynomial and semisimplicity type."""
    if M.n != 2:
        raise DimensionMismatch("GL-class analysis is implemented for n = 2")
    l = M.l
    d = M.det()
    if d == 0:
        raise Singular("matrix is not invertible")
    t = M.trace()
    if M.is_scalar():
        return ClassDescriptor(l, (t, d), KIND_SCALAR)
    disc = (t * t - 4 * d) % l
    if disc == 0:
        label = _sl_label(M) if d == 1 else None
        return ClassDescriptor(l, (t, d), KIND_NONSEMISIMPLE, label)
    kind = KIND_SPLIT_SS if is_square_mod_l(disc, l) else KIND_NONSPLIT_SS
    return ClassDescriptor(l, (t, d), kind)


def _sl_label(M: MatrixModL) -> str:
    """Square-class of c in the SL2 normal form +-[[1,c],[0,1]].

    With eps the half-trace, N = eps*M - I is rank one; for any u outside
    ker N the determinant of the basis (Nu, u) lands in the square class
    of 1/c, which equals that of c.
    """
    l = M.l
    eps = 1 if M.trace() == 2 % l else -1
    r = M.rows
    n00 = (eps * r[0][0] - 1) % l
    n01 = (eps * r[0][1]) % l
    n10 = (eps * r[1][0]) % l
    n11 = (eps * r[1][1] - 1) % l
    for u in ((1, 0), (0, 1)):
        w = ((n00 * u[0] + n01 * u[1]) % l, (n10 * u[0] + n11 * u[1]) % l)
        delta = (w[0] * u[1] - w[1] * u[0]) % l
        if delta:
            return "qr" if is_square_mod_l(delta, l) else "qnr"
    raise NotSL2("matrix is not of unipotent type")  # pragma: no cover


def class_splits(sigma: MatrixModL) -> bool:
    """True iff the GL2-class of sigma in SL2 meets SL2 in two classes:
    non-scalar with trace +-2."""
    if sigma.n != 2:
        raise NotSL2("n = 2 required")
    if sigma.det() != 1:
        raise NotSL2(f"determinant {sigma.det()} != 1")
    if sigma.is_scalar():
        return False
    t = sigma.trace()
    return t == 2 % sigma.l or t == (-2) % sigma.l


def sl_conjugate(A: MatrixModL, B: MatrixModL, method: str = "exhaustive") -> bool:
    """Whether A and B are conjugate inside SL2(GF(l)).

    The default decides by exhaustive search over SL2; "invariants" uses the
    characteristic-polynomial / split-label fast path instead.
    """
    for M in (A, B):
        if M.n != 2 or M.det() != 1:
            raise NotSL2("both matrices must lie in SL2")
    if A.l != B.l:
        raise DimensionMismatch("different moduli")
    l = A.l
    if method == "invariants":
        return gl_class_of(A) == gl_class_of(B)
    _require_odd_prime(l)
    fa = A.rows[0] + A.rows[1]
    fb = B.rows[0] + B.rows[1]
    for c in _sl2_flat(l):
        if _flat_mul(fa, c, l) == _flat_mul(c, fb, l):
            return True
    return False


def splitting_data_general(sigma: MatrixModL) -> SplittingData:
    """Splitting data (m, H) for sigma in SL_n: H is the determinant image
    of the GL_n-centralizer, computed by exhaustive enumeration for n = 2
    and via the commutant linear system for n = 3; m is its index."""
    n, l = sigma.n, sigma.l
    if sigma.det() != 1:
        raise NotSLn(f"determinant {sigma.det()} != 1")
    if n == 2:
        _require_odd_prime(l)
        s = sigma.rows[0] + sigma.rows[1]
        dets = set()
        for c in _gl2_flat(l):
            if _flat_mul(s, c, l) == _flat_mul(c, s, l):
                dets.add((c[0] * c[3] - c[1] * c[2]) % l)
    elif n == 3:
        if l > 7:
            raise ScaleBound(f"n = 3 supported for l <= 7, got l = {l}")
        dets = _centralizer_dets_3(sigma)
    else:
        raise ScaleBound(f"n = {n} not supported")
    if len(dets) == 0 or (l - 1) % len(dets):
        raise NotConjugate("centralizer determinant image is not a subgroup")
    m = (l - 1) // len(dets)
    # uniqueness inside the cyclic group GF(l)^*: the index-m subgroup is
    # exactly the m-th powers
    if dets != {pow(x, m, l) for x in range(1, l)}:
        raise NotConjugate("determinant image is not the m-th power subgroup")
    if any(pow(x, n, l) not in dets for x in range(1, l)):
        raise NotConjugate("n-th powers escape the subgroup H")
    return SplittingData(m, frozenset(dets))


def _centralizer_dets_3(sigma: MatrixModL) -> set:
    """Determinant image of the GL3-centralizer, by solving X*sigma =
    sigma*X and enumerating the invertible part of the solution space."""
    l = sigma.l
    if sigma.is_scalar():
        return set(range(1, l))
    s = sigma.rows
    # rows of the 9x9 system over GF(l): unknowns x_ij flattened row-major
    rows = []
    for i in range(3):
        for j in range(3):
            coeffs = [0] * 9
            for k in range(3):
                coeffs[i * 3 + k] = (coeffs[i * 3 + k] + s[k][j]) % l
                coeffs[k * 3 + j] = (coeffs[k * 3 + j] - s[i][k]) % l
            rows.append(coeffs)
    basis = _nullspace_mod(rows, 9, l)
    if len(basis) > 5:
        raise ScaleBound("centralizer dimension too large to enumerate")
    dets = set()
    for combo in _all_combos(len(basis), l):
        x = [0] * 9
        for c, vec in zip(combo, basis):
            if c:
                for idx in range(9):
                    x[idx] = (x[idx] + c * vec[idx]) % l
        M = MatrixModL([x[0:3], x[3:6], x[6:9]], l)
        d = M.det()
        if d:
            dets.add(d)
    return dets


def _all_combos(dim: int, l: int):
    if dim == 0:
        return
    combo = [0] * dim
    total = l ** dim
    for v in range(total):
        x = v
        for i in range(dim):
            combo[i] = x % l
            x //= l
        yield tuple(combo)


def _nullspace_mod(rows, ncols: int, l: int) -> list:
    """Basis of the nullspace of a matrix over GF(l)."""
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        sel = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                sel = r
                break
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        inv = pow(rows[rank][col], -1, l)
        rows[rank] = [v * inv % l for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [(v - c * w) % l for v, w in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-rows[r][fc]) % l
        basis.append(vec)
    return basis


def exterior_form_eval(vectors, l: int) -> int:
    """The canonical alternating n-form: the determinant of the coordinate
    matrix mod l.  Zero exactly on linearly dependent tuples."""
    n = len(vectors)
    if n == 0 or any(len(v) != n for v in vectors):
        raise DimensionMismatch("need n vectors of length n")
    rows = [[int(e) % l for e in v] for v in vectors]
    det = 1
    for col in range(n):
        sel = None
        for r in range(col, n):
            if rows[r][col]:
                sel = r
                break
        if sel is None:
            return 0
        if sel != col:
            rows[col], rows[sel] = rows[sel], rows[col]
            det = -det
        piv = rows[col][col]
        det = det * piv % l
        inv = pow(piv, -1, l)
        for r in range(col + 1, n):
            if rows[r][col]:
                c = rows[r][col] * inv % l
                rows[r] = [(v - c * w) % l for v, w in zip(rows[r], rows[col])]
    return det % l


def sl2_class_representatives(l: int) -> list:
    """Exhaustive partition of SL2(GF(l)) into conjugacy classes; returns
    (representative, descriptor, class size) with sizes summing to
    l(l^2 - 1).  Representatives are the lexicographically first members."""
    _require_odd_prime(l)
    elems = _sl2_flat(l)
    conjugators = [(c, (c[3], -c[1] % l, -c[2] % l, c[0])) for c in elems]
    seen = set()
    out = []
    for a in elems:
        if a in seen:
            continue
        orbit = set()
        for c, cinv in conjugators:
            orbit.add(_flat_mul(cinv, _flat_mul(a, c, l), l))
        seen |= orbit
        M = MatrixModL([a[:2], a[2:]], l)
        out.append((M, gl_class_of(M), len(orbit)))
    return out


def class_label(M: MatrixModL) -> str:
    """Stable one-token class name used in CLI output: Z(lam) for scalars,
    U(+-1,qr|qnr) for split unipotent-type classes, S(t,d) for semisimple,
    N(t,d) for non-semisimple classes outside SL2."""
    desc = gl_class_of(M)
    t, d = desc.charpoly
    if desc.kind == KIND_SCALAR:
        return f"Z({M.rows[0][0]})"
    if desc.kind == KIND_NONSEMISIMPLE:
        if desc.sl_label is not None:
            sign = "+1" if t == 2 % M.l else "-1"
            return f"U({sign},{desc.sl_label})"
        return f"N({t},{d})"
    return f"S({t},{d})"
