"""Exact cyclotomic arithmetic, roots of unity and lattice characters."""

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .linalg import solve_consistent

Rational = Fraction


def rational_to_str(q):
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator)


def rational_from_str(s):
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


# ---------------------------------------------------------------------------
# cyclotomic polynomials and the power-basis field Q(zeta_N)

def _poly_divmod(a, b):
    """Exact division of integer/rational coefficient polynomials."""
    a = list(a)
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = Fraction(a[i + len(b) - 1], b[-1])
        out[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return out, a[:len(b) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(N):
    """Coefficients (low to high) of the N-th cyclotomic polynomial."""
    if N == 1:
        return (-1, 1)
    poly = [0] * N + [1]
    poly[0] = -1  # x^N - 1
    for d in range(1, N):
        if N % d == 0:
            q, rem = _poly_divmod(poly, cyclotomic_poly(d))
            if any(rem):
                raise ArithmeticError("cyclotomic division not exact")
            poly = q
    return tuple(int(c) for c in poly)


@lru_cache(maxsize=None)
def _reduction_table(N):
    """x^j mod Phi_N for j = 0 .. 2*(phi-1), as tuples of Fractions."""
    phi_coeffs = cyclotomic_poly(N)
    d = len(phi_coeffs) - 1
    rows = []
    cur = [Fraction(0)] * d
    if d > 0:
        cur[0] = Fraction(1)
    for _ in range(2 * d - 1 if d else 1):
        rows.append(tuple(cur))
        # multiply by x, reduce
        nxt = [Fraction(0)] + cur[:]
        if len(nxt) > d:
            lead = nxt.pop()
            if lead:
                for i in range(d):
                    nxt[i] -= lead * phi_coeffs[i]
        cur = nxt
    return tuple(rows), d


def euler_phi(N):
    return len(cyclotomic_poly(N)) - 1


class CycloNumber:
    """Element of Q(zeta_N) in the power basis 1, z, ..., z^(phi(N)-1)."""

    __slots__ = ("N", "coords")

    def __init__(self, N, coords):
        d = euler_phi(N)
        coords = [Fraction(c) for c in coords]
        if len(coords) != d:
            raise ValueError("expected %d coordinates for modulus %d" % (d, N))
        self.N = N
        self.coords = tuple(coords)

    @staticmethod
    def from_rational(q, N=1):
        d = euler_phi(N)
        coords = [Fraction(q)] + [Fraction(0)] * (d - 1)
        return CycloNumber(N, coords)

    @staticmethod
    def zeta(N, k=1):
        """zeta_N^k as a CycloNumber of modulus N."""
        k %= N
        d = euler_phi(N)
        if k < d:
            coords = [Fraction(0)] * d
            coords[k] = Fraction(1)
            return CycloNumber(N, coords)
        # reduce x^k modulo the cyclotomic polynomial directly
        phi = cyclotomic_poly(N)
        poly = [Fraction(0)] * k + [Fraction(1)]
        _, rem = _poly_divmod(poly, phi)
        rem = rem + [Fraction(0)] * (d - len(rem))
        return CycloNumber(N, rem[:d])

    def embed(self, M):
        """Embed into Q(zeta_M) for N | M (zeta_N = zeta_M^(M/N))."""
        if M == self.N:
            return self
        if M % self.N != 0:
            raise ValueError("no embedding: %d does not divide %d" % (self.N, M))
        step = M // self.N
        out = CycloNumber.from_rational(0, M)
        for j, c in enumerate(self.coords):
            if c:
                out = out + CycloNumber.zeta(M, step * j) * CycloNumber.from_rational(c, M)
        return out

    def _common(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.from_rational(other, self.N)
        M = self.N * other.N // gcd(self.N, other.N)
        return self.embed(M), other.embed(M)

    def __add__(self, other):
        a, b = self._common(other)
        return CycloNumber(a.N, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.N, [-c for c in self.coords])

    def __sub__(self, other):
        a, b = self._common(other)
        return CycloNumber(a.N, [x - y for x, y in zip(a.coords, b.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        table, d = _reduction_table(a.N)
        acc = [Fraction(0)] * d
        for i, x in enumerate(a.coords):
            if not x:
                continue
            for j, y in enumerate(b.coords):
                if not y:
                    continue
                row = table[i + j]
                xy = x * y
                for t in range(d):
                    if row[t]:
                        acc[t] += xy * row[t]
        return CycloNumber(a.N, acc)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse via the extended Euclid algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        phi = [Fraction(c) for c in cyclotomic_poly(self.N)]
        a = list(self.coords)
        while a and a[-1] == 0:
            a.pop()
        # extended gcd of a and phi
        r0, r1 = phi, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        t0, t1 = [Fraction(1)], [Fraction(0)]

        def poly_trim(p):
            p = list(p)
            while p and p[-1] == 0:
                p.pop()
            return p

        def poly_sub(p, q):
            out = [Fraction(0)] * max(len(p), len(q))
            for i, c in enumerate(p):
                out[i] += c
            for i, c in enumerate(q):
                out[i] -= c
            return poly_trim(out)

        def poly_mul(p, q):
            if not p or not q:
                return []
            out = [Fraction(0)] * (len(p) + len(q) - 1)
            for i, c in enumerate(p):
                if c:
                    for j, e in enumerate(q):
                        out[i + j] += c * e
            return poly_trim(out)

        while len(r1) > 1:
            q, rem = _poly_divmod(r0, r1)
            q = poly_trim(q)
            rem = poly_trim(rem)
            r0, r1 = r1, rem
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
            t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
            if not r1:
                raise ArithmeticError("degenerate gcd in cyclotomic inverse")
        # r1 is a nonzero constant c;  s1 * a + t1 * phi = c
        c = r1[0]
        inv = [x / c for x in s1]
        d = euler_phi(self.N)
        # reduce inv mod phi (degree already < deg(phi) by Euclid)
        coords = [Fraction(0)] * d
        for i, x in enumerate(inv[:d]):
            coords[i] = x
        return CycloNumber(self.N, coords)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.from_rational(other, self.N)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycloNumber.from_rational(other, 1) / self

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.from_rational(other, 1)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.coords == b.coords

    def __hash__(self):
        # hash via canonical embedding at own modulus; rationals hash equal
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.N, self.coords))

    def to_complex(self):
        z = cmath.exp(2j * cmath.pi / self.N)
        out = 0j
        for c in reversed(self.coords):
            out = out * z + complex(c)
        return out

    def __repr__(self):
        return "CycloNumber(N=%d, %s)" % (self.N, list(self.coords))


def cyclo_arith(op, a, b=None):
    """Dispatch {add, mul, inv, eq} on CycloNumbers."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "eq":
        return a == b
    raise ValueError("unknown op %r" % (op,))


# ---------------------------------------------------------------------------
# roots of unity

class RootOfUnity:
    """zeta_N^k stored in lowest terms (N = exact order)."""

    __slots__ = ("order", "exp")

    def __init__(self, order, exp):
        order = int(order)
        exp = int(exp) % order
        g = gcd(order, exp) if exp else order
        self.order = order // g
        self.exp = exp // g

    def __mul__(self, other):
        N = self.order * other.order // gcd(self.order, other.order)
        return RootOfUnity(N, self.exp * (N // self.order)
                           + other.exp * (N // other.order))

    def __pow__(self, n):
        n = int(n)
        return RootOfUnity(self.order, self.exp * (n % self.order))

    def inverse(self):
        return RootOfUnity(self.order, -self.exp)

    def is_one(self):
        return self.order == 1

    def to_cyclo(self, N=None):
        if N is None:
            N = self.order
        if N % self.order != 0:
            raise ValueError("modulus %d does not contain this root" % N)
        return CycloNumber.zeta(N, self.exp * (N // self.order))

    def to_complex(self):
        return cmath.exp(2j * cmath.pi * self.exp / self.order)

    def __eq__(self, other):
        return (isinstance(other, RootOfUnity)
                and self.order == other.order and self.exp == other.exp)

    def __hash__(self):
        return hash((self.order, self.exp))

    def __repr__(self):
        return "RootOfUnity(%d, %d)" % (self.order, self.exp)

    def sort_key(self):
        return (self.order, self.exp)


ONE_ROOT = RootOfUnity(1, 0)


def root_mul(a, b):
    """Product of two roots of unity at the lcm modulus."""
    return a * b


def nth_roots(e, n):
    """All n-th roots of e: exactly n roots of unity b with b^n == e."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    N = e.order
    return [RootOfUnity(n * N, e.exp + j * N) for j in range(n)]


# ---------------------------------------------------------------------------
# lattice characters

class LatticeCharacter:
    """Finite-order character on a lattice, zeta_N^(c . coords)."""

    __slots__ = ("basis", "modulus", "exps")

    def __init__(self, basis, modulus, exps):
        self.basis = tuple(tuple(Fraction(x) for x in row) for row in basis)
        self.modulus = int(modulus)
        exps = [int(e) % self.modulus for e in exps]
        if len(exps) != len(self.basis):
            raise ValueError("exponent vector length must match lattice rank")
        self.exps = tuple(exps)

    @staticmethod
    def trivial(basis):
        return LatticeCharacter(basis, 1, [0] * len(basis))

    def coords_of(self, x):
        """Integer coordinates of an ambient point in the lattice basis."""
        cols = [[self.basis[j][i] for j in range(len(self.basis))]
                for i in range(len(self.basis[0]))]
        c = solve_consistent(cols, list(x))
        for v in c:
            if Fraction(v).denominator != 1:
                raise ValueError("point %r is not in the lattice" % (x,))
        return [int(v) for v in c]

    def eval(self, x):
        c = self.coords_of(x)
        k = sum(ci * ei for ci, ei in zip(c, self.exps))
        return RootOfUnity(self.modulus, k)

    def __repr__(self):
        return "LatticeCharacter(N=%d, exps=%s)" % (self.modulus, list(self.exps))


def character_eval(chi, x):
    """Evaluate a lattice character at a lattice point."""
    return chi.eval(x)


def restrict_character(chi, basis):
    """Restriction of a character to a sublattice with the given basis."""
    values = [chi.eval(b) for b in basis]
    N = 1
    for v in values:
        N = N * v.order // gcd(N, v.order)
    exps = [v.exp * (N // v.order) for v in values]
    return LatticeCharacter(basis, N, exps)


def induced_character_decompose(L, chi):
    """All extensions of `chi` (on a finite-index sublattice) to lattice L.

    Returns the list of kappa = [L : L'] characters chi_i on L such that
    sum_i chi_i(x) = kappa * chi(x) for x in L' and 0 for x in L \\ L'.
    """
    from .linalg import smith_normal_form, mat_mul, mat_inverse

    Lbasis = [list(row) for row in getattr(L, "basis", L)]
    sub_basis = [list(row) for row in chi.basis]
    if len(sub_basis) != len(Lbasis):
        raise ValueError("lattices must have equal rank")
    # coordinates of the sublattice basis in the L basis (must be integers)
    cols = [[Fraction(Lbasis[j][i]) for j in range(len(Lbasis))]
            for i in range(len(Lbasis[0]))]
    M = []
    for b in sub_basis:
        c = solve_consistent(cols, b)
        if any(Fraction(v).denominator != 1 for v in c):
            raise ValueError("character lattice is not a sublattice of L")
        M.append([int(v) for v in c])
    U, S, V = smith_normal_form(M)
    d = len(M)
    divisors = [S[i][i] for i in range(d)]
    if any(di == 0 for di in divisors):
        raise ValueError("sublattice does not have finite index in L")
    # adapted basis C of L: with U*M*V = S we have (U . sub) = S . (V^{-1}... )
    # new L basis rows: C = V^T applied on... use C = (V^{-1})? Derivation:
    # sub = M . Lbasis; M = U^{-1} S V^{-1}; put C = V^{-1} . Lbasis, then
    # U . sub = S . C, i.e. rows of (U . sub) equal divisors[i] * C[i].
    Vinv = mat_inverse(V)
    C = mat_mul([[Fraction(x) for x in row] for row in Vinv],
                [[Fraction(x) for x in row] for row in Lbasis])
    # chi on the scaled vectors d_i * C_i (these lie in the sublattice)
    base_roots = []
    for i in range(d):
        vec = [divisors[i] * x for x in C[i]]
        base_roots.append(chi.eval(vec))
    out = []
    import itertools
    choice_sets = [nth_roots(r, divisors[i]) for i, r in enumerate(base_roots)]
    for combo in itertools.product(*choice_sets):
        N = 1
        for v in combo:
            N = N * v.order // gcd(N, v.order)
        exps = [v.exp * (N // v.order) for v in combo]
        out.append(LatticeCharacter(C, N, exps))
    return out
