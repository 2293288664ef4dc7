"""One-variable polylogarithm algebra.

Functions of a single variable y are kept in a normal form

    sum over (e, m) and words w of  c_{e,m,w} * (1 - e*y)^(-m) * I(y; w)

where I(y; w) is the iterated integral of the word w from 0 to y, built from
the letters dt/t (written None) and dt/(1-e*t) for roots of unity e.  Values
of convergent words at y=1 are kept symbolically in ZExpression objects;
limits at y=1 of the normal forms are computed through germ expansions in
powers of s = 1-y and T = -log(1-y).
"""

import itertools
from fractions import Fraction

from .exact import CycloNumber, RootOfUnity, ONE_ROOT, nth_roots

ONE = CycloNumber.from_rational(1, 1)
ZERO = CycloNumber.from_rational(0, 1)

W0 = None  # the letter dt/t


class DivergentResult(Exception):
    """A regularized limit failed its vanishing checks."""


def _is_one_root(letter):
    return letter is not None and letter.is_one()


def word_is_convergent(word):
    """I(1; word) converges iff the word does not start with dt/(1-t)."""
    return len(word) == 0 or not _is_one_root(word[0])


# ---------------------------------------------------------------------------
# shuffle algebra and symbolic values of words at 1

def shuffle(u, v):
    """Shuffle product of two words: dict word -> integer multiplicity."""
    u, v = tuple(u), tuple(v)
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out = {}
    for w, c in shuffle(u[1:], v).items():
        key = (u[0],) + w
        out[key] = out.get(key, 0) + c
    for w, c in shuffle(u, v[1:]).items():
        key = (v[0],) + w
        out[key] = out.get(key, 0) + c
    return out


class PolylogWord:
    """A word in the letters dt/t (None) and dt/(1-e*t)."""

    __slots__ = ("letters",)

    def __init__(self, letters):
        self.letters = tuple(letters)
        if self.letters and self.letters[-1] is None:
            raise ValueError("word may not end with dt/t")

    def weight(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, PolylogWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return "PolylogWord(%s)" % (["0" if l is None else repr(l)
                                     for l in self.letters],)


class ZExpression:
    """Q^ab-linear combination of values I(1; w) of convergent words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero():
                    self.terms[tuple(w)] = c

    @staticmethod
    def from_cyclo(c):
        return ZExpression({(): c})

    @staticmethod
    def zero():
        return ZExpression()

    @staticmethod
    def one():
        return ZExpression({(): ONE})

    @staticmethod
    def from_word(word):
        if not word_is_convergent(word):
            raise ValueError("divergent word has no value")
        return ZExpression({tuple(word): ONE})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return ZExpression(out)

    def __neg__(self):
        return ZExpression({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, Fraction) or isinstance(c, int):
            c = CycloNumber.from_rational(c, 1)
        return ZExpression({w: c * x for w, x in self.terms.items()})

    def __mul__(self, other):
        """Product via the shuffle relation for iterated integrals."""
        if isinstance(other, CycloNumber):
            return self.scale(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                c = c1 * c2
                for w, mult in shuffle(w1, w2).items():
                    s = out.get(w, ZERO) + c * CycloNumber.from_rational(mult, 1)
                    out[w] = s
        return ZExpression(out)

    def is_zero(self):
        return all(c.is_zero() for c in self.terms.values())

    def constant_part(self):
        return self.terms.get((), ZERO)

    def weight(self):
        return max((len(w) for w in self.terms), default=0)

    def evaluate(self, word_value):
        """Numeric value given a callback word -> complex."""
        total = 0j
        for w, c in self.terms.items():
            total += complex(c.to_complex()) * (word_value(w) if w else 1.0)
        return total

    def __repr__(self):
        if not self.terms:
            return "ZExpression(0)"
        bits = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), repr(t[0]))):
            bits.append("%r * I%s" % (c, ["0" if l is None else "%d/%d" % (l.exp, l.order) for l in w]))
        return "ZExpression(" + " + ".join(bits) + ")"


class MZVSymbol:
    """Cyclotomic multiple zeta symbol zeta(k_1..k_m; eps_1..eps_m).

    The value is sum over a in (N^x)^m of prod eps_i^(a_i) divided by
    prod (a_1+...+a_i)^(k_i).
    """

    __slots__ = ("ks", "eps")

    def __init__(self, ks, eps):
        self.ks = tuple(int(k) for k in ks)
        self.eps = tuple(eps)
        if len(self.ks) != len(self.eps):
            raise ValueError("depth mismatch")

    def is_convergent(self):
        return not self.ks or self.ks[-1] != 1 or not self.eps[-1].is_one()

    def weight(self):
        return sum(self.ks)

    def __eq__(self, other):
        return (isinstance(other, MZVSymbol) and self.ks == other.ks
                and self.eps == other.eps)

    def __hash__(self):
        return hash((self.ks, self.eps))

    def __repr__(self):
        e = ",".join("%d/%d" % (x.exp, x.order) for x in self.eps)
        return "zeta(%s; %s)" % (",".join(map(str, self.ks)), e)


def mzv_symbol_from_word(word):
    """Convert a convergent word to (root coefficient, MZVSymbol) with
    I(1; word) = coeff * zeta(ks; eps)."""
    if not word_is_convergent(word):
        raise ValueError("divergent word")
    if not word or word[-1] is None:
        raise ValueError("not a value word")
    ks = []
    es = []
    k = 1
    for letter in word:
        if letter is None:
            k += 1
        else:
            ks.append(k)
            es.append(letter)
            k = 1
    # I(1; w) = (e_1...e_m)^(-1) zeta(k_m..k_1; e_m..e_1)
    prod = ONE_ROOT
    for e in es:
        prod = prod * e
    return prod.inverse(), MZVSymbol(tuple(reversed(ks)), tuple(reversed(es)))


# ---------------------------------------------------------------------------
# P-normal forms

def _as_zexpr(c):
    if isinstance(c, ZExpression):
        return c
    if isinstance(c, (int, Fraction)):
        c = CycloNumber.from_rational(c, 1)
    return ZExpression.from_cyclo(c)


class PNormalForm:
    """Linear combination of (1-e*y)^(-m) * I(y; w) with ZExpression
    coefficients.  Keys are ((e, m), word) with (None, 0) for the pole-free
    part."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if not c.is_zero():
                    self.terms[k] = c

    @staticmethod
    def zero():
        return PNormalForm()

    @staticmethod
    def one():
        return PNormalForm({((None, 0), ()): ZExpression.one()})

    @staticmethod
    def constant(c):
        return PNormalForm({((None, 0), ()): _as_zexpr(c)})

    def _add_term(self, pole, word, coeff):
        key = (pole, tuple(word))
        cur = self.terms.get(key)
        s = coeff if cur is None else cur + coeff
        if s.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = s

    def __add__(self, other):
        out = PNormalForm(dict(self.terms))
        for (pole, word), c in other.terms.items():
            out._add_term(pole, word, c)
        return out

    def scale(self, c):
        c = _as_zexpr(c)
        out = PNormalForm()
        for (pole, word), x in self.terms.items():
            out._add_term(pole, word, x * c)
        return out

    def weight(self):
        return max((len(w) for (_, w) in self.terms), default=0)

    def is_zero(self):
        return not self.terms

    def value_at_zero(self):
        """F(0) as a ZExpression (poles and nonempty words vanish at 0...
        poles equal 1 at y=0, words vanish unless empty)."""
        total = ZExpression.zero()
        for (pole, word), c in self.terms.items():
            if not word:
                total = total + c
        return total

    def __repr__(self):
        return "PNormalForm(%d terms)" % len(self.terms)


_PF_CACHE = {}


def _pf_pair(a, p, b, q):
    """Partial fractions of (1-a*y)^(-p) (1-b*y)^(-q) for distinct roots:
    dict (root, m) -> CycloNumber."""
    key = (a, p, b, q)
    if key in _PF_CACHE:
        return _PF_CACHE[key]
    if p == 0:
        out = {(b, q): ONE}
    elif q == 0:
        out = {(a, p): ONE}
    else:
        # 1/((1-ay)(1-by)) = A/(1-ay) + B/(1-by)
        ac, bc = a.to_cyclo(), b.to_cyclo()
        den = (ac - bc).inverse()
        A = ac * den
        B = bc * (bc - ac).inverse()
        out = {}
        for (r, m), c in _pf_pair(a, p, b, q - 1).items():
            out[(r, m)] = out.get((r, m), ZERO) + A * c
        for (r, m), c in _pf_pair(a, p - 1, b, q).items():
            out[(r, m)] = out.get((r, m), ZERO) + B * c
    _PF_CACHE[key] = out
    return out


def _merge_poles(pole_multiset):
    """Reduce a product of poles prod (1-b*y)^(-m_b) to a combination of
    single poles: list of (CycloNumber, (root, m))."""
    items = [(r, m) for r, m in pole_multiset.items() if m > 0]
    if not items:
        return [(ONE, (None, 0))]
    terms = [(ONE, items)]
    out = []
    while terms:
        c, poles = terms.pop()
        if len(poles) == 1:
            out.append((c, poles[0]))
            continue
        (a, p), (b, q) = poles[0], poles[1]
        rest = poles[2:]
        for (r, m), c2 in _pf_pair(a, p, b, q).items():
            merged = [(r, m)] + rest
            # combine equal roots
            acc = {}
            for rr, mm in merged:
                acc[rr] = acc.get(rr, 0) + mm
            terms.append((c * c2, sorted(acc.items(),
                                         key=lambda t: t[0].sort_key())))
    return out


def _fold_y(j, pole_multiset):
    """Write y^j * prod (1-b*y)^(-m_b) as a combination of pure pole
    products: list of (CycloNumber, {root: m}).  Requires j <= sum(m)."""
    total = sum(pole_multiset.values())
    if j > total:
        raise AssertionError("numerator power exceeds pole degree")
    work = [(ONE, j, dict(pole_multiset))]
    out = []
    while work:
        c, jj, poles = work.pop()
        if jj == 0:
            out.append((c, poles))
            continue
        b = next(r for r, m in poles.items() if m > 0)
        binv = b.to_cyclo().inverse()
        # y (1-by)^(-m) = (1/b) [(1-by)^(-m) - (1-by)^(-m+1)]
        p1 = dict(poles)
        work.append((c * binv, jj - 1, p1))
        p2 = dict(poles)
        p2[b] -= 1
        if p2[b] == 0:
            del p2[b]
        if jj - 1 <= sum(p2.values()):
            work.append((c * (-binv), jj - 1, p2))
        # else: dropping this branch would lose mass; it cannot be folded
        elif not (c * (-binv)).is_zero():
            raise AssertionError("cannot fold numerator power")
    return out


def multiply_factor(pnf, root, c, mu, s):
    """Multiply a normal form by (e y^c)^s / (1 - e y^c)^mu.

    Requires s <= mu when mu >= 1 (pole factors) or mu == 0 (monomials are
    folded only if existing poles can absorb them).
    """
    roots = nth_roots(root, c) if mu >= 1 else []
    out = PNormalForm()
    rs = _root_pow_cyclo(root, s)
    for ((e, m), word), coeff in pnf.terms.items():
        poles = {}
        if m:
            poles[e] = m
        if mu:
            for b in roots:
                poles[b] = poles.get(b, 0) + mu
        coeff2 = coeff * rs
        for c1, jj_poles in _fold_y(c * s, poles):
            for c2, (r2, m2) in _merge_poles(jj_poles):
                out._add_term((r2, m2) if m2 else (None, 0), word,
                              coeff2 * (c1 * c2))
    return out


def _root_pow_cyclo(root, k):
    return (root ** k).to_cyclo()


# ---------------------------------------------------------------------------
# kernel integration

def integrate_P(pnf, kernel=("t",), check_zero=None):
    """Integral from 0 to y of F(t) with kernel dt/t or dt/(1-e t)^nu.

    kernel = ("t",) or ("pole", root, nu).  For dt/t the combination must
    vanish at 0; the residual coefficient is checked with `check_zero`
    (a callback ZExpression -> bool) or must be structurally zero.
    """
    out = PNormalForm()
    if kernel[0] == "t":
        residual = ZExpression.zero()
        for ((e, m), word), coeff in pnf.terms.items():
            if m == 0:
                if word:
                    out._add_term((None, 0), (W0,) + word, coeff)
                else:
                    residual = residual + coeff
            else:
                # 1/(t(1-et)^m) = 1/t + sum_{i<=m} e/(1-et)^i
                if word:
                    out._add_term((None, 0), (W0,) + word, coeff)
                else:
                    residual = residual + coeff
                ec = e.to_cyclo()
                for i in range(1, m + 1):
                    part = _int_pole(e, i, word)
                    out = out + part.scale(coeff * ec)
        if not residual.is_zero():
            if check_zero is None or not check_zero(residual):
                raise DivergentResult("dt/t integral of a function with "
                                      "nonzero value at 0")
        return out
    _, r, nu = kernel
    for ((e, m), word), coeff in pnf.terms.items():
        poles = {r: nu}
        if m:
            poles[e] = poles.get(e, 0) + m
        for c2, (r2, m2) in _merge_poles(poles):
            part = _int_pole(r2, m2, word)
            out = out + part.scale(coeff * c2)
    return out


def _int_pole(b, nu, word):
    """Integral from 0 to y of (1-bt)^(-nu) I(t; word) dt as a PNormalForm."""
    word = tuple(word)
    if nu == 0:
        raise ValueError("pole power must be positive")
    if nu == 1:
        return PNormalForm({((None, 0), (b,) + word): ZExpression.one()})
    pref = b.to_cyclo().inverse() * CycloNumber.from_rational(
        Fraction(1, nu - 1), 1)
    if not word:
        # closed form ((1-by)^(1-nu) - 1)/(b(nu-1))
        return PNormalForm({((b, nu - 1), ()): ZExpression.from_cyclo(pref),
                            ((None, 0), ()): ZExpression.from_cyclo(-pref)})
    out = PNormalForm({((b, nu - 1), word): ZExpression.from_cyclo(pref)})
    head, rest = word[0], word[1:]
    if head is None:
        if not rest:
            raise AssertionError("word ends with dt/t")
        # (1-bt)^(1-nu)/t = 1/t + sum_{i<=nu-1} b/(1-bt)^i
        sub = PNormalForm({((None, 0), (W0,) + rest): ZExpression.one()})
        bc = b.to_cyclo()
        for i in range(1, nu):
            sub = sub + _int_pole(b, i, rest).scale(bc)
    else:
        sub = PNormalForm()
        for (r2, m2), c2 in _pf_pair(b, nu - 1, head, 1).items():
            sub = sub + _int_pole(r2, m2, rest).scale(c2)
    return out + sub.scale(-pref)


# ---------------------------------------------------------------------------
# numeric word values (series in y, |y| <= 1 with convergence at the rim
# handled by the caller's choice of y)

def word_value_series(word, y, nterms=4000):
    """I(y; word) by power series with nterms coefficients."""
    import numpy as np
    coeffs = np.zeros(nterms, dtype=complex)
    coeffs[0] = 1.0  # represents the constant function 1 (index = exponent)
    for letter in reversed(word):
        new = np.zeros(nterms, dtype=complex)
        if letter is None:
            # integrate f/t
            for nn in range(1, nterms):
                new[nn] = coeffs[nn] / nn
            coeffs = new
        else:
            e = complex(letter.to_complex())
            # g = int (sum_a (et)^a) f dt: s_N = e*s_{N-1} + c_{N-1}
            s = 0j
            for nn in range(1, nterms):
                s = e * s + coeffs[nn - 1]
                new[nn] = s / nn
            coeffs = new
    ys = complex(y)
    # Horner from the top
    total = 0j
    for nn in range(nterms - 1, -1, -1):
        total = total * ys + coeffs[nn]
    return total


def pnf_value(pnf, y, nterms=4000, zeval=None):
    """Numeric value of a normal form at y (0 < y < 1)."""
    total = 0j
    for ((e, m), word), coeff in pnf.terms.items():
        if zeval is not None:
            c = zeval(coeff)
        else:
            c = coeff.evaluate(lambda w: word_value_series(w, 1.0, nterms))
        v = c * (word_value_series(word, y, nterms) if word else 1.0)
        if m:
            v /= (1 - complex(e.to_complex()) * y) ** m
        total += v
    return total


# ---------------------------------------------------------------------------
# germs at y = 1 and regularized limits

_REG_CACHE = {}


def word_regularization(word):
    """Shuffle-regularized expansion of I(y; word) at y=1: dict T-power ->
    ZExpression, where T = -log(1-y)."""
    word = tuple(word)
    if word in _REG_CACHE:
        return _REG_CACHE[word]
    if word_is_convergent(word):
        out = {0: ZExpression.from_word(word)} if word else {0: ZExpression.one()}
    else:
        w1 = word[0]  # the letter dt/(1-t)
        rest = word[1:]
        sh = shuffle((w1,), rest)
        a = sh.get(word, 0)
        if a <= 0:
            raise AssertionError("shuffle regularization failed")
        # T * reg(rest)
        acc = {i + 1: c for i, c in word_regularization(rest).items()}
        for v, mult in sh.items():
            if v == word:
                continue
            sub = word_regularization(v)
            for i, c in sub.items():
                acc[i] = acc.get(i, ZExpression.zero()) - c.scale(mult)
        out = {i: c.scale(Fraction(1, a)) for i, c in acc.items()
               if not c.is_zero()}
    _REG_CACHE[word] = out
    return out


def _kernel_germ(letter, order):
    """Series in s of the kernel at y = 1-s: dict s-power -> CycloNumber."""
    if letter is None:
        return {t: ONE for t in range(order + 1)}
    if letter.is_one():
        return {-1: ONE}
    ec = letter.to_cyclo()
    inv = (ONE - ec).inverse()
    out = {}
    cur = inv
    ratio = -(ec * inv)
    for t in range(order + 1):
        out[t] = cur
        cur = cur * ratio
    return out


_GERM_CACHE = {}


def word_germ(word, order):
    """Germ of I(y; word) at y=1: dict (s-power, T-power) -> ZExpression,
    with s-powers 0..order and exact T-polynomial part."""
    word = tuple(word)
    key = (word, order)
    if key in _GERM_CACHE:
        return _GERM_CACHE[key]
    if not word:
        out = {(0, 0): ZExpression.one()}
        _GERM_CACHE[key] = out
        return out
    sub = word_germ(word[1:], order + 1)
    ker = _kernel_germ(word[0], order + 1)
    # dF/ds = -kernel(s) * sub(s)
    deriv = {}
    for (a1, i), c in sub.items():
        for a2, k in ker.items():
            a = a1 + a2
            if a > order:
                continue
            cur = deriv.get((a, i), ZExpression.zero())
            deriv[(a, i)] = cur - c.scale(k)
    out = {}
    for (a, i), c in deriv.items():
        if c.is_zero():
            continue
        if a == -1:
            # antiderivative of s^-1 T^i is -T^(i+1)/(i+1)
            keyt = (0, i + 1)
            cur = out.get(keyt, ZExpression.zero())
            out[keyt] = cur - c.scale(Fraction(1, i + 1))
        else:
            # antiderivative of s^a T^i: sum_{t<=i} c_t s^(a+1) T^t
            coefs = {i: Fraction(1, a + 1)}
            for t in range(i, 0, -1):
                coefs[t - 1] = coefs[t] * t / (a + 1)
            for t, q in coefs.items():
                keyt = (a + 1, t)
                cur = out.get(keyt, ZExpression.zero())
                out[keyt] = cur + c.scale(q)
    # pure T-polynomial layer: T^(i>=1) already from s^-1 pieces; the
    # constant term comes from shuffle regularization
    reg0 = word_regularization(word).get(0)
    if reg0 is not None and not reg0.is_zero():
        out[(0, 0)] = out.get((0, 0), ZExpression.zero()) + reg0
    out = {k: v for k, v in out.items() if not v.is_zero()}
    _GERM_CACHE[key] = out
    return out


class RegularizedExpansion:
    """Germ of a normal form at y=1 in powers of s=1-y and T=-log(1-y)."""

    __slots__ = ("layers",)

    def __init__(self, layers):
        self.layers = {k: v for k, v in layers.items() if not v.is_zero()}

    def value(self):
        return self.layers.get((0, 0), ZExpression.zero())

    def violations(self):
        """Coefficients that must vanish for a finite limit at y=1."""
        return {k: v for k, v in self.layers.items()
                if (k[0] < 0) or (k[0] == 0 and k[1] > 0)}


def regularize_limit(pnf, check_zero=None):
    """Limit of a normal form as y -> 1.

    Returns (ZExpression value, RegularizedExpansion).  Raises
    DivergentResult if a pole or logarithmic coefficient does not vanish
    (structurally, or via the `check_zero` callback).
    """
    J = 0
    for ((e, m), _w), _c in pnf.terms.items():
        if m and e.is_one():
            J = max(J, m)
    layers = {}
    for ((e, m), word), coeff in pnf.terms.items():
        germ = word_germ(word, J)
        if m == 0:
            pole = {0: ONE}
        elif e.is_one():
            pole = {-m: ONE}
        else:
            ec = e.to_cyclo()
            inv = (ONE - ec).inverse()
            base = ONE
            for _ in range(m):
                base = base * inv
            pole = {}
            cur = base
            ratio = -(ec * inv)
            for t in range(J + 1):
                pole[t] = cur
                # binomial(m+t, t+1)/binomial(m-1+t, t) = (m+t)/(t+1)
                cur = cur * ratio * CycloNumber.from_rational(
                    Fraction(m + t, t + 1), 1)
        for (a1, i), c in germ.items():
            for a2, k in pole.items():
                a = a1 + a2
                if a > 0:
                    continue
                keyt = (a, i)
                cur = layers.get(keyt, ZExpression.zero())
                layers[keyt] = cur + (c * coeff).scale(k)
    exp = RegularizedExpansion(layers)
    bad = exp.violations()
    if bad:
        if check_zero is None or not all(check_zero(v) for v in bad.values()):
            raise DivergentResult("nonvanishing singular coefficients at y=1")
    return exp.value(), exp
