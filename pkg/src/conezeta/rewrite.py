"""Rewriting engine for cone zeta integrands.

An integrand is a Q^ab-coefficient times a product of factors

    (e * y^alpha)^s / (1 - e * y^alpha)^mu

with e a root of unity, alpha a nonzero vector of natural exponents, s >= 0
the numerator power and mu >= 0 the pole power.  Rewriting reduces a definite
integral of such a product over the open unit box, with dy_i/y_i measure, to a
recipe of one-variable kernel integrations consumed by the polylog module.
"""

import itertools
from fractions import Fraction
from math import gcd

from .exact import CycloNumber, RootOfUnity, nth_roots

ONE = CycloNumber.from_rational(1, 1)


class Monomial:
    """Monomial y^alpha given by a tuple of natural exponents."""

    __slots__ = ("exps",)

    def __init__(self, exps):
        self.exps = tuple(int(x) for x in exps)
        if any(x < 0 for x in self.exps):
            raise ValueError("monomial exponents must be nonnegative")

    def leading(self):
        return next((i for i, x in enumerate(self.exps) if x != 0), None)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __repr__(self):
        return "Monomial(%s)" % (list(self.exps),)


class FactorTerm:
    """(e*y^alpha)^s / (1 - e*y^alpha)^mu."""

    __slots__ = ("root", "exps", "mu", "s")

    def __init__(self, root, exps, mu=1, s=1):
        self.root = root
        self.exps = tuple(int(x) for x in exps)
        self.mu = int(mu)
        self.s = int(s)
        if all(x == 0 for x in self.exps):
            raise ValueError("factor monomial must be nonconstant")
        if any(x < 0 for x in self.exps):
            raise ValueError("factor exponents must be nonnegative")
        if self.mu < 0 or self.s < 0 or (self.mu == 0 and self.s == 0):
            raise ValueError("invalid factor powers")

    def leading(self):
        return next(i for i, x in enumerate(self.exps) if x != 0)

    def key(self):
        return (self.leading(), self.exps, self.root.sort_key(), self.mu, self.s)

    def with_exps(self, exps, mu=None, s=None):
        return FactorTerm(self.root, exps,
                          self.mu if mu is None else mu,
                          self.s if s is None else s)

    def __eq__(self, other):
        return (isinstance(other, FactorTerm) and self.root == other.root
                and self.exps == other.exps and self.mu == other.mu
                and self.s == other.s)

    def __hash__(self):
        return hash((self.root, self.exps, self.mu, self.s))

    def __repr__(self):
        return "FactorTerm(e=%r, a=%s, mu=%d, s=%d)" % (
            self.root, list(self.exps), self.mu, self.s)


class Integrand:
    """Coefficient times a product of factors in a fixed variable list."""

    __slots__ = ("coeff", "factors", "nvars", "tag")

    def __init__(self, coeff, factors, nvars, tag="S"):
        self.coeff = coeff if isinstance(coeff, CycloNumber) else \
            CycloNumber.from_rational(coeff, 1)
        self.factors = tuple(factors)
        self.nvars = int(nvars)
        self.tag = tag
        for f in self.factors:
            if len(f.exps) != self.nvars:
                raise ValueError("factor arity mismatch")

    def scaled(self, c):
        return Integrand(self.coeff * c, self.factors, self.nvars, self.tag)

    def __repr__(self):
        return "Integrand(%r, %s, tag=%s)" % (self.coeff, list(self.factors),
                                              self.tag)


class ReductionTrace:
    """Audit trace of rewrite-rule applications.

    Each step stores the rule name plus reprs of inputs and outputs; replay
    re-executes every recorded rule and checks that it reproduces the
    recorded output.
    """

    def __init__(self):
        self.steps = []

    def record(self, rule, inputs, outputs):
        self.steps.append({"rule": rule, "inputs": inputs, "outputs": outputs})

    def replay(self):
        for step in self.steps:
            fn = TRACEABLE_RULES[step["rule"]]
            redo = fn(*step["inputs"])
            if repr(redo) != repr(step["outputs"]):
                raise AssertionError("trace replay diverged at rule %s"
                                     % step["rule"])
        return True

    def __len__(self):
        return len(self.steps)


# ---------------------------------------------------------------------------
# formal power series oracle (used by tests to certify every rewrite rule)

def factor_series(f, maxdeg):
    """Truncated multivariate series of a FactorTerm up to total degree."""
    n = len(f.exps)
    deg_a = sum(f.exps)
    out = {}
    ecy = f.root.to_cyclo()
    # (e y^a)^s * sum_t binom(mu-1+t, t) (e y^a)^t
    t = 0
    while deg_a * (f.s + t) <= maxdeg:
        if f.mu == 0 and t > 0:
            break
        if f.mu == 0:
            coef = ONE
        else:
            b = 1
            for i in range(1, t + 1):
                b = b * (f.mu - 1 + i) // i
            coef = CycloNumber.from_rational(b, 1)
        power = f.s + t
        exps = tuple(x * power for x in f.exps)
        rc = coef * _root_power_cyclo(f.root, power)
        out[exps] = out.get(exps, CycloNumber.from_rational(0, 1)) + rc
        t += 1
    return out


def _root_power_cyclo(root, k):
    return (root ** k).to_cyclo()


def _series_mul(a, b, maxdeg):
    out = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > maxdeg:
                continue
            key = tuple(x + y for x, y in zip(ea, eb))
            c = ca * cb
            if key in out:
                out[key] = out[key] + c
            else:
                out[key] = c
    return out


def integrand_series(I, maxdeg):
    """Series of a single Integrand up to total degree maxdeg."""
    n = I.nvars
    cur = {tuple([0] * n): I.coeff}
    for f in I.factors:
        cur = _series_mul(cur, factor_series(f, maxdeg), maxdeg)
    return cur


def combination_series(terms, maxdeg):
    """Series of a list of Integrands (a Q^ab-linear combination)."""
    total = {}
    for I in terms:
        for k, v in integrand_series(I, maxdeg).items():
            if k in total:
                total[k] = total[k] + v
            else:
                total[k] = v
    return {k: v for k, v in total.items() if not v.is_zero()}


def series_equal(termsA, termsB, maxdeg):
    sa = combination_series(termsA, maxdeg)
    sb = combination_series(termsB, maxdeg)
    keys = set(sa) | set(sb)
    zero = CycloNumber.from_rational(0, 1)
    return all((sa.get(k, zero) - sb.get(k, zero)).is_zero() for k in keys)


# ---------------------------------------------------------------------------
# entry: integral expression of a cone zeta sum over a free semigroup

def integral_expression(generators, forms, chi):
    """Type-S integrand for sum over the free semigroup on `generators`.

    generators: ordered free semigroup generators (rational vectors);
    forms: LinearForms positive on the open cone; chi: LatticeCharacter.
    The value of the cone zeta sum equals the integral over (0,1)^n of the
    returned integrand times prod dy_i/y_i.
    """
    n = len(forms)
    d = len(generators)
    cols = []
    scale = Fraction(1)
    rows = []
    for f in forms:
        vals = [Fraction(f(g)) for g in generators]
        if any(v < 0 for v in vals) or all(v == 0 for v in vals):
            raise ValueError("form not positive on the open cone piece")
        den = 1
        for v in vals:
            den = den * v.denominator // gcd(den, v.denominator)
        scale *= Fraction(1, den)  # form scaled up by den => zeta scaled down
        rows.append([int(v * den) for v in vals])
    # factor j corresponds to generator j; its exponent vector is column j
    factors = []
    for j in range(d):
        exps = tuple(rows[i][j] for i in range(n))
        root = chi.eval(generators[j])
        factors.append(FactorTerm(root, exps, mu=1, s=1))
    # scaling forms by den multiplies the form, dividing zeta; compensate
    coeff = CycloNumber.from_rational(1 / scale, 1)
    return Integrand(coeff, factors, n, tag="S")


def convergence_check(generators_or_d, forms):
    """Criterion for absolute convergence of the free-semigroup sum.

    For every nonempty subset J of generator coordinates, the number of forms
    involving at least one coordinate of J must exceed |J|.
    """
    if isinstance(generators_or_d, int):
        d = generators_or_d
        mat = [[Fraction(c) for c in f] for f in forms]
    else:
        gens = generators_or_d
        d = len(gens)
        mat = [[Fraction(f(g)) for g in gens] for f in forms]
    for r in range(1, d + 1):
        for J in itertools.combinations(range(d), r):
            cnt = sum(1 for row in mat if any(row[j] != 0 for j in J))
            if cnt <= r:
                return False
    return True


# ---------------------------------------------------------------------------
# coordinate change to a derived-sequence piece, and root splitting

def root_split(root, prim_exps, c):
    """Split e*w^c/(1-e*w^c), w = y^prim, into factors with monomial w.

    Returns a list of (CycloNumber coefficient, [FactorTerm...]) whose sum
    equals the input factor:  prod_{b^c=e} (1 + b*w/(1-b*w)) - 1.
    """
    if c == 1:
        return [(ONE, [FactorTerm(root, prim_exps, 1, 1)])]
    roots = nth_roots(root, c)
    out = []
    for r in range(1, c + 1):
        for combo in itertools.combinations(roots, r):
            out.append((ONE, [FactorTerm(b, prim_exps, 1, 1) for b in combo]))
    return out


def change_coordinates(I, pieces, trace=None):
    """Rewrite a type-S integrand on the orthant over derived-sequence pieces.

    `pieces` is a list of rescaled DerivedSequences whose cones decompose the
    orthant.  Returns a list of (DerivedSequence, Integrand) terms; summing
    the integrals of the integrands over (0,1)^n reproduces the integral of I.
    Root splitting is applied so every factor monomial is a variable-part
    representative (type D).
    """
    from .linalg import mat_det

    out = []
    n = I.nvars
    for ds in pieces:
        gens = ds.cone.generators  # columns of the substitution matrix
        if len(gens) != n:
            raise ValueError("piece dimension mismatch")
        A = [[Fraction(g[i]) for g in gens] for i in range(n)]  # A[i][k]
        for row in A:
            for x in row:
                if x < 0 or Fraction(x).denominator != 1:
                    raise AssertionError("substitution matrix not natural")
        jac = abs(mat_det(A))
        split_factor_terms = []
        for f in I.factors:
            new_exps = tuple(int(sum(Fraction(f.exps[i]) * A[i][k]
                                     for i in range(n))) for k in range(n))
            lead = next(i for i, x in enumerate(new_exps) if x != 0)
            c = new_exps[lead]
            prim = tuple(x // c for x in new_exps)
            if any(x % c for x in new_exps):
                raise AssertionError("monomial not a multiple of a primitive "
                                     "variable-part representative")
            split = root_split(f.root, prim, c)
            if trace is not None:
                trace.record("root_split", (f.root, prim, c), split)
            split_factor_terms.append(split)
        # expand the product of split combinations
        for combo in itertools.product(*split_factor_terms):
            coeff = I.coeff * CycloNumber.from_rational(jac, 1)
            factors = []
            for c0, fl in combo:
                coeff = coeff * c0
                factors.extend(fl)
            out.append((ds, Integrand(coeff, factors, n, tag="D")))
    return out


# ---------------------------------------------------------------------------
# zero sets and convergence bookkeeping

def zero_set(I):
    """Variables dividing the numerator of the integrand."""
    out = set()
    for f in I.factors:
        if f.s > 0:
            out.update(i for i, x in enumerate(f.exps) if x > 0)
    return out


def check_convergence_box(I, k):
    """Numerator divisible by y_1..y_k (weight-k convergence condition)."""
    return set(range(k)) <= zero_set(I)


# ---------------------------------------------------------------------------
# uni-factorization

def _merge_factors(factors):
    """Merge factors sharing (root, exps) by adding powers."""
    acc = {}
    for f in factors:
        key = (f.root, f.exps)
        if key in acc:
            g = acc[key]
            acc[key] = FactorTerm(f.root, f.exps, g.mu + f.mu, g.s + f.s)
        else:
            acc[key] = f
    return sorted(acc.values(), key=lambda f: f.key())


def _numerator_normalize_factor(f):
    """Rewrite a factor as a combination with numerator power s in {0, 1};
    s=0 only for pure monomials (mu=0 yields s>=1 monomial factors or 1).

    Returns list of (CycloNumber coeff, FactorTerm or None).
    """
    if f.s == 1 or (f.mu == 0 and f.s >= 1):
        return [(ONE, f)]
    if f.s == 0:
        # 1/(1-u)^mu = 1 + sum_{t=1..mu} u/(1-u)^t
        out = [(ONE, None)]
        for t in range(1, f.mu + 1):
            out.append((ONE, FactorTerm(f.root, f.exps, t, 1)))
        return out
    # s >= 2, mu >= 1: u^s/(1-u)^mu = u^(s-1)/(1-u)^mu - u^(s-1)/(1-u)^(mu-1)
    out = []
    for c, g in _numerator_normalize_factor(FactorTerm(f.root, f.exps, f.mu, f.s - 1)):
        out.append((c, g))
    if f.mu - 1 == 0:
        neg = FactorTerm(f.root, f.exps, 0, f.s - 1) if f.s - 1 >= 1 else None
        out.append((-ONE, neg))
    else:
        for c, g in _numerator_normalize_factor(FactorTerm(f.root, f.exps, f.mu - 1, f.s - 1)):
            out.append((c * CycloNumber.from_rational(-1, 1), g))
    return out


def normalize_term(coeff, factors):
    """Merge and numerator-normalize a factor list.

    Returns a list of (coeff, [factors]) with every factor having s=1 (poles)
    or mu=0, s>=1 (pure monomials), at most one factor per (root, exps).
    """
    merged = _merge_factors(factors)
    terms = [(coeff, [])]
    for f in merged:
        expansion = _numerator_normalize_factor(f)
        new_terms = []
        for c0, fl in terms:
            for c1, g in expansion:
                new_terms.append((c0 * c1, fl + ([g] if g is not None else [])))
        terms = new_terms
    # merging may be needed again if normalization recreated duplicates
    out = []
    for c, fl in terms:
        m = _merge_factors(fl)
        if any(f.s > 1 and f.mu > 0 for f in m) or any(f.s == 0 for f in m):
            out.extend(normalize_term(c, m))
        else:
            out.append((c, m))
    return out


def partial_fraction_pair(F1, F2):
    """Reduce a product of two pole factors with the same leading variable.

    Both factors must have s=1, mu>=1 and share the leading variable.  The
    returned list of (coeff, [factors]) sums to F1*F2.  The new factor's
    monomial is the exponent difference, one level deeper.
    """
    if F1.s != 1 or F2.s != 1 or F1.mu < 1 or F2.mu < 1:
        raise ValueError("pair reduction expects s=1 pole factors")
    if F1.leading() != F2.leading():
        raise ValueError("factors must share the leading variable")
    if F1.exps == F2.exps and F1.root == F2.root:
        raise ValueError("identical factors should be merged, not paired")
    # order so that delta = exps2 - exps1 is nonnegative
    d12 = [b - a for a, b in zip(F1.exps, F2.exps)]
    if all(x >= 0 for x in d12):
        A, B = F1, F2
    elif all(x <= 0 for x in d12):
        A, B = F2, F1
    else:
        raise AssertionError("exponent difference of a clashing pair is not "
                             "sign-definite; derived sequence violated")
    delta = tuple(abs(b - a) for a, b in zip(A.exps, B.exps))
    eq = B.root * A.root.inverse()  # ratio u_B/u_A = eq * y^delta
    def residual(f):
        # (1-u)^-(mu-1), dropped entirely when mu-1 == 0
        if f.mu - 1 == 0:
            return []
        return [FactorTerm(f.root, f.exps, f.mu - 1, 0)]

    out = []
    if all(x == 0 for x in delta):
        if eq.is_one():
            raise AssertionError("clashing pair with equal monomial and root")
        # constant X = eq/(1-eq); L1 L2 = X L1' + (-X-1) L2'
        eqc = eq.to_cyclo()
        X = eqc * (ONE - eqc).inverse()
        out.append((X, [A] + residual(B)))
        out.append((-X - ONE, [B] + residual(A)))
    else:
        X = FactorTerm(eq, delta, 1, 1)
        out.append((ONE, [A, X] + residual(B)))
        out.append((-ONE, [B, X] + residual(A)))
        out.append((-ONE, [B] + residual(A)))
    return out


def uni_factorize(I, D=None, trace=None):
    """Rewrite a type-D integrand as a combination of uni-factor integrands.

    In a uni-factor integrand at most one pole factor has any given leading
    variable (pure monomial factors are exempt).  Lowest level first, then the
    lexicographically smallest clashing pair.
    """
    work = []
    for c0, fl in _split_leading(I.coeff, list(I.factors), trace):
        work.append((c0, fl))
    done = []
    fuel = 100000
    while work:
        fuel -= 1
        if fuel < 0:
            raise RuntimeError("uni-factorization did not terminate")
        coeff, factors = work.pop()
        for c0, fl in normalize_term(coeff, factors):
            poles = sorted([f for f in fl if f.mu >= 1], key=lambda f: f.key())
            clash = None
            for a, b in itertools.combinations(poles, 2):
                if a.leading() == b.leading():
                    clash = (a, b)
                    break
            if clash is None:
                done.append(Integrand(c0, fl, I.nvars, tag="U"))
                continue
            a, b = clash
            repl = partial_fraction_pair(a, b)
            if trace is not None:
                trace.record("partial_fraction_pair", (a, b), repl)
            rest = list(fl)
            rest.remove(a)
            rest.remove(b)
            for c1, new in repl:
                # a fresh delta factor may be a c-th power of a primitive
                # monomial; split it before further pairing
                for c2, fl2 in _split_leading(c0 * c1, rest + new, trace):
                    work.append((c2, fl2))
    return done


def _split_leading(coeff, factors, trace=None):
    """Root-split every s=1, mu=1 pole factor whose leading exponent is > 1.

    Returns a list of (coeff, [factors]) summing to the input product, in
    which every pole factor has leading exponent 1 or is a residual/monomial.
    """
    terms = [(coeff, [])]
    for f in factors:
        c = f.exps[f.leading()]
        if f.mu == 1 and f.s == 1 and c > 1 and all(x % c == 0 for x in f.exps):
            prim = tuple(x // c for x in f.exps)
            split = root_split(f.root, prim, c)
            if trace is not None:
                trace.record("root_split", (f.root, prim, c), split)
            terms = [(t0 * c1, fl0 + fl1)
                     for t0, fl0 in terms for c1, fl1 in split]
        else:
            terms = [(t0, fl0 + [f]) for t0, fl0 in terms]
    return terms


TRACEABLE_RULES = {
    "partial_fraction_pair": partial_fraction_pair,
    "root_split": root_split,
}


# ---------------------------------------------------------------------------
# weight descent: reduce a uni-factor integral to one-variable kernel recipes
#
# Objects track an ordered tuple of coordinate ids; the first `weight`
# positions are integrated over (0,1) with dy/y measure, the rest are free.
# A simple object has at most one pole factor per integrated slot, each with
# mu = 1 and s = 1, and no factors leading at free slots.

class UFObject:
    """Partially integrated product of factors."""

    __slots__ = ("coords", "factors", "weight")

    def __init__(self, coords, factors, weight):
        self.coords = tuple(coords)
        self.factors = tuple(factors)
        self.weight = int(weight)
        for f in self.factors:
            if len(f.exps) != len(self.coords):
                raise ValueError("factor arity mismatch")

    def is_simple(self):
        slots = [f.leading() for f in self.factors]
        return (len(slots) == len(set(slots))
                and all(s < self.weight for s in slots)
                and all(f.mu == 1 and f.s == 1 for f in self.factors))

    def __repr__(self):
        return "UFObject(%s, %s, w=%d)" % (list(self.coords),
                                           list(self.factors), self.weight)


def _embed_exps(exps, sub_coords, coords):
    """Re-index an exponent tuple from sub_coords into coords positions."""
    pos = {cid: i for i, cid in enumerate(coords)}
    out = [0] * len(coords)
    for cid, x in zip(sub_coords, exps):
        out[pos[cid]] = x
    return tuple(out)


def _project_factor(f, coords, sub_coords):
    """Restrict a factor from coords to sub_coords; dropped ids must have
    zero exponent."""
    pos = {cid: i for i, cid in enumerate(coords)}
    out = []
    for cid in sub_coords:
        out.append(f.exps[pos[cid]])
    kept = set(sub_coords)
    for cid, x in zip(coords, f.exps):
        if cid not in kept and x != 0:
            raise AssertionError("factor involves a deleted coordinate")
    return FactorTerm(f.root, out, f.mu, f.s)


def _restrict_object(coeff, obj, cid):
    """Substitute y_cid = 1 (delete the coordinate)."""
    pos = obj.coords.index(cid)
    new_coords = obj.coords[:pos] + obj.coords[pos + 1:]
    new_factors = []
    for f in obj.factors:
        exps = f.exps[:pos] + f.exps[pos + 1:]
        if all(x == 0 for x in exps):
            if f.root.is_one():
                raise AssertionError("pole at 1 in a face restriction")
            rc = f.root.to_cyclo()
            val = _root_power_cyclo(f.root, f.s)
            den = (ONE - rc)
            for _ in range(f.mu):
                val = val * den.inverse()
            coeff = coeff * val
        else:
            new_factors.append(FactorTerm(f.root, exps, f.mu, f.s))
    w = obj.weight - 1 if pos < obj.weight else obj.weight
    return coeff, UFObject(new_coords, new_factors, w)


def _extend_weight(obj, cid):
    """Integrate the first free coordinate, which must be cid, and require
    the numerator to be divisible by it."""
    if obj.coords[obj.weight] != cid:
        raise AssertionError("integration coordinate out of order")
    if all(f.exps[obj.weight] == 0 for f in obj.factors if f.s > 0):
        raise AssertionError("divergent integration: numerator not "
                             "divisible by the integration variable")
    return UFObject(obj.coords, obj.factors, obj.weight + 1)


def _with_factor(obj, f, coords):
    """Adjoin a factor given on `coords` to an object on a sub-coordinate
    tuple."""
    g = _project_factor(f, coords, obj.coords)
    return UFObject(obj.coords, obj.factors + (g,), obj.weight)


def _resolve_slot(coeff, factors, slot, trace=None):
    """Normalize a factor list and pair-reduce until at most one pole factor
    leads at `slot`.  Returns a list of (coeff, [factors])."""
    work = [(coeff, list(factors))]
    done = []
    fuel = 100000
    while work:
        fuel -= 1
        if fuel < 0:
            raise RuntimeError("slot resolution did not terminate")
        c, fl = work.pop()
        for c0, fl0 in normalize_term(c, fl):
            if any(f.mu == 0 and f.leading() == slot for f in fl0):
                raise AssertionError("monomial factor at an integrated slot")
            poles = [f for f in fl0 if f.mu >= 1 and f.leading() == slot]
            if len(poles) <= 1:
                done.append((c0, fl0))
                continue
            a, b = sorted(poles, key=lambda f: f.key())[:2]
            repl = partial_fraction_pair(a, b)
            if trace is not None:
                trace.record("partial_fraction_pair", (a, b), repl)
            rest = list(fl0)
            rest.remove(a)
            rest.remove(b)
            for c1, new in repl:
                for c2, fl2 in _split_leading(c0 * c1, rest + new, trace):
                    work.append((c2, fl2))
    return done


def reduce_A(coords, factors, w, trace=None, _fuel=None):
    """Express the integral over the first w coordinates of prod(factors) as
    sum coeff * M * h with M a list of factors leading at free slots and h a
    simple object of weight <= w.

    Returns a list of (coeff, M, h): M factors are given on `coords`, the
    simple object h on its own (possibly smaller) coordinate tuple.
    """
    if _fuel is None:
        _fuel = [20000]
    _fuel[0] -= 1
    if _fuel[0] < 0:
        raise RuntimeError("weight reduction did not terminate")
    if w == 0:
        h = UFObject(coords, (), 0)
        return [(ONE, list(factors), h)]
    slot = w - 1
    cid = coords[slot]
    out = []
    low = [f for f in factors if f.leading() < slot]
    slotf = [f for f in factors if f.leading() == slot]
    high = [f for f in factors if f.leading() > slot]
    for c1, M1, h in reduce_A(coords, low, w - 1, trace, _fuel):
        slot_parts = slotf + [m for m in M1 if m.leading() == slot]
        high1 = high + [m for m in M1 if m.leading() > slot]
        for c2, fl2 in _resolve_slot(ONE, slot_parts, slot, trace):
            poles = [f for f in fl2 if f.leading() == slot]
            Mh = high1 + [f for f in fl2 if f.leading() > slot]
            coef = c1 * c2
            P = poles[0] if poles else None
            for c3, M3, h3 in _integrate_slot(coords, P, h, cid, slot,
                                              trace, _fuel):
                out.append((coef * c3, Mh + M3, h3))
    return out


def _integrate_slot(coords, P, h, cid, slot, trace, _fuel):
    """Integrate (0,1) in y_cid of P(y) * h(y, frees) dy/y.

    P is the unique pole factor leading at `slot` on `coords` (or None); h is
    a simple object whose first free coordinate is cid.  Returns a list of
    (coeff, M, h') in the sense of reduce_A.
    """
    if P is None:
        return [(ONE, [], _extend_weight(h, cid))]
    if P.s != 1 or P.mu < 1:
        raise AssertionError("unnormalized slot factor")
    if P.mu == 1:
        h2 = _with_factor(h, P, coords)
        return [(ONE, [], _extend_weight(h2, cid))]
    # mu >= 2: integrate by parts
    nu = P.mu
    inv = CycloNumber.from_rational(Fraction(1, nu - 1), 1)
    out = []
    # boundary at y_cid = 1: (1/(1-ep)^(nu-1) - 1)/(nu-1) * h|_{y_cid=1},
    # telescoped into poles of the free monomial p
    pos = coords.index(cid)
    p_exps = P.exps[:pos] + (0,) + P.exps[pos + 1:]
    if all(x == 0 for x in p_exps):
        raise AssertionError("pure pole factor cannot reach the boundary")
    bc, hb = _restrict_object(ONE, h, cid)
    for t in range(1, nu):
        Mt = FactorTerm(P.root, p_exps, t, 1)
        out.append((inv * bc, [Mt], hb))
    # derivative term: -1/(nu-1) * sum_t int u/(1-u)^t (y d/dy h) dy/y
    for cD, obj in reduce_B(h, cid, trace, _fuel):
        for t in range(1, nu):
            Pt = FactorTerm(P.root, P.exps, t, 1)
            ext = _extend_weight(_with_factor(obj, Pt, coords), cid)
            for c3, M3, h3 in reduce_A(ext.coords, list(ext.factors),
                                       ext.weight, trace, _fuel):
                M3e = [FactorTerm(m.root,
                                  _embed_exps(m.exps, ext.coords, coords),
                                  m.mu, m.s) for m in M3]
                out.append((-inv * cD * c3, M3e, h3))
    return out


def reduce_B(h, vid, trace=None, _fuel=None):
    """Differential y_vid * d/dy_vid of a simple object h, for a free
    coordinate vid.  Returns a list of (coeff, UFObject) of weight < h.weight
    representing the derivative.
    """
    if _fuel is None:
        _fuel = [20000]
    _fuel[0] -= 1
    if _fuel[0] < 0:
        raise RuntimeError("differentiation did not terminate")
    w = h.weight
    if w == 0:
        return []
    slot = w - 1
    cid = h.coords[slot]
    L = [f for f in h.factors if f.leading() == slot]
    g = UFObject(h.coords, [f for f in h.factors if f.leading() != slot],
                 w - 1)
    out = []
    if not L:
        for c, obj in reduce_B(g, vid, trace, _fuel):
            out.append((c, _extend_weight(obj, cid)))
        return out
    L = L[0]
    vpos = h.coords.index(vid)
    for c, obj in reduce_B(g, vid, trace, _fuel):
        out.append((c, _extend_weight(_with_factor(obj, L, h.coords), cid)))
    cexp = L.exps[vpos]
    if cexp != 0:
        cc = CycloNumber.from_rational(cexp, 1)
        # boundary of int c*u/(1-u)^2 g dy/y at y_cid = 1
        bcoef, gb = _restrict_object(ONE, g, cid)
        pos = h.coords.index(cid)
        p_exps = L.exps[:pos] + (0,) + L.exps[pos + 1:]
        if all(x == 0 for x in p_exps):
            raise AssertionError("pure pole factor cannot reach the boundary")
        Lb = FactorTerm(L.root, _embed_exps(
            [p_exps[i] for i, c0 in enumerate(h.coords) if c0 in gb.coords],
            [c0 for c0 in h.coords if c0 in gb.coords], gb.coords), 1, 1)
        out.append((cc * bcoef,
                    UFObject(gb.coords, gb.factors + (Lb,), gb.weight)))
        # minus int c*u/(1-u) (y_cid d/dy_cid g) dy/y
        for cD, obj in reduce_B(g, cid, trace, _fuel):
            out.append((-cc * cD,
                        _extend_weight(_with_factor(obj, L, h.coords), cid)))
    return out


# ---------------------------------------------------------------------------
# recipes: symbolic plans executed by the polylog module
#
# node forms:
#   ('one',)                       the constant function 1
#   ('sum', [(coeff, node), ...])  Q^ab-linear combination
#   ('mul', [(root, c, mu, s), ...], node)
#                                  multiply by prod (e y^c)^s/(1-e y^c)^mu
#   ('int', node)                  integral from 0 to y, dt/t
#   ('const', node)                regularized value at y=1, as a constant

def reduce_to_univariate(I, trace=None):
    """Recipe for I(y_n): the integral of a uni-factor integrand over all
    variables but the last, as a function of the last variable."""
    coords = tuple(range(I.nvars))
    node = _p_recipe(coords, list(I.factors), trace)
    return ('sum', [(I.coeff, node)])


def _p_recipe(coords, factors, trace=None):
    d = len(coords)
    pure = [f for f in factors if f.leading() == d - 1]
    rest = [f for f in factors if f.leading() < d - 1]
    if d == 1:
        node = ('one',)
    else:
        parts = []
        for coef, M, h in reduce_A(coords, rest, d - 1, trace):
            if any(m.leading() < d - 1 for m in M):
                raise AssertionError("free factor at an integrated slot")
            node = _simple_recipe(h, trace)
            if M:
                node = ('mul', [_pure_factor(m) for m in M], node)
            parts.append((coef, node))
        node = ('sum', parts)
        rest = []
    if pure:
        node = ('mul', [_pure_factor(f) for f in pure], node)
    return node


def _pure_factor(f):
    lead = f.leading()
    if any(x != 0 for i, x in enumerate(f.exps) if i != lead):
        raise AssertionError("factor is not univariate")
    return (f.root, f.exps[lead], f.mu, f.s)


def _simple_recipe(h, trace=None):
    """Recipe for a univariate simple object as a function of its last
    coordinate."""
    if len(h.coords) != h.weight + 1:
        raise AssertionError("object is not univariate")
    if not h.is_simple():
        raise AssertionError("object is not simple")
    if h.weight == 0:
        return ('one',)
    last = h.weight
    if all(f.exps[last] == 0 for f in h.factors):
        # constant in the free variable: its value is the full integral,
        # recovered as the regularized limit of the weight-w function
        sub_coords = h.coords[:-1]
        sub_factors = [FactorTerm(f.root, f.exps[:-1], f.mu, f.s)
                       for f in h.factors]
        inner = _p_recipe(sub_coords, sub_factors, trace)
        return ('const', ('int', inner))
    parts = []
    for c, obj in reduce_B(h, h.coords[last], trace):
        if obj.weight != len(obj.coords) - 1:
            raise AssertionError("derivative term is not univariate")
        parts.append((c, _p_recipe(obj.coords, list(obj.factors), trace)))
    return ('int', ('sum', parts))
