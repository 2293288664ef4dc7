"""Exact polyhedral geometry: cones, lattices, linear forms, decompositions."""

import itertools
from fractions import Fraction
from math import gcd

from .linalg import (frac_matrix, mat_det, mat_inverse, mat_rank, mat_vec,
                     nullspace, primitive_int_vector, smith_normal_form,
                     solve_consistent)


def primitive_ray(v):
    """Scale a nonzero rational vector to coprime integers, keeping direction."""
    from math import gcd as _gcd
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector is not a ray")
    return tuple(x // g for x in ints)


def dot(a, b):
    return sum(Fraction(x) * Fraction(y) for x, y in zip(a, b))


class LinearForm:
    """Linear form with rational coefficients; class = positive scaling."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    def __call__(self, x):
        return dot(self.coeffs, x)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def class_key(self):
        """Canonical representative of the up-to-positive-scale class."""
        return primitive_int_vector(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "LinearForm(%s)" % (list(self.coeffs),)


class Lattice:
    """Full-rank-in-its-span lattice given by basis rows."""

    __slots__ = ("basis",)

    def __init__(self, basis):
        self.basis = tuple(tuple(Fraction(x) for x in row) for row in basis)
        if self.basis and mat_rank(self.basis) != len(self.basis):
            raise ValueError("lattice basis must be linearly independent")

    @property
    def rank(self):
        return len(self.basis)

    def coords_of(self, x):
        cols = [[self.basis[j][i] for j in range(len(self.basis))]
                for i in range(len(self.basis[0]))]
        return solve_consistent(cols, list(x))

    def contains(self, x):
        try:
            c = self.coords_of(x)
        except ValueError:
            return False
        return all(Fraction(v).denominator == 1 for v in c)

    def index_over(self, sub):
        """Index [self : sub] for a finite-index sublattice."""
        M = [self.coords_of(b) for b in sub.basis]
        d = abs(mat_det(M))
        if d == 0:
            raise ValueError("not finite index")
        return d

    def __repr__(self):
        return "Lattice(%s)" % (list(map(list, self.basis)),)


def standard_lattice(m):
    return Lattice([[1 if i == j else 0 for j in range(m)] for i in range(m)])


def span_integer_lattice(generators):
    """Lattice Z^m intersected with the rational span of the generators."""
    gens = [list(map(int, g)) for g in generators]
    m = len(gens[0])
    r = mat_rank(gens)
    if r == m:
        return standard_lattice(m)
    _, S, V = smith_normal_form(gens)
    Vinv = mat_inverse(V)
    # rows of S*Vinv span the row space; saturation basis = first r rows of Vinv
    basis = [[int(x) for x in row] for row in Vinv[:r]]
    return Lattice(basis)


# ---------------------------------------------------------------------------
# cones

def _lex_key(v):
    return tuple(v)


class Cone:
    """Polyhedral cone spanned by finitely many integer generators."""

    def __init__(self, generators):
        gens = []
        for g in generators:
            gens.append(primitive_ray(g))
        if not gens:
            raise ValueError("cone needs at least one generator")
        self.ambient_dim = len(gens[0])
        self.generators = tuple(dict.fromkeys(gens))
        self._span = None
        self._facets = None
        self._rays = None

    # -- span and facet structure -------------------------------------------
    def span_basis(self):
        """Rows: integer basis of the lattice Z^m ∩ span (also a Q-basis)."""
        if self._span is None:
            self._span = tuple(span_integer_lattice(self.generators).basis)
        return self._span

    @property
    def dim(self):
        return len(self.span_basis())

    def span_coords(self, x):
        B = self.span_basis()
        cols = [[B[j][i] for j in range(len(B))] for i in range(len(x))]
        return solve_consistent(cols, list(x))

    def in_span(self, x):
        try:
            c = self.span_coords(x)
        except ValueError:
            return False
        B = self.span_basis()
        back = [sum(c[j] * B[j][i] for j in range(len(B)))
                for i in range(len(x))]
        return all(Fraction(a) == Fraction(b) for a, b in zip(back, x))

    def facet_normals(self):
        """Primitive facet normals in span coordinates (empty if dim <= 1)."""
        if self._facets is not None:
            return self._facets
        d = self.dim
        if d <= 1:
            self._facets = ()
            return self._facets
        pts = [self.span_coords(g) for g in self.generators]
        seen = set()
        out = []
        for sub in itertools.combinations(range(len(pts)), d - 1):
            rows = [pts[i] for i in sub]
            if mat_rank(rows) != d - 1:
                continue
            ns = nullspace(rows, d)
            if len(ns) != 1:
                continue
            normal = ns[0]
            vals = [dot(normal, p) for p in pts]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                if all(v <= 0 for v in vals):
                    normal = [-x for x in normal]
                key = primitive_int_vector(normal)
                # primitive_int_vector normalizes the sign; restore the
                # inward orientation
                if any(dot(key, p) < 0 for p in pts):
                    key = tuple(-x for x in key)
                if key not in seen:
                    seen.add(key)
                    out.append(key)
        self._facets = tuple(out)
        return self._facets

    def is_pointed(self):
        d = self.dim
        if d == 1:
            g0 = self.generators[0]
            return all(g == g0 for g in self.generators)
        return mat_rank(self.facet_normals()) == d

    def extreme_rays(self):
        """Primitive extreme rays, sorted lexicographically."""
        if self._rays is not None:
            return self._rays
        d = self.dim
        if d == 1:
            self._rays = (self.generators[0],)
            return self._rays
        normals = self.facet_normals()
        pts = {g: self.span_coords(g) for g in self.generators}
        rays = []
        for g, p in pts.items():
            tight = [n for n in normals if dot(n, p) == 0]
            if tight and mat_rank(tight) == d - 1:
                rays.append(g)
        self._rays = tuple(sorted(set(rays), key=_lex_key))
        return self._rays

    def contains(self, x):
        if not self.in_span(x):
            return False
        p = self.span_coords(x)
        d = self.dim
        if d == 1:
            g = self.span_coords(self.generators[0])
            idx = next(i for i, v in enumerate(g) if v != 0)
            t = Fraction(p[idx]) / g[idx]
            return t >= 0 and all(Fraction(a) == t * b for a, b in zip(p, g))
        return all(dot(n, p) >= 0 for n in self.facet_normals())

    def interior_contains(self, x):
        """Membership in the relative interior."""
        if not self.in_span(x):
            return False
        p = self.span_coords(x)
        d = self.dim
        if d == 1:
            g = self.span_coords(self.generators[0])
            idx = next(i for i, v in enumerate(g) if v != 0)
            t = Fraction(p[idx]) / g[idx]
            return t > 0 and all(Fraction(a) == t * b for a, b in zip(p, g))
        return all(dot(n, p) > 0 for n in self.facet_normals())

    def __repr__(self):
        return "Cone(%s)" % (list(map(list, self.generators)),)


class SimplicialCone(Cone):
    """Cone on linearly independent ordered generators."""

    def __init__(self, generators, normalize=True):
        if normalize:
            gens = [primitive_ray(g) for g in generators]
        else:
            gens = [tuple(int(x) if Fraction(x).denominator == 1 else
                          Fraction(x) for x in g) for g in generators]
        if mat_rank(gens) != len(gens):
            raise ValueError("generators of a simplicial cone must be independent")
        self.ambient_dim = len(gens[0])
        self.generators = tuple(gens)
        self._span = None
        self._facets = None
        self._rays = None

    def facet(self, drop):
        """Facet obtained by dropping generator index `drop`."""
        return SimplicialCone([g for i, g in enumerate(self.generators)
                               if i != drop])

    def face(self, index_set):
        return SimplicialCone([self.generators[i] for i in sorted(index_set)])

    def contains(self, x):
        # barycentric test: coordinates in the generator basis must be >= 0
        try:
            c = solve_consistent(
                [[self.generators[j][i] for j in range(len(self.generators))]
                 for i in range(self.ambient_dim)], list(x))
        except ValueError:
            return False
        back = [sum(c[j] * self.generators[j][i] for j in range(len(self.generators)))
                for i in range(self.ambient_dim)]
        if any(Fraction(a) != Fraction(b) for a, b in zip(back, x)):
            return False
        return all(v >= 0 for v in c)

    def interior_contains(self, x):
        try:
            c = solve_consistent(
                [[self.generators[j][i] for j in range(len(self.generators))]
                 for i in range(self.ambient_dim)], list(x))
        except ValueError:
            return False
        back = [sum(c[j] * self.generators[j][i] for j in range(len(self.generators)))
                for i in range(self.ambient_dim)]
        if any(Fraction(a) != Fraction(b) for a, b in zip(back, x)):
            return False
        return all(v > 0 for v in c)

    def generator_coords(self, x):
        """Exact coordinates of x in the generator basis (raises off-span)."""
        c = solve_consistent(
            [[self.generators[j][i] for j in range(len(self.generators))]
             for i in range(self.ambient_dim)], list(x))
        back = [sum(c[j] * self.generators[j][i] for j in range(len(self.generators)))
                for i in range(self.ambient_dim)]
        if any(Fraction(a) != Fraction(b) for a, b in zip(back, x)):
            raise ValueError("point not in the span of the cone")
        return c


class Flag:
    """Complete flag of faces of a simplicial cone, encoded by generator order.

    Level i face is the cone on generators[i:]; level 0 is the full cone.
    """

    __slots__ = ("cone",)

    def __init__(self, cone):
        self.cone = cone

    @property
    def n(self):
        return len(self.cone.generators)

    def level(self, i):
        return SimplicialCone(self.cone.generators[i:]) if i < self.n else None

    def __repr__(self):
        return "Flag(%r)" % (self.cone,)


def standard_coordinates(flag):
    """Dual basis rows eta_1..eta_n (exact inverse of the generator matrix)."""
    cone = flag.cone if isinstance(flag, Flag) else flag
    G = [list(g) for g in cone.generators]
    if len(G) != len(G[0]):
        raise ValueError("standard coordinates need a full-dimensional cone")
    # eta_i(x) = row i of G^{-1} applied to x, where columns of G are generators
    cols = [[G[j][i] for j in range(len(G))] for i in range(len(G))]
    Hrows = mat_inverse(cols)
    return [LinearForm(row) for row in Hrows]


def dual_face(delta, sigma):
    """Face on the complementary generator set of sigma inside delta."""
    sig = set(sigma.generators)
    comp = [g for g in delta.generators if g not in sig]
    if len(comp) + len(sig) != len(delta.generators):
        raise ValueError("sigma is not a face of delta")
    if not comp:
        raise ValueError("dual face of the full cone is empty")
    return SimplicialCone(comp)


def linear_join(sigma1, sigma2):
    """Join of two cones with independent spans."""
    gens = list(sigma1.generators) + list(sigma2.generators)
    if mat_rank(gens) != len(gens):
        raise ValueError("joined generators are not independent")
    return SimplicialCone(gens)


def regular_faces(flag):
    """Faces whose generator index set contains the last index.

    Returns (index_set, face) pairs; index sets are 0-based and sorted.
    """
    n = flag.n
    out = []
    for r in range(1, n + 1):
        for sub in itertools.combinations(range(n - 1), r - 1):
            idx = tuple(sorted(sub + (n - 1,)))
            out.append((idx, flag.cone.face(idx)))
    return out


def irregular_face(flag):
    """Dual of the last flag level: the face on generators[:-1]."""
    return SimplicialCone(flag.cone.generators[:-1])


# ---------------------------------------------------------------------------
# triangulation and open decomposition

def _pulling(rays, facet_fn):
    """Pulling triangulation: join lex-first ray with facets avoiding it."""
    cone = Cone(rays)
    d = cone.dim
    rays = sorted(set(cone.extreme_rays()), key=_lex_key)
    if len(rays) == d:
        return [SimplicialCone(rays)]
    v0 = rays[0]
    pieces = []
    pts = {g: cone.span_coords(g) for g in rays}
    for n in cone.facet_normals():
        if dot(n, pts[v0]) == 0:
            continue
        frays = [g for g in rays if dot(n, pts[g]) == 0]
        for sub in _pulling(frays, facet_fn):
            pieces.append(SimplicialCone([v0] + list(sub.generators)))
    return pieces


def triangulate(C):
    """Deterministic pulling triangulation into simplicial cones."""
    if not C.is_pointed():
        raise ValueError("cone contains a line; only pointed cones are supported")
    return _pulling(list(C.generators), None)


def open_simplicial_decomposition(C):
    """Partition of the relative interior of C into open simplicial pieces.

    Returns a list of (SimplicialCone piece, Lattice of span(piece) ∩ Z^m);
    the relatively open pieces are pairwise disjoint and cover C's interior.
    """
    tri = triangulate(C)
    seen = {}
    for piece in tri:
        n = len(piece.generators)
        for r in range(1, n + 1):
            for sub in itertools.combinations(range(n), r):
                face = tuple(sorted(piece.generators[i] for i in sub))
                if face not in seen:
                    seen[face] = SimplicialCone(face)
    # keep faces whose relative interior lies in the interior of C
    normals = C.facet_normals()
    out = []
    for gens, face in sorted(seen.items()):
        centroid = [sum(col) for col in zip(*gens)]
        if normals:
            p = C.span_coords(centroid)
            if any(dot(n, p) == 0 for n in normals):
                continue
        out.append((face, span_integer_lattice(face.generators)))
    return out


def free_superlattice(delta, L):
    """Free super-lattice of L meeting closure(delta) in a free semigroup.

    Returns (Lattice, ordered generators of the free semigroup, index kappa
    = [L : ⊕ Z g_i] with g_i the primitive L-points on the rays of delta).
    """
    prims = []
    for g in delta.generators:
        c = L.coords_of(g)
        lcm = 1
        for v in c:
            lcm = lcm * Fraction(v).denominator // gcd(lcm, Fraction(v).denominator)
        nums = [int(Fraction(v) * lcm) for v in c]
        gg = 0
        for x in nums:
            gg = gcd(gg, abs(x))
        t = Fraction(lcm, gg)  # minimal t > 0 with t*g in L
        prims.append([t * Fraction(x) for x in g])
    M = [L.coords_of(p) for p in prims]
    kappa = abs(mat_det(M))
    if kappa == 0:
        raise ValueError("degenerate simplicial cone")
    gens = [[Fraction(x) / kappa for x in p] for p in prims]
    return Lattice(gens), gens, kappa


# ---------------------------------------------------------------------------
# chamber refinement w.r.t. a family of forms

def extreme_rays_from_inequalities(ineqs, d):
    """Extreme rays of {x : a.x >= 0 for a in ineqs} (assumed pointed)."""
    ineqs = [tuple(Fraction(x) for x in a) for a in ineqs]
    rays = []
    seen = set()
    for sub in itertools.combinations(range(len(ineqs)), d - 1):
        rows = [ineqs[i] for i in sub]
        if mat_rank(rows) != d - 1:
            continue
        ns = nullspace(rows, d)
        if len(ns) != 1:
            continue
        for sign in (1, -1):
            r = [sign * x for x in ns[0]]
            vals = [dot(a, r) for a in ineqs]
            if all(v >= 0 for v in vals):
                tight = [ineqs[i] for i, v in enumerate(vals) if v == 0]
                if mat_rank(tight) == d - 1:
                    key = primitive_ray(r)
                    if key not in seen:
                        seen.add(key)
                        rays.append(key)
                break
    return rays


def _chambers(C, forms):
    """Full-dimensional chambers of C cut by the hyperplanes {form = 0}."""
    d = C.dim
    if d != C.ambient_dim:
        raise ValueError("refine_definite expects a full-dimensional cone")
    base = list(C.facet_normals()) if d > 1 else []
    if d == 1:
        return [Cone(C.generators)]
    chambers = []
    seen = set()
    classes = sorted({f.class_key() for f in forms})
    for signs in itertools.product((1, -1), repeat=len(classes)):
        ineqs = base + [tuple(s * x for x in cls)
                        for s, cls in zip(signs, classes)]
        rays = extreme_rays_from_inequalities(ineqs, d)
        if len(rays) < d or mat_rank(rays) < d:
            continue
        key = tuple(sorted(rays))
        if key in seen:
            continue
        seen.add(key)
        chambers.append(Cone(rays))
    return chambers


def _admissible_interior_ray(delta, forms):
    """Deterministic interior ray where no form class vanishes."""
    gens = delta.generators
    base = [sum(col) for col in zip(*gens)]
    candidates = [tuple(base)]

    def ok(w):
        return all(f(w) != 0 for f in forms)

    if ok(base):
        return primitive_ray(base)
    k = 1
    while k < 10000:
        for j, g in enumerate(gens):
            w = [Fraction(b) + Fraction(1, k) * gj for b, gj in zip(base, g)]
            if ok(w) and delta.interior_contains(w):
                return primitive_ray(w)
        k += 1
    raise RuntimeError("no admissible interior ray found")


def refine_definite(C, S):
    """Decompose C into simplicial cones with a facet fit for derivation.

    S is an iterable of LinearForm (or classes); returns a list of pairs
    (SimplicialCone delta, facet index) such that every form of S is definite
    (single sign) on delta and no form vanishes identically on the facet
    obtained by dropping the generator at `facet index`.
    """
    forms = [LinearForm(f.class_key() if isinstance(f, LinearForm) else f)
             for f in S]
    for f in forms:
        if f.is_zero():
            raise ValueError("zero form cannot be made definite")
    out = []
    stack = []
    for ch in _chambers(C, forms):
        stack.extend(triangulate(ch))
    while stack:
        delta = stack.pop(0)
        # definiteness sanity (holds by construction on chambers)
        for f in forms:
            vals = [f(g) for g in delta.generators]
            if any(v > 0 for v in vals) and any(v < 0 for v in vals):
                raise AssertionError("form not definite on refined piece")
        drop = None
        for i in range(len(delta.generators)):
            rest = [g for j, g in enumerate(delta.generators) if j != i]
            if all(any(f(g) != 0 for g in rest) for f in forms):
                drop = i
                break
        if drop is None:
            w = _admissible_interior_ray(delta, forms)
            for i in range(len(delta.generators)):
                rest = [g for j, g in enumerate(delta.generators) if j != i]
                stack.append(SimplicialCone([w] + rest))
            continue
        out.append((delta, drop))
    return out
