"""End-to-end reduction of cone zeta values to cyclotomic zeta symbols.

The value reduced is

    Z(C, S; chi) = sum over x in interior(C) cap Z^m of chi(x) / prod l(x)

for a pointed rational cone C, linear forms S positive on the interior, and
a finite-order character chi.  The stages are: open simplicial decomposition,
free super-lattice and induced characters per piece, a multiple-integral
expression, a monotone change of coordinates adapted to derived sequences,
uni-factorization, weight descent to one variable, and symbolic polylogarithm
integration with regularization at 1.
"""

from fractions import Fraction

from .exact import (CycloNumber, LatticeCharacter, restrict_character,
                    induced_character_decompose)
from .geometry import (Cone, SimplicialCone, LinearForm,
                       open_simplicial_decomposition, free_superlattice)
from .derivation import build_derived_sequences, primitive_rescale
from .rewrite import (integral_expression, convergence_check,
                      change_coordinates, uni_factorize,
                      reduce_to_univariate, ReductionTrace)
from .polylog import (PNormalForm, ZExpression, multiply_factor, integrate_P,
                      regularize_limit, mzv_symbol_from_word, DivergentResult)

ONE = CycloNumber.from_rational(1, 1)


class PieceLimitExceeded(Exception):
    """The decomposition produced more pieces than allowed."""


def execute_recipe(node, check_zero=None):
    """Evaluate a univariate reduction recipe to a polylog normal form."""
    op = node[0]
    if op == "one":
        return PNormalForm.one()
    if op == "sum":
        out = PNormalForm.zero()
        for coeff, child in node[1]:
            out = out + execute_recipe(child, check_zero).scale(coeff)
        return out
    if op == "mul":
        pnf = execute_recipe(node[2], check_zero)
        for root, c, mu, s in node[1]:
            pnf = multiply_factor(pnf, root, c, mu, s)
        return pnf
    if op == "int":
        return integrate_P(execute_recipe(node[1], check_zero), ("t",),
                           check_zero)
    if op == "const":
        val, _ = regularize_limit(execute_recipe(node[1], check_zero),
                                  check_zero)
        return PNormalForm.constant(val)
    raise ValueError("unknown recipe node %r" % (op,))


def integrand_function(I, check_zero=None, trace=None):
    """Partial box integral of a uni-factor integrand against prod dy_i/y_i,
    as a normal form in the last variable (the final limit at 1 pending)."""
    recipe = reduce_to_univariate(I, trace)
    pnf = execute_recipe(recipe, check_zero)
    return integrate_P(pnf, ("t",), check_zero)


def integrand_value(I, check_zero=None, trace=None):
    """Box integral of a uni-factor integrand against prod dy_i/y_i."""
    val, _ = regularize_limit(integrand_function(I, check_zero, trace),
                              check_zero)
    return val


class ReductionResult:
    """Outcome of a cone zeta reduction."""

    __slots__ = ("value", "stats", "trace")

    def __init__(self, value, stats, trace=None):
        self.value = value
        self.stats = stats
        self.trace = trace

    def symbols(self):
        """List of (CycloNumber coefficient, MZVSymbol-or-None) terms;
        None stands for the rational/cyclotomic constant 1."""
        out = []
        for word, c in sorted(self.value.terms.items(),
                              key=lambda t: (len(t[0]), repr(t[0]))):
            if not word:
                out.append((c, None))
            else:
                root, sym = mzv_symbol_from_word(word)
                out.append((c * root.to_cyclo(), sym))
        return out

    def __repr__(self):
        return "ReductionResult(%r)" % (self.value,)


def reduce_cone_zeta(generators, forms, character=None, trace=None,
                     check_zero=None, max_pieces=None, collect_trace=False):
    """Reduce a cone zeta value to a ZExpression of cyclotomic zeta symbols.

    generators: rays of a pointed cone in Z^m; forms: linear forms (coefficient
    sequences or LinearForm) positive on the interior; character: an optional
    LatticeCharacter on a finite-index sublattice of Z^m (trivial if omitted).
    Raises DivergentResult when the defining sum fails the convergence
    criterion and PieceLimitExceeded past `max_pieces` pieces.
    """
    generators = [tuple(Fraction(x) for x in g) for g in generators]
    m = len(generators[0])
    forms = [f if isinstance(f, LinearForm) else LinearForm(f) for f in forms]
    for f in forms:
        if f.is_zero():
            raise ValueError("zero linear form")
    if character is None:
        ident = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        character = LatticeCharacter.trivial(ident)
    if trace is None and collect_trace:
        trace = ReductionTrace()
    if check_zero is None:
        from .numeric import zexpr_zero_check
        check_zero = zexpr_zero_check()

    C = Cone(generators)
    pieces = open_simplicial_decomposition(C)
    if max_pieces is not None and len(pieces) > max_pieces:
        raise PieceLimitExceeded("%d pieces > limit %d"
                                 % (len(pieces), max_pieces))
    # reject divergent jobs before reducing anything
    prepared = []
    for face, L in pieces:
        lbar, free_gens, kappa = free_superlattice(face, L)
        if not convergence_check(free_gens, forms):
            raise DivergentResult("defining sum diverges on a piece")
        prepared.append((face, L, lbar, free_gens, kappa))
    total = ZExpression.zero()
    stats = {"pieces": len(pieces), "characters": 0, "branches": 0,
             "uni_terms": 0}
    for face, L, lbar, free_gens, kappa in prepared:
        chi_l = restrict_character(character, L.basis)
        for chi in induced_character_decompose(lbar, chi_l):
            stats["characters"] += 1
            I = integral_expression(free_gens, forms, chi)
            I = I.scaled(CycloNumber.from_rational(Fraction(1, kappa), 1))
            total = total + _reduce_integrand(I, trace, check_zero, stats)
    return ReductionResult(total, stats, trace)


def _reduce_integrand(I, trace, check_zero, stats):
    """Reduce a type-S integrand on the open unit box to a ZExpression."""
    n = I.nvars
    # decompose the coordinate orthant by the factor exponent classes
    seen = set()
    sforms = []
    for f in I.factors:
        lf = LinearForm([Fraction(x) for x in f.exps])
        if lf.class_key() not in seen:
            seen.add(lf.class_key())
            sforms.append(lf)
    ident = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    orthant = SimplicialCone(ident)
    branches = build_derived_sequences(orthant, sforms)
    stats["branches"] += len(branches)
    rescaled = [primitive_rescale(ds)[1] for ds in branches]
    # per-term limits at 1 may diverge with cancellation across terms, so
    # sum the partial integrals as functions of the shared last variable
    # and regularize once
    fn = PNormalForm.zero()
    for ds, ID in change_coordinates(I, rescaled, trace):
        for IU in uni_factorize(ID, ds, trace):
            stats["uni_terms"] += 1
            fn = fn + integrand_function(IU, check_zero, trace)
    value, _ = regularize_limit(fn, check_zero)
    return value
