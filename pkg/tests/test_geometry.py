import itertools
import random
from fractions import Fraction

import pytest

from conezeta.geometry import (Cone, SimplicialCone, Lattice, LinearForm,
                               triangulate, open_simplicial_decomposition,
                               free_superlattice, standard_lattice)


class TestCone:
    def test_membership(self):
        C = Cone([(1, 0), (1, 2)])
        assert C.contains((1, 1))
        assert C.interior_contains((1, 1))
        assert C.contains((1, 0)) and not C.interior_contains((1, 0))
        assert not C.contains((0, 1))

    def test_not_pointed_rejected(self):
        C = Cone([(1, 0), (-1, 0), (0, 1)])
        with pytest.raises(ValueError):
            triangulate(C)


class TestTriangulate:
    def test_square_cone_two_pieces(self):
        C = Cone([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)])
        tri = triangulate(C)
        assert len(tri) == 2
        # interiors disjoint, union covers: sample points
        rnd = random.Random(0)
        for _ in range(200):
            x = (rnd.randint(-4, 4), rnd.randint(-4, 4), rnd.randint(1, 6))
            inside = C.contains(x)
            hits = sum(1 for t in tri if t.contains(x))
            if inside:
                assert hits >= 1
            else:
                assert hits == 0
            int_hits = sum(1 for t in tri if t.interior_contains(x))
            assert int_hits <= 1


class TestOpenDecomposition:
    def test_quadrant(self):
        C = Cone([(1, 0), (0, 1)])
        pieces = open_simplicial_decomposition(C)
        # only the full open piece has its relative interior inside C's
        # interior
        assert len(pieces) == 1

    def test_union_and_disjointness(self):
        C = Cone([(1, 0), (1, 3)])
        pieces = open_simplicial_decomposition(C)
        rnd = random.Random(1)
        for _ in range(300):
            x = (rnd.randint(-5, 8), rnd.randint(-5, 8))
            hits = 0
            for face, L in pieces:
                gens = face.generators
                # open piece membership: positive combination of generators
                coords = face.generator_coords(x) if face.in_span(x) else None
                if coords is not None and all(c > 0 for c in coords):
                    hits += 1
            assert hits == (1 if C.interior_contains(x) else 0)


class TestFreeSuperlattice:
    def test_non_unimodular_example(self):
        C = SimplicialCone([(1, 0), (1, 2)])
        L = standard_lattice(2)
        lbar, gens, kappa = free_superlattice(C, L)
        assert kappa == 2
        assert sorted(tuple(map(Fraction, g)) for g in gens) == [
            (Fraction(1, 2), Fraction(0)), (Fraction(1, 2), Fraction(1))]
        # Z^2 is contained in the superlattice
        for x in itertools.product(range(-2, 3), repeat=2):
            assert lbar.contains(list(x))

    def test_unimodular_is_identity(self):
        C = SimplicialCone([(1, 0), (0, 1)])
        lbar, gens, kappa = free_superlattice(C, standard_lattice(2))
        assert kappa == 1
        assert sorted(tuple(map(int, g)) for g in gens) == [(0, 1), (1, 0)]

    def test_free_semigroup_covers_interior(self):
        # every interior lattice point is a positive integer combination of
        # the free generators
        C = SimplicialCone([(1, 0), (1, 2)])
        lbar, gens, kappa = free_superlattice(C, standard_lattice(2))
        cols = [[Fraction(g[i]) for g in gens] for i in range(2)]
        from conezeta.linalg import solve_consistent
        for x in itertools.product(range(0, 7), repeat=2):
            if not C.interior_contains(x):
                continue
            c = solve_consistent(cols, list(map(Fraction, x)))
            assert all(v.denominator == 1 and v >= 1 for v in c)
