import itertools
import math
import random

import pytest

from chromgh import (
    BudgetExceeded,
    ComplexSpec,
    ConstraintSet,
    EmptySimplex,
    MapSpec,
    SizeBudget,
    Tripod,
    cech_filtration,
    chromatic_filtration,
    chromatic_space,
    circumradius,
    distortion,
    filtered_space,
    filtration_distance,
    gh_exact,
    is_constrained_map,
    tripod_defect,
    validate_metric,
)
from chromgh.cech import ColorOutsidePatternWarning
from chromgh.examples import two_block_pair

from conftest import euclidean_space, line_space, random_pair

SQUARE = chromatic_space(
    euclidean_space([[0, 0], [1, 0], [0, 1], [1, 1]]), [0, 0, 0, 0]
)


def brute_circumradius(pair, verts):
    return min(max(pair.d[a, x] for x in verts) for a in range(pair.n))


class TestCircumradius:
    def test_vertex_in_ambient_is_zero(self):
        p = chromatic_space(line_space([0, 2]), [0, 0])
        assert circumradius(p, {0}) == 0.0

    def test_midpoint_witness(self):
        p = ChromaticPairWithMidpoint()
        assert circumradius(p, {0, 2}) == 1.0

    def test_without_midpoint(self):
        p = chromatic_space(line_space([0, 2]), [0, 0])
        assert circumradius(p, {0, 1}) == 2.0

    def test_empty_simplex(self):
        p = chromatic_space(line_space([0, 2]), [0, 0])
        with pytest.raises(EmptySimplex):
            circumradius(p, set())


def ChromaticPairWithMidpoint():
    # ambient {0, 1, 2} on the line, colored set {0, 2}
    space = line_space([0, 1, 2])
    return __import__("chromgh").ChromaticMetricPair(space, {0: 0, 2: 0})


class TestCechFiltration:
    def test_two_points_with_midpoint(self):
        p = ChromaticPairWithMidpoint()
        filt = cech_filtration(p, 1)
        vals = filt.values()
        assert vals[frozenset({0})] == 0.0 and vals[frozenset({2})] == 0.0
        assert vals[frozenset({0, 2})] == 1.0

    def test_two_points_without_midpoint(self):
        p = chromatic_space(line_space([0, 2]), [0, 0])
        assert cech_filtration(p, 1).values()[frozenset({0, 1})] == 2.0

    def test_square_values_match_direct_minimization(self):
        # the independent oracle: direct min-max over ambient witnesses.  With
        # all four corners as witnesses every pair and triple enters at 1 (the
        # adjacent corner covers even a diagonal at radius 1).
        filt = cech_filtration(SQUARE, 2)
        for verts, value in filt.simplices:
            assert value == brute_circumradius(SQUARE, verts)
            if len(verts) > 1:
                assert value == 1.0

    def test_size_budget(self):
        p = random_pair(random.Random(50), 12, colored_fraction=1.0)
        with pytest.raises(SizeBudget):
            cech_filtration(p, 3, simplex_budget=10)

    def test_monotone(self):
        rng = random.Random(51)
        for _ in range(5):
            p = random_pair(rng, 6)
            assert cech_filtration(p, 2).check_monotone()


class TestChromaticFiltration:
    def test_full_pattern_reduces_to_ambient(self):
        rng = random.Random(52)
        p = random_pair(rng, 6, n_colors=2)
        full = ComplexSpec.full({0, 1})
        assert chromatic_filtration(p, full, 2) == cech_filtration(p, 2)

    def test_monochromatic_pattern(self):
        p = two_block_pair(1)
        gam = ComplexSpec(({0}, {1}))
        filt = chromatic_filtration(p, gam, 1)
        for verts, _ in filt.simplices:
            assert len({p.coloring[v] for v in verts}) == 1

    def test_block_fixture_pattern_split(self):
        p = two_block_pair(1)
        lam = ComplexSpec(({0},))
        gam = ComplexSpec(({0, 1},))
        lam_filt = chromatic_filtration(p, lam, 1, warn=False)
        gam_filt = chromatic_filtration(p, gam, 1)
        assert all(p.coloring[v] == 0 for verts, _ in lam_filt.simplices for v in verts)
        assert len(gam_filt) == len(cech_filtration(p, 1))
        gam_vals = gam_filt.values()
        for verts, value in lam_filt.simplices:
            assert gam_vals[verts] == value  # subfiltration with equal values

    def test_colors_outside_universe_warn_and_drop(self):
        p = chromatic_space(line_space([0, 1, 2]), [0, 1, 7])
        with pytest.warns(ColorOutsidePatternWarning):
            filt = chromatic_filtration(p, ComplexSpec.full({0, 1}), 1)
        assert 2 not in filt.vertices()

    def test_induced_simplicial_map(self):
        # a pattern-constrained map with distortion delta pushes every simplex
        # of the source subfiltration into the target one at value + delta
        rng = random.Random(53)
        gam = ComplexSpec(({0, 1},))
        C = ConstraintSet.make([{0, 1}], universe={0, 1})
        for _ in range(10):
            p1 = random_pair(rng, 4, n_colors=2)
            p2 = random_pair(rng, 4, n_colors=2)
            assignment = tuple(rng.randrange(4) for _ in range(4))
            f = MapSpec(p1, p2, assignment)
            if not is_constrained_map(f, C):
                continue
            delta = distortion(f)
            filt1 = chromatic_filtration(p1, gam, 2)
            vals2 = chromatic_filtration(p2, gam, 2).values()
            for verts, value in filt1.simplices:
                image = frozenset(assignment[v] for v in verts)
                assert vals2[image] <= value + delta + 1e-9


class TestFilteredSpace:
    def test_vertex_value_zero(self):
        p = ChromaticPairWithMidpoint()
        F = filtered_space(p, 1)
        assert F.value({0}) == 0.0

    def test_monotone_on_nested_subsets(self):
        rng = random.Random(54)
        p = random_pair(rng, 6)
        F = filtered_space(p, 5)
        for _ in range(20):
            sub = rng.sample(range(6), rng.randint(2, 6))
            smaller = sub[: rng.randint(1, len(sub) - 1)]
            assert F.value(smaller) <= F.value(sub) + 1e-12

    def test_equals_cech_values(self):
        p = random_pair(random.Random(55), 5)
        F = filtered_space(p, 2)
        for verts, value in cech_filtration(p, 2).simplices:
            assert F.value(verts) == value

    def test_size_cap(self):
        p = random_pair(random.Random(56), 5)
        F = filtered_space(p, 1)
        with pytest.raises(SizeBudget):
            F.value({0, 1, 2})


class TestTripods:
    def test_identity_tripod_zero_defect(self):
        p = random_pair(random.Random(57), 3)
        F = filtered_space(p, 2)
        t = Tripod(F.points, F.points, frozenset((i, i) for i in range(3)))
        assert tripod_defect(F, F, t) == 0.0

    def test_singleton_subsets_lower_bound(self):
        rng = random.Random(58)
        p1 = random_pair(rng, 3)
        p2 = random_pair(rng, 3)
        F1, F2 = filtered_space(p1, 2), filtered_space(p2, 2)
        t = Tripod(F1.points, F2.points, frozenset((i, j) for i in range(3) for j in range(3)))
        defect = tripod_defect(F1, F2, t)
        worst_vertex = max(
            abs(F1.value({i}) - F2.value({j})) for i in range(3) for j in range(3)
        )
        assert defect >= worst_vertex

    def test_full_product_matches_subset_enumeration(self):
        rng = random.Random(59)
        p1 = random_pair(rng, 3)
        p2 = random_pair(rng, 3)
        F1, F2 = filtered_space(p1, 2), filtered_space(p2, 2)
        cells = [(i, j) for i in range(3) for j in range(3)]
        t = Tripod(F1.points, F2.points, frozenset(cells))
        # direct enumeration of all 2^9 - 1 subsets of the relation
        expected = 0.0
        for k in range(1, 1 << 9):
            chosen = [cells[b] for b in range(9) if k >> b & 1]
            s1 = {a for a, _ in chosen}
            s2 = {b for _, b in chosen}
            if len(s1) > 3 or len(s2) > 3:
                continue
            expected = max(expected, abs(F1.value(s1) - F2.value(s2)))
        assert tripod_defect(F1, F2, t) == expected

    def test_relation_budget(self):
        p = random_pair(random.Random(60), 5)
        F = filtered_space(p, 2)
        t = Tripod(F.points, F.points, frozenset((i, j) for i in range(5) for j in range(5)))
        with pytest.raises(BudgetExceeded):
            tripod_defect(F, F, t)


class TestFiltrationDistance:
    def test_identical_spaces(self):
        p = random_pair(random.Random(61), 3)
        F = filtered_space(p, 2)
        assert filtration_distance(F, F) == 0.0

    def test_chain_against_gh_and_bottleneck(self):
        from chromgh import bottleneck, dgm

        rng = random.Random(62)
        for _ in range(5):
            p1 = random_pair(rng, 3)
            p2 = random_pair(rng, 3)
            F1, F2 = filtered_space(p1, 2), filtered_space(p2, 2)
            dF = filtration_distance(F1, F2)
            two_gh = 2 * gh_exact(p1, p2, ConstraintSet.trivial({0, 1}))
            assert dF <= two_gh + 1e-12
            for p in (0, 1):
                db = bottleneck(dgm(cech_filtration(p1, 2), p), dgm(cech_filtration(p2, 2), p))
                assert db <= dF + 1e-12

    def test_size_cap(self):
        p = random_pair(random.Random(63), 4)
        F = filtered_space(p, 2)
        with pytest.raises(BudgetExceeded):
            filtration_distance(F, F)


class TestComplexSpec:
    def test_subcomplex_by_maximal_face_containment(self):
        lam = ComplexSpec(({0}, {1}))
        gam = ComplexSpec(({0, 1},))
        assert lam.is_subcomplex_of(gam)
        assert not gam.is_subcomplex_of(lam)

    def test_contains_via_maximal_faces(self):
        gam = ComplexSpec(({0, 1}, {2}))
        assert gam.contains({0}) and gam.contains({0, 1}) and gam.contains({2})
        assert not gam.contains({1, 2})
