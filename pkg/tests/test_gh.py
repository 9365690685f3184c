import itertools
import math
import random

import numpy as np
import pytest

from chromgh import (
    ChromaticMetricPair,
    ConstraintSet,
    EmptyColorClass,
    MapSpec,
    NotConstrained,
    chromatic_invariants,
    chromatic_space,
    codistortion,
    constrained_isomorphic,
    distortion,
    gh_corr_oracle,
    gh_exact,
    gh_lower,
    gh_upper,
    identity_map,
    local_set_distance,
    pair_objective,
    subspace,
    validate_metric,
)
from chromgh.examples import (
    ellipse_pair,
    interval_map_pair,
    interval_pair,
    offset_bijection_maps,
    plane_pair,
    plane_swap_maps,
)

from conftest import (
    iter_correspondences,
    line_space,
    random_constraints,
    random_pair,
)

F1_SOURCE = chromatic_space(validate_metric([[0, 1, 1], [1, 0, 1], [1, 1, 0]]), [0, 1, 2])
F1_TARGET = chromatic_space(validate_metric([[0, 1], [1, 0]]), [0, 2])
F1_C = ConstraintSet.make([{0, 1}, {1, 2}], universe={0, 1, 2})

TRIVIAL2 = ConstraintSet.trivial({0, 1})
DISCRETE2 = ConstraintSet.discrete({0, 1})


def two_point_pairs():
    p1 = ChromaticMetricPair(line_space([0, 2]))
    p2 = ChromaticMetricPair(line_space([0, 4]))
    return p1, p2


class TestGhExact:
    def test_identical_pairs(self):
        p = random_pair(random.Random(30), 4)
        assert gh_exact(p, p, DISCRETE2) == 0.0

    def test_two_point_spaces_frozen_value(self):
        # exhaustively: 2^2 * 2^2 map pairs, best max is 2, so the distance is
        # 1; the diameter bounds bracket it between |2-4|/2 and max(2,4)/2
        p1, p2 = two_point_pairs()
        value = gh_exact(p1, p2, ConstraintSet.trivial(()))
        assert value == 1.0
        assert value == _exhaustive_map_pair_value(p1, p2) / 2.0
        assert abs(2 - 4) / 2 <= value <= max(2, 4) / 2

    def test_no_constrained_map_means_infinite(self):
        assert gh_exact(F1_SOURCE, F1_TARGET, F1_C) == math.inf
        assert gh_corr_oracle(F1_SOURCE, F1_TARGET, F1_C) == math.inf

    def test_budget_zero_rejected(self):
        from chromgh import BudgetExceeded

        p1, p2 = two_point_pairs()
        with pytest.raises(BudgetExceeded):
            gh_exact(p1, p2, TRIVIAL2, budget=0)

    def test_witness_achieves_value(self):
        rng = random.Random(31)
        for _ in range(10):
            p1 = random_pair(rng, 3)
            p2 = random_pair(rng, 3)
            value, (f, g) = gh_exact(p1, p2, TRIVIAL2, return_witness=True)
            assert pair_objective(f, g) / 2.0 == value

    def test_ambient_only_ignores_colors(self):
        # empty constraint set with the flag recovers the plain distance of
        # the ambient spaces, colors notwithstanding
        rng = random.Random(46)
        plain = ConstraintSet.make((), ambient_only=True)
        for _ in range(8):
            p1 = random_pair(rng, 3, n_colors=2)
            p2 = random_pair(rng, 3, n_colors=2)
            bare1 = ChromaticMetricPair(p1.ambient)
            bare2 = ChromaticMetricPair(p2.ambient)
            assert gh_exact(p1, p2, plain) == gh_exact(bare1, bare2, ConstraintSet.trivial(()))

    def test_budget_exhaustion_degrades_to_bounds(self):
        from chromgh import BudgetExceeded

        # equal diameters but different distance multisets: the lower bound
        # stays 0 while the distance is positive, so the search must explore
        p1 = ChromaticMetricPair(line_space([0, 1, 2, 4]))
        p2 = ChromaticMetricPair(line_space([0, 1, 3, 4]))
        C = ConstraintSet.trivial(())
        exact = gh_exact(p1, p2, C)
        assert exact > 0.0
        with pytest.raises(BudgetExceeded) as err:
            gh_exact(p1, p2, C, budget=3)
        assert err.value.lower <= exact <= err.value.upper


def _exhaustive_map_pair_value(p1, p2):
    best = math.inf
    for fa in itertools.product(range(p2.n), repeat=p1.n):
        for ga in itertools.product(range(p1.n), repeat=p2.n):
            f = MapSpec(p1, p2, fa)
            g = MapSpec(p2, p1, ga)
            best = min(best, pair_objective(f, g))
    return best


class TestOracleAgreement:
    def test_exact_equals_oracle_on_random_instances(self):
        rng = random.Random(32)
        for _ in range(15):
            p1 = random_pair(rng, rng.randint(1, 3), n_colors=3, colored_fraction=0.8)
            p2 = random_pair(rng, rng.randint(1, 3), n_colors=3, colored_fraction=0.8)
            C = random_constraints(rng, n_colors=3)
            assert gh_exact(p1, p2, C) == gh_corr_oracle(p1, p2, C)

    def test_exact_equals_plain_map_pair_enumeration(self):
        # third route: filter the full assignment product by the constraint
        # predicate and take the minimum objective directly
        from chromgh import is_constrained_map

        rng = random.Random(48)
        for _ in range(15):
            p1 = random_pair(rng, rng.randint(1, 3), n_colors=2, colored_fraction=0.8)
            p2 = random_pair(rng, rng.randint(1, 3), n_colors=2, colored_fraction=0.8)
            C = random_constraints(rng, n_colors=2).expand_universe(
                p1.colors_used | p2.colors_used
            )
            best = math.inf
            for fa in itertools.product(range(p2.n), repeat=p1.n):
                f = MapSpec(p1, p2, fa)
                if not is_constrained_map(f, C):
                    continue
                for ga in itertools.product(range(p1.n), repeat=p2.n):
                    g = MapSpec(p2, p1, ga)
                    if is_constrained_map(g, C):
                        best = min(best, pair_objective(f, g))
            value = gh_exact(p1, p2, C)
            if best < math.inf:
                assert value == best / 2.0
            else:
                assert math.isinf(value)

    def test_witness_graph_is_an_optimal_correspondence(self):
        # the union of the forward graph and the inverted backward graph is a
        # constrained correspondence whose distortion is exactly twice the
        # distance (the two characterizations meet on the witness)
        from chromgh import Relation, is_constrained_correspondence

        rng = random.Random(49)
        for _ in range(10):
            p1 = random_pair(rng, 3, n_colors=2)
            p2 = random_pair(rng, 3, n_colors=2)
            value, witness = gh_exact(p1, p2, DISCRETE2, return_witness=True)
            if witness is None:
                assert math.isinf(value)
                continue
            f, g = witness
            pairs = set(enumerate(f.assignment)) | {
                (x, y) for y, x in enumerate(g.assignment)
            }
            rel = Relation(p1, p2, frozenset(pairs))
            assert is_constrained_correspondence(rel, DISCRETE2)
            assert distortion(rel) == 2.0 * value


class TestGhUpper:
    def test_identity_pair_on_equal_spaces(self):
        p = random_pair(random.Random(33), 4)
        assert gh_upper(identity_map(p), identity_map(p), DISCRETE2) == 0.0

    def test_offset_bijection_value(self):
        f, g = offset_bijection_maps(eps=0.5, n=10)
        assert gh_upper(f, g, DISCRETE2) == 0.25  # (1 - eps) / 2

    def test_block_shift_value_within_step(self):
        from chromgh.examples import block_shift_maps

        f, g = block_shift_maps(r=1.0, step=0.25)
        C = ConstraintSet.make([{0}, {0, 1}], universe={0, 1})
        up = gh_upper(f, g, C)
        assert abs(up - 0.5) <= 0.25

    def test_rejects_unconstrained_maps(self):
        p1 = chromatic_space(line_space([0, 1]), [0, 1])
        p2 = chromatic_space(line_space([0, 1]), [1, 0])
        with pytest.raises(NotConstrained) as err:
            gh_upper(identity_map_between(p1, p2), identity_map_between(p2, p1), DISCRETE2)
        assert err.value.direction == "forward"


def identity_map_between(a, b):
    return MapSpec(a, b, tuple(range(a.n)))


class TestInvariants:
    def test_singleton_space(self):
        p = chromatic_space(validate_metric([[0.0]]), [0])
        rec = chromatic_invariants(p, {0}, {0})
        assert rec.local == {0: (0.0,)}
        assert rec.radius == 0.0 and rec.dist == 0.0

    def test_diamond_plane_radius_gap(self):
        p1 = plane_pair(1)
        p2 = plane_pair(2)
        rec1 = chromatic_invariants(p1, {0}, {1})
        rec2 = chromatic_invariants(p2, {0}, {1})
        assert rec1.radius == 1.0
        assert rec2.radius == 3.0

    def test_empty_class(self):
        p = chromatic_space(validate_metric([[0.0]]), [0])
        with pytest.raises(EmptyColorClass):
            chromatic_invariants(p, {1}, {0})

    @pytest.mark.parametrize("a,b,step", [(2.0, 1.0, 0.25), (3.0, 0.6, 0.2)])
    def test_ellipse_invariants_within_step(self, a, b, step):
        p = ellipse_pair(a, b, step)
        rec = chromatic_invariants(p, {0}, {1})
        center = rec.local[0]
        assert center[0] >= b - 1e-9 and max(center) == a
        gaps = np.diff(np.array(center))
        assert gaps.max() <= step  # the center's local set is step-dense in [b, a]
        assert rec.ecc[0] == a
        assert rec.radius == a
        assert rec.dist <= step

    def test_record_internal_consistency(self):
        rng = random.Random(34)
        for _ in range(10):
            p = random_pair(rng, 6, n_colors=2)
            if not p.color_class({0}) or not p.color_class({1}):
                continue
            rec = chromatic_invariants(p, {0}, {1})
            assert rec.radius == min(rec.ecc_set)
            assert rec.dist == min(rec.sep_set)
            assert set(rec.distance_set) == {v for vals in rec.local.values() for v in vals}
            for x, vals in rec.local.items():
                assert rec.ecc[x] == max(vals) and rec.sep[x] == min(vals)


class TestLocalSetDistance:
    def test_identical_pairs(self):
        p = plane_pair(1, step=0.5)
        assert local_set_distance(p, p, {0}, {1}) == 0.0

    def test_singleton_classes(self):
        p1 = chromatic_space(line_space([0.0, 1.0]), [0, 1])
        p2 = chromatic_space(line_space([0.0, 3.0]), [0, 1])
        got = local_set_distance(p1, p2, {0}, {1})
        assert got == 2.0  # single correspondence: d_H({1}, {3})

    def test_matches_bruteforce_correspondences(self):
        rng = random.Random(35)
        for _ in range(10):
            p1 = random_pair(rng, 6, n_colors=2)
            p2 = random_pair(rng, 6, n_colors=2)
            if not all(p.color_class({c}) for p in (p1, p2) for c in (0, 1)):
                continue
            got = local_set_distance(p1, p2, {0}, {1})
            assert got == pytest.approx(_local_distance_bruteforce(p1, p2, {0}, {1}))


def _local_distance_bruteforce(p1, p2, sigma, tau):
    rec1 = chromatic_invariants(p1, sigma, tau)
    rec2 = chromatic_invariants(p2, sigma, tau)
    xs1 = sorted(rec1.local)
    xs2 = sorted(rec2.local)

    def h1d(a, b):
        return max(
            max(min(abs(x - y) for y in b) for x in a),
            max(min(abs(x - y) for x in a) for y in b),
        )

    best = math.inf
    for rel in iter_correspondences(len(xs1), len(xs2)):
        worst = max(h1d(rec1.local[xs1[i]], rec2.local[xs2[j]]) for i, j in rel)
        best = min(best, worst)
    return best


class TestGhLower:
    def test_identical_pairs(self):
        p = random_pair(random.Random(36), 5)
        assert gh_lower(p, p, DISCRETE2) == 0.0

    def test_diamond_plane_value(self):
        assert gh_lower(plane_pair(1), plane_pair(2), DISCRETE2) == 1.0

    def test_offset_line_value(self):
        f, _ = offset_bijection_maps(eps=0.5, n=10)
        assert gh_lower(f.source, f.target, DISCRETE2) == 0.25


class TestConstrainedIsomorphic:
    def test_self_identity_witness(self):
        p = random_pair(random.Random(37), 4)
        ok, witness = constrained_isomorphic(p, p, DISCRETE2)
        assert ok and witness.assignment == (0, 1, 2, 3)

    def test_diamond_pair_not_isomorphic(self):
        assert not constrained_isomorphic(plane_pair(1, 0.5), plane_pair(2, 0.5), DISCRETE2)[0]

    def test_permuted_copy(self):
        rng = random.Random(38)
        for _ in range(10):
            p = random_pair(rng, 5, n_colors=2)
            perm = list(range(5))
            rng.shuffle(perm)
            d = p.d[np.ix_(perm, perm)]
            colors = {new: p.coloring[old] for new, old in enumerate(perm)}
            q = ChromaticMetricPair(validate_metric(d), colors)
            ok, witness = constrained_isomorphic(p, q, DISCRETE2)
            assert ok
            assert distortion(witness) == 0.0


class TestStructuralProperties:
    def test_sandwich(self):
        rng = random.Random(39)
        for _ in range(10):
            p1 = random_pair(rng, 3, n_colors=2)
            p2 = random_pair(rng, 3, n_colors=2)
            C = random_constraints(rng, n_colors=2)
            lo = gh_lower(p1, p2, C)
            value = gh_exact(p1, p2, C)
            assert lo <= value + 1e-12
            if not math.isinf(value):
                _, (f, g) = gh_exact(p1, p2, C, return_witness=True)
                assert value <= gh_upper(f, g, C) + 1e-12

    def test_monotone_in_strength(self):
        rng = random.Random(40)
        weak = TRIVIAL2
        strong = DISCRETE2
        for _ in range(10):
            p1 = random_pair(rng, 3, n_colors=2)
            p2 = random_pair(rng, 3, n_colors=2)
            assert gh_exact(p1, p2, weak) <= gh_exact(p1, p2, strong)

    def test_strength_invariance_exact(self):
        from chromgh.constraints import sigma_family, topology

        rng = random.Random(41)
        for _ in range(8):
            p1 = random_pair(rng, 3, n_colors=3)
            p2 = random_pair(rng, 3, n_colors=3)
            C = random_constraints(rng, n_colors=3)
            fam = sigma_family(C)
            C_sigma = ConstraintSet.make([set(s) for s in fam.values()], universe=C.universe)
            C_top = ConstraintSet.make(
                [set(s) for s in topology(C).opens if s], universe=C.universe
            )
            base = gh_exact(p1, p2, C)
            assert base == gh_exact(p1, p2, C_sigma)
            assert base == gh_exact(p1, p2, C_top)

    def test_symmetry(self):
        rng = random.Random(42)
        for _ in range(10):
            p1 = random_pair(rng, 3, n_colors=2)
            p2 = random_pair(rng, 3, n_colors=2)
            C = random_constraints(rng, n_colors=2)
            assert gh_exact(p1, p2, C) == gh_exact(p2, p1, C)

    def test_triangle_inequality_with_infinities(self):
        rng = random.Random(43)
        C = DISCRETE2
        for _ in range(10):
            ps = [random_pair(rng, rng.randint(1, 3), n_colors=2) for _ in range(3)]
            d01 = gh_exact(ps[0], ps[1], C)
            d12 = gh_exact(ps[1], ps[2], C)
            d02 = gh_exact(ps[0], ps[2], C)
            assert d02 <= d01 + d12 + 1e-12

    def test_early_stop_at_the_lower_bound_is_sound(self):
        # re-run the search with the certified lower bound disabled (lb = 0):
        # the early-stop optimization must never change the minimum
        from chromgh import _kernels
        from chromgh.constraints import candidate_targets
        from chromgh.gh import _greedy_pair

        rng = random.Random(51)
        for _ in range(10):
            p1 = random_pair(rng, rng.randint(2, 4), n_colors=2)
            p2 = random_pair(rng, rng.randint(2, 4), n_colors=2)
            C = DISCRETE2
            value = gh_exact(p1, p2, C)
            if math.isinf(value):
                continue
            Cx = C.expand_universe(p1.colors_used | p2.colors_used)
            c1 = candidate_targets(p1, p2, Cx)
            c2 = candidate_targets(p2, p1, Cx)
            fs, gs = _greedy_pair(p1, p2, c1, c2)
            ub = pair_objective(fs, gs)
            best, _, _, _, done = _kernels.pair_search(
                p1.d.tolist(), p2.d.tolist(), c1, c2, 0.0, ub, 10**8
            )
            assert done and best / 2.0 == value

    def test_zero_distance_iff_isomorphic(self):
        rng = random.Random(44)
        for _ in range(10):
            p1 = random_pair(rng, 3, n_colors=2)
            if rng.random() < 0.5:
                perm = list(range(3))
                rng.shuffle(perm)
                d = p1.d[np.ix_(perm, perm)]
                colors = {new: p1.coloring[old] for new, old in enumerate(perm)}
                p2 = ChromaticMetricPair(validate_metric(d), colors)
            else:
                p2 = random_pair(rng, 3, n_colors=2)
            value = gh_exact(p1, p2, DISCRETE2)
            iso, _ = constrained_isomorphic(p1, p2, DISCRETE2)
            assert (value == 0.0) == iso

    def test_invariant_inequality_chains(self):
        # |rad gap| <= d_H(ecc sets) <= dL, |dist gap| <= d_H(sep sets) <= dL,
        # d_H(distance sets) <= dL <= 2 gh of the colored subspaces <= 2 gh
        from chromgh.gh import _hausdorff_1d

        rng = random.Random(45)
        checked = 0
        while checked < 8:
            p1 = random_pair(rng, 4, n_colors=2, colored_fraction=0.9)
            p2 = random_pair(rng, 4, n_colors=2, colored_fraction=0.9)
            if not all(p.color_class({c}) for p in (p1, p2) for c in (0, 1)):
                continue
            checked += 1
            r1 = chromatic_invariants(p1, {0}, {1})
            r2 = chromatic_invariants(p2, {0}, {1})
            dl = local_set_distance(p1, p2, {0}, {1})
            assert abs(r1.radius - r2.radius) <= _hausdorff_1d(r1.ecc_set, r2.ecc_set) + 1e-12
            assert _hausdorff_1d(r1.ecc_set, r2.ecc_set) <= dl + 1e-12
            assert abs(r1.dist - r2.dist) <= _hausdorff_1d(r1.sep_set, r2.sep_set) + 1e-12
            assert _hausdorff_1d(r1.sep_set, r2.sep_set) <= dl + 1e-12
            assert _hausdorff_1d(r1.distance_set, r2.distance_set) <= dl + 1e-12
            sub1 = subspace(p1, p1.colored_indices)
            sub2 = subspace(p2, p2.colored_indices)
            gh_sub = gh_exact(sub1, sub2, DISCRETE2)
            assert dl <= 2 * gh_sub + 1e-12
            assert gh_sub <= gh_exact(p1, p2, DISCRETE2) + 1e-12
