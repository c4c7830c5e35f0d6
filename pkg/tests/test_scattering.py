"""Scattering diagrams: initial walls, construction, paths, mutation, chambers."""

import random

import pytest

from clusterscat.battery import NAMES, fixed_data
from clusterscat.cone_geom import Cone
from clusterscat.lattice_seed import FixedData, Seed, mutate_seed
from clusterscat.poly_ring import Laurent, WallFunction
from clusterscat.scattering import (ScatteringDiagram, check_consistency, cluster_chambers,
                                    equivalent, initial_diagram, make_wall, merge_convex,
                                    mutate_diagram, mutual_validity, path_ordered_product, scatter)


def one_plus(m):
    return Laurent({tuple(0 for _ in m): 1, tuple(m): 1})


def functions(d):
    return sorted((w.fn.to_laurent(d.grading, d.order) for w in d.walls), key=repr)


def expected(ms):
    return sorted((one_plus(m) for m in ms), key=repr)


@pytest.fixture(scope="module")
def a2():
    return scatter(fixed_data("A2"), order=6)


# -- initial diagrams ------------------------------------------------------------------

def test_initial_walls_of_a2():
    d = initial_diagram(fixed_data("A2"))
    assert functions(d) == expected([(0, 1), (-1, 0)])
    assert all(w.incoming and w.support.dim() == 1 for w in d.walls)


def test_initial_walls_of_g2_carry_the_multiplier():
    d = initial_diagram(fixed_data("G2"), order=3)
    assert functions(d) == expected([(0, 3), (-1, 0)])


def test_initial_walls_of_principal_a3():
    d = initial_diagram(fixed_data("A3"))
    assert functions(d) == expected([(0, 1, 0, 1, 0, 0), (-1, 0, 1, 0, 1, 0), (0, -1, 0, 0, 0, 1)])


def test_non_injective_data_is_refused():
    markov = FixedData(3, [[0, 2, -2], [-2, 0, 2], [2, -2, 0]], (1, 1, 1))
    with pytest.raises(ValueError, match="principal"):
        initial_diagram(markov)


# -- construction and consistency -------------------------------------------------------

def test_initial_a2_diagram_is_inconsistent_at_the_origin():
    report = check_consistency(initial_diagram(fixed_data("A2"), order=2), 2)
    assert not report["ok"] and report["kind"] == "joint"
    assert report["witness"] == ["0", "0"]


def test_scattered_a2_is_consistent_with_one_outgoing_ray(a2):
    assert check_consistency(a2, trials=50, loops=20)["ok"]
    assert len(a2.walls) == 3
    (ray,) = a2.outgoing()
    assert ray.support == Cone([(1, 1)], [(1, 0)], 2).canonical()


def test_principal_markov_is_consistent_at_order_four():
    d = scatter(fixed_data("Markov"), order=4)
    assert check_consistency(d, trials=50, loops=10, rng=random.Random(3))["ok"]


@pytest.mark.parametrize("name", NAMES)
def test_every_added_wall_is_outgoing(name):
    gamma = fixed_data(name)
    d = scatter(gamma, order=4)
    initial = {(w.n0, w.support.key()) for w in initial_diagram(gamma).walls}
    for w in d.walls:
        if (w.n0, w.support.key()) not in initial:
            assert not w.incoming
        assert all(x == 0 for x in _support_defect(d, w))


def _support_defect(d, w):
    """Values of n0's covector on the support generators: all must vanish."""
    rays, lin = w.support.generators()
    return [sum(a * b for a, b in zip(w.cov, r)) for r in rays + lin]


def test_construction_is_deterministic():
    gamma = fixed_data("B2")
    a, b = scatter(gamma, order=6), scatter(gamma, order=6)
    assert [(w.id, w.n0, w.support, w.fn) for w in a.walls] == \
        [(w.id, w.n0, w.support, w.fn) for w in b.walls]


def test_a2_is_stable_in_the_order():
    small, large = scatter(fixed_data("A2"), order=2), scatter(fixed_data("A2"), order=9)
    assert [(w.n0, w.support) for w in small.walls] == [(w.n0, w.support) for w in large.walls]


# -- path-ordered products -----------------------------------------------------------------

def test_path_inside_a_chamber_is_the_identity(a2):
    assert path_ordered_product(a2, [(1, 2), (3, 1), (2, 5)]).is_identity()


def test_reversed_path_gives_the_inverse(a2):
    pts = [(3, 2), (-1, 4), (-5, -2)]
    fwd = path_ordered_product(a2, pts)
    back = path_ordered_product(a2, list(reversed(pts)))
    assert fwd.inverse() == back


def test_both_ways_around_the_origin_agree(a2):
    # from C+ to C- passing either side of the origin
    above = path_ordered_product(a2, [(1, 2), (-3, 1), (-2, -1)])
    below = path_ordered_product(a2, [(1, 2), (2, -5), (-2, -1)])
    assert above == below
    assert not above.is_identity()


# -- mutation and equivalence -------------------------------------------------------------

def test_a2_mutation_matches_the_mutated_seed(a2):
    gamma = a2.gamma
    for k in gamma.unfrozen:
        target = scatter(gamma, mutate_seed(a2.seed, k, gamma), 6)
        ok, witness = equivalent(mutate_diagram(a2, k), target, 6)
        assert ok, witness


def test_mutating_twice_returns_an_equivalent_diagram():
    gamma = fixed_data("B2")
    d = scatter(gamma, order=6)
    for k in gamma.unfrozen:
        once = mutate_diagram(d, k)
        twice = mutate_diagram(once, k)
        target = scatter(gamma, twice.seed, 6)
        ok, witness = equivalent(twice, target, 6, valid=mutual_validity(once, twice, k))
        assert ok, witness


def test_frozen_mutation_is_refused():
    d = scatter(fixed_data("A3"), order=2)
    with pytest.raises(ValueError):
        mutate_diagram(d, 4)


def test_diagram_is_equivalent_to_itself(a2):
    assert equivalent(a2, a2) == (True, None)


def test_perturbed_coefficient_is_detected(a2):
    walls = list(a2.walls)
    i = next(i for i, w in enumerate(walls) if not w.incoming)
    w = walls[i]
    walls[i] = make_wall(a2.grading, w.id, w.n0, w.support, WallFunction(w.n0, [2]))
    bad = ScatteringDiagram(a2.gamma, a2.seed, a2.order, walls)
    ok, witness = equivalent(a2, bad)
    assert not ok
    assert witness["n0"] == [1, 1]
    assert witness["first"][0] == "1" and witness["second"][0] == "2"


def test_halves_of_a_wall_merge_back():
    d = initial_diagram(fixed_data("A2"))
    g = d.grading
    n0 = (1, 0)
    fn = WallFunction(n0, [1])
    halves = [make_wall(g, "a", n0, Cone([(1, 0)], [(0, 1)], 2), fn),
              make_wall(g, "b", n0, Cone([(1, 0)], [(0, -1)], 2), fn)]
    (merged,) = merge_convex(g, halves, 3)
    assert merged.support == Cone.hyperplane((1, 0))
    different = [halves[0], make_wall(g, "c", n0, halves[1].support, WallFunction(n0, [2]))]
    assert len(merge_convex(g, different, 3)) == 2


# -- cluster chambers -------------------------------------------------------------------

def test_depth_zero_is_the_positive_chamber():
    (c,) = cluster_chambers(fixed_data("A2"), depth=0)
    assert c.cone == Cone((), [(1, 0), (0, 1)], 2).canonical()
    assert c.vertex == ()


def test_a2_has_five_chambers():
    gamma = fixed_data("A2")
    counts = [len(cluster_chambers(gamma, depth=k)) for k in range(2, 7)]
    assert counts == [5] * 5


@pytest.mark.parametrize("name", ["A2", "B2", "Kronecker"])
def test_chamber_interiors_miss_every_wall(name):
    gamma = fixed_data(name)
    d = scatter(gamma, order=6)
    for ch in cluster_chambers(gamma, depth=4):
        x, implicit = ch.cone.relative_interior_point()
        assert ch.cone.dim() == gamma.rank and not implicit
        for w in d.walls:
            assert not w.support.contains(x)


def test_lookup_finds_the_chamber_of_a_point():
    cc = cluster_chambers(fixed_data("A2"), depth=3)
    assert cc.lookup((1, 1)).vertex == ()
    assert cc.lookup((-1, -1)) is not None


def test_kronecker_chambers_avoid_the_limiting_ray():
    gamma = fixed_data("Kronecker")
    d = scatter(gamma, order=6)
    (central,) = [w for w in d.walls if w.n0 == (1, 1)]
    ray, _ = central.support.relative_interior_point()
    chambers = cluster_chambers(gamma, depth=6)
    assert len(chambers) > 8
    assert all(not ch.cone.contains(ray) for ch in chambers)


def test_identity_seed_is_the_default():
    gamma = fixed_data("A2")
    assert cluster_chambers(gamma, Seed.identity(2), 1).chambers[0].cone == \
        cluster_chambers(gamma, depth=1).chambers[0].cone
