"""Broken lines, theta functions, structure constants, g-vectors and cluster monomials."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterscat import _linalg as la
from clusterscat.battery import fixed_data
from clusterscat.cli_io import same_sign
from clusterscat.lattice_seed import FixedData, InvalidData, Seed
from clusterscat.poly_ring import Laurent, Series, TruncatedLaurent
from clusterscat.scattering import chamber_of_path, path_ordered_product, scatter
from clusterscat.theta import (broken_lines, check_product_identity, cluster_monomial_laurent,
                               convexity_violation, expand_in_theta_basis, g_vector,
                               generic_basepoint, is_polynomial_up_to_order, min_convexity_check,
                               structure_constant, theta_equals_cluster_monomial, theta_function,
                               theta_mutation_invariance, theta_path_invariance, theta_product)

Q = (Fraction(3, 7), Fraction(5, 11))


@pytest.fixture(scope="module")
def a2():
    return scatter(fixed_data("A2"), order=6)


@pytest.fixture(scope="module")
def kron():
    return scatter(fixed_data("Kronecker"), order=6)


def laurent(d):
    return Laurent({tuple(k): v for k, v in d.items()})


# -- broken lines and theta functions ----------------------------------------------------

def test_positive_exponent_gives_the_straight_line(a2):
    (line,) = broken_lines(a2, (2, 1), Q)
    assert line.bends == 0 and line.coefficient == 1
    assert theta_function(a2, (2, 1), Q).to_laurent() == laurent({(2, 1): 1})


def test_zero_exponent_gives_one(kron):
    t = theta_function(kron, (0, 0), Q)
    assert t.to_laurent() == laurent({(0, 0): 1})
    with pytest.raises(ValueError):
        broken_lines(kron, (0, 0), Q)


def test_kronecker_lines_and_their_bends(kron):
    lines = broken_lines(kron, (1, -1), Q)
    finals = sorted((ln.exponent, ln.coefficient) for ln in lines)
    assert finals == [((-1, -1), 1), ((-1, 1), 1), ((1, -1), 1)]
    for ln in lines:
        assert ln.segments[0][0] is None and ln.segments[0][1] == (1, -1)
        # every bend adds a nonzero exponent from p1*(N+)
        for (_, a, _), (_, b, _) in zip(ln.segments, ln.segments[1:]):
            assert a != b


def test_kronecker_square_exponent(kron):
    t = theta_function(kron, (2, -2), Q).to_laurent()
    assert t == laurent({(2, -2): 1, (0, -2): 2, (-2, -2): 1, (-2, 0): 2, (-2, 2): 1})


def test_basepoint_on_a_wall_is_refused(a2):
    with pytest.raises(ValueError):
        broken_lines(a2, (1, -1), (0, 1))


def test_order_beyond_the_diagram_is_refused(a2):
    with pytest.raises(ValueError):
        theta_function(a2, (1, -1), Q, 7)


@pytest.mark.parametrize("m0", [(1, -1), (-1, 2), (-2, -1), (3, -2)])
def test_lower_order_is_a_truncation(kron, m0):
    high = theta_function(kron, m0, Q, 6)
    low = theta_function(kron, m0, Q, 4)
    truncated = {}
    for ln in high.lines:
        if ln.degree((0, 1)) <= 4:
            truncated[ln.exponent] = truncated.get(ln.exponent, 0) + ln.coefficient
    assert low.to_laurent() == laurent(truncated)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "Kronecker"])
def test_theta_coefficients_are_positive_integers(name):
    d = scatter(fixed_data(name), order=5)
    rng = random.Random(1)
    for _ in range(6):
        m0 = (rng.randint(-3, 3), rng.randint(-3, 3))
        if not any(m0):
            continue
        for c in theta_function(d, m0, generic_basepoint(d, rng)).to_laurent().terms.values():
            assert c > 0 and c.denominator == 1


# -- invariance under moving the basepoint and mutating ------------------------------------

def test_path_invariance_across_the_outgoing_ray(a2):
    # these two points lie on either side of R>=0 (1, -1)
    above, below = (Fraction(17, 9), Fraction(-5, 7)), (Fraction(5, 7), Fraction(-17, 9))
    assert theta_path_invariance(a2, (-1, 1), above, below)
    assert theta_path_invariance(a2, (1, -1), above, below)
    assert theta_path_invariance(a2, (-1, 1), Q, Q)


def test_path_invariance_across_the_first_axis(kron):
    assert theta_path_invariance(kron, (1, -1), Q, (-Q[0], Q[1]))


def test_mutation_invariance_on_a2(a2):
    for m0 in [(1, -1), (-1, 0), (0, 1), (-1, -1)]:
        assert theta_mutation_invariance(a2, 0, m0, Q)
        assert theta_mutation_invariance(a2, 0, m0, (-Q[0], Q[1]))


def test_mutation_invariance_on_principal_a3():
    d = scatter(fixed_data("A3"), order=4)
    rng = random.Random(2)
    for m0 in [(1, -1, 0, 0, 0, 0), (0, -1, 1, 0, 0, 0), (-1, 0, -1, 0, 1, 0)]:
        q = generic_basepoint(d, rng)
        assert theta_mutation_invariance(d, 1, m0, q)


# -- structure constants and products ---------------------------------------------------------

def test_exchange_relation_as_a_theta_product(a2):
    # A1 * A1' = 1 + A2, and A1' has g-vector (-1, 0)
    g = g_vector(a2.gamma, None, [0], [1, 0])
    assert g == (-1, 0)
    table = theta_product(a2, (1, 0), g)
    assert table == {(0, 0): 1, (0, 1): 1}


def test_a2_products_agree_with_laurent_multiplication(a2):
    rng = random.Random(3)
    q = generic_basepoint(a2, rng, chamber="+")
    for p1, p2 in [((1, 0), (-1, 1)), ((-1, 0), (0, -1)), ((1, -1), (-1, 1)), ((2, -1), (-1, -1))]:
        table = theta_product(a2, p1, p2)
        product = theta_function(a2, p1, q).to_laurent() * theta_function(a2, p2, q).to_laurent()
        summed = Laurent()
        for r, a in table.items():
            summed = summed + theta_function(a2, r, q).to_laurent() * a
        # A2 thetas are polynomials, so the identity holds without truncation
        assert summed == product
        assert check_product_identity(a2, p1, p2, table, q)


def test_product_with_zero_is_a_delta(kron):
    p = (Fraction(1), Fraction(-1))
    assert theta_product(kron, p, (0, 0)) == {p: 1}
    assert structure_constant(kron, (0, 0), p, p) == 1
    assert structure_constant(kron, (0, 0), p, (1, 1)) == 0


def test_kronecker_square_minus_the_double_is_positive(kron):
    table = theta_product(kron, (1, -1), (1, -1))
    assert table == {(2, -2): 1, (0, 0): 2}
    square = theta_function(kron, (1, -1), Q).to_laurent() ** 2
    rest = square - theta_function(kron, (2, -2), Q).to_laurent()
    coeffs = expand_in_theta_basis(rest, kron, Q)
    assert coeffs == {(0, 0): 2}


def test_straight_pairs_always_contribute(kron):
    rng = random.Random(4)
    for _ in range(10):
        p1 = (rng.randint(-2, 2), rng.randint(-2, 2))
        p2 = (rng.randint(-2, 2), rng.randint(-2, 2))
        q = tuple(a + b for a, b in zip(p1, p2))
        assert structure_constant(kron, p1, p2, q, rng=rng) >= 1
        assert structure_constant(kron, p1, p2, q, rng=rng) == structure_constant(kron, p2, p1, q, rng=rng)


def test_threefold_rescaling_keeps_constants_nonzero():
    d = scatter(fixed_data("A2"), order=6)
    checked = 0
    for p1, p2 in [((1, 0), (-1, 0)), ((1, -1), (0, -1)), ((-1, 1), (2, -1))]:
        for q, a in theta_product(d, p1, p2, 2).items():
            big = [tuple(3 * x for x in v) for v in (p1, p2, q)]
            assert a > 0 and structure_constant(d, *big) > 0
            checked += 1
    assert checked > 3


def test_too_small_order_is_reported(kron):
    with pytest.raises(ValueError, match="order"):
        # q - p1 - p2 = p1*(2, 2) has degree 4
        structure_constant(kron, (1, -1), (1, -1), (-2, 2), order=2)


# -- translation along the frozen directions -----------------------------------------------

def test_frozen_translation_shifts_every_line():
    d = scatter(fixed_data("A3"), order=4)
    rng = random.Random(5)
    for _ in range(3):
        m0 = tuple(rng.randint(-1, 1) for _ in range(3)) + (0, 0, 0)
        if not any(m0):
            continue
        shift = (0, 0, 0) + tuple(rng.randint(-2, 2) for _ in range(3))
        q = generic_basepoint(d, rng)
        moved = tuple(a + b for a, b in zip(m0, shift))
        base = theta_function(d, m0, q).to_laurent()
        assert theta_function(d, moved, q).to_laurent() == base * Laurent.monomial(shift)
        assert len(broken_lines(d, moved, q)) == len(broken_lines(d, m0, q))


# -- g-vectors, cluster monomials ---------------------------------------------------------------

def test_empty_path_g_vector_is_the_exponent():
    gamma = fixed_data("G2")
    assert g_vector(gamma, None, [], [2, 1]) == (2, 1)


@pytest.mark.parametrize("name", ["A2", "B2", "Kronecker"])
def test_g_vectors_generate_the_cluster_chamber(name):
    gamma = fixed_data(name)
    s0 = Seed.identity(2)
    for path in [(0,), (1,), (0, 1), (1, 0), (0, 1, 0)]:
        gs = sorted(la.primitive(g_vector(gamma, s0, path, [int(i == j) for j in range(2)])) for i in range(2))
        rays, lin = chamber_of_path(gamma, s0, path).cone.generators()
        assert lin == [] and sorted(rays) == gs


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2", "Kronecker", "A3"]), st.lists(st.integers(0, 2), max_size=6))
def test_g_vector_families_are_sign_coherent(name, raw):
    gamma = fixed_data(name)
    uf = list(gamma.unfrozen)
    path = [uf[i % len(uf)] for i in raw]
    gs = [g_vector(gamma, None, path, [int(i == j) for j in range(gamma.rank)]) for i in uf]
    for coord in uf:
        assert same_sign([g[coord] for g in gs])


def test_a2_first_mutation_variable():
    gamma = fixed_data("A2")
    assert cluster_monomial_laurent(gamma, None, [0], [1, 0]) == laurent({(-1, 0): 1, (-1, 1): 1})
    assert cluster_monomial_laurent(gamma, None, [], [2, 3]) == laurent({(2, 3): 1})


def test_principal_cluster_variable_carries_coefficients():
    gamma = fixed_data("A2")
    poly = cluster_monomial_laurent(gamma, None, [0], [1, 0], principal=True)
    # (1 + A2 X1) / A1 with X-variables in the last two slots, as on the wall 1 + A2 X1
    assert poly == laurent({(-1, 0, 0, 0): 1, (-1, 1, 1, 0): 1})


def test_negative_cluster_exponent_is_refused():
    with pytest.raises(InvalidData):
        g_vector(fixed_data("A2"), None, [0], [-1, 0])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=7), st.integers(0, 2), st.integers(0, 2))
def test_cluster_monomials_are_positive_laurent_polynomials(raw, a, b):
    gamma = fixed_data("Kronecker")
    poly = cluster_monomial_laurent(gamma, None, raw, [a, b])
    assert all(c > 0 and c.denominator == 1 for c in poly.terms.values())


@pytest.mark.parametrize("path", [(0,), (1,), (0, 1), (1, 0), (0, 1, 0), (1, 0, 1)])
def test_theta_of_a_cluster_variable_is_the_variable(path):
    gamma = fixed_data("Kronecker")
    for i in range(2):
        m = [int(i == j) for j in range(2)]
        assert theta_equals_cluster_monomial(gamma, None, path, m, rng=random.Random(6))


@pytest.mark.parametrize("path", [(0,), (1,), (0, 1), (1, 0), (0, 1, 0)])
def test_non_initial_thetas_are_proper_laurent(kron, path):
    for i in range(2):
        g = g_vector(kron.gamma, None, path, [int(i == j) for j in range(2)])
        if all(x >= 0 for x in g):
            continue
        poly = cluster_monomial_laurent(kron.gamma, None, path, [int(i == j) for j in range(2)])
        for e in poly.terms:
            assert min(e) < 0


# -- theta-basis expansion, polynomiality, min-convexity ----------------------------------------

def test_theta_polynomial_expands_to_a_delta(kron):
    t = theta_function(kron, (2, -2), Q).to_laurent()
    assert expand_in_theta_basis(t, kron, Q) == {(2, -2): 1}


def test_monomial_outside_the_cluster_complex_needs_several_thetas(kron):
    coeffs = expand_in_theta_basis(laurent({(1, -1): 1}), kron, Q)
    assert coeffs[(1, -1)] == 1
    assert len(coeffs) >= 2


def transported(diagram, poly, path):
    """The path-ordered product along `path` applied to a Laurent polynomial."""
    theta = path_ordered_product(diagram, path)
    out = Laurent()
    for e, c in poly.terms.items():
        one = TruncatedLaurent(diagram.grading, e, Series.one(diagram.grading.rank, diagram.order))
        out = out + theta.act(one).to_laurent() * c
    return out


def test_expansion_is_the_same_after_transport(a2):
    other = (Fraction(-1, 3), Fraction(7, 5))
    for poly in [cluster_monomial_laurent(a2.gamma, None, [0], [1, 0]) * laurent({(1, 1): 1}),
                 laurent({(1, -1): 1, (-2, 1): 3})]:
        here = expand_in_theta_basis(poly, a2, Q)
        there = expand_in_theta_basis(transported(a2, poly, [Q, other]), a2, other)
        assert here and here == there


def test_polynomial_verdicts(kron):
    assert is_polynomial_up_to_order(kron, (1, 0), Q) == "stable"
    assert is_polynomial_up_to_order(kron, (1, -1), Q) == "stable"
    g = g_vector(kron.gamma, None, [0, 1], [1, 0])
    assert is_polynomial_up_to_order(kron, g, Q) == "stable"


def test_deep_in_the_imaginary_cone_lines_keep_coming():
    wild = FixedData(2, [[0, 3], [-3, 0]], (1, 1), name="b=c=3")
    d = scatter(wild, order=5)
    verdicts = [is_polynomial_up_to_order(d, m0, Q) for m0 in [(-3, -4), (-4, -3), (-5, -5)]]
    assert "growing" in verdicts


def test_min_convexity_of_linear_functions(kron):
    lines = broken_lines(kron, (1, -1), Q) + broken_lines(kron, (2, -2), Q)
    assert any(ln.bends for ln in lines)
    # p1*(e_1) = (0, 2) and p1*(e_2) = (-2, 0) for this diagram
    assert min_convexity_check([(-1, 1)], lines)
    bad = convexity_violation([(1, -1)], lines)
    assert bad is not None
    line, index = bad
    assert index >= 1 and line.bends >= 1
