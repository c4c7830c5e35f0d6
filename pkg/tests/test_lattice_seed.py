"""Fixed data, seeds, mutation, principal and dual data, tropical maps."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterscat import _linalg as la
from clusterscat.lattice_seed import (FixedData, InvalidData, LatticePoint, Seed, c_vectors,
                                      check_injectivity, dump_fixed_data, exchange_matrix,
                                      extended_exchange_matrix, langlands_dual, load_fixed_data,
                                      mutate_seed, principal_extension, seed_from_path,
                                      tropical_mutation, tropical_mutation_inverse)

A2 = FixedData(2, [[0, 1], [-1, 0]], (1, 1), name="A2")
G2 = FixedData(2, [[0, 1], [-1, 0]], (1, 3), name="G2")
MARKOV = FixedData(3, [[0, 2, -2], [-2, 0, 2], [2, -2, 0]], (1, 1, 1), name="Markov")


@st.composite
def skew_data(draw, max_rank=3, bound=2):
    """Skew-symmetric integer data with nonzero rows."""
    n = draw(st.integers(2, max_rank))
    skew = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(st.integers(-bound, bound))
            skew[i][j], skew[j][i] = v, -v
    for i in range(n):
        if not any(skew[i]):
            j = (i + 1) % n
            skew[i][j], skew[j][i] = 1, -1
    return FixedData(n, skew, (1,) * n)


def paths(gamma_strategy, max_len=8):
    return gamma_strategy.flatmap(lambda g: st.tuples(
        st.just(g), st.lists(st.sampled_from(g.unfrozen), max_size=max_len)))


# -- validation --------------------------------------------------------------------------

def test_load_a2_document():
    g = load_fixed_data({"rank": 2, "skew": [["0", "1"], ["-1", "0"]], "d": [1, 1]})
    assert g.eps0 == [[0, 1], [-1, 0]]
    assert g.frozen == frozenset()


def test_rank_one_zero_row_rejected():
    with pytest.raises(InvalidData, match="row"):
        load_fixed_data({"rank": 1, "skew": [["0"]], "d": [1]})


def test_multipliers_two_three_are_integral():
    g = FixedData(2, [[0, 1], [-1, 0]], (2, 3))
    assert g.eps0 == [[0, 3], [-2, 0]]


@pytest.mark.parametrize("doc, message", [
    ({"rank": 2, "skew": [["0", "1"], ["1", "0"]], "d": [1, 1]}, "skew"),
    ({"rank": 2, "skew": [["0", "1"], ["-1", "0"]], "d": [2, 2]}, "gcd"),
    ({"rank": 2, "skew": [["0", "1/2"], ["-1/2", "0"]], "d": [1, 1]}, "integral"),
    ({"rank": 2, "skew": [["0", "1"]], "d": [1, 1]}, "2x2"),
    ({"rank": 2, "d": [1, 1]}, "skew"),
])
def test_invalid_documents_name_the_violation(doc, message):
    with pytest.raises(InvalidData, match=message):
        load_fixed_data(doc)


def test_document_round_trip():
    doc = dump_fixed_data(G2)
    assert load_fixed_data(doc) == G2


def test_lattice_point_tags():
    p = LatticePoint((1, -2), "N")
    assert tuple(p) == (1, -2) and len(p) == 2
    with pytest.raises(ValueError):
        LatticePoint((1,), "Q")


def test_seed_needs_unimodular_basis():
    with pytest.raises(InvalidData):
        Seed(((2, 0), (0, 1)))


# -- mutation and exchange matrices ---------------------------------------------------------

def test_a2_mutation_at_first_index():
    s = mutate_seed(Seed.identity(2), 0, A2)
    assert s.basis == ((-1, 0), (0, 1))
    assert s.path == (0,)


def test_g2_mutation_at_second_index():
    # eps_12 = 3, so e_1' = e_1 + 3 e_2 and e_2' = -e_2
    s = mutate_seed(Seed.identity(2), 1, G2)
    assert s.basis == ((1, 3), (0, -1))


def test_frozen_mutation_rejected():
    g = FixedData(2, [[0, 1], [-1, 0]], (1, 1), frozenset({1}))
    with pytest.raises(InvalidData):
        mutate_seed(Seed.identity(2), 1, g)


def test_exchange_matrices_of_initial_seeds():
    assert exchange_matrix(Seed.identity(2), A2) == [[0, 1], [-1, 0]]
    assert exchange_matrix(Seed.identity(3), MARKOV) == [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]


@settings(max_examples=60, deadline=None)
@given(paths(skew_data(4, 3)))
def test_exchange_matrix_mutation_is_involutive(gp):
    gamma, path = gp
    s = seed_from_path(gamma, path)
    eps = exchange_matrix(s, gamma)
    assert all(eps[i][i] == 0 for i in range(gamma.rank))
    for k in gamma.unfrozen:
        twice = mutate_seed(mutate_seed(s, k, gamma), k, gamma)
        assert exchange_matrix(twice, gamma) == eps


@settings(max_examples=40, deadline=None)
@given(paths(skew_data()))
def test_seed_replay_reproduces_basis(gp):
    gamma, path = gp
    s = seed_from_path(gamma, path)
    assert seed_from_path(gamma, s.path).basis == s.basis
    assert abs(la.det(s.basis)) == 1


def test_exchange_matrix_mutation_rule():
    # eps'_ij = -eps_ij if k in {i, j}, else eps_ij + sgn(eps_ik)[eps_ik eps_kj]_+
    s = Seed.identity(3)
    eps = exchange_matrix(s, MARKOV)
    for k in range(3):
        new = exchange_matrix(mutate_seed(s, k, MARKOV), MARKOV)
        for i in range(3):
            for j in range(3):
                if k in (i, j):
                    want = -eps[i][j]
                else:
                    sgn = (eps[i][k] > 0) - (eps[i][k] < 0)
                    want = eps[i][j] + sgn * max(eps[i][k] * eps[k][j], 0)
                assert new[i][j] == want


# -- principal and dual data ------------------------------------------------------------

def test_principal_extension_of_a2():
    prin, s = principal_extension(A2)
    assert prin.rank == 4 and prin.frozen == frozenset({2, 3})
    assert prin.d == (1, 1, 1, 1)
    assert check_injectivity(prin, s)


@settings(max_examples=40, deadline=None)
@given(skew_data(max_rank=4, bound=3))
def test_principal_extension_is_always_injective(gamma):
    prin, s = principal_extension(gamma)
    assert check_injectivity(prin, s)


def test_injectivity_of_a2_and_markov():
    assert check_injectivity(A2)
    assert not check_injectivity(MARKOV)


def test_langlands_dual_of_skew_symmetric_data_is_the_same():
    dual, s = langlands_dual(A2)
    assert dual.skew == A2.skew and dual.d == A2.d
    assert s.basis == Seed.identity(2).basis


def test_langlands_dual_multipliers_and_form():
    dual, s = langlands_dual(G2)
    assert dual.d == (3, 1)
    # in the basis d_i e_i the dual form is {d_i e_i, d_j e_j} / D
    for i in range(2):
        for j in range(2):
            a = [G2.d[i] * int(i == t) for t in range(2)]
            b = [G2.d[j] * int(j == t) for t in range(2)]
            assert dual.skew[i][j] == G2.form(a, b) / 3
    eps, dual_eps = G2.eps0, dual.eps0
    assert all(dual_eps[i][j] == -eps[j][i] for i in range(2) for j in range(2))


def test_double_dual_has_the_original_exchange_matrix():
    dual, s = langlands_dual(G2)
    back, s2 = langlands_dual(dual, s)
    assert exchange_matrix(s2, back) == exchange_matrix(Seed.identity(2), G2)


# -- tropical maps ----------------------------------------------------------------------

def test_tropical_mutation_fixes_the_negative_side():
    s = Seed.identity(2)
    assert tropical_mutation(0, [-1, 5], s, A2) == [-1, 5]
    assert tropical_mutation(0, [0, 3], s, A2) == [0, 3]


def test_tropical_mutation_of_f1_in_a2():
    # <e_1, f_1> = 1 and v_1 = p1*(e_1) = f_2
    assert tropical_mutation(0, [1, 0], Seed.identity(2), A2) == [1, 1]


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@settings(max_examples=100, deadline=None)
@given(paths(skew_data(), 4), st.lists(rationals, min_size=3, max_size=3), st.data())
def test_tropical_mutation_is_a_bijection(gp, x, data):
    gamma, path = gp
    x = x[:gamma.rank]
    s = seed_from_path(gamma, path)
    k = data.draw(st.sampled_from(gamma.unfrozen))
    y = tropical_mutation(k, x, s, gamma)
    assert tropical_mutation_inverse(k, y, s, gamma) == [Fraction(v) for v in x]


# -- c-vectors ----------------------------------------------------------------------------

def test_initial_c_vectors_are_the_unit_block():
    # {(e_i, 0), (0, f_j)} d_j = (delta_ij / d_j) d_j
    assert c_vectors(G2, None, []) == [(1, 0), (0, 1)]
    assert c_vectors(MARKOV, None, []) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_double_mutation_restores_c_vectors():
    for k in range(3):
        assert c_vectors(MARKOV, None, [k, k]) == c_vectors(MARKOV, None, [])


@settings(max_examples=100, deadline=None)
@given(paths(skew_data(4, 3)))
def test_c_vectors_are_sign_coherent(gp):
    gamma, path = gp
    for c in c_vectors(gamma, None, path):
        assert all(x >= 0 for x in c) or all(x <= 0 for x in c)


def test_extended_matrix_left_block_is_the_exchange_matrix():
    path = [0, 1, 2, 0]
    ext = extended_exchange_matrix(MARKOV, None, path)
    eps = exchange_matrix(seed_from_path(MARKOV, path), MARKOV)
    assert [row[:3] for row in ext] == eps
    assert [tuple(row[3:]) for row in ext] == c_vectors(MARKOV, None, path)
