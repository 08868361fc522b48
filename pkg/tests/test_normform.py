"""Norm form problems: brute force, representatives, component recurrences,
embeddings, lifts."""

from fractions import Fraction

import pytest

from normrec.errors import DegreeCapExceeded
from normrec.normform import (
    NormFormProblem,
    build_component_recurrences,
    embedding_matrix,
    lift,
    norm_representatives,
    solve_bruteforce,
)
from normrec.numberfield import field_create, is_algebraic_integer, norm
from normrec.units import UnitSystem, auto_unit_system


@pytest.fixture(scope="module")
def K2():
    return field_create([-2, 0, 1])


@pytest.fixture(scope="module")
def pell(K2):
    return NormFormProblem(
        K2, [K2.one(), K2.gen()], 1, unit_system=auto_unit_system(K2)
    )


def test_norm_polynomial_pell(pell):
    assert pell.norm_polynomial() == {(2, 0): 1, (0, 2): -2}


def test_norm_of_vector(pell):
    assert pell.norm_of_vector((3, 2)) == 1
    assert pell.norm_of_vector((3, 1)) == 7


def test_rejects_zero_m(K2):
    with pytest.raises(ValueError):
        NormFormProblem(K2, [K2.one()], 0)


def test_rejects_dependent_generators(K2):
    with pytest.raises(ValueError):
        NormFormProblem(K2, [K2.one(), K2.from_rational(2)], 1)


def test_rejects_non_integer_generator(K2):
    with pytest.raises(ValueError):
        NormFormProblem(K2, [K2.from_rational(Fraction(1, 2))], 1)


def test_bruteforce_pell_small(pell):
    sols = solve_bruteforce(pell, 100)
    assert len(sols) == 14
    positives = sorted(x for x, y in sols if x > 0 and y >= 0)
    assert positives == [1, 3, 17, 99]
    for x in sols:
        assert pell.norm_of_vector(x) == 1


def test_bruteforce_empty(K2):
    p = NormFormProblem(K2, [K2.one(), K2.gen()], 5)
    assert solve_bruteforce(p, 50) == []


def test_bruteforce_m7(K2):
    p = NormFormProblem(K2, [K2.one(), K2.gen()], 7)
    sols = solve_bruteforce(p, 20)
    assert (3, 1) in sols and (3, -1) in sols
    for x in sols:
        assert p.norm_of_vector(x) == 7


def test_representatives_m1(pell):
    reps = norm_representatives(pell, 5)
    assert len(reps.representatives) == 1
    assert reps.representatives[0] == 1


def test_representatives_m7(K2):
    p = NormFormProblem(K2, [K2.one(), K2.gen()], 7)
    reps = norm_representatives(p, 5)
    assert len(reps.representatives) == 2
    coeff_sets = sorted(r.coeffs for r in reps.representatives)
    assert coeff_sets == [(Fraction(3), Fraction(-1)), (Fraction(3), Fraction(1))]


def test_representatives_negative_m(K2):
    p = NormFormProblem(K2, [K2.one(), K2.gen()], -1)
    reps = norm_representatives(p, 5)
    assert len(reps.representatives) == 1
    assert reps.representatives[0] == K2.element([Fraction(1), Fraction(1)])


def test_embedding_matrix_pell(pell):
    emb = embedding_matrix(pell)
    assert emb.sigma_indices == (0, 1)
    sc = pell.splitting()
    r = sc.ambient.gen()
    assert emb.matrix[0][1] == r
    assert emb.matrix[1][1] == -r
    # M * M^-1 = I
    n = 2
    prod = [
        [
            sum(emb.matrix[i][k] * emb.inverse[k][j] for k in range(n))
            for j in range(n)
        ]
        for i in range(n)
    ]
    amb = sc.ambient
    assert prod == [[amb.one(), amb.zero()], [amb.zero(), amb.one()]]


def test_component_recurrence_values(pell):
    crs = build_component_recurrences(pell, 1)
    assert len(crs) == 1
    cr = crs[0]
    # norm(1 + sqrt 2) = -1, so only even h give solutions of x^2 - 2y^2 = 1
    assert cr.parity_mask == (1,)
    assert cr.parity == 0
    vals = [cr.recurrence.evaluate((h,)).as_rational() for h in (0, 2, 4, 6)]
    assert vals == [1, 3, 17, 99]
    assert cr.h_valid((2,)) and not cr.h_valid((3,))


def test_component_recurrence_second_component(pell):
    crs = build_component_recurrences(pell, 2)
    cr = crs[0]
    vals = [cr.recurrence.evaluate((h,)).as_rational() for h in (0, 2, 4, 6)]
    assert vals == [0, 2, 12, 70]


def test_component_recurrence_negative_m(K2):
    # m = -1: the representative 1 + sqrt(2) already has norm -1, so the
    # parity stays 0 and the values are the x-coordinates of x^2 - 2y^2 = -1
    p = NormFormProblem(K2, [K2.one(), K2.gen()], -1, unit_system=auto_unit_system(K2))
    crs = build_component_recurrences(p, 1)
    cr = crs[0]
    assert cr.mu == K2.element([Fraction(1), Fraction(1)])
    assert cr.parity == 0
    vals = [cr.recurrence.evaluate((h,)).as_rational() for h in (0, 2, 4)]
    assert vals == [1, 7, 41]


def test_component_out_of_range(pell):
    with pytest.raises(ValueError):
        build_component_recurrences(pell, 3)


def test_unit_for_matches_recurrence(pell):
    cr = build_component_recurrences(pell, 1)[0]
    for h in (0, 2, 4):
        element = cr.mu * cr.unit_for((h,))
        assert norm(element) == 1
        assert element.coeffs[0] == cr.recurrence.evaluate((h,)).as_rational()


def test_lift_to_fourth_root(pell, K2):
    # L = Q(2^(1/4)) via adjoining a square root of sqrt(2)
    res = lift(pell, [("radical", K2.gen(), 2)])
    assert res.relative_degree == 2
    assert res.problem.field.degree == 4
    assert res.problem.m == 1
    gamma = K2.element([Fraction(3), Fraction(5)])
    assert norm(res.embed(gamma)) == norm(gamma) ** 2


def test_lift_trivial_when_root_exists(pell, K2):
    # sqrt of 2 is already sqrt(2)^2... adjoining a root of x - 3 changes nothing
    res = lift(pell, [("poly", [-3, 1])])
    assert res.relative_degree == 1
    assert res.problem.field == K2


def test_lift_degree_cap(K2):
    p = NormFormProblem(K2, [K2.one(), K2.gen()], 1, max_splitting_degree=3)
    with pytest.raises(DegreeCapExceeded):
        lift(p, [("radical", K2.gen(), 2)])


def test_lifted_alphas_are_integers(pell, K2):
    res = lift(pell, [("radical", K2.gen(), 2)])
    for a in res.problem.alphas:
        assert is_algebraic_integer(a)
