"""Coincidence detection, dependency fitting, certificates, reports."""

from fractions import Fraction

import pytest

from normrec.errors import InsufficientWitnesses, NonSimpleUnsupported
from normrec.intersect import (
    ExceptionCertificate,
    FinitenessReport,
    Hit,
    IntersectConfig,
    detect_exception,
    detect_reduced_exception,
    find_coincidences,
    fit_affine_lattice,
    fit_linear_dependencies,
    result_document,
    sample_verify,
)
from normrec.multirec import MPoly, MultiRecurrence
from normrec.normform import NormFormProblem
from normrec.numberfield import field_create
from normrec.units import UnitSystem, auto_unit_system


@pytest.fixture(scope="module")
def K2():
    return field_create([-2, 0, 1])


@pytest.fixture(scope="module")
def pell(K2):
    """Pell problem with the fundamental unit 1 + sqrt(2)."""
    return NormFormProblem(
        K2, [K2.one(), K2.gen()], 1, unit_system=auto_unit_system(K2)
    )


@pytest.fixture(scope="module")
def pell_eps0(K2):
    """Pell problem with the norm-one unit 3 + 2 sqrt(2) as the system."""
    eps = K2.element([Fraction(3), Fraction(2)])
    return NormFormProblem(K2, [K2.one(), K2.gen()], 1, unit_system=UnitSystem(K2, [eps]))


def odd_power_recurrence(K2):
    """G(k) = x-coordinate of (3 + 2 sqrt 2)^(2k+1), i.e. H(2k+1)."""
    e1 = K2.element([Fraction(3), Fraction(2)])
    e2 = K2.element([Fraction(3), Fraction(-2)])
    half = K2.from_rational(Fraction(1, 2))
    return MultiRecurrence(K2, 1, [(half * e1, (e1 * e1,)), (half * e2, (e2 * e2,))])


def parity_perturbation(K2, c=1):
    """((-1)^k - 1) * c: vanishes exactly on even k."""
    return MultiRecurrence.simple(K2, 1, [(c, (-1,)), (-c, (1,))])


def test_find_coincidences_power_of_two(pell, K2):
    g = MultiRecurrence.simple(K2, 1, [(1, (2,))])
    hits = find_coincidences(pell, 1, g, 30, 12)
    assert len(hits) == 1
    assert hits[0].x_value == 1 and hits[0].k == (0,) and hits[0].h == (0,)


def test_find_coincidences_constructed(pell_eps0, K2):
    hits = find_coincidences(pell_eps0, 1, odd_power_recurrence(K2), 5, 12)
    assert [h.k for h in hits] == [(k,) for k in range(6)]
    assert [h.x_value for h in hits][:3] == [3, 99, 3363]
    # hit soundness: the reconstructed vector solves the equation
    for h in hits:
        assert pell_eps0.norm_of_vector(h.full_vector) == 1
        assert h.full_vector[0] == h.x_value


def test_find_coincidences_none(pell, K2):
    g = MultiRecurrence.simple(K2, 1, [(5, (7,))])
    assert find_coincidences(pell, 1, g, 20, 12) == []


def test_find_coincidences_rejects_nonsimple(pell, K2):
    coeff = MPoly(K2, 1, {(1,): K2.one()})
    g = MultiRecurrence(K2, 1, [(coeff, (K2.from_rational(2),))])
    with pytest.raises(NonSimpleUnsupported):
        find_coincidences(pell, 1, g, 10, 10)


def test_find_coincidences_integer_base_hypothesis(pell, K2):
    from normrec.errors import NonIntegerBase

    half = Fraction(1, 2)
    g2 = MultiRecurrence.simple(K2, 2, [(1, (half, 2))])
    with pytest.raises(NonIntegerBase):
        find_coincidences(pell, 1, g2, 5, 5)
    # the s = 1 carve-out: no integrality check, and (1/2)^0 = 1 still hits
    g1 = MultiRecurrence.simple(K2, 1, [(1, (half,))])
    hits = find_coincidences(pell, 1, g1, 5, 5)
    assert [h.x_value for h in hits] == [1]


def test_fit_linear_dependencies_proportional():
    rep = fit_linear_dependencies([(1, 2), (2, 4), (3, 6)], 4)
    assert rep.constant_components == {}
    assert rep.free_indices == [0]
    assert len(rep.relations) == 1
    rel = rep.relations[0]
    assert rel.dependent_index == 1 and rel.denominator == 1
    assert rel.a0 == 0 and rel.coefficients == {0: 2}


def test_fit_linear_dependencies_constant():
    rep = fit_linear_dependencies([(0, 5), (1, 5), (7, 5)], 4)
    assert rep.constant_components == {1: 5}
    assert rep.free_indices == [0]
    assert rep.relations == []


def test_fit_linear_dependencies_affine():
    rep = fit_linear_dependencies([(1, 1), (2, 3), (3, 5)], 4)
    rel = rep.relations[0]
    # k2 = 2 k1 - 1
    assert rel.dependent_index == 1
    assert rel.denominator == 1 and rel.a0 == -1 and rel.coefficients == {0: 2}


def test_fit_linear_dependencies_needs_witnesses():
    with pytest.raises(InsufficientWitnesses):
        fit_linear_dependencies([(1, 2)], 4)


def _hit(k, h):
    return Hit(x_value=0, k=k, h=h, recurrence_index=0, full_vector=())


def test_fit_affine_lattice_line():
    lat = fit_affine_lattice([_hit((0,), (1,)), _hit((1,), (3,)), _hit((2,), (5,))])
    assert lat.a_matrix == ((2,),) and lat.b_vector == (1,)


def test_fit_affine_lattice_constant():
    lat = fit_affine_lattice([_hit((0,), (4,)), _hit((1,), (4,)), _hit((5,), (4,))])
    assert lat.a_matrix == ((0,),) and lat.b_vector == (4,)


def test_fit_affine_lattice_inconsistent():
    assert fit_affine_lattice([_hit((0,), (0,)), _hit((1,), (1,)), _hit((2,), (3,))]) is None


def test_detect_exception_constructed(pell_eps0, K2):
    cfg = IntersectConfig(k_box=12, h_box=40)
    res = detect_exception(pell_eps0, 1, odd_power_recurrence(K2), cfg)
    assert isinstance(res, ExceptionCertificate)
    assert res.lattice.a_matrix == ((2,),)
    assert res.lattice.b_vector == (1,)
    assert res.g0.is_zero()
    assert all(res.verification.values())
    ok, _ = sample_verify(pell_eps0, odd_power_recurrence(K2), res, 20)
    assert ok


def test_detect_exception_finiteness(pell, K2):
    cfg = IntersectConfig(k_box=30, h_box=12)
    g = MultiRecurrence.simple(K2, 1, [(1, (2,))])
    res = detect_exception(pell, 1, g, cfg)
    assert isinstance(res, FinitenessReport)
    assert [h.x_value for h in res.hits] == [1]


def test_detect_exception_perturbed(pell_eps0, K2):
    cfg = IntersectConfig(k_box=14, h_box=70)
    g = odd_power_recurrence(K2) + parity_perturbation(K2)
    res = detect_exception(pell_eps0, 1, g, cfg)
    assert isinstance(res, ExceptionCertificate)
    assert not res.g0.is_zero()
    assert res.progression.offsets == (0,) and res.progression.steps == (2,)
    ok, _ = sample_verify(pell_eps0, g, res, 30)
    assert ok


def test_detect_reduced_exception(pell_eps0, K2):
    cfg = IntersectConfig(k_box=12, h_box=40)
    res = detect_reduced_exception(pell_eps0, 1, odd_power_recurrence(K2), cfg)
    assert isinstance(res, ExceptionCertificate)
    assert res.reduced
    assert res.g0.is_zero()
    assert res.progression.steps == (1,)


def test_detect_reduced_exception_perturbed(pell_eps0, K2):
    cfg = IntersectConfig(k_box=14, h_box=70)
    g = odd_power_recurrence(K2) + parity_perturbation(K2)
    res = detect_reduced_exception(pell_eps0, 1, g, cfg)
    assert isinstance(res, ExceptionCertificate)
    assert res.reduced and res.g0.is_zero()
    assert res.progression.offsets == (0,) and res.progression.steps == (2,)


def test_detect_reduced_exception_constant(pell, K2):
    g = MultiRecurrence.simple(K2, 1, [(4, (1,))])
    res = detect_reduced_exception(pell, 1, g, IntersectConfig(k_box=30, h_box=12))
    assert isinstance(res, FinitenessReport)
    assert res.hits == []


def test_detect_reduced_requires_s1(pell, K2):
    g = MultiRecurrence.simple(K2, 2, [(1, (2, 3))])
    with pytest.raises(NonSimpleUnsupported):
        detect_reduced_exception(pell, 1, g, IntersectConfig())


def test_nonunit_base_demotes(pell, K2):
    # G matches H at 5+ points only if structure exists; 3^k never does, but
    # a recurrence agreeing on few points must demote, not certify
    g = MultiRecurrence.simple(K2, 1, [(7, (3,))])
    res = detect_exception(pell, 1, g, IntersectConfig(k_box=20, h_box=12))
    assert isinstance(res, FinitenessReport)


def test_result_document_certificate(pell_eps0, K2):
    cfg = IntersectConfig(k_box=12, h_box=40)
    g = odd_power_recurrence(K2)
    res = detect_reduced_exception(pell_eps0, 1, g, cfg)
    doc = result_document(pell_eps0, g, res)
    assert doc["classification"] == "reduced-exception"
    assert doc["a_matrix"] == [[2]] and doc["b_vector"] == [1]
    assert doc["reduced"] is True
    assert all(doc["verification"].values())
    # exact strings only, no floats anywhere
    assert not _contains_float(doc)


def test_result_document_report(pell, K2):
    g = MultiRecurrence.simple(K2, 1, [(1, (2,))])
    res = detect_exception(pell, 1, g, IntersectConfig(k_box=30, h_box=12))
    doc = result_document(pell, g, res)
    assert doc["classification"] == "finite-within-box"
    assert doc["hits"] == [{"x": "1", "k": [0], "h": [0]}]
    assert not _contains_float(doc)


def _contains_float(obj):
    if isinstance(obj, float):
        return True
    if isinstance(obj, dict):
        return any(_contains_float(v) for v in obj.values())
    if isinstance(obj, (list, tuple)):
        return any(_contains_float(v) for v in obj)
    return False
