import itertools

import numpy as np
import pytest

from threepowers.arith import double_factorial
from threepowers.geometry import (
    SIGNED_FORM,
    RootOfUnity,
    StandardPlane,
    linear_space_count,
    linear_spaces,
    nonstandard_plane_probe,
    perfect_matchings,
    planes_on_X,
    singular_candidates,
    standard_planes,
    trivial_planes,
    verify_plane_containment,
)


def _numeric_form_on_space(space, signs=None, trials=4, seed=0):
    """Evaluate sum s_i x_i^k at random points of the space."""
    rng = np.random.default_rng(seed)
    basis = space.basis()
    s = np.ones(space.ambient) if signs is None else np.asarray(signs, dtype=float)
    lam = rng.normal(size=(trials, len(basis))) + 1j * rng.normal(size=(trials, len(basis)))
    pts = lam @ basis
    return np.abs((s * pts**space.k).sum(axis=1)).max()


def test_root_of_unity_arithmetic():
    i = RootOfUnity(1, 2)
    assert (i * i).is_minus_one()
    assert (i**4).is_one()
    assert i.is_root_of_minus_one(2)
    assert not i.is_root_of_minus_one(4)
    assert i.is_root_of_one(4)
    assert (i * i.inverse()).is_one()
    assert abs(i.to_complex() - 1j) < 1e-15
    with pytest.raises(ValueError):
        RootOfUnity(4, 2)
    with pytest.raises(ValueError):
        RootOfUnity(0, 1) * RootOfUnity(0, 2)


def test_perfect_matchings_count():
    for n in (2, 4, 6, 8):
        assert len(list(perfect_matchings(range(n)))) == double_factorial(n - 1)


@pytest.mark.parametrize("k", range(1, 7))
def test_standard_plane_count(k):
    planes = standard_planes(k)
    assert len(planes) == 15 * k**3
    assert len(set(planes)) == len(planes)


@pytest.mark.parametrize("k", range(1, 7))
def test_every_plane_contained_and_mutation_fails(k):
    for p in standard_planes(k):
        assert verify_plane_containment(p)
        for a in range(3):
            roots = list(p.roots)
            roots[a] = roots[a] * RootOfUnity(1, k)
            assert not verify_plane_containment(StandardPlane(p.pairing, tuple(roots), k))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_containment_numerically(k):
    for p in standard_planes(k):
        assert _numeric_form_on_space(p) < 1e-9


def test_k2_all_i_plane():
    i = RootOfUnity(1, 2)
    plane = StandardPlane.build([(0, 1), (2, 3), (4, 5)], [i, i, i], 2)
    assert verify_plane_containment(plane)


def test_root_of_plus_one_fails():
    one = RootOfUnity(0, 3)
    minus = RootOfUnity(3, 3)
    plane = StandardPlane.build([(0, 1), (2, 3), (4, 5)], [minus, minus, one], 3)
    assert not verify_plane_containment(plane)


def test_malformed_pairing_rejected():
    r = RootOfUnity(1, 1)
    with pytest.raises(ValueError):
        verify_plane_containment(StandardPlane(((0, 1), (1, 2), (4, 5)), (r, r, r), 1))
    with pytest.raises(ValueError):
        StandardPlane.build([(0, 0), (2, 3), (4, 5)], [r, r, r], 1)


def test_build_canonicalises_orientation():
    z = RootOfUnity(1, 4)
    a = StandardPlane.build([(1, 0), (2, 3), (4, 5)], [z, z, z], 4)
    b = StandardPlane.build([(4, 5), (0, 1), (2, 3)], [z, z.inverse(), z], 4)
    assert a == b
    assert a.pairing == ((0, 1), (2, 3), (4, 5))


@pytest.mark.parametrize("k", [1, 2])
def test_small_k_planes_are_distinct_point_sets(k):
    planes = standard_planes(k)
    bases = [p.basis() for p in planes]
    for a, b in itertools.combinations(range(len(planes)), 2):
        stacked = np.vstack([bases[a], bases[b]])
        assert np.linalg.matrix_rank(stacked, tol=1e-9) > 3


@pytest.mark.parametrize("m, k, count", [(1, 3, 27), (2, 4, 960), (3, 2, 1680)])
def test_linear_space_examples(m, k, count):
    assert linear_space_count(m, k).count == count


def test_linear_space_formula_by_generation():
    for m in (1, 2, 3):
        for k in (1, 2, 3, 4):
            fam = linear_space_count(m, k)
            assert fam.count == double_factorial(2 * m + 1) * k ** (m + 1) == fam.expected


def test_plane_constructions_agree():
    for k in range(1, 7):
        assert linear_space_count(2, k).count == len(standard_planes(k))
        assert linear_spaces(2, k) == standard_planes(k)


def test_lines_on_cubic_surface_numerically():
    for line in linear_spaces(1, 3):
        assert _numeric_form_on_space(line) < 1e-9


@pytest.mark.parametrize("d", range(4, 9))
def test_six_rational_positive_planes(d):
    for c in range(1, d):
        census = planes_on_X((c, d))
        assert census.total_rational_positive == 6
        assert list(census.planes) == trivial_planes(d)
        assert census.standard_on_Gd == 15 * d**3


@pytest.mark.parametrize("e", [(1, 4), (2, 5), (3, 4)])
def test_census_planes_lie_on_both_forms_numerically(e):
    c, d = e
    census = planes_on_X(e)
    for p in census.on_X:
        for deg in (c, d):
            q = StandardPlane(p.pairing, p.roots, deg)
            assert _numeric_form_on_space(q, SIGNED_FORM) < 1e-9


def test_signed_census_refuses_small_d():
    with pytest.raises(ValueError):
        planes_on_X((1, 3))


def test_trivial_planes_are_diagonal():
    for p in trivial_planes():
        assert [i for i, _ in p.pairing] == [0, 1, 2]
        assert sorted(j for _, j in p.pairing) == [3, 4, 5]
        assert p.admits_positive_rational_point()


@pytest.mark.parametrize("k, p, expected", [(4, 17, 384), (5, 11, 750)])
def test_probe_finds_only_standard_planes(k, p, expected):
    rep = nonstandard_plane_probe(k, p)
    assert rep.all_standard
    assert rep.planes_found == rep.standard == rep.expected_standard == expected


def test_probe_is_seed_independent():
    a = nonstandard_plane_probe(4, 17, seed=1)
    b = nonstandard_plane_probe(4, 17, seed=99)
    assert (a.planes_found, a.standard) == (b.planes_found, b.standard)


@pytest.mark.parametrize("k, p", [(4, 2), (4, 13), (3, 7), (5, 21), (4, 41)])
def test_probe_refusals(k, p):
    with pytest.raises(ValueError):
        nonstandard_plane_probe(k, p)


def test_singular_12_is_the_all_ones_point():
    rep = singular_candidates((1, 2))
    assert rep.heuristic
    assert rep.candidates == ((0, 0, 0, 0, 0, 0),)
    assert rep.count < 3**6


@pytest.mark.parametrize("e", [(1, 2), (1, 3), (2, 3), (2, 4), (1, 4), (3, 5)])
def test_singular_candidates_bounded_and_on_x(e):
    c, d = e
    rep = singular_candidates(e)
    r = 2 * (d - c)
    assert rep.count <= (1 + r) ** 6 == rep.pattern_bound
    assert rep.max_residual <= rep.tolerance
    s = np.array(SIGNED_FORM, dtype=float)
    for cand in rep.candidates:
        z = np.array([0 if t is None else np.exp(2j * np.pi * t / r) for t in cand])
        assert abs((s * z**c).sum()) < 1e-9
        assert abs((s * z**d).sum()) < 1e-9


@pytest.mark.parametrize("tol", [0.0, 1e-3, -1e-9])
def test_singular_tolerance_range(tol):
    with pytest.raises(ValueError):
        singular_candidates((1, 3), tol)
