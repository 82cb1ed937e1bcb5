"""Design potentials, Welch constants, strength reports, antipodal doubling."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from orbitdesigns import (
    MismatchError,
    antipodal_design_check,
    build_group,
    catalog_entry,
    cross_potential,
    double_to_antipodal,
    orbit_lines,
    potential,
    strength,
    union_lines,
    welch_constant,
)


def _orbit(label, k):
    return orbit_lines(build_group(label), np.asarray(catalog_entry(label).seeds[k - 1]))


def test_welch_constant_examples():
    assert welch_constant("C", 2, 2) == Fraction(1, 3)
    assert welch_constant("R", 3, 2) == Fraction(1, 5)
    for d in range(1, 9):
        assert welch_constant("C", d, 1) == Fraction(1, d)
    assert welch_constant("R", 2, 3) == Fraction(1 * 3 * 5, 2 * 4 * 6)


def test_welch_constant_formula_sweep():
    # independent evaluation: binomial for C, double factorial ratio for R
    for d in range(1, 9):
        for t in range(1, 13):
            assert welch_constant("C", d, t) == Fraction(1, math.comb(t + d - 1, t))
            num = den = 1
            for k in range(t):
                num *= 2 * k + 1
                den *= d + 2 * k
            assert welch_constant("R", d, t) == Fraction(num, den)


def test_welch_constant_rejects_bad_args():
    with pytest.raises(ValueError):
        welch_constant("R", 0, 2)
    with pytest.raises(ValueError):
        welch_constant("C", 2, 0)


def test_potential_orthonormal_basis():
    for d in (2, 3, 4):
        from orbitdesigns.orbits import LineSet

        X = LineSet(field="C", lines=np.eye(d, dtype=complex),
                    weights=np.full(d, 1.0 / d))
        assert abs(potential(X, 1) - 1.0 / d) < 1e-15


def test_potential_single_line():
    from orbitdesigns.orbits import LineSet

    X = LineSet(field="R", lines=np.array([[0.6, 0.8]]), weights=np.array([1.0]))
    for t in (1, 2, 5, 9):
        assert potential(X, t) == 1.0


def test_potential_four_line_union_at_t3():
    g = build_group("G(2,1,2)")
    U = union_lines(_orbit("B(2)", 1), _orbit("B(2)", 2),
                    (Fraction(1, 2), Fraction(1, 2)))
    c3 = welch_constant("R", 2, 3)
    assert c3 == Fraction(5, 16)
    assert abs(potential(U, 3) - float(c3)) <= 1e-15
    assert g.order == 8


def test_potential_rejects_bad_order():
    with pytest.raises(ValueError):
        potential(_orbit("B(2)", 1), 0)


def test_cross_potential_single_lines():
    from orbitdesigns.orbits import LineSet

    X = LineSet(field="R", lines=np.array([[1.0, 0.0]]), weights=np.array([1.0]))
    assert cross_potential(X, X, 4) == 1.0


def test_cross_potential_of_two_designs_hits_welch():
    # both dihedral(3) orbits are (2,2)-designs; their cross term must be c_2
    X = _orbit("dihedral(3)", 1)
    Y = _orbit("dihedral(3)", 2)
    c2 = float(welch_constant("R", 2, 2))
    assert abs(cross_potential(X, Y, 2) - c2) <= 1e-9 * c2


def test_cross_potential_seed_orbits_t1():
    X, Y = _orbit("B(2)", 1), _orbit("B(2)", 2)
    assert abs(cross_potential(X, Y, 1) - 0.5) <= 1e-12


def test_cross_potential_mismatch():
    with pytest.raises(MismatchError):
        cross_potential(_orbit("B(2)", 1), _orbit("B(3)", 1), 2)


def test_strength_of_binary_icosahedral_orbit():
    X = orbit_lines(build_group("binI"), np.array([3.0 + 1.0j, 1.0]))
    assert X.n_lines == 60
    assert strength(X).strength == 5


def test_strength_of_dihedral3_orbit():
    assert strength(_orbit("dihedral(3)", 1)).strength == 2


@pytest.mark.parametrize("label", ["A(3)", "B(4)", "binT", "H3", "heis(3)"])
def test_orbits_are_tight_frames(label):
    # any orbit of an irreducible group integrates t = 1 exactly
    for k in range(1, len(catalog_entry(label).seeds) + 1):
        assert strength(_orbit(label, k)).strength >= 1


def test_strength_report_shape_and_closure():
    rep = strength(_orbit("H3", 1), t_max=6)
    assert rep.t_values == (1, 2, 3, 4, 5, 6)
    assert len(rep.potentials) == len(rep.targets) == len(rep.residuals) == 6
    for t in range(1, rep.strength + 1):
        assert abs(rep.residual_at(t)) <= 1e-9
    assert abs(rep.residual_at(rep.strength + 1)) > 1e-9


def test_welch_lower_bound_on_positive_sets():
    for label, k in [("binT", 1), ("B(3)", 2), ("H3", 2), ("dihedral(5)", 1)]:
        X = _orbit(label, k)
        for t in range(1, 9):
            target = float(welch_constant(X.field, X.dim, t))
            assert potential(X, t) >= target - 1e-9


def test_potential_unitary_invariance():
    X = _orbit("H3", 1)
    rng = np.random.default_rng(7)
    M = rng.standard_normal((3, 3))
    Q, _ = np.linalg.qr(M)
    from orbitdesigns.orbits import LineSet, _canonicalize_rows
    from orbitdesigns import DEFAULT_TOL

    rotated = LineSet(field="R", lines=_canonicalize_rows(X.lines @ Q.T, DEFAULT_TOL),
                      weights=X.weights)
    for t in (1, 2, 3, 5):
        assert abs(potential(rotated, t) - potential(X, t)) <= 1e-10


def test_signed_union_reports_signed_strength():
    g = build_group("D(3)")
    X = orbit_lines(g, np.array([1.0, 1.0, 1.0]))
    Y = orbit_lines(g, np.array([1.0, 1.0, 0.0]))
    U = union_lines(X, Y, (Fraction(-3, 5), Fraction(8, 5)))
    rep = strength(U, t_max=4)
    assert rep.signed
    assert rep.strength >= 2


def test_double_to_antipodal_single_line():
    from orbitdesigns.orbits import LineSet

    X = LineSet(field="R", lines=np.array([[1.0, 0.0]]), weights=np.array([1.0]))
    aset = double_to_antipodal(X)
    assert aset.vectors.shape == (2, 2)
    assert np.allclose(aset.vectors[0], -aset.vectors[1])
    assert np.allclose(aset.weights, [0.5, 0.5])


def test_double_to_antipodal_rejects_complex():
    with pytest.raises(MismatchError):
        double_to_antipodal(_orbit("binT", 1))


def test_doubled_cross_is_spherical_seven_design():
    U = union_lines(_orbit("B(2)", 1), _orbit("B(2)", 2),
                    (Fraction(1, 2), Fraction(1, 2)))
    rep = strength(U, t_max=4)
    assert rep.strength == 3
    aset = double_to_antipodal(U, rep)
    assert aset.vectors.shape[0] == 8
    assert aset.spherical_order == 7
    check = antipodal_design_check(aset, 3)
    assert check["passes"]
    assert check["paired"]
    assert check["spherical_order"] == 7
    assert abs(check["even_residual"]) <= 1e-9
    assert abs(check["odd_moment"]) <= 1e-9


def test_antipodal_check_flags_unpaired_sets():
    U = union_lines(_orbit("B(2)", 1), _orbit("B(2)", 2),
                    (Fraction(1, 2), Fraction(1, 2)))
    aset = double_to_antipodal(U)
    broken = type(aset)(vectors=aset.vectors[:-1], weights=aset.weights[:-1])
    check = antipodal_design_check(broken, 3)
    assert not check["paired"]
    assert not check["passes"]
