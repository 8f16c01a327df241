from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from minsing.errors import InconsistentCalibration
from minsing.torus import (
    EXE,
    EXE_FORMS,
    HermitianRep,
    NSClass,
    TorusBase,
    calibrate_forms,
    evaluate,
    from_l_basis,
    hermitian_base,
    is_ample,
    is_nef,
    self_intersection,
    to_l_basis,
    weight_form,
)

coeff = st.integers(-6, 6)


def eig_min(cls):
    return float(np.linalg.eigvalsh(np.array(weight_form(EXE, cls).matrix, dtype=float)).min())


def reference_matrices(a):
    """Hermitian weight matrices of the Nakayama summands, as printed for parameter a."""
    return (
        ((4, -2), (-2, -2)),
        ((2 * a + 1, -(a + 2)), (-(a + 2), 2 * a + 1)),
        ((2 * a + 3, -a), (-a, 2 * a - 3)),
    )


class TestNefCone:
    def test_fibres_are_nef_not_ample(self):
        for cls in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            assert is_nef(EXE, cls) and not is_ample(EXE, cls)

    def test_sum_of_fibres_is_ample(self):
        assert is_ample(EXE, (1, 1, 0))

    def test_negative_class_is_not_nef(self):
        assert not is_nef(EXE, (-1, 0, 0))

    def test_self_intersection(self):
        assert self_intersection(EXE, (1, 1, 0)) == 2
        assert self_intersection(EXE, (1, 1, 1)) == 6
        assert self_intersection(EXE, (2, -4, 2)) == 2 * (-8 - 8 + 4)

    @given(coeff, coeff, coeff)
    def test_nef_matches_eigenvalues(self, a, b, c):
        lam = eig_min((a, b, c))
        assert is_nef(EXE, (a, b, c)) == (lam >= -1e-12)

    @given(coeff, coeff, coeff)
    def test_ample_matches_eigenvalues(self, a, b, c):
        lam = eig_min((a, b, c))
        assert is_ample(EXE, (a, b, c)) == (lam > 1e-12)

    @given(coeff, coeff, coeff)
    def test_self_intersection_is_twice_determinant(self, a, b, c):
        det = np.linalg.det(np.array(weight_form(EXE, (a, b, c)).matrix, dtype=float))
        assert self_intersection(EXE, (a, b, c)) == pytest.approx(2 * det, abs=1e-9)


class TestLBasis:
    @given(coeff, coeff, coeff)
    def test_round_trip(self, a, b, c):
        back = from_l_basis(to_l_basis((a, b, c)))
        assert tuple(float(x) for x in back) == pytest.approx((a, b, c), abs=1e-12)

    @given(coeff, coeff, coeff)
    def test_nef_is_lorentz_cone(self, a, b, c):
        x, y, z = (float(v) for v in to_l_basis((a, b, c)))
        lorentz = z >= 0 and z * z - x * x - y * y >= -1e-9
        assert lorentz == is_nef(EXE, (a, b, c))

    def test_exact_when_fibres_balanced(self):
        assert to_l_basis((1, 1, 1)) == (0, 0, 6)


class TestHermitianForms:
    @pytest.mark.parametrize("a", [2, 3, 5])
    def test_nakayama_matrices(self, a):
        classes = ((2, -4, 2), (a - 1, a - 1, a + 2), (a + 3, a - 3, a))
        for cls, mat in zip(classes, reference_matrices(a)):
            assert weight_form(EXE, cls).matrix == mat

    def test_calibration_recovers_basis_forms(self):
        a = 2
        classes = ((2, -4, 2), (a - 1, a - 1, a + 2), (a + 3, a - 3, a))
        assert calibrate_forms(list(zip(classes, reference_matrices(a)))) == EXE_FORMS

    def test_calibration_checks_extra_pairs(self):
        classes = ((2, -4, 2), (1, 1, 4), (5, -1, 2), (1, 0, 0))
        mats = list(reference_matrices(2)) + [((2, 0), (0, 0))]
        with pytest.raises(InconsistentCalibration):
            calibrate_forms(list(zip(classes, mats)))

    def test_calibration_needs_spanning_classes(self):
        with pytest.raises(InconsistentCalibration):
            calibrate_forms([((1, 0, 0), ((1, 0), (0, 0))), ((2, 0, 0), ((2, 0), (0, 0)))])

    def test_evaluate_is_quadratic_form(self):
        rep = HermitianRep(((2, 1j), (-1j, 3)))
        z = (1 + 1j, 2)
        H = np.array(rep.matrix, dtype=complex)
        zz = np.array(z, dtype=complex)
        assert evaluate(rep, z) == pytest.approx((zz @ H @ zz.conj()).real)

    def test_hermitian_base_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_base([((1, 2), (3, 1))])

    def test_hermitian_base_psd_test(self):
        base = hermitian_base([((1, 1j), (-1j, 1)), ((1, 0), (0, 0))])
        assert is_nef(base, (1, 0)) and not is_ample(base, (1, 0))
        assert is_ample(base, (1, 1))
        assert not is_nef(base, (-1, 0))

    def test_three_dimensional_base_uses_numeric_psd(self):
        base = TorusBase("hermitian", 3, (tuple(tuple(1 if i == j else 0 for j in range(3)) for i in range(3)),))
        assert is_ample(base, (Fraction(1, 2),)) and not is_nef(base, (-1,))

    def test_class_arithmetic(self):
        a, b = NSClass((1, 2, 3)), NSClass((Fraction(1, 2), 0, 1))
        assert (a - b).coeffs == (Fraction(1, 2), 2, 2)
        assert (2 * b).coeffs == (1, 0, 2)
        assert b.exact and not NSClass((0.5, 0, 0)).exact
