import math

import numpy as np
import pytest

from chwedge.bank import (
    BankParams,
    basis_filter,
    build_bank,
    gamma_coeff,
    hermite_kernel,
    isotropy_metric,
    rho_norm,
    separable_kernel_2d,
)

STD = BankParams(3.0, 12, 6)


class TestParams:
    def test_size_is_odd(self):
        assert STD.size == 25

    @pytest.mark.parametrize(
        "scale,half_width,max_order",
        [(0.0, 12, 6), (-1.0, 12, 6), (3.0, 0, 6), (3.0, 12, -1), (math.nan, 12, 6)],
    )
    def test_rejects_bad_params(self, scale, half_width, max_order):
        with pytest.raises(ValueError):
            BankParams(scale, half_width, max_order)


class TestGamma:
    def test_identity_order_zero(self):
        assert gamma_coeff(0, 0) == 1 + 0j

    def test_first_order(self):
        assert gamma_coeff(1, 0) == 0 + 1j

    def test_l4_k2(self):
        # direct evaluation: C(4,2) = 6 and i^2 = -1
        assert gamma_coeff(4, 2) == -6 + 0j

    @pytest.mark.parametrize("l,k", [(2, -1), (2, 3), (0, 1)])
    def test_rejects_out_of_range(self, l, k):
        with pytest.raises(ValueError):
            gamma_coeff(l, k)

    def test_values_are_four_phase_binomials(self):
        for l in range(7):
            for k in range(l + 1):
                g = gamma_coeff(l, k)
                b = math.comb(l, k)
                assert g in (b + 0j, -b + 0j, 1j * b, -1j * b)

    def test_row_magnitudes_sum_to_power_of_two(self):
        for l in range(7):
            total = sum(abs(gamma_coeff(l, k)) for k in range(l + 1))
            assert total == 2**l


class TestHermiteKernel:
    def test_gaussian_center_is_one(self):
        for scale in (1.0, 3.0, 5.5):
            h = hermite_kernel(0, BankParams(scale, 12, 6))
            assert h[12] == 1.0

    def test_odd_antisymmetry(self):
        h = hermite_kernel(1, STD)
        assert h[12 - 3] == -h[12 + 3]

    def test_k2_sample_value(self):
        h = hermite_kernel(2, STD)
        assert abs(h[12 + 3]) == pytest.approx(9.0 * math.exp(-0.5), rel=1e-12)

    def test_parity(self):
        for k in range(7):
            h = hermite_kernel(k, STD)
            sign = 1.0 if k % 2 == 0 else -1.0
            assert np.array_equal(h[::-1], sign * h)

    @pytest.mark.parametrize("k", [-1, 7])
    def test_rejects_out_of_range(self, k):
        with pytest.raises(ValueError):
            hermite_kernel(k, STD)


class TestBasisFilter:
    def test_center_notch(self):
        assert basis_filter(0, STD).value_at(0, 0) == 1 + 0j
        for l in range(1, 7):
            assert basis_filter(l, STD).value_at(0, 0) == 0 + 0j

    def test_sample_value_l1(self):
        f = basis_filter(1, STD)
        assert f.value_at(1, 0) == pytest.approx(math.exp(-1.0 / 18.0), rel=1e-12)
        assert f.value_at(1, 0).imag == 0.0

    def test_grid_sum_vanishes_except_fourfold_orders(self):
        # a quarter turn maps the square grid onto itself and multiplies the
        # kernel by i^l, so the grid sum must vanish whenever i^l != 1; for
        # l = 4 the window truncation leaves a real dc residue
        for l in (1, 2, 3, 5, 6):
            vals = basis_filter(l, STD).values
            assert abs(vals.sum()) < 1e-12 * np.abs(vals).max()

    def test_fourfold_order_dc_residue(self):
        vals = basis_filter(4, STD).values
        m = np.arange(-12, 13, dtype=float)
        w = np.exp(-(m**2) / 18.0)
        expect = 2 * (m**4 * w).sum() * w.sum() - 6 * ((m**2 * w).sum()) ** 2
        assert vals.sum() == pytest.approx(expect, rel=1e-12)
        assert vals.sum().real == pytest.approx(-70.926077, abs=1e-5)
        # the residue is a truncation artifact: a wider window kills it
        wide = basis_filter(4, BankParams(3.0, 20, 6)).values
        assert abs(wide.sum()) < 1e-3

    def test_conjugate_reflection_symmetry(self):
        for l in range(7):
            f = basis_filter(l, STD)
            k = f.half_width
            flipped = f.values[::-1, ::-1]
            assert np.allclose(flipped, (-1.0) ** l * f.values, rtol=0, atol=1e-13 * np.abs(f.values).max())
            assert f.value_at(-2, -5) == pytest.approx((-1.0) ** l * f.value_at(2, 5), abs=1e-12)
            assert k == 12

    def test_separable_reconstruction_identity(self):
        bank = build_bank(STD)
        for l in range(7):
            dense = basis_filter(l, STD).values
            rebuilt = separable_kernel_2d(bank, l)
            err = np.abs(rebuilt - dense).max() / np.abs(dense).max()
            assert err < 1e-12


class TestRho:
    def test_positive(self):
        for l in range(7):
            assert rho_norm(l, STD) > 0

    def test_rho0_matches_independent_sum_and_continuum(self):
        # independent double loop over the grid
        acc = 0.0
        for my in range(-12, 13):
            for mx in range(-12, 13):
                acc += math.exp(-(mx * mx + my * my) / 9.0)
        r0 = rho_norm(0, STD)
        assert r0 == pytest.approx(acc, rel=1e-12)
        assert r0 == pytest.approx(9.0 * math.pi, abs=0.01)

    def test_rho_equals_separable_energy(self):
        bank = build_bank(STD)
        for l in range(7):
            sep = separable_kernel_2d(bank, l)
            assert np.sum(np.abs(sep) ** 2) == pytest.approx(bank.rho[l], rel=1e-12)


class TestBuildBank:
    def test_standard_shapes(self):
        bank = build_bank(STD)
        assert len(bank.hermite) == 7
        assert all(len(h) == 25 for h in bank.hermite)
        assert sum(len(row) for row in bank.gamma) == 28
        assert len(bank.rho) == 7

    def test_minimal_bank(self):
        bank = build_bank(BankParams(1.0, 1, 0))
        assert len(bank.hermite) == 1
        assert len(bank.hermite[0]) == 3


class TestIsotropy:
    def test_gaussian_is_isotropic(self):
        assert isotropy_metric(0, STD) < 0.01

    def test_l6_within_regression_bound(self):
        assert isotropy_metric(6, STD) < 0.05

    def test_truncation_degrades_isotropy(self):
        small = isotropy_metric(6, BankParams(3.0, 3, 6))
        assert small > isotropy_metric(6, STD)

    def test_rejects_small_dft(self):
        with pytest.raises(ValueError):
            isotropy_metric(0, STD, dft_size=47)
