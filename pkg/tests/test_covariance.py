import math

import numpy as np
import pytest

from cvdiscord.covariance import (
    StandardForm,
    TwoModeCovariance,
    UnitConvention,
    convert_units,
    covariance_from_json,
    covariance_to_json,
    entropy_h,
    random_standard_form,
    standard_form,
    symplectic_data,
    symplectic_eigenvalues,
)
from cvdiscord.errors import (
    ComplexEigenvalueError,
    EntropyDomainError,
    NonPositiveDiagonalError,
    NonSymmetricError,
    NotLocallyReducibleError,
)

from conftest import pure_tmsv

SQ3_HALF = math.sqrt(3.0) / 2.0


def local_rotation(theta_a: float, theta_b: float) -> np.ndarray:
    rot = np.eye(4)
    for offset, theta in ((0, theta_a), (2, theta_b)):
        c, s = math.cos(theta), math.sin(theta)
        rot[offset : offset + 2, offset : offset + 2] = [[c, s], [-s, c]]
    return rot


class TestTwoModeCovariance:
    def test_rejects_asymmetric(self):
        bad = np.eye(4)
        bad[0, 1] = 1e-6
        with pytest.raises(NonSymmetricError):
            TwoModeCovariance(bad)

    def test_rejects_nonpositive_diagonal(self):
        with pytest.raises(NonPositiveDiagonalError):
            TwoModeCovariance(np.diag([1.0, 1.0, 0.0, 1.0]))

    def test_entries_read_only(self, vacuum):
        cov = vacuum.to_covariance()
        with pytest.raises(ValueError):
            cov.entries[0, 0] = 2.0

    def test_json_round_trip(self, tmsv):
        cov = tmsv.to_covariance()
        text = covariance_to_json(cov, UnitConvention.SNL)
        restored, units = covariance_from_json(text)
        assert units == UnitConvention.SNL
        np.testing.assert_allclose(restored.entries, cov.entries, rtol=0, atol=0)

    def test_json_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="16"):
            covariance_from_json('{"entries": [1, 2, 3], "units": "snl"}')


class TestConvertUnits:
    def test_snl_vacuum_to_half(self):
        snl_vacuum = TwoModeCovariance(np.eye(4))
        half = convert_units(snl_vacuum, UnitConvention.SNL, UnitConvention.HALF)
        np.testing.assert_allclose(half.entries, 0.5 * np.eye(4))

    def test_round_trip_identity(self, tmsv):
        cov = tmsv.to_covariance()
        back = convert_units(
            convert_units(cov, UnitConvention.HALF, UnitConvention.SNL),
            UnitConvention.SNL,
            UnitConvention.HALF,
        )
        np.testing.assert_allclose(back.entries, cov.entries, rtol=0, atol=0)

    def test_same_units_is_identity(self, tmsv):
        cov = tmsv.to_covariance()
        assert convert_units(cov, UnitConvention.HALF, UnitConvention.HALF) is cov


class TestStandardFormType:
    def test_clamps_marginal_n(self):
        sf = StandardForm(0.5 - 1e-10, 0.5, 0.0, 0.0)
        assert sf.n == 0.5

    def test_rejects_low_n(self):
        with pytest.raises(ValueError, match="n ="):
            StandardForm(0.4, 0.5, 0.0, 0.0)

    def test_rejects_negative_c(self):
        with pytest.raises(ValueError, match="c1"):
            StandardForm(1.0, 1.0, -0.2, 0.0)

    def test_swapped(self):
        sf = StandardForm(1.2, 0.8, 0.5, 0.3)
        swapped = sf.swapped()
        assert (swapped.n, swapped.m, swapped.c1, swapped.c2) == (0.8, 1.2, 0.5, 0.3)


class TestStandardFormReduction:
    def test_vacuum(self):
        sf = standard_form(TwoModeCovariance(0.5 * np.eye(4)))
        assert (sf.n, sf.m, sf.c1, sf.c2) == (0.5, 0.5, 0.0, 0.0)

    def test_pure_tmsv(self):
        entries = np.diag([1.0, 1.0, 1.0, 1.0])
        entries[0, 2] = entries[2, 0] = SQ3_HALF
        entries[1, 3] = entries[3, 1] = -SQ3_HALF
        sf = standard_form(TwoModeCovariance(entries))
        assert sf.n == pytest.approx(1.0, abs=1e-12)
        assert sf.m == pytest.approx(1.0, abs=1e-12)
        assert sf.c1 == pytest.approx(0.8660254, abs=1e-7)
        assert sf.c2 == pytest.approx(0.8660254, abs=1e-7)

    def test_quarter_turn_of_mode_a_is_invisible(self, tmsv):
        cov = tmsv.to_covariance()
        rot = local_rotation(math.pi / 2.0, 0.0)
        reduced = standard_form(TwoModeCovariance(rot @ cov.entries @ rot.T))
        assert reduced.n == pytest.approx(tmsv.n, abs=1e-12)
        assert reduced.m == pytest.approx(tmsv.m, abs=1e-12)
        assert reduced.c1 == pytest.approx(tmsv.c1, abs=1e-12)
        assert reduced.c2 == pytest.approx(tmsv.c2, abs=1e-12)

    def test_embed_reduce_round_trip(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            sf = random_standard_form(rng)
            back = standard_form(sf.to_covariance())
            assert back.n == pytest.approx(sf.n, abs=1e-12)
            assert back.m == pytest.approx(sf.m, abs=1e-12)
            assert back.c1 == pytest.approx(sf.c1, abs=1e-12)
            assert back.c2 == pytest.approx(sf.c2, abs=1e-12)

    def test_round_trip_keeps_c2_larger_than_c1(self):
        # the already-diagonal path must not reorder the correlations
        sf = StandardForm(1.1, 1.3, 0.2, 0.6)
        back = standard_form(sf.to_covariance())
        assert (back.c1, back.c2) == pytest.approx((0.2, 0.6), abs=1e-15)

    def test_invariants_survive_local_rotations(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            sf = random_standard_form(rng)
            sd = symplectic_data(sf)
            rot = local_rotation(rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi))
            rotated = TwoModeCovariance(rot @ sf.to_covariance().entries @ rot.T)
            sd_rot = symplectic_data(standard_form(rotated))
            assert sd_rot.i1 == pytest.approx(sd.i1, abs=1e-9)
            assert sd_rot.i2 == pytest.approx(sd.i2, abs=1e-9)
            assert sd_rot.i3 == pytest.approx(sd.i3, abs=1e-9)
            assert sd_rot.i4 == pytest.approx(sd.i4, abs=1e-9)

    def test_reduction_matches_input_invariants(self):
        # contract: the reduced values reproduce the input's invariants
        rng = np.random.default_rng(16)
        for _ in range(25):
            sf = random_standard_form(rng)
            rot = local_rotation(rng.uniform(0, math.pi), rng.uniform(0, math.pi))
            rotated = TwoModeCovariance(rot @ sf.to_covariance().entries @ rot.T)
            reduced = standard_form(rotated)
            d_plus, d_minus = symplectic_eigenvalues(rotated)
            sd = symplectic_data(reduced)
            assert sd.d_plus == pytest.approx(d_plus, abs=1e-10)
            assert sd.d_minus == pytest.approx(d_minus, abs=1e-10)

    def test_rejects_squeezed_sub_block(self):
        with pytest.raises(NotLocallyReducibleError, match="mode A"):
            standard_form(TwoModeCovariance(np.diag([1.0, 2.0, 1.0, 1.0])))

    def test_rejects_positively_correlated_phases(self):
        entries = np.eye(4)
        entries[0, 2] = entries[2, 0] = 0.3
        entries[1, 3] = entries[3, 1] = 0.3
        with pytest.raises(NotLocallyReducibleError, match="positive determinant"):
            standard_form(TwoModeCovariance(entries))


class TestSymplecticData:
    def test_vacuum(self, vacuum):
        sd = symplectic_data(vacuum)
        assert (sd.i1, sd.i2, sd.i3, sd.i4) == (0.25, 0.25, 0.0, 0.0625)
        assert sd.d_plus == sd.d_minus == 0.5
        assert sd.physical

    def test_pure_tmsv_eigenvalues(self, tmsv):
        sd = symplectic_data(tmsv)
        assert sd.d_plus == pytest.approx(0.5, abs=1e-12)
        assert sd.d_minus == pytest.approx(0.5, abs=1e-12)
        assert sd.physical

    def test_overcorrelated_is_unphysical(self):
        sd = symplectic_data(StandardForm(1.0, 1.0, 0.9, 0.9))
        assert sd.d_minus == pytest.approx(math.sqrt(0.19), abs=1e-12)
        assert not sd.physical

    def test_i3_is_signed(self, tmsv):
        sd = symplectic_data(tmsv)
        assert sd.i3 == pytest.approx(-tmsv.c1 * tmsv.c2, abs=1e-15)

    def test_complex_eigenvalue_error(self):
        with pytest.raises(ComplexEigenvalueError):
            symplectic_data(StandardForm(2.0, 0.5, 1.3, 1.3))

    def test_eigenvalue_identities(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            sd = symplectic_data(random_standard_form(rng))
            assert sd.d_plus * sd.d_minus == pytest.approx(
                math.sqrt(sd.i4), abs=1e-10
            )
            assert sd.d_plus**2 + sd.d_minus**2 == pytest.approx(
                sd.delta, abs=1e-10
            )
            assert sd.d_plus >= sd.d_minus > 0.0

    def test_matches_general_eigensolver(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            sf = random_standard_form(rng)
            sd = symplectic_data(sf)
            d_plus, d_minus = symplectic_eigenvalues(sf.to_covariance())
            assert sd.d_plus == pytest.approx(d_plus, abs=1e-9)
            assert sd.d_minus == pytest.approx(d_minus, abs=1e-9)

    def test_swapped_exchanges_modes(self):
        sd = symplectic_data(StandardForm(1.5, 0.9, 0.4, 0.2))
        swapped = sd.swapped()
        assert (swapped.i1, swapped.i2) == (sd.i2, sd.i1)
        assert (swapped.i3, swapped.i4) == (sd.i3, sd.i4)
        assert (swapped.d_plus, swapped.d_minus) == (sd.d_plus, sd.d_minus)


class TestEntropy:
    def test_vacuum_floor_is_exactly_zero(self):
        assert entropy_h(0.5) == 0.0

    def test_unit_value(self):
        expected = 1.5 * math.log2(1.5) + 0.5
        assert entropy_h(1.0) == pytest.approx(expected, abs=1e-12)

    def test_three_halves(self):
        assert entropy_h(1.5) == pytest.approx(2.0, abs=1e-12)

    def test_clamps_marginal_argument(self):
        assert entropy_h(0.5 - 1e-10) == 0.0

    def test_domain_error(self):
        with pytest.raises(EntropyDomainError):
            entropy_h(0.5 - 1e-8)

    def test_monotone(self):
        rng = np.random.default_rng(9)
        xs = np.sort(rng.uniform(0.5, 100.0, size=200))
        values = [entropy_h(x) for x in xs]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestRandomStates:
    def test_always_physical(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            assert symplectic_data(random_standard_form(rng)).physical

    def test_pure_states_have_half_eigenvalues(self):
        for n in (0.6, 1.0, 1.7, 3.0):
            sd = symplectic_data(pure_tmsv(n))
            assert sd.d_plus == pytest.approx(0.5, abs=1e-9)
            assert sd.d_minus == pytest.approx(0.5, abs=1e-9)
