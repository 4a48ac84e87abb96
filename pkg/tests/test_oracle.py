import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entswap.amplitudes import BellKind, DimensionlessPoint, envelope_j
from entswap.kinematics import AtomGeometry, Direction, PhotonMode, Polarization, fig1_preset
from entswap.oracle import (bell_components, compare_to_closed_form, emission_matrix_element,
                            oracle_amplitudes, time_integral_f, time_integral_f_quadrature,
                            time_integral_g, time_integral_g_quadrature)

SQRT2 = math.sqrt(2.0)

# frozen 50-digit quadrature values of the ordered integral, chosen to cover
# the branch lines a = 0, b = 0, a + b = 0 and generic oscillatory cases
ORDERED_INTEGRAL_REFERENCE = [
    ((2.0, 0.0, 1.0), 0.10061200427606 + 0.43539777497999j),
    ((0.0, 0.0, 3.0), 4.5 + 0.0j),
    ((2.0, 0.0, 5.0), -1.8198206594925 + 1.9616735449688j),
    ((-3.0, 3.0, 2.0), 0.0044255237055149 - 0.69771283313321j),
    ((10.0, -10.0, 20.0), 0.0051281232499299 + 2.0087329729721j),
    ((0.5, -0.5, 4.0), 5.6645873461886 + 4.3628102926973j),
    ((1e-5, 2.0, 3.0), 0.0099327830527779 + 1.5698463237845j),
    ((7.0, 3.0, 0.1), 0.004125265389371 + 0.0026279998986745j),
    ((10.0, 10.0, 20.0), 0.0024983584432827 - 0.0044783761739441j),
]


def random_direction(rng) -> Direction:
    return Direction(theta=math.acos(rng.uniform(-1.0, 1.0)),
                     phi=rng.uniform(0.0, 2.0 * math.pi))


def direction_with_y(y: float) -> Direction:
    """Equatorial direction whose y-component is exactly asin-constructed."""
    return Direction(theta=math.pi / 2.0, phi=math.asin(y))


class TestBellComponents:
    @pytest.mark.parametrize("bell", list(BellKind))
    def test_four_components_with_root_half_coefficients(self, bell):
        comps = bell_components(bell, *fig1_preset())
        assert len(comps) == 4
        assert all(abs(abs(c.coefficient) - 1.0 / SQRT2) < 1e-15 for c in comps)

    def test_psi_plus_all_coefficients_positive(self):
        comps = bell_components(BellKind.PSI_PLUS, *fig1_preset())
        assert all(c.coefficient.real > 0 for c in comps)

    @pytest.mark.parametrize("bell", [BellKind.PSI_MINUS, BellKind.PHI_MINUS])
    def test_minus_states_have_two_negative_coefficients(self, bell):
        comps = bell_components(bell, *fig1_preset())
        signs = sorted(c.coefficient.real > 0 for c in comps)
        assert signs == [False, False, True, True]

    def test_psi_pairs_opposite_polarizations(self):
        dk = Direction(0.3, 0.4)
        dk2 = Direction(1.3, 2.4)
        for c in bell_components(BellKind.PSI_PLUS, dk, dk2):
            assert c.photon1.polarization is not c.photon2.polarization
            assert {c.photon1.direction, c.photon2.direction} == {dk, dk2}

    def test_phi_pairs_equal_polarizations(self):
        dk = Direction(0.3, 0.4)
        dk2 = Direction(1.3, 2.4)
        for c in bell_components(BellKind.PHI_PLUS, dk, dk2):
            assert c.photon1.polarization is c.photon2.polarization
            assert {c.photon1.direction, c.photon2.direction} == {dk, dk2}


class TestEmissionMatrixElement:
    def test_atom_at_origin_gives_bare_coupling(self):
        mode = PhotonMode(Direction(math.pi / 2, 0.0), Polarization.UP)
        value = emission_matrix_element(mode, np.zeros(3))
        assert value == pytest.approx(1.0 / SQRT2)

    def test_no_emission_along_dipole_axis(self):
        mode = PhotonMode(Direction(0.0, 0.0), Polarization.DOWN)
        value = emission_matrix_element(mode, np.array([0.0, 4.0, 0.0]))
        assert abs(value) < 1e-15

    def test_position_phase_convention(self):
        # k_hat y-component 1/sqrt2, atom at -(z/2) y_hat with z = sqrt2 pi:
        # k . x = -pi/2, so the e^{-i k.x} convention gives coupling * e^{i pi/2}
        mode = PhotonMode(Direction(math.pi / 4, math.pi / 2), Polarization.UP)
        position = AtomGeometry(z=SQRT2 * math.pi).position_a
        value = emission_matrix_element(mode, position)
        assert value == pytest.approx(0.5j, abs=1e-12)

    def test_phase_has_unit_magnitude(self):
        mode = PhotonMode(Direction(1.0, 2.0), Polarization.DOWN)
        bare = emission_matrix_element(mode, np.zeros(3))
        shifted = emission_matrix_element(mode, np.array([0.3, -1.7, 2.9]))
        assert abs(shifted) == pytest.approx(abs(bare), rel=1e-14)


class TestFactorizedTimeIntegral:
    def test_on_shell_square(self):
        assert time_integral_g(0.0, 0.0, 3.0) == pytest.approx(9.0)

    def test_full_period_oscillation_cancels(self):
        u = 2.0
        assert abs(time_integral_g(2.0 * math.pi / u, 0.0, u)) < 1e-12 * u * u

    @pytest.mark.parametrize("d1,d2,u", [(0.7, -1.3, 4.0), (3.0, 3.0, 2.5), (1e-8, 5.0, 10.0)])
    def test_matches_quadrature(self, d1, d2, u):
        analytic = time_integral_g(d1, d2, u)
        numeric = time_integral_g_quadrature(d1, d2, u)
        assert abs(analytic - numeric) <= 1e-10 * max(abs(numeric), 1.0)

    def test_rejects_nonpositive_u(self):
        with pytest.raises(ValueError):
            time_integral_g(0.0, 0.0, 0.0)


class TestOrderedTimeIntegral:
    def test_simplex_volume_at_zero_rates(self):
        assert time_integral_f(0.0, 0.0, 3.0) == pytest.approx(4.5)

    def test_on_shell_magnitude_is_quarter_envelope(self):
        value = time_integral_f(2.0, 0.0, 1.0)
        assert abs(value) == pytest.approx(0.44687, abs=1e-4)
        assert abs(value) == pytest.approx(0.44687134374669, rel=1e-11)

    @pytest.mark.parametrize("args,expected", ORDERED_INTEGRAL_REFERENCE)
    def test_reference_values(self, args, expected):
        assert time_integral_f(*args) == pytest.approx(expected, rel=1e-10)

    @given(u=st.floats(min_value=0.05, max_value=30.0))
    def test_on_shell_magnitude_tracks_envelope(self, u):
        assert 4.0 * abs(time_integral_f(2.0, 0.0, u)) == pytest.approx(
            u * u * envelope_j(u), rel=1e-10)

    def test_series_branch_agrees_with_direct_formula(self):
        # just inside the series region (|b*u| < 1e-3) the direct expression
        # is still accurate enough to cross-check the expansion
        import cmath

        def direct(a, b, u):
            phi1 = lambda x: (cmath.exp(x) - 1.0) / x
            return u * (phi1(1j * (a + b) * u) - phi1(1j * a * u)) / (1j * b)

        u = 2.0
        for a in (2.0, -7.5, 0.3):
            b = 0.9e-3 / u
            assert time_integral_f(a, b, u) == pytest.approx(direct(a, b, u), rel=1e-9)

    def test_series_branch_agrees_with_quadrature(self):
        for a, b, u in ((2.0, 4e-4, 2.0), (-3.0, -2e-4, 1.0)):
            analytic = time_integral_f(a, b, u)
            numeric = time_integral_f_quadrature(a, b, u)
            assert abs(analytic - numeric) <= 1e-9 * abs(numeric)

    @settings(deadline=None, max_examples=20)
    @given(a=st.floats(min_value=-10.0, max_value=10.0),
           b=st.floats(min_value=-10.0, max_value=10.0),
           u=st.floats(min_value=0.1, max_value=20.0))
    def test_matches_adaptive_quadrature(self, a, b, u):
        analytic = time_integral_f(a, b, u)
        numeric = time_integral_f_quadrature(a, b, u)
        assert abs(analytic - numeric) <= 1e-8 * max(abs(numeric), 1e-8 * u * u)

    @pytest.mark.parametrize("a,b", [(0.0, 5.0), (5.0, 0.0), (5.0, -5.0), (1e-9, -1e-9)])
    def test_branch_lines_match_quadrature(self, a, b):
        u = 7.0
        analytic = time_integral_f(a, b, u)
        numeric = time_integral_f_quadrature(a, b, u)
        assert abs(analytic - numeric) <= 1e-8 * max(abs(numeric), 1e-8 * u * u)

    def test_rejects_nonpositive_u(self):
        with pytest.raises(ValueError):
            time_integral_f(2.0, 0.0, -1.0)


class TestOracleAmplitudes:
    def test_ratio_matches_closed_form_on_grid(self):
        rng = np.random.default_rng(7)
        pairs = [fig1_preset()] + [(random_direction(rng), random_direction(rng))
                                   for _ in range(4)]
        for z in (1.0, 5.0, 10.0):
            for u in (0.5, 1.0, 2.0, 5.0, 10.0):
                point = DimensionlessPoint(z=z, u=u)
                for dk, dk2 in pairs:
                    report = compare_to_closed_form(point, dk, dk2, BellKind.PSI_PLUS)
                    assert report.status == "ok"
                    assert report.ratio_rel_error < 1e-9

    def test_short_time_ratio_approaches_half_envelope_limit(self):
        point = DimensionlessPoint(z=1.0, u=1e-6)
        dk, dk2 = fig1_preset()
        pair = oracle_amplitudes(point, dk, dk2, BellKind.PSI_PLUS)
        expected = (envelope_j(point.u) / 2.0) * math.cos(point.z / SQRT2)
        assert abs(pair.f / pair.g) == pytest.approx(abs(expected), rel=1e-9)

    def test_minus_channels_cancel_for_random_geometries(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            point = DimensionlessPoint(z=rng.uniform(0.1, 20.0), u=rng.uniform(0.1, 10.0))
            dk, dk2 = random_direction(rng), random_direction(rng)
            for bell in (BellKind.PSI_MINUS, BellKind.PHI_MINUS):
                pair = oracle_amplitudes(point, dk, dk2, bell)
                bound = 1e-12 * max(1.0, point.u ** 2)
                assert abs(pair.f) < bound and abs(pair.g) < bound

    def test_phi_plus_shares_magnitudes_with_psi_plus(self):
        point = DimensionlessPoint(z=4.0, u=1.5)
        dk, dk2 = Direction(0.7, 1.1), Direction(1.9, 4.0)
        psi = oracle_amplitudes(point, dk, dk2, BellKind.PSI_PLUS)
        phi = oracle_amplitudes(point, dk, dk2, BellKind.PHI_PLUS)
        assert abs(phi.f) == pytest.approx(abs(psi.f), rel=1e-12)
        assert abs(phi.g) == pytest.approx(abs(psi.g), rel=1e-12)

    def test_swap_of_detected_directions_is_a_symmetry(self):
        point = DimensionlessPoint(z=3.0, u=0.8)
        dk, dk2 = Direction(0.6, 2.0), Direction(2.1, 5.1)
        forward = oracle_amplitudes(point, dk, dk2, BellKind.PSI_PLUS)
        swapped = oracle_amplitudes(point, dk2, dk, BellKind.PSI_PLUS)
        assert abs(swapped.f) == pytest.approx(abs(forward.f), rel=1e-12)
        assert abs(swapped.g) == pytest.approx(abs(forward.g), rel=1e-12)

    def test_f_depends_on_positions_only_through_h_plus(self):
        # shifting the y-components oppositely preserves h+ and must leave |f|
        # untouched while h- (hence |g|) changes
        z, u = 4.0, 1.2
        point = DimensionlessPoint(z=z, u=u)
        epsilon = 0.07
        base = oracle_amplitudes(point, direction_with_y(0.3), direction_with_y(0.55),
                                 BellKind.PSI_PLUS)
        tilted = oracle_amplitudes(point, direction_with_y(0.3 + epsilon),
                                   direction_with_y(0.55 - epsilon), BellKind.PSI_PLUS)
        assert abs(tilted.f) == pytest.approx(abs(base.f), rel=1e-12)
        assert abs(abs(tilted.g) - abs(base.g)) > 1e-3 * abs(base.g)

    def test_g_depends_on_positions_only_through_h_minus(self):
        z, u = 4.0, 1.2
        point = DimensionlessPoint(z=z, u=u)
        epsilon = 0.07
        base = oracle_amplitudes(point, direction_with_y(0.3), direction_with_y(0.55),
                                 BellKind.PSI_PLUS)
        tilted = oracle_amplitudes(point, direction_with_y(0.3 + epsilon),
                                   direction_with_y(0.55 + epsilon), BellKind.PSI_PLUS)
        assert abs(tilted.g) == pytest.approx(abs(base.g), rel=1e-12)
        assert abs(abs(tilted.f) - abs(base.f)) > 1e-3 * abs(base.f)

    def test_g_scales_exactly_with_square_of_time(self):
        dk, dk2 = Direction(0.7, 1.1), Direction(1.9, 4.0)
        z = 2.0
        g1 = abs(oracle_amplitudes(DimensionlessPoint(z, 1.0), dk, dk2, BellKind.PSI_PLUS).g)
        g3 = abs(oracle_amplitudes(DimensionlessPoint(z, 3.0), dk, dk2, BellKind.PSI_PLUS).g)
        assert g3 == pytest.approx(9.0 * g1, rel=1e-12)

    def test_f_scales_with_square_of_time_times_envelope(self):
        dk, dk2 = Direction(0.7, 1.1), Direction(1.9, 4.0)
        z = 2.0
        f1 = abs(oracle_amplitudes(DimensionlessPoint(z, 1.0), dk, dk2, BellKind.PSI_PLUS).f)
        f3 = abs(oracle_amplitudes(DimensionlessPoint(z, 3.0), dk, dk2, BellKind.PSI_PLUS).f)
        expected = (9.0 * envelope_j(3.0)) / envelope_j(1.0)
        assert f3 / f1 == pytest.approx(expected, rel=1e-10)

    def test_amplitudes_scale_linearly_with_sin_theta(self):
        # same y-components, so identical h+/-, but one direction with
        # sin(theta) = 0.8 instead of 1: both channels must scale by 0.8,
        # confirming the coupling product enters the closed forms exactly once
        point = DimensionlessPoint(z=3.0, u=1.0)
        partner = direction_with_y(0.3)
        full = oracle_amplitudes(point, direction_with_y(0.4), partner, BellKind.PSI_PLUS)
        tilted_first = Direction(theta=math.asin(0.8), phi=math.asin(0.5))
        assert tilted_first.y_component == pytest.approx(0.4, rel=1e-15)
        tilted = oracle_amplitudes(point, tilted_first, partner, BellKind.PSI_PLUS)
        assert abs(tilted.g) == pytest.approx(0.8 * abs(full.g), rel=1e-12)
        assert abs(tilted.f) == pytest.approx(0.8 * abs(full.f), rel=1e-12)


class TestComparisonReports:
    def test_generic_point_is_ok(self):
        report = compare_to_closed_form(DimensionlessPoint(z=2.0, u=1.0), *fig1_preset(),
                                        bell=BellKind.PSI_PLUS)
        assert report.status == "ok"
        assert report.ratio_rel_error < 1e-9

    def test_minus_states_report_zero_zero(self):
        report = compare_to_closed_form(DimensionlessPoint(z=2.0, u=1.0), *fig1_preset(),
                                        bell=BellKind.PHI_MINUS)
        assert report.status == "zero_zero"

    def test_cos_plus_zero_is_inconclusive_with_tiny_ratio(self):
        # z = sqrt2 pi/2 puts the h+ cosine at zero for the reference geometry
        report = compare_to_closed_form(DimensionlessPoint(z=SQRT2 * math.pi / 2.0, u=1.0),
                                        *fig1_preset(), bell=BellKind.PSI_PLUS)
        assert report.status == "inconclusive"
        assert report.oracle_ratio < 1e-12

    def test_cos_minus_zero_is_inconclusive_with_tiny_inverse_ratio(self):
        dk = direction_with_y(0.75)
        dk2 = direction_with_y(-0.25)   # h+ = 0.5, h- = 1.0; z = pi zeroes cos-
        report = compare_to_closed_form(DimensionlessPoint(z=math.pi, u=1.0), dk, dk2,
                                        bell=BellKind.PSI_PLUS)
        assert report.status == "inconclusive"
        assert report.oracle_ratio < 1e-12
