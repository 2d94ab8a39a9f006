import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goluzin_lab.catalog import resolve_map
from goluzin_lab.errors import BranchAmbiguityError, BranchCutError, PoleError
from goluzin_lab.maps import (
    BranchTracker,
    BridgeMaps,
    eta,
    eta_inv,
    loop_sign_flip,
    marched_sqrt_path,
    phi_from_psi,
    sigma,
    sigma_prime,
    sqrt_continued,
    tau,
    tau_prime,
)

ZETAS = (1.25, 1.5, 2.0, 3.0, 1.5 + 0.5j)


@pytest.fixture(scope="module")
def bridge():
    return BridgeMaps.from_zeta(2.0)


class TestSigmaTau:
    def test_boundary_triple(self, bridge):
        p = bridge.params
        assert abs(tau(bridge, p.x0)) < 1e-12
        assert abs(tau(bridge, 0.0) + p.L) < 1e-12
        assert abs(tau(bridge, -p.x0) + 2 * p.L) < 1e-12

    def test_slit_tip_limits(self, bridge):
        p = bridge.params
        assert abs(tau(bridge, 1 / p.x0, "+") - 1j * p.L_prime) < 1e-11
        assert abs(tau(bridge, 1 / p.x0, "-") + 1j * p.L_prime) < 1e-11
        assert abs(tau(bridge, -1 / p.x0, "+") - (-2 * p.L + 1j * p.L_prime)) < 1e-11

    def test_sigma_special_points(self, bridge):
        p = bridge.params
        assert abs(sigma(bridge, 0.0) - p.x0) < 1e-13
        assert abs(sigma(bridge, -p.L)) < 1e-13
        assert abs(sigma(bridge, -2.0 * p.L) + p.x0) < 1e-13

    def test_sigma_branch_point_derivative_vanishes(self, bridge):
        # the covering is 2-to-1 at the branch points, so sigma'(0) = 0
        assert abs(sigma_prime(bridge, 0.0)) < 1e-13

    def test_sigma_pole_returns_infinity(self, bridge):
        p = bridge.params
        assert sigma(bridge, -p.L + 1j * p.L_prime) == complex(math.inf, 0.0)

    def test_round_trip_sigma_tau(self, bridge, rng):
        ws = rng.uniform(-2.5, 2.5, 25) + 1j * rng.uniform(0.05, 2.5, 25)
        ws = np.concatenate([ws, np.conj(ws)])
        for w in ws:
            z = tau(bridge, complex(w))
            assert abs(complex(sigma(bridge, z)) - w) < 1e-9

    def test_round_trip_tau_sigma_in_rectangle(self, bridge, rng):
        # tau inverts sigma on the open left rectangle (principal sheet)
        p = bridge.params
        zs = rng.uniform(-2 * p.L + 0.1, -0.1, 12) + 1j * rng.uniform(-p.L_prime + 0.1, p.L_prime - 0.1, 12)
        zs = zs[np.abs(zs.imag) > 0.05]
        for z in zs:
            w = complex(sigma(bridge, complex(z)))
            assert abs(tau(bridge, w) - z) < 1e-9

    def test_branch_cut_signal(self, bridge):
        p = bridge.params
        with pytest.raises(BranchCutError):
            tau(bridge, 0.7 * (p.x0 + 1 / p.x0))
        with pytest.raises(BranchCutError):
            tau_prime(bridge, 0.6 * (p.x0 + 1 / p.x0))

    def test_interior_slit_segment_is_unambiguous(self, bridge):
        # real w with |w| <= x0 maps to the real segment [-2L, 0]
        p = bridge.params
        for w in np.linspace(-0.9 * p.x0, 0.9 * p.x0, 7):
            z = tau(bridge, float(w))
            assert abs(z.imag) < 1e-12
            assert -2 * p.L < z.real < 0.0


class TestTauPrime:
    def test_matches_finite_differences(self, bridge):
        h = 1e-6
        for w in (0.1 + 0.3j, -0.5 + 0.8j, 1.3 + 0.4j, 0.2 - 1.1j, 2.5 + 0.6j, -2.0 - 0.3j):
            fd_x = (tau(bridge, w + h) - tau(bridge, w - h)) / (2 * h)
            fd_y = (tau(bridge, w + 1j * h) - tau(bridge, w - 1j * h)) / (2j * h)
            tp = tau_prime(bridge, w)
            assert abs(fd_x - tp) < 1e-6
            assert abs(fd_y - tp) < 1e-6

    def test_value_at_zero(self, bridge):
        assert tau_prime(bridge, 0.0) == pytest.approx(1.0 / bridge.x0, abs=1e-13)

    def test_axis_aligned_on_slit_segment(self, bridge):
        # (x0, 1/x0) maps to the vertical rectangle edge, so the boundary
        # derivative from above is purely imaginary with positive imag part
        p = bridge.params
        for s in (p.x0 + 0.1, 1.0, 1 / p.x0 - 0.1):
            v = tau_prime(bridge, s, "+")
            assert abs(v.real) < 1e-10 * abs(v)
            assert v.imag > 0

    def test_inverse_square_root_blowup(self, bridge):
        p = bridge.params
        prods = []
        for r in (1e-2, 1e-4, 1e-6):
            w = p.x0 + r * np.exp(0.4j)
            prods.append(abs(tau_prime(bridge, w)) * math.sqrt(abs(w - p.x0)))
        assert np.ptp(prods) < 0.05 * prods[0]

    def test_branch_point_signal(self, bridge):
        p = bridge.params
        for bp in (p.x0, -p.x0, 1 / p.x0, -1 / p.x0):
            with pytest.raises(PoleError):
                tau_prime(bridge, bp)


class TestMoebius:
    def test_inverse_pair(self, bridge, rng):
        z = rng.uniform(1.1, 3.0, 20) * np.exp(1j * rng.uniform(0, 2 * math.pi, 20))
        assert np.max(np.abs(eta_inv(bridge, eta(bridge, z)) - z)) < 1e-12

    def test_special_values(self, bridge):
        assert abs(complex(eta(bridge, bridge.zeta)) - bridge.x0) < 1e-14
        assert abs(complex(eta(bridge, 1e12)) + bridge.x0) < 1e-11

    def test_cross_ratio_preserved(self, bridge):
        z = np.array([1.3 + 0.4j, 2.0 - 1.0j, -1.7 + 0.2j, 3.0 + 3.0j])
        w = eta(bridge, z)

        def cross(q):
            return (q[0] - q[2]) * (q[1] - q[3]) / ((q[0] - q[3]) * (q[1] - q[2]))

        assert abs(cross(z) - cross(w)) < 1e-12

    def test_complex_zeta(self):
        br = BridgeMaps.from_zeta(1.5 + 0.5j)
        assert abs(complex(eta(br, br.zeta)) - br.x0) < 1e-14
        z = np.array([2.0 + 0.1j, 1.2 - 0.9j])
        assert np.max(np.abs(eta_inv(br, eta(br, z)) - z)) < 1e-12


class TestPhiFromPsi:
    @pytest.mark.parametrize("name", ["identity", "joukowski", "joukowski-pi2", "b1:0.3", "b1:0.7"])
    @pytest.mark.parametrize("zeta", ZETAS)
    def test_normalisation_triple(self, name, zeta):
        br = BridgeMaps.from_zeta(zeta)
        phi = phi_from_psi(br, resolve_map(name))
        x0 = br.x0
        assert abs(complex(phi.value(np.complex128(x0)))) < 1e-12
        assert abs(complex(phi.deriv(np.complex128(x0))) - 1.0) < 1e-12
        h = 1e-6
        fd = (phi.value(np.complex128(x0 + h)) - phi.value(np.complex128(x0 - h))) / (2 * h)
        assert abs(complex(fd) - 1.0) < 1e-8
        assert abs(complex(phi.value(np.complex128(-x0 + 1e-9)))) > 1e6

    def test_identity_reduces_to_moebius(self):
        # for psi = id the induced map collapses to 2 x0 (w - x0)/(w + x0),
        # independently of the phase of zeta
        for zeta in (2.0, 1.5 + 0.5j):
            br = BridgeMaps.from_zeta(zeta)
            phi = phi_from_psi(br, resolve_map("identity"))
            x0 = br.x0
            for w in (0.1 + 0.2j, -0.3, 0.6j, 0.5 - 0.4j, 0.05):
                expected = 2 * x0 * (w - x0) / (w + x0)
                assert abs(complex(phi.value(np.complex128(w))) - expected) < 1e-12

    def test_derivative_chain(self, rng):
        br = BridgeMaps.from_zeta(1.5)
        phi = phi_from_psi(br, resolve_map("joukowski"))
        w = rng.uniform(-0.5, 0.5, 8) + 1j * rng.uniform(-0.5, 0.5, 8)
        h = 1e-6
        fd2 = (phi.deriv(w + h) - phi.deriv(w - h)) / (2 * h)
        assert np.max(np.abs(fd2 - phi.deriv2(w))) < 1e-6

    def test_rejects_disk_maps(self, bridge):
        with pytest.raises(ValueError):
            phi_from_psi(bridge, resolve_map("koebe"))

    def test_full_mapping_inherited(self, bridge):
        assert phi_from_psi(bridge, resolve_map("joukowski")).full_mapping
        assert not phi_from_psi(bridge, resolve_map("b1:0.3")).full_mapping


class TestSqrtContinued:
    def test_constant_grid(self):
        args = np.ones(16, dtype=complex)
        out = sqrt_continued(args, BranchTracker(base_value=1.0))
        np.testing.assert_allclose(out, 1.0)

    def test_squares_back(self, rng):
        # a random smooth walk avoiding zero
        t = np.linspace(0, 4 * math.pi, 200)
        args = (2.0 + np.cos(t)) * np.exp(1j * t)
        out = sqrt_continued(args, BranchTracker(base_value=np.sqrt(args[0])))
        np.testing.assert_allclose(out**2, args, rtol=1e-12)
        steps = np.abs(np.diff(out))
        assert steps.max() < 0.5  # continuous along the chain

    def test_principal_on_right_half_plane_family(self, rng):
        # 1 - 1/(conj(zeta) z) lies in the disk around 1, so the continued
        # root coincides with the principal branch everywhere
        zeta = 2.0
        z = rng.uniform(1.05, 5.0, 64) * np.exp(1j * rng.uniform(0, 2 * math.pi, 64))
        args = 1.0 - 1.0 / (np.conj(zeta) * z)
        assert np.all(args.real > 0)
        out = sqrt_continued(args, BranchTracker(base_value=np.sqrt(args[0])))
        np.testing.assert_allclose(out, np.sqrt(args), rtol=1e-12)

    def test_parent_marching_order(self):
        args = np.array([1.0, 1.0j, -1.0, 1.0j, 1.0], dtype=complex)
        parents = (0, 0, 1, 2, 3)
        out = sqrt_continued(args, BranchTracker(base_value=1.0, parents=parents))
        np.testing.assert_allclose(out**2, args, atol=1e-14)

    def test_winding_loop_flips_sign(self):
        t = np.linspace(0, 2 * math.pi, 64, endpoint=False)
        assert loop_sign_flip(np.exp(1j * t))
        assert not loop_sign_flip(3.0 + np.exp(1j * t))

    def test_zero_crossing_raises(self):
        args = np.array([1.0, 0.5, 1e-16, 0.5], dtype=complex)
        with pytest.raises(BranchAmbiguityError):
            sqrt_continued(args, BranchTracker(base_value=1.0))

    @given(st.integers(min_value=1, max_value=6))
    @settings(max_examples=12, deadline=None)
    def test_half_winding_property(self, k):
        # continuing sqrt along k half-turns multiplies by exp(i pi k / 2) * ...
        t = np.linspace(0, k * math.pi, 32 * k + 1)
        args = np.exp(1j * t)
        out = sqrt_continued(args, BranchTracker(base_value=1.0))
        assert abs(out[-1] - np.exp(0.5j * t[-1])) < 1e-10


class TestMarchedSqrtPath:
    def test_tracks_beyond_principal_branch(self):
        # f(z) = z along 3/4 of a turn: the continued root leaves the
        # principal sheet, unlike np.sqrt
        theta = 1.6 * math.pi
        target = np.exp(1j * theta)
        arc = [np.exp(1j * theta * k / 8) for k in range(9)]
        val = marched_sqrt_path(lambda z: z, arc, 1.0)
        assert abs(val - np.exp(0.5j * theta)) < 1e-12
        assert abs(val - np.sqrt(target)) > 0.5

    def test_densification(self):
        # a coarse polyline whose argument rotates fast gets refined
        val = marched_sqrt_path(lambda z: z**2, [1.0, 1j, -1.0], 1.0)
        assert abs(val - (-1.0)) < 1e-12
