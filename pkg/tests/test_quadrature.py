import math
import warnings

import numpy as np
import pytest

from goluzin_lab.errors import QuadratureError
from goluzin_lab.quadrature import (
    QuadratureSpec,
    SingularPoint,
    integrate_disk,
    integrate_exterior_disk,
    integrate_rect,
)


class TestRect:
    def test_constant(self):
        res = integrate_rect(lambda z: np.ones_like(z.real), (0, 1, 0, 1))
        assert res.value == pytest.approx(1.0, abs=1e-14)

    def test_polynomial_design_degree(self):
        # order-8 tensor rule integrates degree (15, 15) exactly
        res = integrate_rect(lambda z: z.real**15 * z.imag**14, (0, 1, 0, 1))
        assert res.value == pytest.approx((1 / 16) * (1 / 15), abs=1e-13)

    def test_inverse_distance_against_deep_reference(self):
        # reference computed with a 100x tighter tolerance (same oracle family,
        # independent refinement depth); closed form is 8*log(1+sqrt(2))
        sp = SingularPoint(0j, -1.0)
        spec = QuadratureSpec(rel_tol=1e-6, singular_points=(sp,))
        res = integrate_rect(lambda z: 1.0 / np.abs(z), (-1, 1, -1, 1), spec)
        deep = integrate_rect(
            lambda z: 1.0 / np.abs(z),
            (-1, 1, -1, 1),
            QuadratureSpec(rel_tol=1e-8, max_depth=16, singular_points=(sp,)),
        )
        assert abs(res.value - deep.value) <= max(res.error, 1e-8)
        assert res.value == pytest.approx(8.0 * math.log(1.0 + math.sqrt(2.0)), rel=1e-6)

    def test_error_estimate_covers_true_error(self):
        sp = SingularPoint(0.2 + 0.1j, -1.0)
        exact = None
        for tol in (1e-5, 1e-7):
            spec = QuadratureSpec(rel_tol=tol, singular_points=(sp,))
            res = integrate_rect(lambda z: 1.0 / np.abs(z - (0.2 + 0.1j)), (-1, 1, -1, 1), spec)
            if exact is None:
                coarse = res
            else:
                assert abs(coarse.value - res.value) <= 2.0 * coarse.error
            exact = res.value

    def test_refinement_monotonicity(self):
        sp = SingularPoint(0j, -1.0)
        errs = []
        for tol in (1e-4, 5e-5, 2.5e-5, 1.25e-5):
            spec = QuadratureSpec(rel_tol=tol, singular_points=(sp,))
            errs.append(integrate_rect(lambda z: 1.0 / np.abs(z), (-1, 1, -1, 1), spec).error)
        assert all(b <= a for a, b in zip(errs, errs[1:]))

    def test_determinism(self):
        sp = SingularPoint(0.3 + 0.2j, -1.0)
        spec = QuadratureSpec(rel_tol=1e-6, singular_points=(sp,))
        f = lambda z: np.cos(z.real) ** 2 / np.abs(z - (0.3 + 0.2j))
        r1 = integrate_rect(f, (-1, 1, -1, 1), spec)
        r2 = integrate_rect(f, (-1, 1, -1, 1), spec)
        assert r1.value == r2.value and r1.error == r2.error and r1.n_evals == r2.n_evals

    def test_singular_point_must_be_interior(self):
        with pytest.raises(ValueError):
            integrate_rect(
                lambda z: np.ones_like(z.real),
                (0, 1, 0, 1),
                QuadratureSpec(singular_points=(SingularPoint(2 + 2j, -1.0),)),
            )

    def test_nonconvergence_carries_partial_result(self):
        # untagged 1/r singularity cannot converge at shallow depth
        spec = QuadratureSpec(rel_tol=1e-10, max_depth=3)
        with pytest.raises(QuadratureError) as exc_info:
            integrate_rect(lambda z: 1.0 / np.abs(z), (-1, 1, -1, 1), spec)
        partial = exc_info.value.partial
        assert partial is not None and partial.value > 0


class TestDisk:
    def test_central_inverse_distance(self):
        spec = QuadratureSpec(rel_tol=1e-8, singular_points=(SingularPoint(0j, -1.0),))
        res = integrate_disk(lambda z: 1.0 / np.abs(z), spec)
        assert res.value == pytest.approx(2.0 * math.pi, rel=1e-8)

    def test_offcenter_vs_deep_reference(self):
        p = 0.4 + 0.0j
        spec = QuadratureSpec(rel_tol=1e-6, singular_points=(SingularPoint(p, -1.0),))
        f = lambda z: 1.0 / np.abs(z - p)
        res = integrate_disk(f, spec)
        deep = integrate_disk(f, QuadratureSpec(rel_tol=1e-9, singular_points=(SingularPoint(p, -1.0),)))
        assert abs(res.value - deep.value) <= max(res.error, 1e-7)

    def test_smooth(self):
        res = integrate_disk(lambda z: np.abs(z) ** 2)
        assert res.value == pytest.approx(math.pi / 2.0, rel=1e-10)


class TestExteriorDisk:
    def test_quartic_decay(self):
        res = integrate_exterior_disk(lambda z: np.abs(z) ** -4.0, QuadratureSpec(rel_tol=1e-9))
        assert res.value == pytest.approx(math.pi, rel=1e-8)

    def test_cubic_decay(self):
        res = integrate_exterior_disk(lambda z: np.abs(z) ** -3.0, QuadratureSpec(rel_tol=1e-9))
        assert res.value == pytest.approx(2.0 * math.pi, rel=1e-8)

    def test_singular_point_with_deep_reference(self):
        p = 2.0 + 0.0j
        f = lambda z: np.abs(z) ** -3.0 / np.abs(z - p)
        r1 = integrate_exterior_disk(f, QuadratureSpec(rel_tol=1e-6, singular_points=(SingularPoint(p, -1.0),)))
        r2 = integrate_exterior_disk(f, QuadratureSpec(rel_tol=1e-8, singular_points=(SingularPoint(p, -1.0),)))
        assert abs(r1.value - r2.value) <= max(2.0 * r1.error, 1e-6)

    def test_decay_warning(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            integrate_exterior_disk(lambda z: np.abs(z) ** -2.2, QuadratureSpec(rel_tol=1e-5))
        assert any("decays more slowly" in str(w.message) for w in caught)

    def test_no_false_decay_warning(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            integrate_exterior_disk(lambda z: np.abs(z) ** -4.0, QuadratureSpec(rel_tol=1e-7))
        assert not any("decays more slowly" in str(w.message) for w in caught)

    def test_point_must_be_exterior(self):
        with pytest.raises(ValueError):
            integrate_exterior_disk(
                lambda z: np.abs(z) ** -4.0,
                QuadratureSpec(singular_points=(SingularPoint(0.5 + 0j, -1.0),)),
            )


class TestSpecValidation:
    def test_unsupported_exponent(self):
        with pytest.raises(ValueError):
            SingularPoint(0j, exponent=-1.5)

    def test_with_points(self):
        spec = QuadratureSpec(rel_tol=1e-4)
        sp = SingularPoint(1.5 + 0j, -1.0)
        spec2 = spec.with_points(sp)
        assert spec2.singular_points == (sp,)
        assert spec2.rel_tol == 1e-4
