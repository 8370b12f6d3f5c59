from __future__ import annotations

import math

import numpy as np
import pytest

from mrtomo import fields as F
from mrtomo import tensors as T


@pytest.fixture(scope="module")
def spec():
    return F.GridSpec.cube(n=3, points=25, half_width=1.3, support_radius=1.0)


def scalar_bump(spec, width=0.45, center=(0.0, 0.0, 0.0), amp=1.0):
    return F.gaussian_bump_tensor(0, 3, center, width, [amp], cutoff_radius=0.95)


class TestGridSpec:
    def test_margin_enforced(self):
        with pytest.raises(ValueError):
            F.GridSpec.cube(n=3, points=9, half_width=1.0, support_radius=0.99)

    def test_cube_layout(self, spec):
        assert spec.shape == (25, 25, 25)
        np.testing.assert_allclose(spec.center, 0.0, atol=1e-15)
        assert spec.axis(0)[0] == pytest.approx(-1.3)
        assert spec.axis(0)[-1] == pytest.approx(1.3)

    def test_drop_first_axis(self, spec):
        s2 = spec.drop_first_axis()
        assert s2.n == 2 and s2.shape == (25, 25)


class TestSample:
    def test_zero_generator(self, spec):
        gen = F.gaussian_bump_tensor(1, 3, [0, 0, 0], 0.4, [0, 0, 0], 0.9)
        fld = F.sample(gen, spec)
        assert fld.sup_norm() == 0.0

    def test_node_exact(self, spec):
        gen = scalar_bump(spec)
        fld = F.sample(gen, spec)
        nodes = spec.nodes()
        np.testing.assert_array_equal(fld.flat_values(), gen(nodes))

    def test_rank_one_components(self, spec):
        gen = F.gaussian_bump_tensor(1, 3, [0.1, 0, 0], 0.4, [1.0, 0, 0], 0.8)
        fld = F.sample(gen, spec)
        scalar = F.sample(F.gaussian_bump_tensor(0, 3, [0.1, 0, 0], 0.4, [1.0], 0.8), spec)
        np.testing.assert_array_equal(fld.values[..., 0], scalar.values[..., 0])
        assert np.all(fld.values[..., 1:] == 0)

    def test_support_violation_rejected(self, spec):
        class Wide:
            m = 0

            def __call__(self, pts):
                return np.ones((pts.shape[0], 1))

        with pytest.raises(ValueError, match="support"):
            F.sample(Wide(), spec)

    def test_degenerate_width(self):
        with pytest.raises(ValueError, match="width"):
            F.gaussian_bump_tensor(0, 3, [0, 0, 0], 0.0, [1.0], 0.9)


class TestInterp:
    def test_node_values(self, spec):
        fld = F.sample(scalar_bump(spec), spec)
        x = np.array([spec.axis(0)[7], spec.axis(1)[12], spec.axis(2)[15]])
        got = F.eval_interp(fld, x)
        assert got.comps[0] == pytest.approx(fld.values[7, 12, 15, 0])

    def test_affine_exact(self, spec):
        # multilinear interpolation reproduces fields affine in each coordinate
        class Affine:
            m = 0

            def __call__(self, pts):
                mask = np.linalg.norm(pts, axis=1) <= 1.0
                return (pts[:, :1]) * mask[:, None]

        fld = F.sample(Affine(), spec)
        for x in ([0.071, 0.033, -0.05], [-0.11, 0.021, 0.004]):
            got = F.eval_interp(fld, np.array(x)).comps[0]
            assert got == pytest.approx(x[0], abs=1e-14)

    def test_outside_ball_zero(self, spec):
        fld = F.sample(scalar_bump(spec), spec)
        assert F.eval_interp(fld, np.array([1.2, 1.2, 1.2])).comps[0] == 0
        assert F.eval_interp(fld, np.array([5.0, 0.0, 0.0])).comps[0] == 0

    def test_refinement_order(self):
        # halving the spacing cuts the C^2-phantom interpolation error ~4x
        errs = []
        for pts in (17, 33):
            sp = F.GridSpec.cube(n=3, points=pts, half_width=1.3, support_radius=1.0)
            gen = scalar_bump(sp, width=0.5)
            fld = F.sample(gen, sp)
            rng = np.random.default_rng(42)
            probes = rng.uniform(-0.4, 0.4, size=(200, 3))
            got = F.eval_interp_many(fld, probes)[:, 0]
            want = gen(probes)[:, 0]
            errs.append(np.max(np.abs(got - want)))
        ratio = errs[0] / errs[1]
        assert 3.2 <= ratio <= 4.8


class TestLifts:
    def test_j_of_i_scalar_lift(self, spec):
        fld = F.sample(scalar_bump(spec), spec)
        out = F.lift_j_delta(F.lift_i_delta(fld))
        np.testing.assert_allclose(out.values, 3.0 * fld.values, atol=1e-13)

    def test_decompose_kills_potential_field(self, spec):
        gen = F.gaussian_bump_tensor(1, 3, [0, 0.1, 0], 0.4, [0.3, -1.0, 2.0], 0.8)
        w = F.sample(gen, spec)
        g, v = F.lift_decompose(F.lift_i_delta(w))
        assert g.sup_norm() <= 1e-13 * w.sup_norm()
        np.testing.assert_allclose(v.values, w.values, atol=1e-13)

    def test_add_scale_cancel(self, spec):
        fld = F.sample(scalar_bump(spec), spec)
        out = F.add(fld, F.scale(fld, -1.0))
        assert out.sup_norm() == 0.0

    def test_support_preserved(self, spec):
        gen = F.gaussian_bump_tensor(3, 3, [0.2, 0, 0], 0.35,
                                     np.arange(10) - 4.0, 0.7)
        fld = F.sample(gen, spec)
        for out in (F.lift_i_delta(fld), F.lift_j_delta(fld), *F.lift_decompose(fld)):
            outside = out.spec.outside_ball_mask()
            assert np.all(out.values[outside] == 0)

    def test_bump_decompose_trace_free_nodewise(self, spec):
        gen = F.gaussian_bump_tensor(3, 3, [0, 0, 0], 0.4, np.arange(10) + 1.0, 0.8)
        fld = F.sample(gen, spec)
        g, v = F.lift_decompose(fld)
        assert F.lift_j_delta(g).sup_norm() <= 1e-13 * fld.sup_norm()
        recon = F.add(g, F.lift_i_delta(v))
        assert F.add(recon, F.scale(fld, -1)).sup_norm() <= 1e-13 * fld.sup_norm()


class TestFourierSlice:
    @pytest.fixture(scope="class")
    def wide(self):
        # wide grid so an O(1)-width Gaussian is compactly supported to 1e-9
        return F.GridSpec.cube(n=3, points=23, half_width=5.5, support_radius=5.0)

    @pytest.fixture(scope="class")
    def gauss(self, wide):
        gen = F.gaussian_bump_tensor(0, 3, [0, 0, 0], 1.0, [1.0], 4.9,
                                     flat_fraction=0.9)
        return F.sample(gen, wide)

    def test_lambda_zero_plain_integral(self, gauss, wide):
        sl = F.fourier_slice_x1(gauss, 0.0)
        h = wide.spacing[0]
        plain = np.sum(gauss.values, axis=0) * h
        np.testing.assert_allclose(sl.field.values, plain, atol=1e-12)

    def test_odd_field_zero_slice(self, wide):
        class Odd:
            m = 0

            def __call__(self, pts):
                r = np.linalg.norm(pts, axis=1)
                return (pts[:, :1]) * np.exp(-r * r)[:, None] * (r <= 4.5)[:, None]

        sl = F.fourier_slice_x1(F.sample(Odd(), wide), 0.0)
        assert sl.field.sup_norm() <= 1e-14

    @pytest.mark.parametrize("lam", [0.0, 1.0, 2.0])
    def test_gaussian_analytic(self, gauss, wide, lam):
        sl = F.fourier_slice_x1(gauss, lam)
        spec2 = wide.drop_first_axis()
        yp = spec2.nodes()
        r2 = (yp**2).sum(axis=1)
        keep = r2 <= 4.0
        want = math.sqrt(math.pi) * np.exp(-lam * lam / 4.0) * np.exp(-r2[keep])
        got = sl.field.flat_values()[keep, 0]
        assert np.max(np.abs(got - want)) <= 1e-8

    def test_linearity(self, gauss, wide):
        two = F.scale(gauss, 2.0 + 1.0j)
        a = F.fourier_slice_x1(two, 1.3).field.values
        b = (2.0 + 1.0j) * F.fourier_slice_x1(gauss, 1.3).field.values
        np.testing.assert_allclose(a, b, atol=1e-13)

    def test_conjugate_symmetry(self, gauss):
        plus = F.fourier_slice_x1(gauss, 0.7).field.values
        minus = F.fourier_slice_x1(gauss, -0.7).field.values
        np.testing.assert_allclose(minus, np.conj(plus), atol=1e-13)
