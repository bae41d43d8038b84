import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from szoom.errors import SzoomError
from szoom.geometry import Frame, Rect
from szoom.zoom import (
    AbSchedule,
    ParamSmoother,
    Phase,
    ZoomParams,
    hermite,
    refine_target,
    render,
    schedule_params,
)

from conftest import solid_frame


def reference_bilinear(pixels, out_w, out_h):
    """Slow per-pixel resampler, center-aligned, used as the render oracle."""
    h, w = pixels.shape[:2]
    out = np.zeros((out_h, out_w, 3))
    for oy in range(out_h):
        sy = min(max((oy + 0.5) * h / out_h - 0.5, 0.0), h - 1.0)
        y0, fy = int(np.floor(sy)), sy - int(np.floor(sy))
        y1 = min(y0 + 1, h - 1)
        for ox in range(out_w):
            sx = min(max((ox + 0.5) * w / out_w - 0.5, 0.0), w - 1.0)
            x0, fx = int(np.floor(sx)), sx - int(np.floor(sx))
            x1 = min(x0 + 1, w - 1)
            for c in range(3):
                top = pixels[y0, x0, c] * (1 - fx) + pixels[y0, x1, c] * fx
                bot = pixels[y1, x0, c] * (1 - fx) + pixels[y1, x1, c] * fx
                out[oy, ox, c] = top * (1 - fy) + bot * fy
    return np.floor(out + 0.5).clip(0, 255).astype(np.uint8)


class TestHermite:
    def test_endpoints_and_midpoint(self):
        assert hermite(5.0, 9.0, 0.0) == 5.0
        assert hermite(5.0, 9.0, 1.0) == 9.0
        assert hermite(5.0, 9.0, 0.5) == 7.0

    def test_rejects_outside_unit(self):
        with pytest.raises(SzoomError):
            hermite(0.0, 1.0, 1.5)
        with pytest.raises(SzoomError):
            hermite(0.0, 1.0, -0.01)

    @given(
        a0=st.floats(-1e3, 1e3),
        a1=st.floats(-1e3, 1e3),
        f=st.floats(0.0, 1.0),
        g=st.floats(0.0, 1.0),
    )
    def test_monotone_between_endpoints(self, a0, a1, f, g):
        lo_f, hi_f = min(f, g), max(f, g)
        lo, hi = hermite(a0, a1, lo_f), hermite(a0, a1, hi_f)
        if a0 <= a1:
            assert lo <= hi + 1e-9
        else:
            assert lo >= hi - 1e-9

    def test_zero_endpoint_velocity(self):
        # inter-frame deltas at the phase ends are the smallest of the phase
        n = 45
        vals = [hermite(0.0, 100.0, i / (n - 1)) for i in range(n)]
        deltas = [abs(b - a) for a, b in zip(vals, vals[1:])]
        assert deltas[0] == min(deltas)
        assert deltas[-1] == min(deltas[1:]) or deltas[-1] == min(deltas)


class TestAbSchedule:
    def test_default_150_frames(self):
        sched = AbSchedule(150, a_pct=20, b_pct=30)
        assert sched.phase_lengths == (30, 45, 30, 45)

    def test_phase_boundaries(self):
        sched = AbSchedule(150)
        assert sched.phase_at(0)[0] is Phase.FULL
        assert sched.phase_at(29)[0] is Phase.FULL
        assert sched.phase_at(30)[0] is Phase.ZOOM_IN
        assert sched.phase_at(74)[0] is Phase.ZOOM_IN
        assert sched.phase_at(75)[0] is Phase.HOLD
        assert sched.phase_at(104)[0] is Phase.HOLD
        assert sched.phase_at(105)[0] is Phase.ZOOM_OUT
        assert sched.phase_at(149)[0] is Phase.ZOOM_OUT

    def test_lengths_always_sum(self):
        for n in (1, 2, 7, 30, 149, 150, 151, 449):
            assert sum(AbSchedule(n).phase_lengths) == n

    def test_invalid_percentages(self):
        with pytest.raises(SzoomError):
            AbSchedule(100, a_pct=40, b_pct=30)

    def test_schedule_params_frame52(self):
        sched = AbSchedule(150)
        full = ZoomParams(cx=960, cy=540, vw=1920, vh=1080)
        target = ZoomParams(cx=500, cy=300, vw=384, vh=216)
        out = schedule_params(sched, 52, full, target)
        f = (52 - 30) / 44
        blend = lambda a, b: a * (2 * f**3 - 3 * f**2 + 1) + b * (-2 * f**3 + 3 * f**2)
        assert out.cx == pytest.approx(blend(960, 500))
        assert out.cy == pytest.approx(blend(540, 300))
        assert out.vw == pytest.approx(blend(1920, 384))
        assert out.vh == pytest.approx(blend(1080, 216))

    def test_full_and_hold_phases_exact(self):
        sched = AbSchedule(150)
        full = ZoomParams(cx=960, cy=540, vw=1920, vh=1080)
        target = ZoomParams(cx=500, cy=300, vw=384, vh=216)
        assert schedule_params(sched, 0, full, target) == full
        assert schedule_params(sched, 74, full, target) == target  # zoom-in end
        assert schedule_params(sched, 80, full, target) == target
        assert schedule_params(sched, 149, full, target) == full  # zoom-out end


class TestParamSmoother:
    def test_stationary_unchanged(self):
        sm = ParamSmoother(5)
        p = ZoomParams(cx=100, cy=50, vw=64, vh=36)
        for _ in range(6):
            out = sm.push(p)
        assert out == p

    def test_median_rejects_outlier(self):
        sm = ParamSmoother(5)
        target = ZoomParams(cx=0, cy=0, vw=64, vh=36)
        out = None
        for cx in (100, 100, 180, 100, 100):
            out = refine_target(target, Rect(int(cx - 5), 20, 10, 10), sm)
        assert out.cx == 100.0
        assert out.vw == 64.0  # size comes from the target, not the track

    def test_drift_lag_bounded(self):
        sm = ParamSmoother(5)
        target = ZoomParams(cx=0, cy=0, vw=64, vh=36)
        for i in range(30):
            out = refine_target(target, Rect(2 * i, 20, 10, 10), sm)
        true_cx = 2 * 29 + 5.0
        assert true_cx - out.cx <= 2 * (5 // 2)


class TestRender:
    def test_identity(self):
        frame = solid_frame(64, 36)
        frame.pixels[10:20, 20:40] = (200, 30, 60)
        params = ZoomParams(cx=32, cy=18, vw=64, vh=36)
        out = render(frame, params, 64, 36)
        assert np.array_equal(out.pixels, frame.pixels)

    def test_exact_subrect_copy(self, rng):
        px = rng.integers(0, 256, size=(300, 500, 3), dtype=np.uint8)
        frame = Frame(pixels=px, index=0)
        params = ZoomParams(cx=100 + 192, cy=50 + 108, vw=384, vh=216)
        out = render(frame, params, 384, 216)
        assert np.array_equal(out.pixels, px[50 : 50 + 216, 100 : 100 + 384])

    def test_half_frame_matches_reference(self, rng):
        px = rng.integers(0, 256, size=(72, 128, 3), dtype=np.uint8)
        frame = Frame(pixels=px, index=0)
        params = ZoomParams(cx=64, cy=36, vw=64, vh=36)
        out = render(frame, params, 32, 18)
        crop = px[18:54, 32:96]
        ref = reference_bilinear(crop, 32, 18)
        assert np.max(np.abs(out.pixels.astype(int) - ref.astype(int))) <= 1

    def test_view_rect_clamped_inside(self):
        frame = solid_frame(100, 100)
        params = ZoomParams(cx=5, cy=5, vw=50, vh=50)  # would start off-frame
        out = render(frame, params, 25, 25)
        assert out.pixels.shape == (25, 25, 3)

    def test_upscale_small_view(self):
        frame = solid_frame(64, 64, color=(10, 200, 10))
        params = ZoomParams(cx=32, cy=32, vw=16, vh=16)
        out = render(frame, params, 64, 64)
        assert np.all(out.pixels == (10, 200, 10))


class TestViewRect:
    def test_round_and_clamp(self):
        p = ZoomParams(cx=10.0, cy=10.0, vw=30.0, vh=20.0)
        assert p.view_rect(100, 100) == Rect(0, 0, 30, 20)

    def test_size_preserved_at_border(self):
        p = ZoomParams(cx=95.0, cy=50.0, vw=40.0, vh=20.0)
        r = p.view_rect(100, 100)
        assert (r.w, r.h) == (40, 20)
        assert r.x2 <= 100
