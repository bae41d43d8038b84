import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from szoom.errors import SzoomError
from szoom.geometry import (
    Rect,
    ScalarMap,
    adjust_aspect,
    clamp_rect,
    iou,
    round_half_up,
    scale_rect,
)


def brute_force_min_aspect_rect(r: Rect, aspect: float, fw: int, fh: int):
    """Smallest rect of the given aspect (within 1px rounding) that fits the
    frame and, when possible, contains r. Returns (w, h, containable)."""
    best = None
    for h in range(1, fh + 1):
        w = round_half_up(h * aspect)
        if w < 1 or w > fw:
            continue
        if w >= r.w and h >= r.h:
            best = (w, h)
            break
    return best


class TestRect:
    def test_rejects_empty(self):
        with pytest.raises(SzoomError):
            Rect(0, 0, 0, 5)

    def test_center_area(self):
        r = Rect(10, 20, 4, 6)
        assert r.center == (12.0, 23.0)
        assert r.area == 24

    def test_iou(self):
        a = Rect(0, 0, 10, 10)
        assert iou(a, a) == 1.0
        assert iou(a, Rect(20, 20, 5, 5)) == 0.0
        assert iou(a, Rect(5, 0, 10, 10)) == pytest.approx(50 / 150)

    def test_gap(self):
        assert Rect(0, 0, 10, 10).gap_to(Rect(13, 0, 5, 5)) == 3.0
        assert Rect(0, 0, 10, 10).gap_to(Rect(13, 14, 5, 5)) == 5.0
        assert Rect(0, 0, 10, 10).gap_to(Rect(5, 5, 10, 10)) == 0.0


class TestClampRect:
    def test_already_inside(self):
        assert clamp_rect(Rect(10, 10, 50, 50), 100, 100) == Rect(10, 10, 50, 50)

    def test_translate_only(self):
        assert clamp_rect(Rect(-5, 0, 50, 50), 100, 100) == Rect(0, 0, 50, 50)

    def test_shrink_oversize(self):
        assert clamp_rect(Rect(0, 0, 200, 50), 100, 100) == Rect(0, 0, 100, 50)

    @given(
        x=st.integers(-300, 300),
        y=st.integers(-300, 300),
        w=st.integers(1, 400),
        h=st.integers(1, 400),
        fw=st.integers(1, 200),
        fh=st.integers(1, 200),
    )
    def test_idempotent_and_inside(self, x, y, w, h, fw, fh):
        once = clamp_rect(Rect(x, y, w, h), fw, fh)
        assert 0 <= once.x and once.x2 <= fw
        assert 0 <= once.y and once.y2 <= fh
        assert clamp_rect(once, fw, fh) == once


class TestAdjustAspect:
    def test_widen_symmetric(self):
        # 90 * 16/9 = 160 with 35 added on each side
        assert adjust_aspect(Rect(100, 100, 90, 90), 16 / 9, 1920, 1080) == Rect(
            65, 100, 160, 90
        )

    def test_identity_when_matching(self):
        r = Rect(10, 10, 160, 90)
        assert adjust_aspect(r, 16 / 9, 1920, 1080) == r

    def test_growth_redistributes_at_edge(self):
        # pinned at the top edge: 160/(16/9) = 90, all growth goes down
        assert adjust_aspect(Rect(0, 0, 160, 45), 16 / 9, 1920, 1080) == Rect(
            0, 0, 160, 90
        )

    def test_matches_brute_force_minimum(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            fw = int(rng.integers(20, 200))
            fh = int(rng.integers(20, 200))
            w = int(rng.integers(1, fw + 1))
            h = int(rng.integers(1, fh + 1))
            x = int(rng.integers(0, fw - w + 1))
            y = int(rng.integers(0, fh - h + 1))
            aspect = float(rng.uniform(0.3, 3.0))
            r = Rect(x, y, w, h)
            out = adjust_aspect(r, aspect, fw, fh)
            assert 0 <= out.x and out.x2 <= fw and 0 <= out.y and out.y2 <= fh
            best = brute_force_min_aspect_rect(r, aspect, fw, fh)
            if best is not None:
                bw, bh = best
                # growth is single-dimension per the aspect rule, so the
                # result may differ from the canonical minimum by 1px
                assert abs(out.w - bw) <= 1 and abs(out.h - bh) <= 1
                assert out.w * out.h <= (bw + 1) * (bh + 1)
                assert out.contains(r)

    @given(
        fw=st.integers(10, 300),
        fh=st.integers(10, 300),
        data=st.data(),
    )
    @settings(max_examples=200)
    def test_aspect_accuracy(self, fw, fh, data):
        w = data.draw(st.integers(1, fw))
        h = data.draw(st.integers(1, fh))
        x = data.draw(st.integers(0, fw - w))
        y = data.draw(st.integers(0, fh - h))
        aspect = data.draw(st.floats(0.25, 4.0, allow_nan=False))
        out = adjust_aspect(Rect(x, y, w, h), aspect, fw, fh)
        assert abs(out.w / out.h - aspect) <= max(1 / out.h, 1 / out.w) + 1e-9


class TestScaleRect:
    def test_double(self):
        assert scale_rect(Rect(10, 10, 20, 20), 2) == Rect(20, 20, 40, 40)

    def test_identity(self):
        assert scale_rect(Rect(3, 3, 5, 5), 1) == Rect(3, 3, 5, 5)

    def test_inverse_of_downscale(self):
        # recomputed by rational arithmetic: (7,9,11,13)/0.6, round half up
        assert scale_rect(Rect(7, 9, 11, 13), 1 / 0.6) == Rect(12, 15, 18, 22)

    @given(
        x=st.integers(0, 500),
        y=st.integers(0, 500),
        w=st.integers(1, 500),
        h=st.integers(1, 500),
        # below 0.5 the downscale rounding error (0.5/f px) exceeds a pixel
        f=st.floats(0.5, 8.0, allow_nan=False),
    )
    def test_round_trip_within_one_pixel(self, x, y, w, h, f):
        r = Rect(x, y, w, h)
        back = scale_rect(scale_rect(r, f), 1 / f)
        assert abs(back.x - r.x) <= 1
        assert abs(back.y - r.y) <= 1
        assert abs(back.w - r.w) <= 1
        assert abs(back.h - r.h) <= 1


class TestScalarMap:
    def test_clamps_on_construction(self):
        m = ScalarMap(np.array([[2.0, -1.0], [0.5, 1.0]]))
        assert m.values.max() == 1.0
        assert m.values.min() == 0.0
        assert m.values[1, 0] == 0.5

    def test_shape_properties(self):
        m = ScalarMap.zeros(7, 3)
        assert (m.width, m.height) == (7, 3)

    def test_rejects_non_2d(self):
        with pytest.raises(SzoomError):
            ScalarMap(np.zeros((2, 2, 2)))

    def test_binarize(self):
        m = ScalarMap(np.array([[0.1, 0.6], [0.5, 0.0]]))
        b = m.binarize(0.5)
        assert b.values.tolist() == [[0.0, 1.0], [1.0, 0.0]]
