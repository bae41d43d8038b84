import numpy as np
import pytest

from szoom.errors import SzoomError
from szoom.geometry import Rect
from szoom.tracking import color_histogram, init_tracker, track_step

from conftest import frame_with_blob, moving_blob_frames, solid_frame


class TestHistogram:
    def test_uniform_region_single_bin(self):
        frame = solid_frame(20, 20, color=(200, 40, 40))
        state = init_tracker(frame, Rect(2, 2, 10, 10))
        hist = state.target_histogram
        assert np.count_nonzero(hist) == 1
        assert hist.sum() == pytest.approx(1.0)

    def test_two_color_half_half_flat_kernel(self):
        frame = solid_frame(20, 20, color=(0, 0, 0))
        frame.pixels[:, 10:] = (255, 255, 255)
        state = init_tracker(frame, Rect(4, 4, 12, 12), kernel="uniform")
        hist = state.target_histogram
        nonzero = np.flatnonzero(hist)
        assert len(nonzero) == 2
        assert hist[nonzero[0]] == pytest.approx(0.5)
        assert hist[nonzero[1]] == pytest.approx(0.5)

    def test_natural_patch_normalized(self, rng):
        px = rng.integers(0, 256, size=(30, 30, 3), dtype=np.uint8)
        assert color_histogram(px).sum() == pytest.approx(1.0)

    def test_degenerate_rect_rejected(self):
        frame = solid_frame(20, 20)
        with pytest.raises(SzoomError):
            init_tracker(frame, Rect(0, 0, 1, 5))


class TestTrackStep:
    def test_static_scene_fixed_point(self):
        frame = frame_with_blob(100, 80, Rect(30, 20, 20, 20))
        state = init_tracker(frame, Rect(30, 20, 20, 20))
        out = track_step(state, frame)
        assert out == Rect(30, 20, 20, 20)

    def test_moving_blob_tracked(self):
        # 150 frames at 2 px/frame: the blob ends at x=348, inside the frame
        frames = moving_blob_frames(
            400, 180, 30, 30, start_x=20, start_y=70, dx=2, dy=0, n=150
        )
        state = init_tracker(frames[0], Rect(20, 70, 30, 30))
        errors = []
        for i, frame in enumerate(frames[1:], start=1):
            out = track_step(state, frame)
            true_cx = 20 + 2 * i + 15.0
            true_cy = 70 + 15.0
            cx, cy = out.center
            errors.append(np.hypot(cx - true_cx, cy - true_cy))
            assert (out.w, out.h) == (30, 30)
        assert np.mean(errors) <= 3.0

    def test_size_invariance_along_track(self):
        frames = moving_blob_frames(200, 120, 24, 16, 10, 50, dx=3, dy=0, n=30)
        state = init_tracker(frames[0], Rect(10, 50, 24, 16))
        for frame in frames[1:]:
            out = track_step(state, frame)
            assert (out.w, out.h) == (24, 16)
            assert 0 <= out.x and out.x2 <= 200
            assert 0 <= out.y and out.y2 <= 120

    def test_jump_beyond_basin_stays_near(self):
        a = frame_with_blob(400, 200, Rect(40, 80, 30, 30))
        b = frame_with_blob(400, 200, Rect(240, 80, 30, 30), index=1)
        state = init_tracker(a, Rect(40, 80, 30, 30))
        out = track_step(state, b)
        old_cx, old_cy = Rect(40, 80, 30, 30).center
        cx, cy = out.center
        assert np.hypot(cx - old_cx, cy - old_cy) <= 10.0

    def test_deterministic(self):
        frames = moving_blob_frames(160, 120, 20, 20, 10, 40, dx=2, dy=1, n=40)
        tracks = []
        for _ in range(2):
            state = init_tracker(frames[0], Rect(10, 40, 20, 20))
            tracks.append([track_step(state, f) for f in frames[1:]])
        assert tracks[0] == tracks[1]

    def test_frame_size_mismatch(self):
        state = init_tracker(solid_frame(100, 100), Rect(10, 10, 20, 20))
        with pytest.raises(SzoomError):
            track_step(state, solid_frame(120, 100))
