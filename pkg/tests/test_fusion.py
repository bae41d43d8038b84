import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from szoom.errors import SzoomError
from szoom.fusion import (
    FusionWeights,
    PenaltyState,
    UserMask,
    apply_penalty_cycle,
    decision_map,
    fuse,
)
from szoom.geometry import Rect, ScalarMap

from conftest import map_with_blocks


class TestFusionWeights:
    def test_defaults_sum_to_one(self):
        w = FusionWeights.default()
        assert sum(w.as_dict().values()) == pytest.approx(1.0)
        assert w.coefficient("motion") == pytest.approx(0.46)
        assert w.coefficient("human") == pytest.approx(0.53)
        assert w.coefficient("face") == pytest.approx(0.01)

    def test_normalizes(self):
        w = FusionWeights({"a": 2.0, "b": 2.0})
        assert w.coefficient("a") == 0.5

    def test_missing_kind(self):
        with pytest.raises(SzoomError):
            FusionWeights.default().coefficient("vehicle")

    def test_negative_rejected(self):
        with pytest.raises(SzoomError):
            FusionWeights({"a": -0.1})


class TestFuse:
    def test_all_ones_gives_one(self):
        maps = {k: ScalarMap.full(4, 4, 1.0) for k in ("motion", "human", "face")}
        out = fuse(maps, FusionWeights.default())
        assert np.allclose(out.values, 1.0)

    def test_single_term(self):
        maps = {
            "motion": map_with_blocks(8, 8, [(Rect(0, 0, 4, 4), 1.0)]),
            "human": ScalarMap.zeros(8, 8),
            "face": ScalarMap.zeros(8, 8),
        }
        out = fuse(maps, FusionWeights.default())
        assert out.values[0, 0] == pytest.approx(0.46)
        assert out.values[5, 5] == 0.0

    def test_codetection_ranks_higher(self):
        # motion+human = 0.99 outranks human 0.53 outranks motion 0.46
        maps = {
            "motion": map_with_blocks(9, 3, [(Rect(0, 0, 3, 3), 1.0), (Rect(3, 0, 3, 3), 1.0)]),
            "human": map_with_blocks(9, 3, [(Rect(3, 0, 3, 3), 1.0), (Rect(6, 0, 3, 3), 1.0)]),
            "face": ScalarMap.zeros(9, 3),
        }
        out = fuse(maps, FusionWeights.default())
        motion_only = out.values[1, 1]
        both = out.values[1, 4]
        human_only = out.values[1, 7]
        assert both == pytest.approx(0.99)
        assert both > human_only > motion_only

    def test_dimension_mismatch(self):
        maps = {"motion": ScalarMap.zeros(4, 4), "human": ScalarMap.zeros(5, 4)}
        with pytest.raises(SzoomError):
            fuse(maps, FusionWeights({"motion": 0.5, "human": 0.5}))

    def test_missing_weight_for_present_kind(self):
        with pytest.raises(SzoomError):
            fuse({"vehicle": ScalarMap.zeros(4, 4)}, FusionWeights.default())

    @given(
        base=st.floats(0.0, 1.0),
        bump=st.floats(0.0, 1.0),
    )
    def test_monotone(self, base, bump):
        w = FusionWeights.default()
        lo = {
            "motion": ScalarMap.full(2, 2, base),
            "human": ScalarMap.zeros(2, 2),
            "face": ScalarMap.zeros(2, 2),
        }
        hi = {
            "motion": ScalarMap.full(2, 2, min(base + bump, 1.0)),
            "human": ScalarMap.zeros(2, 2),
            "face": ScalarMap.zeros(2, 2),
        }
        assert fuse(hi, w).values[0, 0] >= fuse(lo, w).values[0, 0]


class TestPenalty:
    def test_fresh_gaussian_shape(self):
        state = PenaltyState(200, 100, alpha=0.3)
        apply_penalty_cycle(state, Rect(80, 30, 40, 40))  # center (100, 50)
        vals = state.map.values
        assert vals[50, 100] == pytest.approx(1.0)
        # one sigma (= w/2 = 20) to the right of the center
        assert vals[50, 120] == pytest.approx(math.exp(-0.5), abs=1e-12)

    def test_geometric_decay_of_unselected(self):
        state = PenaltyState(600, 100, alpha=0.3)
        apply_penalty_cycle(state, Rect(40, 40, 20, 20))  # center (50, 50)
        peak = state.map.values[50, 50]
        assert peak == pytest.approx(1.0)
        for n in range(1, 6):
            apply_penalty_cycle(state, Rect(520, 40, 20, 20))  # far away
            assert state.map.values[50, 50] == pytest.approx(0.3**n, abs=1e-12)

    def test_two_far_rois(self):
        state = PenaltyState(600, 100, alpha=0.3)
        apply_penalty_cycle(state, Rect(40, 40, 20, 20))
        apply_penalty_cycle(state, Rect(520, 40, 20, 20))
        assert state.map.values[50, 50] == pytest.approx(0.3, abs=1e-9)
        assert state.map.values[50, 530] == pytest.approx(1.0, abs=1e-9)

    def test_clamped_under_overlap(self):
        state = PenaltyState(100, 100, alpha=1.0)
        for _ in range(4):
            apply_penalty_cycle(state, Rect(40, 40, 20, 20))
            assert state.map.values.max() <= 1.0

    def test_decay_only(self):
        state = PenaltyState(100, 100, alpha=0.5)
        apply_penalty_cycle(state, Rect(40, 40, 20, 20))
        state.decay()
        assert state.map.values[50, 50] == pytest.approx(0.5)

    def test_analysis_grid_mapping(self):
        # penalty held at half resolution: a frame-space rect lands scaled
        state = PenaltyState(100, 50, alpha=0.3, frame_w=200, frame_h=100)
        apply_penalty_cycle(state, Rect(80, 30, 40, 40))  # frame center (100, 50)
        assert state.map.values[25, 50] == pytest.approx(1.0)


class TestDecisionMap:
    def test_identity_when_no_penalty_full_mask(self):
        sens = map_with_blocks(10, 10, [(Rect(2, 2, 3, 3), 0.8)])
        user = UserMask.all_relevant(10, 10)
        penalty = PenaltyState(10, 10)
        out = decision_map(sens, user, penalty)
        assert np.array_equal(out.values, sens.values)

    def test_user_mask_excludes(self):
        sens = ScalarMap.full(10, 10, 1.0)
        mask_vals = np.ones((10, 10))
        mask_vals[:, :5] = 0.0  # left half is a road
        user = UserMask(ScalarMap(mask_vals))
        out = decision_map(sens, user, PenaltyState(10, 10))
        assert out.values[:, :5].max() == 0.0
        assert out.values[:, 5:].min() == 1.0

    def test_pointwise_product(self):
        sens = ScalarMap.full(4, 4, 0.8)
        user = UserMask.all_relevant(4, 4)
        penalty = PenaltyState(4, 4)
        penalty.map.values[:] = 0.3
        out = decision_map(sens, user, penalty)
        assert out.values[0, 0] == pytest.approx((1 - 0.3) * 0.8)

    def test_penalty_resampled_from_analysis_grid(self):
        sens = ScalarMap.full(8, 8, 1.0)
        user = UserMask.all_relevant(8, 8)
        penalty = PenaltyState(4, 4, frame_w=8, frame_h=8)
        penalty.map.values[:] = 0.5
        out = decision_map(sens, user, penalty)
        assert np.allclose(out.values, 0.5)

    def test_binary_user_mask_enforced(self):
        with pytest.raises(SzoomError):
            UserMask(ScalarMap.full(4, 4, 0.5))


class TestAlternation:
    """Two equal, far-apart blobs must alternate under the penalty."""

    def brute_force_cycle(self, sens, selections, alpha, w, h):
        # independent penalty bookkeeping with explicit loops
        p = np.zeros((h, w))
        series = []
        for rect in selections:
            d = (1.0 - p) * sens
            series.append(d.copy())
            cx, cy = rect.x + rect.w / 2.0, rect.y + rect.h / 2.0
            sx, sy = rect.w / 2.0, rect.h / 2.0
            g = np.zeros((h, w))
            for yy in range(h):
                for xx in range(w):
                    g[yy, xx] = math.exp(
                        -((xx - cx) ** 2) / (2 * sx * sx)
                        - ((yy - cy) ** 2) / (2 * sy * sy)
                    )
            p = np.clip(alpha * p + g, 0.0, 1.0)
        return series

    def test_blobs_alternate(self):
        from szoom.roi import extract_candidates, select_target

        w, h = 320, 100
        blob_a = Rect(52, 42, 16, 16)
        blob_b = Rect(252, 42, 16, 16)
        sens = map_with_blocks(w, h, [(blob_a, 1.0), (blob_b, 1.0)])
        user = UserMask.all_relevant(w, h)
        penalty = PenaltyState(w, h, alpha=0.3)

        selections = []
        for _ in range(8):
            decision = decision_map(sens, user, penalty)
            cands = extract_candidates(decision, threshold=0.2, merge_dist=8, min_area=4)
            target = select_target(cands, 1.0, w, h)
            assert target is not None
            selections.append(target)
            apply_penalty_cycle(penalty, target)

        centers = [blob_a.center, blob_b.center]
        picked = [
            min((0, 1), key=lambda i: abs(t.center[0] - centers[i][0]))
            for t in selections
        ]
        assert picked[:2] == [0, 1]
        assert all(picked[i] != picked[i + 1] for i in range(len(picked) - 1))

        # brute-force argmax oracle agrees cycle by cycle
        series = self.brute_force_cycle(
            sens.values, selections, 0.3, w, h
        )
        for target, d in zip(selections, series):
            yy, xx = np.unravel_index(np.argmax(d), d.shape)
            assert target.x <= xx < target.x2 and target.y <= yy < target.y2
