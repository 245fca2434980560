import itertools
import math

import numpy as np
import pytest
from conftest import blob_map

from cubepad_saliency.core.exceptions import ArgumentError, DataError, InfeasibleError
from cubepad_saliency.pilot.linking import link_trajectory, transition_mask
from cubepad_saliency.pilot.models import CandidateGrid
from cubepad_saliency.pilot.scoring import score_sequence, score_viewangles, window_weights
from cubepad_saliency.tensor.models import EquirectMap

LINE_GRID = [(0.0, 0.0), (20.0, 0.0), (40.0, 0.0), (60.0, 0.0), (0.0, 20.0), (180.0, 0.0)]


def brute_force_best(scores: np.ndarray, grid: CandidateGrid, d_max: float) -> float:
    feasible = transition_mask(grid, d_max)
    best = -math.inf
    for path in itertools.product(range(len(grid)), repeat=scores.shape[0]):
        if all(feasible[a, b] for a, b in itertools.pairwise(path)):
            best = max(best, sum(scores[t, c] for t, c in enumerate(path)))
    return best


def test_regular_grid_layout():
    grid = CandidateGrid.regular()
    assert len(grid) == 36 * 10
    lats = sorted({round(math.degrees(lat), 6) for _, lat in grid.centers})
    assert lats == [-45.0, -35.0, -25.0, -15.0, -5.0, 5.0, 15.0, 25.0, 35.0, 45.0]
    assert (0.0, 0.0) in CandidateGrid.regular(lat_limit_deg=40.0).centers


def test_grid_merges_wrapped_duplicates():
    grid = CandidateGrid.from_degrees([(180.0, 0.0), (-180.0, 0.0)])
    assert len(grid) == 1
    assert grid.centers[0][0] == pytest.approx(-math.pi)


@pytest.mark.parametrize(
    "make",
    [
        lambda: CandidateGrid.from_degrees([(0.0, 100.0)]),
        lambda: CandidateGrid.from_degrees([]),
        lambda: CandidateGrid.from_degrees([(0.0, 0.0)], fov_deg=0.0),
        lambda: CandidateGrid.regular(lon_step_deg=-10.0),
    ],
)
def test_grid_argument_errors(make):
    with pytest.raises(ArgumentError):
        make()


def test_constant_map_scores_evenly():
    sal = EquirectMap(np.full((1, 32, 64), 0.25, dtype=np.float32))
    scores = score_viewangles(sal, CandidateGrid.regular(lon_step_deg=45.0, lat_step_deg=30.0))
    np.testing.assert_allclose(scores, 0.25, rtol=1e-12)


def test_blob_center_scores_highest():
    grid = CandidateGrid.regular(lat_limit_deg=40.0)
    scores = score_viewangles(blob_map(256, 40.0, 0.0), grid)
    lon, lat = grid.centers[int(np.argmax(scores))]
    assert (math.degrees(lon), math.degrees(lat)) == pytest.approx((40.0, 0.0), abs=1e-9)


def test_channel_selects_a_class_map():
    sal = EquirectMap(
        np.concatenate([blob_map(128, -90.0, 0.0).data, blob_map(128, 90.0, 0.0).data])
    )
    grid = CandidateGrid.from_degrees([(-90.0, 0.0), (90.0, 0.0)])
    assert np.argmax(score_viewangles(sal, grid, channel=0)) == 0
    assert np.argmax(score_viewangles(sal, grid, channel=1)) == 1
    with pytest.raises(ArgumentError):
        score_viewangles(sal, grid, channel=2)


def test_sequence_scores_shape():
    grid = CandidateGrid.from_degrees(LINE_GRID)
    maps = [blob_map(64, 0.0, 0.0), blob_map(64, 60.0, 0.0), blob_map(64, 180.0, 0.0)]
    assert score_sequence(maps, grid).shape == (3, 6)


@pytest.mark.parametrize("frames, d_max_deg", [(6, 25.0), (5, 45.0), (4, 10.0)])
def test_linking_matches_brute_force(rng, frames, d_max_deg):
    grid = CandidateGrid.from_degrees(LINE_GRID)
    scores = rng.random((frames, len(grid)))
    d_max = math.radians(d_max_deg)

    trajectory = link_trajectory(scores, grid, d_max)

    assert trajectory.total == pytest.approx(brute_force_best(scores, grid, d_max))


def test_larger_grid_matches_brute_force(rng):
    grid = CandidateGrid.regular(lon_step_deg=30.0, lat_step_deg=90.0, lat_limit_deg=0.0)
    scores = rng.random((4, len(grid)))
    d_max = math.radians(31.0)
    trajectory = link_trajectory(scores, grid, d_max)
    assert len(grid) == 12
    assert trajectory.total == pytest.approx(brute_force_best(scores, grid, d_max))


def test_steps_respect_the_angular_bound(rng):
    grid = CandidateGrid.regular(lon_step_deg=20.0, lat_step_deg=20.0, lat_limit_deg=40.0)
    d_max = math.radians(25.0)
    trajectory = link_trajectory(rng.random((8, len(grid))), grid, d_max)
    feasible = transition_mask(grid, d_max)
    for a, b in itertools.pairwise(trajectory.candidates):
        assert feasible[a, b]


def test_ties_pick_the_smallest_index():
    grid = CandidateGrid.from_degrees(LINE_GRID)
    trajectory = link_trajectory(np.zeros((3, len(grid))), grid)
    assert trajectory.candidates == (0, 0, 0)


def test_unbounded_speed_takes_the_per_frame_maximum(rng):
    grid = CandidateGrid.from_degrees(LINE_GRID)
    scores = rng.random((5, len(grid)))
    trajectory = link_trajectory(scores, grid, math.pi)
    assert trajectory.candidates == tuple(int(i) for i in np.argmax(scores, axis=1))


def test_isolated_candidate_can_stay_put():
    grid = CandidateGrid.from_degrees(LINE_GRID)
    scores = np.zeros((4, len(grid)))
    scores[:, 5] = 1.0
    trajectory = link_trajectory(scores, grid, math.radians(5.0))
    assert trajectory.candidates == (5, 5, 5, 5)
    assert trajectory.total == 4.0


def test_linking_errors():
    grid = CandidateGrid.from_degrees(LINE_GRID)
    with pytest.raises(ArgumentError):
        link_trajectory(np.zeros((3, 4)), grid)
    with pytest.raises(ArgumentError):
        link_trajectory(np.zeros(6), grid)
    scores = np.zeros((3, 6))
    scores[1, 2] = np.nan
    with pytest.raises(DataError):
        link_trajectory(scores, grid)
    with pytest.raises(InfeasibleError):
        link_trajectory(np.zeros((3, 6)), grid, 0.0)


def test_pilot_follows_a_moving_blob():
    grid = CandidateGrid.regular(lat_limit_deg=40.0)
    maps = [blob_map(128, lon, 0.0) for lon in (0.0, 10.0, 20.0, 30.0)]

    trajectory = link_trajectory(score_sequence(maps, grid), grid, math.radians(10.5))

    assert [math.degrees(lon) for lon in trajectory.lons] == pytest.approx([0, 10, 20, 30])
    assert trajectory.lats == pytest.approx((0.0,) * 4)


def test_trajectory_records():
    grid = CandidateGrid.from_degrees(LINE_GRID)
    scores = np.zeros((2, len(grid)))
    scores[:, 1] = 0.5
    records = link_trajectory(scores, grid).to_records(frames=[10, 11])
    assert [r.frame for r in records] == [10, 11]
    assert records[0].lon_deg == pytest.approx(20.0)
    assert records[0].viewer == "pilot"
    assert records[1].score == 0.5


def test_window_weights_favour_the_center():
    weights = window_weights(64, math.pi / 2)
    assert weights.sum() == pytest.approx(1.0)
    np.testing.assert_array_equal(weights, weights[::-1])
    np.testing.assert_array_equal(weights, weights.T)
    corner = 1.0 + 2.0 * (63.0 / 64.0) ** 2
    center = 1.0 + 2.0 * (1.0 / 64.0) ** 2
    assert weights[0, 0] / weights[31, 31] == pytest.approx((corner / center) ** -2.0)


def test_narrow_blob_goes_to_the_nearest_candidate():
    grid = CandidateGrid.regular()
    scores = score_viewangles(blob_map(256, 32.0, 18.0, sigma_deg=5.0), grid)
    lon, lat = grid.centers[int(np.argmax(scores))]
    assert (math.degrees(lon), math.degrees(lat)) == pytest.approx((30.0, 15.0), abs=1e-9)


@pytest.mark.parametrize("lon_deg, lat_deg", [(-40.0, -25.0), (100.0, 5.0), (170.0, 35.0)])
def test_blob_on_a_grid_point_wins_over_its_neighbours(lon_deg, lat_deg):
    grid = CandidateGrid.regular()
    scores = score_viewangles(blob_map(256, lon_deg, lat_deg, sigma_deg=5.0), grid)
    lon, lat = grid.centers[int(np.argmax(scores))]
    assert (math.degrees(lon), math.degrees(lat)) == pytest.approx((lon_deg, lat_deg), abs=1e-9)


def test_window_scores_converge_with_resolution():
    grid = CandidateGrid.from_degrees(LINE_GRID)
    sal = blob_map(256, 25.0, 5.0, sigma_deg=15.0)
    coarse = score_viewangles(sal, grid, resolution=32)
    fine = score_viewangles(sal, grid, resolution=128)
    np.testing.assert_allclose(coarse, fine, atol=0.01)
