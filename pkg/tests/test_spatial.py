import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roisolve.errors import ParameterError, ShapeError, SingularSystemError
from roisolve.forward import observe_spatial
from roisolve.grid import RoiSpec, scatter_roi
from roisolve.spatial import (
    SpatialSystem,
    build_system,
    ring_cells,
    solve_system,
    solve_two_point_1d,
    system_matrix,
)


# ---------------------------------------------------------------------------
# two-point closed form

def test_two_point_worked_example():
    p, q = 1.0, 0.9981
    x_a, x_b = 1.2, 3.4
    y_a = p * x_a + q * x_b
    y_b = p * x_b + q * x_a
    got_a, got_b = solve_two_point_1d(p, q, q, y_a, y_b)
    assert got_a == pytest.approx(x_a, abs=1e-12)
    assert got_b == pytest.approx(x_b, abs=1e-12)


def test_two_point_decoupled():
    # zero cross coupling reduces to two independent readings
    x_a, x_b = solve_two_point_1d(2.0, 0.0, 0.0, 2.4, 6.8)
    assert (x_a, x_b) == (pytest.approx(1.2), pytest.approx(3.4))


def test_two_point_singular():
    with pytest.raises(SingularSystemError):
        solve_two_point_1d(1.0, 1.0, 1.0, 2.0, 2.0)
    with pytest.raises(SingularSystemError):
        solve_two_point_1d(0.5, 0.25, 1.0, 1.0, 1.0)
    with pytest.raises(SingularSystemError):
        solve_two_point_1d(0.0, 0.0, 0.0, 0.0, 0.0)


@settings(max_examples=200, deadline=None)
@given(
    p=st.floats(0.1, 10.0),
    q_a=st.floats(-0.9, 0.9),
    q_b=st.floats(-0.9, 0.9),
    x_a=st.floats(-256.0, 256.0),
    x_b=st.floats(-256.0, 256.0),
)
def test_two_point_round_trip(p, q_a, q_b, x_a, x_b):
    det = p * p - q_a * q_b
    if abs(det) <= 1e-6 * max(p * p, abs(q_a * q_b)):
        return
    y_a = p * x_a + q_a * x_b
    y_b = p * x_b + q_b * x_a
    got_a, got_b = solve_two_point_1d(p, q_a, q_b, y_a, y_b)
    scale = max(abs(x_a), abs(x_b), 1.0)
    assert abs(got_a - x_a) <= 1e-9 * scale * max(p * p, 1.0) / abs(det) + 1e-12
    assert abs(got_b - x_b) <= 1e-9 * scale * max(p * p, 1.0) / abs(det) + 1e-12


# ---------------------------------------------------------------------------
# system construction

def test_system_matrix_entries_brute_force(small_psf):
    roi = RoiSpec(20, 21, 2, 3)
    obs_cells = np.vstack([roi.cells(), [[19, 20], [23, 25]]])
    a = system_matrix(small_psf, roi, obs_cells)
    unknowns = [(r, c) for r in range(20, 22) for c in range(21, 24)]
    for i, (m, n) in enumerate(obs_cells):
        for j, (k, l) in enumerate(unknowns):
            assert a[i, j] == small_psf.value(k - m, l - n)


def test_system_matrix_positive_small_config(small_psf):
    roi = RoiSpec(20, 20, 3, 3)
    a = system_matrix(small_psf, roi, roi.cells())
    assert a.min() > 0


def test_build_system_rhs_and_condition(small_psf, rng):
    roi = RoiSpec(22, 19, 3, 3)
    pixels = rng.uniform(0, 256, 9)
    obs = observe_spatial(scatter_roi(pixels, roi, 48, 48), small_psf)
    system = build_system(small_psf, obs, roi)
    np.testing.assert_array_equal(system.rhs, obs[roi.slices()].ravel())
    assert np.isfinite(system.condition_estimate)
    skipped = build_system(small_psf, obs, roi, estimate_condition=False)
    assert np.isnan(skipped.condition_estimate)


def test_build_system_extra_obs_validation(small_psf):
    roi = RoiSpec(20, 20, 2, 2)
    obs = np.zeros((48, 48))
    with pytest.raises(ShapeError):
        build_system(small_psf, obs, roi, extra_obs=np.array([[48, 0]]))
    with pytest.raises(ShapeError):
        build_system(small_psf, obs, roi, extra_obs=np.array([1, 2, 3]))


def test_ring_cells_brute_force():
    roi = RoiSpec(5, 6, 3, 2)
    got = {tuple(rc) for rc in ring_cells(roi, 20, 20, width=2)}
    want = set()
    for r in range(20):
        for c in range(20):
            inside = 5 <= r < 8 and 6 <= c < 8
            dr = max(5 - r, r - 7, 0)
            dc = max(6 - c, c - 7, 0)
            if not inside and max(dr, dc) <= 2:
                want.add((r, c))
    assert got == want
    assert len(got) == 7 * 6 - 3 * 2


def test_ring_cells_clip_at_border():
    roi = RoiSpec(0, 0, 2, 2)
    cells = ring_cells(roi, 10, 10, width=2)
    assert cells.min() >= 0
    assert len(cells) == 4 * 4 - 2 * 2
    with pytest.raises(ParameterError):
        ring_cells(roi, 10, 10, width=0)


# ---------------------------------------------------------------------------
# solving

def test_direct_solve_recovers_pixels(small_psf, rng):
    roi = RoiSpec(23, 23, 3, 3)
    pixels = rng.uniform(0, 256, 9)
    obs = observe_spatial(scatter_roi(pixels, roi, 48, 48), small_psf)
    sol = solve_system(build_system(small_psf, obs, roi))
    assert np.abs(sol.pixels - pixels).max() <= 1e-6
    assert sol.residual <= 1e-10
    assert sol.method == "direct"


def test_least_squares_never_worse_than_square(small_psf, rng):
    # the augmented-system residual of the lsq solution cannot exceed the
    # square solution's residual on those same rows
    roi = RoiSpec(23, 23, 3, 3)
    pixels = rng.uniform(0, 256, 9)
    obs = observe_spatial(scatter_roi(pixels, roi, 48, 48), small_psf)
    square = build_system(small_psf, obs, roi)
    ring = ring_cells(roi, 48, 48, width=2)
    wide = build_system(small_psf, obs, roi, extra_obs=ring)
    x_square = solve_system(square).pixels
    x_lsq = solve_system(wide, "least_squares").pixels
    r_square = np.linalg.norm(wide.a_matrix @ x_square - wide.rhs)
    r_lsq = np.linalg.norm(wide.a_matrix @ x_lsq - wide.rhs)
    assert r_lsq <= r_square * (1 + 1e-12) + 1e-15


def test_direct_requires_square(small_psf, rng):
    roi = RoiSpec(23, 23, 2, 2)
    obs = observe_spatial(scatter_roi(rng.uniform(0, 256, 4), roi, 48, 48), small_psf)
    wide = build_system(small_psf, obs, roi, extra_obs=ring_cells(roi, 48, 48, 1))
    with pytest.raises(ShapeError):
        solve_system(wide, "direct")


def test_unknown_method_rejected(small_psf):
    roi = RoiSpec(20, 20, 2, 2)
    system = build_system(small_psf, np.zeros((48, 48)), roi)
    with pytest.raises(ParameterError):
        solve_system(system, "cg")


def test_singular_direct_and_truncated():
    roi = RoiSpec(0, 0, 2, 2)
    system = SpatialSystem(
        a_matrix=np.zeros((4, 4)),
        rhs=np.zeros(4),
        roi=roi,
        obs_cells=roi.cells(),
        condition_estimate=np.inf,
    )
    with pytest.raises(SingularSystemError):
        solve_system(system, "direct")
    with pytest.raises(SingularSystemError):
        solve_system(system, "truncated")


def test_truncated_handles_rank_deficiency():
    roi = RoiSpec(0, 0, 1, 2)
    a = np.array([[1.0, 1.0], [2.0, 2.0]])  # rank one
    system = SpatialSystem(
        a_matrix=a,
        rhs=np.array([2.0, 4.0]),
        roi=roi,
        obs_cells=roi.cells(),
        condition_estimate=np.inf,
    )
    sol = solve_system(system, "truncated")
    assert np.allclose(a @ sol.pixels, system.rhs)


def test_negative_report_and_clamp(small_psf, rng):
    roi = RoiSpec(23, 23, 2, 2)
    pixels = np.array([5.0, -3.0, 4.0, -1.0])  # physically odd, linearly fine
    obs = observe_spatial(scatter_roi(pixels, roi, 48, 48), small_psf)
    system = build_system(small_psf, obs, roi)
    sol = solve_system(system)
    assert sol.negative_count == 2
    assert sol.min_pixel == pytest.approx(-3.0, abs=1e-8)
    clamped = solve_system(system, clamp_negative=True)
    assert clamped.pixels.min() >= 0.0
    assert clamped.negative_count == 2  # report reflects the raw solution


def test_residual_normalization():
    roi = RoiSpec(0, 0, 2, 2)
    a = np.eye(4)
    system = SpatialSystem(
        a_matrix=a,
        rhs=np.array([1.0, 0.0, 0.0, 0.0]),
        roi=roi,
        obs_cells=roi.cells(),
        condition_estimate=1.0,
    )
    sol = solve_system(system)
    assert sol.residual == pytest.approx(0.0, abs=1e-15)
