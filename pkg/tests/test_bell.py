import numpy as np
import pytest

from qtomo import _kernels
from qtomo.bell import (
    CIRELSON,
    E_MATRIX,
    BellSetting,
    bell_number,
    bell_state,
    chsh_scan,
    correlation_table,
    setting_matrix,
    universal_matrix,
)
from qtomo.errors import DimensionError, ValidationError
from qtomo.hermitian import measurement_frame, random_density
from qtomo.tomography import joint_tomogram

OPTIMAL = (0.0, np.pi / 4, -np.pi / 4, np.pi / 2)


def test_bell_state_entries():
    rho = bell_state().data
    assert rho[1, 1] == rho[2, 2] == rho[1, 2] == rho[2, 1] == 0.5
    assert np.count_nonzero(rho) == 4


def test_universal_matrix_structure():
    u = universal_matrix().entries
    x = (2 + np.sqrt(2)) / 8
    assert abs(u[0, 0] - x) < 1e-16 and abs(u[1, 0] - (0.5 - x)) < 1e-16
    assert abs(u[1, 3] - x) < 1e-16
    assert abs(bell_number(u) - CIRELSON) < 1e-14


def test_bell_number_is_correlator_sum():
    rng = np.random.default_rng(1)
    m = rng.dirichlet(np.ones(4), size=4).T
    corr = np.array([1, -1, -1, 1]) @ m
    assert abs(bell_number(m) - (corr[0] + corr[1] + corr[2] - corr[3])) < 1e-14


def test_e_matrix_is_read_only():
    with pytest.raises(ValueError):
        E_MATRIX[0, 0] = 0


def test_setting_matrix_column_order():
    rho = random_density(4, 3)
    frames = [measurement_frame(np.pi / 2, f) for f in (0.1, 0.7, 1.3, 2.9)]
    m = setting_matrix(rho, BellSetting(*frames)).entries
    a, b, c, d = frames
    for col, (h, k) in enumerate(((a, b), (a, c), (d, b), (d, c))):
        assert np.abs(m[:, col] - joint_tomogram(rho, h, k).probabilities.components).max() < 1e-15


def test_optimal_setting_reaches_cirelson():
    m = setting_matrix(bell_state(), BellSetting.from_angles(OPTIMAL))
    assert abs(bell_number(m) - CIRELSON) < 1e-12


def test_correlation_table_matches_setting_matrix():
    rho = random_density(4, 11)
    az = np.linspace(0, 3, 5)
    frames = np.array([measurement_frame(np.pi / 2, f).data for f in az])
    corr = correlation_table(rho.data, frames, frames)
    s = BellSetting(*[frames[i] for i in (0, 1, 2, 3)])
    m = setting_matrix(rho, s).entries
    parity = np.array([1, -1, -1, 1])
    assert abs(parity @ m[:, 0] - corr[0, 1]) < 1e-14
    assert abs(parity @ m[:, 3] - corr[3, 2]) < 1e-14


def test_grid_kernels_agree():
    rng = np.random.default_rng(2)
    corr = rng.uniform(-1, 1, (9, 9))
    ref = _kernels.chsh_grid_argmax_numpy(corr)
    loops = _kernels._chsh_grid_argmax_loops(corr)
    assert ref[1:] == loops[1:] and abs(ref[0] - loops[0]) < 1e-14


def test_grid_tie_break_is_lexicographic():
    corr = np.zeros((3, 3))
    best, *idx = _kernels.chsh_grid_argmax_numpy(corr)
    assert best == 0.0 and tuple(idx) == (0, 0, 0, 0)
    assert tuple(_kernels._chsh_grid_argmax_loops(corr)[1:]) == (0, 0, 0, 0)


def test_scan_bell_state():
    res = chsh_scan(bell_state(), 64, refine=True)
    assert CIRELSON - 1e-6 <= res.max_b <= CIRELSON + 1e-9
    assert res.grid_b <= res.max_b


def test_scan_product_state_classical():
    rho = np.kron(random_density(2, 1).data, random_density(2, 2).data)
    res = chsh_scan(rho, 16, refine=True, full=True)
    assert res.max_b <= 2 + 1e-9


def test_scan_full_bound():
    res = chsh_scan(random_density(4, 4), 8, full=True)
    assert len(res.polars) == 4 and res.max_b <= CIRELSON + 1e-12


def test_scan_rejects():
    with pytest.raises(ValidationError):
        chsh_scan(bell_state(), 1)
    with pytest.raises(DimensionError):
        chsh_scan(np.eye(2) / 2)
