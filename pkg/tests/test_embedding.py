import numpy as np
import pytest

from qtomo.embedding import (
    QUTRIT_FRAME,
    AffineBlock,
    embed,
    extract,
    frame_for,
    householder_frame,
    qutrit_coefficients,
    qutrit_from_coefficients,
)
from qtomo.errors import ValidationError
from qtomo.simplex import random_bistochastic, random_stochastic

S2, S3, S6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)


def test_identity_embeds_to_identity():
    block = embed(np.eye(3))
    assert np.abs(block.linear - np.eye(2)).max() < 1e-15
    assert np.abs(block.translation).max() < 1e-15


def test_hand_example_coefficients():
    # x = (1,0,0), y = (0,1,0), z = (1/3,1/3,1/3) column-wise
    m = np.array([[1, 0, 1 / 3], [0, 1, 1 / 3], [0, 0, 1 / 3]])
    c = qutrit_coefficients(m)
    assert abs(c["A"] - 1) < 1e-15
    assert abs(c["B"]) < 1e-15
    assert abs(c["C"]) < 1e-15
    assert abs(c["D"] - 1 / 3) < 1e-15
    block = embed(m)
    full = QUTRIT_FRAME @ m @ QUTRIT_FRAME.T
    assert np.abs(block.linear - full[:2, :2]).max() < 1e-15


def test_coefficients_match_conjugation(rng):
    for _ in range(200):
        m = random_stochastic(3, rng).entries
        full = QUTRIT_FRAME @ m @ QUTRIT_FRAME.T
        c = qutrit_coefficients(m)
        assert abs(c["A"] - full[0, 0]) < 1e-14
        assert abs(c["B"] - full[0, 1]) < 1e-14
        assert abs(c["C"] - full[1, 0]) < 1e-14
        assert abs(c["D"] - full[1, 1]) < 1e-14
        assert abs(c["m"] - full[0, 2]) < 1e-14
        assert abs(c["n"] - full[1, 2]) < 1e-14


def test_closed_form_inverse_round_trip(rng):
    for _ in range(200):
        m = random_stochastic(3, rng).entries
        back = qutrit_from_coefficients(**qutrit_coefficients(m))
        assert np.abs(back - m).max() < 1e-14


def test_translation_example():
    # every column is (1, 0, 0)
    m = np.array([[1.0, 1.0, 1.0], [0, 0, 0], [0, 0, 0]])
    block = embed(m)
    assert abs(block.translation[0] - 3 / S6) < 1e-15
    assert abs(block.translation[1] - 1 / S2) < 1e-15


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_frames_are_valid(n):
    f = frame_for(n)
    assert np.abs(f.O @ f.O.T - np.eye(n)).max() < 1e-12
    if n != 3:
        assert abs(np.linalg.det(f.O) - 1) < 1e-12


@pytest.mark.parametrize("n", [2, 4, 5])
def test_round_trip_general_n(rng, n):
    for _ in range(50):
        m = random_stochastic(n, rng).entries
        assert np.abs(extract(embed(m)) - m).max() < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bistochastic_has_no_translation(rng, n):
    for _ in range(50):
        assert np.abs(embed(random_bistochastic(n, rng)).translation).max() < 1e-12


def test_homomorphism(rng):
    for n in (3, 4):
        for _ in range(50):
            a = random_stochastic(n, rng).entries
            b = random_stochastic(n, rng).entries
            lhs = embed(a @ b)
            rhs = embed(a).compose(embed(b))
            assert np.abs(lhs.linear - rhs.linear).max() < 1e-12
            assert np.abs(lhs.translation - rhs.translation).max() < 1e-12


def test_extract_allows_negative_entries():
    block = AffineBlock(np.array([[2.0, 0.0], [0.0, 1.0]]), np.zeros(2))
    m = extract(block)
    assert m.min() < 0
    assert np.abs(m.sum(axis=0) - 1).max() < 1e-12


def test_embed_rejects_bad_column_sums():
    with pytest.raises(ValidationError):
        embed(np.eye(3) * 0.5)


def test_householder_maps_uniform_to_last():
    o = householder_frame(4).O
    assert np.abs(o @ np.full(4, 0.5) - [0, 0, 0, 1]).max() < 1e-15
