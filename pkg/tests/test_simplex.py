import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from qtomo.errors import (
    DimensionError,
    OscillationError,
    SingularMatrixError,
    ValidationError,
)
from qtomo.simplex import (
    ProbabilityVector,
    apply,
    bistochastic_orbit_contains,
    cesaro_limit,
    compose,
    convex_combine,
    inverse_if_exists,
    is_permutation,
    perron_vector,
    power_limit,
    random_bistochastic,
    random_stochastic,
    validate_stochastic,
)

CYCLE = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=float)


def test_probability_vector_validation():
    ProbabilityVector([0.5, 0.5])
    with pytest.raises(ValidationError):
        ProbabilityVector([0.6, 0.5])
    with pytest.raises(ValidationError):
        ProbabilityVector([1.1, -0.1])
    with pytest.raises(ValidationError):
        ProbabilityVector([])
    p = ProbabilityVector([1 + 5e-13, -5e-13])
    assert p.components[1] == 0.0


def test_probability_vector_constructors():
    assert np.array_equal(ProbabilityVector.uniform(4).components, [0.25] * 4)
    assert np.array_equal(ProbabilityVector.vertex(3, 1).components, [0, 1, 0])


def test_validate_stochastic_messages():
    with pytest.raises(ValidationError, match="column 1"):
        validate_stochastic([[1.0, 0.5], [0.0, 0.6]])
    with pytest.raises(ValidationError, match="negative"):
        validate_stochastic([[1.1, 0.5], [-0.1, 0.5]])
    with pytest.raises(DimensionError):
        validate_stochastic(np.ones((2, 3)) / 2)


def test_bistochastic_flag():
    assert validate_stochastic(np.full((3, 3), 1 / 3)).is_bistochastic
    assert not validate_stochastic([[1.0, 1.0], [0.0, 0.0]]).is_bistochastic


def test_apply_compose_examples():
    m = [[1.0, 0.5], [0.0, 0.5]]
    assert np.allclose(apply(m, [0.5, 0.5]).components, [0.75, 0.25], atol=1e-15)
    assert np.allclose(compose(m, m).entries, [[1.0, 0.75], [0.0, 0.25]], atol=1e-15)
    with pytest.raises(DimensionError):
        apply(m, [1 / 3] * 3)


def test_convex_combine_rejects_bad_lambda():
    with pytest.raises(ValidationError):
        convex_combine(np.eye(2), np.eye(2), 1.5)


def test_perron_hand_value():
    m = np.array([[0.9, 0.5], [0.1, 0.5]])
    p = perron_vector(m).components
    assert np.abs(p - [5 / 6, 1 / 6]).max() < 1e-12


def test_perron_permutation_uses_cesaro():
    p = perron_vector(CYCLE).components
    assert np.abs(CYCLE @ p - p).max() < 1e-12


def test_perron_matches_eigenvector_oracle(rng):
    for _ in range(50):
        m = random_stochastic(4, rng, positive=True).entries
        w, v = np.linalg.eig(m)
        k = np.argmin(np.abs(w - 1))
        oracle = np.real(v[:, k])
        oracle /= oracle.sum()
        assert np.abs(perron_vector(m).components - oracle).max() < 1e-10


def test_power_limit_rank_one(rng):
    m = random_stochastic(3, rng, positive=True)
    res = power_limit(m)
    p = res.perron.components
    assert np.abs(res.matrix.entries - np.outer(p, np.ones(3))).max() < 1e-15
    assert np.abs(np.linalg.matrix_power(m.entries, res.steps) - res.matrix.entries).max() <= 1e-10


def test_power_limit_oscillates():
    with pytest.raises(OscillationError):
        power_limit(CYCLE)


def test_cesaro_limit_even_odd():
    n = 1001
    c = cesaro_limit(CYCLE, n)
    expected = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 2]]) / 2
    assert np.abs(c - expected).max() <= 1 / n


def test_cesaro_matches_direct_sum(rng):
    m = random_stochastic(3, rng).entries
    direct = sum(np.linalg.matrix_power(m, k) for k in range(1, 21)) / 20
    assert np.abs(cesaro_limit(m, 20) - direct).max() < 1e-14


def test_inverse_hand_value():
    m = np.array([[2 / 3, 1 / 3], [1 / 3, 2 / 3]])
    assert np.abs(inverse_if_exists(m) - np.array([[2, -1], [-1, 2]])).max() < 1e-12


def test_inverse_of_unit_column_matrix_has_unit_columns(rng):
    m = random_stochastic(3, rng, positive=True)
    inv = inverse_if_exists(m)
    assert np.abs(inv.sum(axis=0) - 1).max() < 1e-10


def test_inverse_singular():
    with pytest.raises(SingularMatrixError):
        inverse_if_exists(np.full((2, 2), 0.5))


def test_inverse_stochastic_only_for_permutations(rng):
    assert is_permutation(inverse_if_exists(CYCLE))
    for _ in range(20):
        m = random_stochastic(3, rng, positive=True)
        assert np.min(inverse_if_exists(m)) < 0


def test_orbit_examples():
    assert bistochastic_orbit_contains([1, 0, 0], [1 / 3] * 3)
    assert not bistochastic_orbit_contains([1 / 3] * 3, [1, 0, 0])
    assert bistochastic_orbit_contains([0.5, 0.3, 0.2], [0.2, 0.5, 0.3])


def hull_feasible(v, w):
    perms = [np.eye(3)[list(p)] @ v for p in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))]
    a_eq = np.vstack([np.column_stack(perms), np.ones(6)])
    b_eq = np.concatenate([w, [1.0]])
    res = linprog(np.zeros(6), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * 6, method="highs")
    return res.status == 0


def test_orbit_matches_linear_program(rng):
    for _ in range(200):
        v = rng.dirichlet(np.ones(3))
        w = rng.dirichlet(np.ones(3)) if rng.random() < 0.5 else random_bistochastic(3, rng).entries @ v
        assert bistochastic_orbit_contains(v, w) == hull_feasible(v, w)


simplex_vec = st.lists(st.floats(0.01, 1.0), min_size=3, max_size=3).map(lambda x: np.array(x) / sum(x))


@settings(max_examples=100, deadline=None)
@given(simplex_vec, st.integers(0, 2**32 - 1))
def test_bistochastic_image_is_in_orbit(v, seed):
    m = random_bistochastic(3, np.random.default_rng(seed))
    assert bistochastic_orbit_contains(v, m.entries @ v)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_semigroup_closure_property(seed, lam):
    rng = np.random.default_rng(seed)
    a = random_stochastic(4, rng)
    b = random_stochastic(4, rng)
    for m in (compose(a, b), convex_combine(a, b, lam)):
        assert np.all(m.entries >= 0)
        assert np.abs(m.entries.sum(axis=0) - 1).max() < 1e-12


def test_bistochastic_perron_is_uniform(rng):
    for _ in range(20):
        m = random_bistochastic(4, rng)
        assert np.abs(perron_vector(m).components - 0.25).max() < 1e-12
