"""Structure constants, invariant inner products, and the bracket bound."""

import numpy as np
import pytest

from artifact.lie_algebra import (
    BRACKET_NORM_BOUND,
    LieElement,
    ad_matrix,
    algebra_from_basis,
    bracket_norm_check,
    bracket_vec,
    bracket_via_matrices,
    coeffs_of,
    inner_vec,
    killing_matrix,
    make_abelian,
    make_so,
    make_su,
    matrix_of,
    norm_vec,
    subalgebra_spec,
)


@pytest.fixture(scope="module")
def so3():
    return make_so(3)


@pytest.fixture(scope="module")
def so5():
    return make_so(5)


@pytest.fixture(scope="module")
def su2():
    return make_su(2)


@pytest.fixture(scope="module")
def su2_trace():
    return make_su(2, inner="trace")


def _structure_oracle(basis: np.ndarray) -> np.ndarray:
    """Independent extraction through least squares on flat matrices."""
    d = basis.shape[0]
    flat = basis.reshape(d, -1)
    out = np.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            comm = basis[i] @ basis[j] - basis[j] @ basis[i]
            coeff, *_ = np.linalg.lstsq(
                flat.T, comm.reshape(-1), rcond=None
            )
            assert np.max(np.abs(coeff.imag)) <= 1e-12
            out[i, j] = coeff.real
    return out


# ---------------------------------------------------------------------------
# Construction and frozen Gram matrices
# ---------------------------------------------------------------------------


def test_so3_frozen():
    spec = make_so(3)
    assert spec.dim == 3
    assert spec.inner_mode == "killing"
    assert np.array_equal(spec.gram, 2.0 * np.eye(3))
    # integer structure constants
    assert np.array_equal(spec.structure, np.round(spec.structure))
    assert np.max(np.abs(spec.structure)) == 1.0


def test_so5_frozen(so5):
    assert so5.dim == 10
    assert np.array_equal(so5.gram, 6.0 * np.eye(10))
    assert np.array_equal(so5.structure, np.round(so5.structure))


def test_so5_fiber_brackets_exact(so5):
    """The last three generators close cyclically with unit constants."""
    for a, b, c in ((8, 9, 10), (9, 10, 8), (10, 8, 9)):
        row = so5.structure[a - 1, b - 1]
        expected = np.zeros(10)
        expected[c - 1] = 1.0
        assert np.array_equal(row, expected)


def test_su2_frozen(su2, su2_trace):
    assert su2.dim == 3
    assert np.array_equal(su2.gram, 8.0 * np.eye(3))
    assert su2_trace.inner_mode == "trace"
    assert np.array_equal(su2_trace.gram, 2.0 * np.eye(3))
    assert np.array_equal(su2.structure, su2_trace.structure)


def test_abelian_falls_back_to_trace():
    spec = make_abelian(4)
    assert spec.inner_mode == "trace"
    assert np.array_equal(spec.gram, np.eye(4))
    assert np.max(np.abs(spec.structure)) == 0.0


def test_killing_proportional_to_trace():
    for factory, n, expected in (
        (make_so, 3, 1.0),
        (make_so, 5, 3.0),
        (make_su, 2, 4.0),
    ):
        killing = factory(n)
        trace = factory(n, inner="trace")
        assert np.allclose(
            killing.gram, expected * trace.gram, atol=1e-12
        )


def test_structure_constants_match_oracle(so3, so5, su2):
    for spec in (so3, so5, su2):
        oracle = _structure_oracle(spec.basis)
        assert np.max(np.abs(spec.structure - oracle)) <= 1e-10


def test_killing_matrix_is_trace_of_adjoints(so3):
    d = so3.dim
    oracle = np.zeros((d, d))
    for i in range(d):
        for j in range(d):
            ad_i = so3.structure[i].T
            ad_j = so3.structure[j].T
            oracle[i, j] = np.trace(ad_i @ ad_j)
    assert np.max(np.abs(killing_matrix(so3.structure) - oracle)) <= 1e-12


# ---------------------------------------------------------------------------
# Bracket routes
# ---------------------------------------------------------------------------


def test_bracket_dual_path(so3, so5, su2):
    rng = np.random.default_rng(0)
    for spec in (so3, so5, su2):
        for _ in range(50):
            u = rng.standard_normal(spec.dim) + 1j * rng.standard_normal(
                spec.dim
            )
            v = rng.standard_normal(spec.dim) + 1j * rng.standard_normal(
                spec.dim
            )
            lhs = bracket_vec(spec, u, v)
            rhs = bracket_via_matrices(spec, u, v)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_bracket_antisymmetry_and_jacobi(so5):
    rng = np.random.default_rng(1)
    u, v, w = rng.standard_normal((3, so5.dim))
    assert np.max(
        np.abs(bracket_vec(so5, u, v) + bracket_vec(so5, v, u))
    ) <= 1e-12
    jacobi = (
        bracket_vec(so5, u, bracket_vec(so5, v, w))
        + bracket_vec(so5, v, bracket_vec(so5, w, u))
        + bracket_vec(so5, w, bracket_vec(so5, u, v))
    )
    assert np.max(np.abs(jacobi)) <= 1e-12


def test_ad_matrix_implements_bracket(so3, su2):
    rng = np.random.default_rng(2)
    for spec in (so3, su2):
        u = rng.standard_normal(spec.dim)
        v = rng.standard_normal(spec.dim)
        assert np.max(
            np.abs(ad_matrix(spec, u) @ v - bracket_vec(spec, u, v))
        ) <= 1e-12


def test_matrix_coeff_round_trip(so5):
    rng = np.random.default_rng(3)
    u = rng.standard_normal(so5.dim)
    back = coeffs_of(so5, matrix_of(so5, u))
    assert np.max(np.abs(back - u)) <= 1e-12


def test_ad_invariance(so3, so5, su2, su2_trace):
    rng = np.random.default_rng(4)
    for spec in (so3, so5, su2, su2_trace):
        for _ in range(20):
            u, v, w = rng.standard_normal((3, spec.dim))
            lhs = inner_vec(spec, bracket_vec(spec, u, v), w)
            rhs = -inner_vec(spec, v, bracket_vec(spec, u, w))
            assert abs(lhs - rhs) <= 1e-10


def test_gram_weighted_inner(so5):
    rng = np.random.default_rng(5)
    u = rng.standard_normal(so5.dim)
    v = rng.standard_normal(so5.dim)
    assert inner_vec(so5, u, v) == pytest.approx(6.0 * np.dot(u, v))
    assert norm_vec(so5, u) == pytest.approx(
        np.sqrt(6.0) * np.linalg.norm(u)
    )


# ---------------------------------------------------------------------------
# The commutator norm bound
# ---------------------------------------------------------------------------


def test_bound_constant():
    assert BRACKET_NORM_BOUND == pytest.approx(np.sqrt(2.0))


def test_bound_holds_everywhere(so3, so5, su2, su2_trace):
    for spec in (so3, so5, su2, su2_trace):
        report = bracket_norm_check(spec, samples=300, seed=0)
        assert report["passed"], report
        assert report["max_ratio"] <= BRACKET_NORM_BOUND + 1e-9


def test_bound_attained_in_trace_mode(su2_trace):
    """Unit coefficient vectors on two generators reach the bound."""
    e1 = np.zeros(3)
    e2 = np.zeros(3)
    e1[0] = 1.0
    e2[1] = 1.0
    ratio = norm_vec(su2_trace, bracket_vec(su2_trace, e1, e2)) / (
        norm_vec(su2_trace, e1) * norm_vec(su2_trace, e2)
    )
    assert abs(ratio - np.sqrt(2.0)) <= 1e-12
    report = bracket_norm_check(su2_trace, samples=100, seed=0)
    assert report["attained"]


def test_killing_mode_caps_at_inverse_root_two(so3, su2):
    """The larger Killing Gram rescales the same brackets down."""
    for spec in (so3, su2):
        report = bracket_norm_check(spec, samples=300, seed=1)
        assert report["max_ratio"] <= 1.0 / np.sqrt(2.0) + 1e-9


# ---------------------------------------------------------------------------
# Subalgebra slicing
# ---------------------------------------------------------------------------


def test_subalgebra_keeps_ambient_gram(so5):
    fiber = subalgebra_spec(so5, (8, 9, 10))
    assert fiber.dim == 3
    assert np.array_equal(fiber.gram, 6.0 * np.eye(3))
    assert fiber.inner_mode == so5.inner_mode
    # cyclic brackets survive the slice exactly
    for a, b, c in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        row = fiber.structure[a - 1, b - 1]
        expected = np.zeros(3)
        expected[c - 1] = 1.0
        assert np.array_equal(row, expected)


def test_subalgebra_differs_from_intrinsic_normalization(so5):
    """The ambient inner product is three times the intrinsic one."""
    fiber = subalgebra_spec(so5, (8, 9, 10))
    intrinsic = make_so(3)
    assert np.array_equal(fiber.gram, 3.0 * intrinsic.gram)


def test_subalgebra_rejects_non_closed(so5):
    with pytest.raises(ValueError):
        subalgebra_spec(so5, (1, 2))


def test_subalgebra_rejects_bad_indices(so5):
    with pytest.raises(ValueError):
        subalgebra_spec(so5, (8, 8, 9))
    with pytest.raises(ValueError):
        subalgebra_spec(so5, (0, 1, 2))
    with pytest.raises(ValueError):
        subalgebra_spec(so5, (9, 10, 11))


def test_subalgebra_bracket_matches_parent(so5):
    fiber = subalgebra_spec(so5, (8, 9, 10))
    rng = np.random.default_rng(6)
    small_u = rng.standard_normal(3)
    small_v = rng.standard_normal(3)
    big_u = np.zeros(10)
    big_v = np.zeros(10)
    big_u[7:] = small_u
    big_v[7:] = small_v
    lhs = bracket_vec(fiber, small_u, small_v)
    rhs = bracket_vec(so5, big_u, big_v)[7:]
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


# ---------------------------------------------------------------------------
# Construction errors
# ---------------------------------------------------------------------------


def test_rejects_dependent_basis():
    mats = np.zeros((2, 2, 2), dtype=complex)
    mats[0, 0, 1] = 1.0
    mats[0, 1, 0] = -1.0
    mats[1] = 2.0 * mats[0]
    with pytest.raises(ValueError):
        algebra_from_basis("dep", mats)


def test_rejects_non_closed_basis():
    mats = np.zeros((2, 3, 3), dtype=complex)
    mats[0, 0, 1] = 1.0
    mats[0, 1, 0] = -1.0
    mats[1, 0, 2] = 1.0
    mats[1, 2, 0] = -1.0
    with pytest.raises(ValueError):
        algebra_from_basis("open", mats)


def test_rejects_unknown_inner():
    with pytest.raises(ValueError):
        make_so(3, inner="exotic")


def test_element_wrapper(so3):
    rng = np.random.default_rng(7)
    u = LieElement(so3, rng.standard_normal(3))
    v = LieElement(so3, rng.standard_normal(3))
    w = u.bracket(v)
    assert np.max(
        np.abs(w.vector - bracket_vec(so3, u.vector, v.vector))
    ) <= 1e-12
    other = LieElement(make_su(2), rng.standard_normal(3))
    with pytest.raises(ValueError):
        u.bracket(other)
