import numpy as np
import pytest

from so3obs.reference import build_reference_model, direction
from so3obs.sensors import (NoiseSpec, TruthState, decompose_KB_check,
                            eigenbasis_from_covariance, make_frame,
                            measure_gyro, measure_vectors,
                            measured_covariance, reconstruct_B)
from so3obs.so3 import E3, check_rotation, exp_hat, spectral_norm, sym3_eigvals

PAPER_DIRS = [([-2.0, 5.0, 2.0], 1.211),
              ([10.0, -1.0, 0.0], 1.21),
              ([0.0, 1.0, -2.0], 1.209)]


def paper_model():
    return build_reference_model([direction(v, w) for v, w in PAPER_DIRS])


def random_rotation(rng):
    v = rng.normal(size=3)
    return exp_hat(v / np.linalg.norm(v) * rng.uniform(0, np.pi))


def truth_at(R, omega=None, gamma=None):
    return TruthState(0.0, R,
                      np.zeros(3) if omega is None else np.asarray(omega),
                      np.zeros(3) if gamma is None else np.asarray(gamma))


def test_measure_vectors_identity():
    m = paper_model()
    vs = measure_vectors(truth_at(np.eye(3)), m)
    for v, d in zip(vs, m.directions):
        np.testing.assert_array_equal(v, d.v_inertial)


def test_measure_vectors_half_turn():
    dirs = [direction(e, w) for e, w in zip(np.eye(3), (1.3, 1.2, 1.1))]
    m = build_reference_model(dirs)
    vs = measure_vectors(truth_at(exp_hat(np.pi * E3)), m)
    np.testing.assert_allclose(vs[0], [-1.0, 0.0, 0.0], atol=1e-15)


def test_measure_vectors_preserves_inner_products():
    m = paper_model()
    rng = np.random.default_rng(0)
    for _ in range(100):
        vs = measure_vectors(truth_at(random_rotation(rng)), m)
        for i in range(m.n):
            for j in range(m.n):
                expected = m.directions[i].v_inertial @ m.directions[j].v_inertial
                assert vs[i] @ vs[j] == pytest.approx(expected, abs=1e-12)


def test_measure_gyro():
    np.testing.assert_array_equal(
        measure_gyro(truth_at(np.eye(3), omega=[1.0, 0.0, 0.0])),
        [1.0, 0.0, 0.0])
    np.testing.assert_array_equal(
        measure_gyro(truth_at(np.eye(3), gamma=[0.1, -0.1, 0.2])),
        [0.1, -0.1, 0.2])


def test_noise_is_reproducible():
    m = paper_model()
    truth = truth_at(random_rotation(np.random.default_rng(1)),
                     omega=[0.3, -0.2, 0.1])
    a = make_frame(truth, m, NoiseSpec(1e-3, 1e-3, seed=42))
    b = make_frame(truth, m, NoiseSpec(1e-3, 1e-3, seed=42))
    np.testing.assert_array_equal(a.Omega_y, b.Omega_y)
    for va, vb in zip(a.v_body, b.v_body):
        np.testing.assert_array_equal(va, vb)


def test_noisy_vectors_stay_unit():
    m = paper_model()
    rng = np.random.default_rng(2)
    vs = measure_vectors(truth_at(random_rotation(rng)), m,
                         NoiseSpec(1e-2, 0.0, seed=3))
    for v in vs:
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-9)


def test_reconstruct_B_identity():
    m = paper_model()
    B = reconstruct_B(measure_vectors(truth_at(np.eye(3)), m), m)
    np.testing.assert_allclose(B, m.U, atol=1e-10)


def test_reconstruct_B_matches_RtU():
    m = paper_model()
    rng = np.random.default_rng(4)
    for _ in range(200):
        R = random_rotation(rng)
        B = reconstruct_B(measure_vectors(truth_at(R), m), m)
        np.testing.assert_allclose(B, R.T @ m.U, atol=1e-10)
        check_rotation(B, tol=1e-10)
        np.testing.assert_allclose(np.cross(B[:, 0], B[:, 1]), B[:, 2],
                                   atol=1e-10)


def test_reconstruct_B_half_turn_offset():
    m = paper_model()
    R = exp_hat(np.pi * m.U[:, 0])
    B = reconstruct_B(measure_vectors(truth_at(R), m), m)
    np.testing.assert_allclose(B, R.T @ m.U, atol=1e-10)


def test_reconstruct_B_noisy_bound():
    m = paper_model()
    rng = np.random.default_rng(5)
    for seed in range(100):
        R = random_rotation(rng)
        vs = measure_vectors(truth_at(R), m, NoiseSpec(1e-3, 0.0, seed=seed))
        B = reconstruct_B(vs, m)
        check_rotation(B, tol=1e-9)
        assert spectral_norm(B - R.T @ m.U) < 5e-3


def test_covariance_similarity():
    m = paper_model()
    rng = np.random.default_rng(6)
    for _ in range(100):
        R = random_rotation(rng)
        vs = measure_vectors(truth_at(R), m)
        K_B = measured_covariance(vs, m)
        assert np.abs(K_B - R.T @ m.K @ R).max() < 1e-12
        np.testing.assert_allclose(sym3_eigvals(K_B), m.lambdas, atol=1e-10)


def test_decompose_check_residual():
    m = paper_model()
    rng = np.random.default_rng(7)
    # identity case: measured covariance is the model matrix itself
    vs = measure_vectors(truth_at(np.eye(3)), m)
    assert decompose_KB_check(vs, m, m.U) < 1e-12
    for _ in range(100):
        R = random_rotation(rng)
        vs = measure_vectors(truth_at(R), m)
        assert decompose_KB_check(vs, m, R.T @ m.U) < 1e-9


def test_eigenbasis_sign_resolution():
    m = paper_model()
    rng = np.random.default_rng(8)
    R = random_rotation(rng)
    vs = measure_vectors(truth_at(R), m)
    B_ref = R.T @ m.U
    basis, lam = eigenbasis_from_covariance(measured_covariance(vs, m), B_ref)
    np.testing.assert_allclose(basis, B_ref, atol=1e-9)
    np.testing.assert_allclose(lam, m.lambdas, atol=1e-10)
