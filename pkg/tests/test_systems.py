"""Tests for passive systems, compressions and moment realization."""
import json
import warnings

import numpy as np
import pytest

from relkit.errors import AmbiguousRankError, RealizationError, ShapeError, SpectrumError
from relkit.random_instances import (
    random_nonsimple_system,
    random_selfadjoint_system,
    random_unitary,
)
from relkit.subspace import matrix_to_json
from relkit.systems import (
    PassiveSystem,
    PassivityWarning,
    default_moment_count,
    ho_kalman_realize,
    match_residual,
    moments,
    moments_from_json,
    moments_to_json,
    schur_frobenius_compress,
    simplicity_check,
    transfer,
    unitary_match,
)


def scalar_system(d, c, b, f):
    return PassiveSystem([[d]], [[c]], [[b]], [[f]])


def test_transfer_scalar_example():
    sys = scalar_system(0, 1, 1, 0.5)
    assert transfer(sys, 0.5)[0, 0] == pytest.approx(2 / 3)
    assert not sys.is_passive()


def test_transfer_of_swap_is_z():
    sys = scalar_system(0, 1, 1, 0)
    for z in (0.3, -0.7j, 0.2 + 0.5j):
        assert transfer(sys, z)[0, 0] == pytest.approx(z)


def test_transfer_singular_point():
    with pytest.raises(SpectrumError):
        transfer(scalar_system(0, 1, 1, 0.5), 2.0)


def test_shape_validation():
    with pytest.raises(ShapeError):
        PassiveSystem(np.zeros((2, 2)), np.zeros((1, 1)), np.zeros((1, 2)), np.zeros((1, 1)))
    with pytest.raises(ValueError):
        PassiveSystem([[0]], [[1]], [[2]], [[0]], selfadjoint=True)


def test_empty_state_space():
    sys = PassiveSystem([[0.5]], np.zeros((1, 0)), np.zeros((0, 1)), np.zeros((0, 0)))
    assert transfer(sys, 0.9)[0, 0] == 0.5
    assert simplicity_check(sys)["simple"]


@pytest.mark.parametrize("seed", range(10))
def test_schur_frobenius_residual(seed):
    rng = np.random.default_rng(seed)
    sys = random_selfadjoint_system(int(rng.integers(1, 4)), int(rng.integers(0, 5)), rng)
    for z in (0.5j, -0.4 + 0.3j, 0.6):
        comp = schur_frobenius_compress(sys, z)
        assert comp.residual <= 1e-10


def test_simplicity_example():
    sys = PassiveSystem(np.zeros((1, 1)), np.array([[1.0, 0.0]]),
                        np.array([[1.0], [0.0]]), np.diag([0.5, 1 / 3]))
    report = simplicity_check(sys)
    assert report["controllable_dim"] == 1
    assert report["observable_dim"] == 1
    assert not report["simple"]


@pytest.mark.parametrize("seed", range(10))
def test_simplicity_random(seed):
    rng = np.random.default_rng(100 + seed)
    m, k = int(rng.integers(1, 3)), int(rng.integers(2, 5))
    assert simplicity_check(random_selfadjoint_system(m, k, rng, separated=True))["simple"]
    hidden = int(rng.integers(1, k + 1))
    report = simplicity_check(random_nonsimple_system(m, k, hidden, rng))
    assert not report["simple"]
    assert report["controllable_dim"] <= k - hidden


def test_moments_and_count():
    sys = scalar_system(0.1, 1, 1, 0.5)
    hs = moments(sys, 3)
    assert [h[0, 0] for h in hs] == pytest.approx([0.1, 1, 0.5, 0.25])
    assert default_moment_count(3) == 8


def test_realize_swap_moments():
    sys = ho_kalman_realize([[[0]], [[1]], [[0]], [[0]]])
    assert sys.dim_k == 1
    assert sys.selfadjoint
    for z in (0.25, 0.5j, -0.5):
        assert transfer(sys, z)[0, 0] == pytest.approx(z, abs=1e-14)


def test_realize_rejects_short_sequences():
    with pytest.raises(AmbiguousRankError):
        ho_kalman_realize([[[0]], [[1]]])


def test_realize_ambiguous_rank():
    sys = PassiveSystem(np.zeros((2, 2)), np.diag([1, np.sqrt(3e-10)]),
                        np.diag([1, np.sqrt(3e-10)]), np.diag([0.5, -0.3]), True)
    with pytest.raises(AmbiguousRankError):
        ho_kalman_realize(moments(sys, 4))


def test_realize_rejects_indefinite_hankel():
    with pytest.raises(RealizationError):
        ho_kalman_realize([[[0]], [[-1]], [[0]], [[0]]])


def test_realize_rejects_non_passive():
    with pytest.raises(RealizationError):
        ho_kalman_realize([[[0]], [[2]], [[0]], [[0]]])


def test_realize_rescales_marginal_norm():
    with pytest.warns(PassivityWarning):
        sys = ho_kalman_realize([[[0]], [[1 + 5e-9]], [[0]], [[0]]])
    assert sys.norm() <= 1 + 1e-15


@pytest.mark.parametrize("seed", range(15))
def test_realize_recovers_random_system(seed):
    rng = np.random.default_rng(200 + seed)
    m, k = int(rng.integers(1, 3)), int(rng.integers(1, 5))
    sys = random_selfadjoint_system(m, k, rng, separated=True)
    with warnings.catch_warnings():
        warnings.simplefilter("error", PassivityWarning)
        got = ho_kalman_realize(moments(sys, default_moment_count(k)))
    assert got.dim_k == k
    for z in (0.5, -0.5j, 0.3 + 0.3j):
        assert np.linalg.norm(transfer(got, z) - transfer(sys, z), 2) <= 1e-8
    w = unitary_match(got, sys)
    assert w is not None
    assert match_residual(got, sys, w) <= 1e-8


def test_unitary_match_scalar_sign():
    a = scalar_system(0, 1, 1, 0.5)
    b = scalar_system(0, -1, -1, 0.5)
    w = unitary_match(a, b)
    assert w[0, 0] == pytest.approx(-1)


def test_unitary_match_rotated_copy():
    rng = np.random.default_rng(7)
    a = random_selfadjoint_system(2, 3, rng, separated=True)
    u = random_unitary(3, rng)
    b = PassiveSystem(a.d, a.c @ u.conj().T, u @ a.b, u @ a.f @ u.conj().T, True)
    w = unitary_match(a, b)
    assert np.allclose(w, u, atol=1e-10)


def test_unitary_match_rejects_different_systems():
    a = scalar_system(0, 1, 1, 0.5)
    assert unitary_match(a, scalar_system(0, 1, 1, 0.25)) is None
    assert unitary_match(a, scalar_system(0.1, 1, 1, 0.5)) is None


def test_system_json_roundtrip():
    rng = np.random.default_rng(3)
    sys = random_selfadjoint_system(2, 2, rng)
    back = PassiveSystem.from_json(json.loads(json.dumps(sys.to_json())))
    assert np.array_equal(back.block(), sys.block())
    assert back.selfadjoint
    hs = moments(sys, 4)
    again = moments_from_json(json.loads(json.dumps(moments_to_json(hs))))
    assert all(np.array_equal(a, b) for a, b in zip(hs, again))


def test_system_json_errors_name_field():
    with pytest.raises(ValueError, match="'f'"):
        PassiveSystem.from_json({"d": [[0]], "c": [[1]], "b": [[1]]})
    with pytest.raises(ValueError, match=r"moments\[1\]"):
        moments_from_json([matrix_to_json([[0]]), matrix_to_json([[0, 1]])])
    with pytest.raises(ValueError, match=r"moments\[0\]"):
        moments_from_json([[[0]]])
