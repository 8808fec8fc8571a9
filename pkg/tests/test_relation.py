"""Tests for linear relations: adjoints, parts, resolvents and classification."""
import numpy as np
import pytest

from relkit.errors import ShapeError, SpectrumError
from relkit.random_instances import (
    complex_normal,
    random_relation,
    random_selfadjoint_contraction,
)
from relkit.relation import (
    LinearRelation,
    SpaceSplit,
    adjoint,
    classify,
    compress_resolvent,
    inverse,
    krein_adjoint,
    operator_matrix,
    parts,
    relation_angle,
    resolvent,
    shift_scale,
)
from relkit.subspace import orthonormalize, subspace_angle
from relkit.transforms import relation_from_contraction


def test_adjoint_of_pure_multivalued_relation_is_itself():
    r = LinearRelation.from_pairs([[0.0]], [[1.0]])
    assert relation_angle(adjoint(r), r) < 1e-15


def test_adjoint_of_diag_i():
    r = LinearRelation.from_operator([[1j]])
    assert np.allclose(operator_matrix(adjoint(r)), [[-1j]])


def test_compressed_resolvent_of_swap_contraction():
    a = relation_from_contraction([[0, 1], [1, 0]], SpaceSplit(1, 1))
    for lam in (-1.0, 2j, -3 + 1j):
        assert compress_resolvent(a, lam)[0, 0] == pytest.approx(-1 / (2 * lam), abs=1e-14)


def test_rotation_is_skew_selfadjoint_and_j_selfadjoint():
    b = LinearRelation.from_operator([[0, 1], [-1, 0]], SpaceSplit(1, 1))
    flags, _ = classify(b)
    assert flags.skew_selfadjoint
    assert flags.maximal_accretive
    assert flags.j_selfadjoint
    assert not flags.selfadjoint


def test_parts_of_projection_graph():
    p = np.diag([1.0, 0.0])
    r = LinearRelation.from_pairs(p, np.eye(2) - p)
    pr = parts(r)
    e1 = orthonormalize([[1.0], [0.0]])
    e2 = orthonormalize([[0.0], [1.0]])
    assert subspace_angle(pr["dom"], e1) < 1e-15
    assert subspace_angle(pr["ker"], e1) < 1e-15
    assert subspace_angle(pr["ran"], e2) < 1e-15
    assert subspace_angle(pr["mul"], e2) < 1e-15
    flags, _ = classify(r)
    assert flags.selfadjoint and flags.nonnegative and not flags.is_operator


def test_shift_scale_pairs():
    r = LinearRelation.from_operator(np.diag([2.0, 3.0]))
    s = shift_scale(r, 2.0, 1.0)
    assert np.allclose(operator_matrix(s), np.diag([5.0, 7.0]))


def test_from_pairs_shape_errors():
    with pytest.raises(ShapeError):
        LinearRelation.from_pairs(np.eye(2), np.eye(3))
    with pytest.raises(ShapeError):
        LinearRelation.from_operator(np.ones((2, 3)))


def test_resolvent_in_spectrum_raises():
    r = LinearRelation.from_operator(np.diag([1.0, 2.0]))
    with pytest.raises(SpectrumError):
        resolvent(r, 2.0)
    degenerate = LinearRelation.from_pairs([[1.0], [0.0]], [[0.0], [0.0]])
    with pytest.raises(SpectrumError):
        resolvent(degenerate, 1j)


def test_json_roundtrip(rng):
    r = random_relation(4, rng, "subspace", dim_m=2)
    obj = r.to_json()
    assert set(obj) == {"dim_m", "dim_k", "frame"}
    assert relation_angle(LinearRelation.from_json(obj), r) < 1e-14
    with pytest.raises(ValueError, match="'frame'"):
        LinearRelation.from_json({"dim_m": 1, "dim_k": 1})


@pytest.mark.parametrize("seed", range(30))
def test_adjoint_invariants(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    r = random_relation(n, rng)
    star = adjoint(r)
    assert relation_angle(adjoint(star), r) <= 1e-9
    assert r.dim + star.dim == 2 * n
    assert relation_angle(inverse(inverse(r)), r) <= 1e-14
    # adjoint commutes with inversion
    assert relation_angle(adjoint(inverse(r)), inverse(star)) <= 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_resolvent_identities(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(1, 7))
    a = LinearRelation.from_operator(complex_normal(rng, n, n))
    lam, mu = 0.7 + 3.1j, -1.3 - 2.2j
    ra, rb = resolvent(a, lam), resolvent(a, mu)
    assert np.linalg.norm(ra - rb - (lam - mu) * ra @ rb) <= 1e-9
    # (A^{-1} - 1/z)^{-1} = -z - z^2 (A - z)^{-1}
    z = 0.4 + 1.9j
    lhs = resolvent(inverse(a), 1 / z)
    rhs = -z * np.eye(n) - z ** 2 * resolvent(a, z)
    assert np.linalg.norm(lhs - rhs) <= 1e-9 * max(1.0, np.linalg.norm(rhs))


@pytest.mark.parametrize("seed", range(10))
def test_nonnegative_selfadjoint_is_maximal_accretive(seed):
    rng = np.random.default_rng(200 + seed)
    n = int(rng.integers(1, 7))
    t = random_selfadjoint_contraction(n, rng, boundary_fraction=0.3)
    dim_m = int(rng.integers(0, n + 1))
    a = relation_from_contraction(t, SpaceSplit(dim_m, n - dim_m))
    flags, _ = classify(a)
    assert flags.selfadjoint and flags.nonnegative
    assert flags.maximal_accretive and flags.accretive


def test_selfadjoint_relation_with_multivalued_part_has_resolvent():
    # {(x, 0)} + {(0, y)} style relation with a genuine operator part
    first = np.diag([1.0, 0.0, 1.0])
    second = np.diag([0.0, 1.0, 5.0])
    r = LinearRelation.from_pairs(first, second)
    flags, _ = classify(r)
    assert flags.selfadjoint and flags.nonnegative and not flags.is_operator
    res = resolvent(r, -2.0)
    assert np.allclose(res, np.diag([0.5, 0.0, 1 / 7]))
    assert krein_adjoint(r).dim == 3
