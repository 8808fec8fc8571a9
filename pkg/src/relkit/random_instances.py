"""Random test instances: unitaries, contractions, relations and passive systems.

All generators take a ``numpy.random.Generator`` so results are reproducible.
"""
import numpy as np

from .relation import LinearRelation, SpaceSplit
from .subspace import orthonormalize
from .systems import PassiveSystem


def complex_normal(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(n, rng):
    """Haar distributed unitary via QR with phase correction."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    q, r = np.linalg.qr(complex_normal(rng, n, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_selfadjoint_contraction(n, rng, boundary_fraction=0.0):
    """``U diag(e) U^H`` with eigenvalues uniform in [-1, 1].

    Each eigenvalue is moved to -1 or +1 with probability ``boundary_fraction``,
    which gives relations with a non-trivial kernel or multivalued part.
    """
    e = rng.uniform(-1, 1, n)
    hit = rng.random(n) < boundary_fraction
    e[hit] = rng.choice([-1.0, 1.0], hit.sum())
    u = random_unitary(n, rng)
    t = u @ np.diag(e) @ u.conj().T
    return (t + t.conj().T) / 2


def random_relation(n, rng, kind="mixed", dim_m=None):
    """Random relation in C^n.

    ``kind``: ``operator`` (graph of a random matrix), ``multivalued`` (graph
    with a random multivalued part and kernel), ``subspace`` (a random subspace
    of C^{2n} of random dimension) or ``mixed`` (one of the three at random).
    """
    dim_m = rng.integers(0, n + 1) if dim_m is None else dim_m
    split = SpaceSplit(int(dim_m), int(n - dim_m))
    if kind == "mixed":
        kind = rng.choice(["operator", "multivalued", "subspace"])
    if kind == "operator":
        return LinearRelation.from_operator(complex_normal(rng, n, n), split)
    if kind == "multivalued":
        k_mul = int(rng.integers(1, n + 1))
        k_op = int(rng.integers(0, n - k_mul + 1))
        u = random_unitary(n, rng)
        mul = u[:, :k_mul]
        dom = u[:, k_mul:k_mul + k_op]
        first = np.hstack([np.zeros((n, k_mul)), dom])
        second = np.hstack([mul, complex_normal(rng, n, k_op)])
        return LinearRelation(split, orthonormalize(np.vstack([first, second])))
    if kind == "subspace":
        k = int(rng.integers(0, 2 * n + 1))
        return LinearRelation(split, orthonormalize(complex_normal(rng, 2 * n, k)))
    raise ValueError(f"unknown relation kind {kind!r}")


def random_selfadjoint_system(dim_m, dim_k, rng, norm=0.999, separated=False):
    """Selfadjoint passive system with block operator of the given norm.

    With ``separated=True`` the state operator has eigenvalues spread over
    [-0.85, 0.85] (spacing near 1.7/dim_k) and every eigenvector is reached
    from M, so the system is minimal with a clear numerical margin.
    """
    m, k = dim_m, dim_k
    if separated and k:
        f = np.linspace(-0.85, 0.85, k) if k > 1 else np.zeros(1)
        f = f + rng.uniform(-0.05, 0.05, k)
        c = complex_normal(rng, m, k)
        c = c / np.linalg.norm(c, axis=0) * rng.uniform(0.4, 1.0, k)
        u = random_unitary(k, rng)
        f_mat = u @ np.diag(f) @ u.conj().T
        c = c @ u.conj().T
        d = complex_normal(rng, m, m)
        d = (d + d.conj().T) / 4
        t = np.block([[d, c], [c.conj().T, f_mat]])
    else:
        t = random_selfadjoint_contraction(m + k, rng)
    t = (t + t.conj().T) / 2
    t = t / np.linalg.norm(t, 2) * norm
    return PassiveSystem.from_block(t, m, selfadjoint=True)


def random_nonsimple_system(dim_m, dim_k, hidden, rng, norm=0.999):
    """Selfadjoint system whose last ``hidden`` state directions are decoupled.

    The decoupled block is then rotated by a random unitary of K so the
    structure is not visible in the coordinates.
    """
    visible = dim_k - hidden
    core = random_selfadjoint_contraction(dim_m + visible, rng)
    extra = random_selfadjoint_contraction(hidden, rng)
    t = np.zeros((dim_m + dim_k, dim_m + dim_k), dtype=complex)
    t[: dim_m + visible, : dim_m + visible] = core
    t[dim_m + visible:, dim_m + visible:] = extra
    w = np.eye(dim_m + dim_k, dtype=complex)
    w[dim_m:, dim_m:] = random_unitary(dim_k, rng)
    t = w @ t @ w.conj().T
    t = (t + t.conj().T) / 2
    t = t / np.linalg.norm(t, 2) * norm
    return PassiveSystem.from_block(t, dim_m, selfadjoint=True)


def random_nonnegative_relation(n, rng, kind="mixed"):
    """Nonnegative selfadjoint relation on C^n (no K part).

    ``operator``: positive semidefinite matrix; ``mixed``: random kernel and
    multivalued parts besides an operator part.
    """
    u = random_unitary(n, rng)
    if kind == "operator":
        e = rng.uniform(0.1, 3.0, n)
        first, second = u, u * e
    else:
        e = rng.uniform(0.1, 3.0, n)
        role = rng.integers(0, 3, n)  # 0: operator, 1: kernel, 2: multivalued
        first = u * np.where(role == 2, 0.0, 1.0)
        second = u * np.where(role == 1, 0.0, np.where(role == 2, 1.0, e))
    return LinearRelation.from_pairs(first, second, SpaceSplit(n, 0))
