"""Subspaces of C^N stored as orthonormal frames, plus JSON helpers for matrices.

All rank decisions go through :func:`orthonormalize`, which keeps singular
directions whose singular value is at least ``rank_rel`` times the largest one.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by the whole library.

    :param rank_rel: relative singular value cutoff for rank decisions.
    :param ortho: allowed deviation of a frame from orthonormality.
    :param eq: largest principal-angle sine at which two subspaces count as
      equal; also the residual bound for structural identities.
    :param psd: floor for semidefiniteness checks (``min eig >= -psd``).
    :param krylov: relative residual below which a Krylov vector is treated as
      already contained in the current span.
    """

    rank_rel: float = 1e-10
    ortho: float = 1e-10
    eq: float = 1e-9
    psd: float = 1e-9
    krylov: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "ortho", "eq", "psd", "krylov"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive, got {value}")
        if not self.rank_rel < 1:
            raise ValueError("tolerance rank_rel must be < 1")


DEFAULT_TOL = Tolerance()


def as_matrix(a, name="matrix"):
    """Return ``a`` as a 2d complex array (1d input becomes a column)."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    elif arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def hermitian_part(a):
    a = np.asarray(a)
    return (a + a.conj().T) / 2


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^N given by an orthonormal frame (N x k)."""

    frame: np.ndarray

    @property
    def ambient_dim(self):
        return self.frame.shape[0]

    @property
    def dim(self):
        return self.frame.shape[1]

    def projector(self):
        return self.frame @ self.frame.conj().T

    def contains(self, vectors, tol=DEFAULT_TOL):
        v = as_matrix(vectors)
        resid = v - self.frame @ (self.frame.conj().T @ v)
        scale = max(np.linalg.norm(v, 2), np.finfo(float).tiny)
        return np.linalg.norm(resid, 2) <= tol.eq * scale

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def orthonormalize(m, tol=DEFAULT_TOL):
    """Orthonormal frame for the column span of ``m``.

    The numerical rank counts singular values ``>= tol.rank_rel * s_max``.
    A zero matrix gives the trivial subspace.

    >>> orthonormalize([[1.0], [1.0]]).frame.real.round(6).ravel().tolist()
    [0.707107, 0.707107]
    """
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape[1] == 0:
        return Subspace(np.zeros((n, 0), dtype=complex))
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return Subspace(np.zeros((n, 0), dtype=complex))
    rank = int(np.sum(s >= tol.rank_rel * s[0]))
    return Subspace(_fix_phase(u[:, :rank]))


def _fix_phase(q):
    # deterministic output: make the largest entry of each column real positive
    if q.shape[1] == 0:
        return q
    idx = np.argmax(np.abs(q), axis=0)
    piv = q[idx, np.arange(q.shape[1])]
    return q * (np.abs(piv) / piv)


def _check_same_ambient(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise ShapeError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def subspace_angle(a, b):
    """Sine of the largest principal angle between ``a`` and ``b``.

    Returns 1.0 when the dimensions differ, since the subspaces cannot be
    equal then.  The value is symmetric in its arguments.
    """
    _check_same_ambient(a, b)
    if a.dim != b.dim:
        return 1.0
    if a.dim == 0:
        return 0.0
    resid = b.frame - a.frame @ (a.frame.conj().T @ b.frame)
    return float(min(1.0, np.linalg.norm(resid, 2)))


def intersect(a, b, tol=DEFAULT_TOL):
    """Intersection of two subspaces.

    Directions of ``a`` whose distance to ``b`` (a principal-angle sine) is at
    most ``tol.eq`` are kept.  Working with sines rather than cosines keeps
    small angles resolvable.
    """
    _check_same_ambient(a, b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace(np.zeros((n, 0), dtype=complex))
    resid = a.frame - b.frame @ (b.frame.conj().T @ a.frame)
    _, s, vh = np.linalg.svd(resid, full_matrices=True)
    sines = np.zeros(a.dim)
    sines[: s.size] = s
    keep = vh.conj().T[:, sines <= tol.eq]
    return orthonormalize(a.frame @ keep, tol)


def span_sum(a, b, tol=DEFAULT_TOL):
    """Smallest subspace containing ``a`` and ``b``."""
    _check_same_ambient(a, b)
    return orthonormalize(np.hstack([a.frame, b.frame]), tol)


def complement(a):
    """Orthogonal complement of ``a`` in its ambient space."""
    n, k = a.frame.shape
    if k == 0:
        return Subspace(np.eye(n, dtype=complex))
    u, _, _ = np.linalg.svd(a.frame, full_matrices=True)
    return Subspace(_fix_phase(u[:, k:]))


def psd_check(h, floor=DEFAULT_TOL.psd):
    """True when the Hermitian part of square ``h`` has min eigenvalue >= -floor."""
    m = as_matrix(h)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"psd_check needs a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        return True
    return bool(np.linalg.eigvalsh(hermitian_part(m))[0] >= -floor)


def min_eig(h):
    m = as_matrix(h)
    if m.shape[0] == 0:
        return np.inf
    return float(np.linalg.eigvalsh(hermitian_part(m))[0])


# --- JSON -------------------------------------------------------------------

def matrix_to_json(m):
    """``{"rows", "cols", "re", "im"}`` with row-major flattened parts."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        a = as_matrix(a)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": a.real.ravel().tolist(),
        "im": a.imag.ravel().tolist(),
    }


def matrix_from_json(obj, name="matrix"):
    """Inverse of :func:`matrix_to_json`.  ``im`` may be omitted for real data."""
    if not isinstance(obj, dict):
        raise ValueError(f"{name}: expected an object with rows/cols/re/im")
    for key in ("rows", "cols", "re"):
        if key not in obj:
            raise ValueError(f"{name}: missing field '{key}'")
    rows, cols = obj["rows"], obj["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise ValueError(f"{name}: fields 'rows' and 'cols' must be non-negative integers")
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros(rows * cols)), dtype=float)
    if re.size != rows * cols:
        raise ValueError(f"{name}: field 're' has {re.size} entries, expected {rows * cols}")
    if im.size != rows * cols:
        raise ValueError(f"{name}: field 'im' has {im.size} entries, expected {rows * cols}")
    return (re + 1j * im).reshape(rows, cols)


def subspace_to_json(s):
    return {"ambient_dim": s.ambient_dim, "frame": matrix_to_json(s.frame)}


def subspace_from_json(obj, tol=DEFAULT_TOL):
    if "frame" not in obj:
        raise ValueError("subspace: missing field 'frame'")
    frame = matrix_from_json(obj["frame"], "frame")
    if "ambient_dim" in obj and obj["ambient_dim"] != frame.shape[0]:
        raise ValueError("subspace: field 'ambient_dim' does not match frame rows")
    return orthonormalize(frame, tol)


def krylov_basis(op, start, tol=DEFAULT_TOL, max_dim=None):
    """Orthonormal basis of span{op^j start : j >= 0} by band Arnoldi.

    Vectors are processed one at a time: first the columns of ``start``, then
    ``op`` applied to each accepted basis vector in order.  A candidate is
    dropped when its component orthogonal to the current basis is at most
    ``tol.krylov`` times the relevant scale.  Because only unitarily invariant
    quantities enter the decisions, ``krylov_basis(W op W^H, W start)`` equals
    ``W krylov_basis(op, start)`` for unitary ``W``.
    """
    op = as_matrix(op)
    start = as_matrix(start)
    n = op.shape[0]
    if start.shape[0] != n:
        raise ShapeError("start vectors and operator have different sizes")
    max_dim = n if max_dim is None else min(max_dim, n)
    op_norm = np.linalg.norm(op, 2) if n else 0.0
    basis = []

    def accept(v, scale):
        if len(basis) >= max_dim or scale == 0:
            return
        for _ in range(2):
            for q in basis:
                v = v - q * (q.conj() @ v)
        nv = np.linalg.norm(v)
        if nv > tol.krylov * scale:
            basis.append(v / nv)

    for j in range(start.shape[1]):
        col = start[:, j]
        accept(col.copy(), np.linalg.norm(col))
    i = 0
    while i < len(basis) and len(basis) < max_dim:
        accept(op @ basis[i], op_norm)
        i += 1
    if not basis:
        return Subspace(np.zeros((n, 0), dtype=complex))
    return Subspace(np.column_stack(basis))
