"""Linear relations in a finite dimensional space H = M (+) K.

A relation is a subspace of H x H.  It is stored as an orthonormal frame of
shape ``(2n, k)``; the top ``n`` rows (``X``) hold the first components and
the bottom ``n`` rows (``Y``) the second components of the pairs.  The first
``dim_m`` coordinates of H form the distinguished subspace M.
"""
from dataclasses import dataclass, fields

import numpy as np

from .errors import ShapeError, SpectrumError
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    as_matrix,
    complement,
    intersect,
    matrix_from_json,
    matrix_to_json,
    min_eig,
    orthonormalize,
    subspace_angle,
)


@dataclass(frozen=True)
class SpaceSplit:
    """Dimensions of the decomposition H = M (+) K."""

    dim_m: int
    dim_k: int

    def __post_init__(self):
        if self.dim_m < 0 or self.dim_k < 0:
            raise ValueError("dimensions must be non-negative")
        if self.dim_m + self.dim_k < 1:
            raise ValueError("the space must have positive dimension")

    @property
    def n(self):
        return self.dim_m + self.dim_k

    def fundamental_symmetry(self):
        """diag(-I_M, I_K)."""
        return np.diag(np.r_[-np.ones(self.dim_m), np.ones(self.dim_k)]).astype(complex)


class LinearRelation:
    """A linear relation given by an orthonormal graph frame."""

    def __init__(self, split, graph):
        if graph.ambient_dim != 2 * split.n:
            raise ShapeError(
                f"graph lives in C^{graph.ambient_dim}, expected C^{2 * split.n}")
        self.split = split
        self.graph = graph

    @property
    def n(self):
        return self.split.n

    @property
    def dim(self):
        return self.graph.dim

    @property
    def X(self):
        return self.graph.frame[: self.n]

    @property
    def Y(self):
        return self.graph.frame[self.n:]

    def __repr__(self):
        return (f"LinearRelation(dim_m={self.split.dim_m}, dim_k={self.split.dim_k}, "
                f"dim={self.dim})")

    # constructors --------------------------------------------------------

    @classmethod
    def from_pairs(cls, first, second, split=None, tol=DEFAULT_TOL):
        """Span of the pairs ``(first[:, j], second[:, j])``."""
        x, y = as_matrix(first, "first"), as_matrix(second, "second")
        if x.shape != y.shape:
            raise ShapeError(f"pair blocks differ in shape: {x.shape} vs {y.shape}")
        if split is None:
            split = SpaceSplit(x.shape[0], 0)
        if x.shape[0] != split.n:
            raise ShapeError(f"pair blocks have {x.shape[0]} rows, expected {split.n}")
        return cls(split, orthonormalize(np.vstack([x, y]), tol))

    @classmethod
    def from_operator(cls, a, split=None, tol=DEFAULT_TOL):
        """Graph of a square matrix."""
        a = as_matrix(a)
        if a.shape[0] != a.shape[1]:
            raise ShapeError(f"operator must be square, got {a.shape}")
        return cls.from_pairs(np.eye(a.shape[0]), a, split, tol)

    def with_frame(self, frame, tol=DEFAULT_TOL):
        """Relation with the same split spanned by the columns of ``frame``."""
        return LinearRelation(self.split, orthonormalize(frame, tol))

    def map_pairs(self, block, tol=DEFAULT_TOL):
        """Image of the graph under a 2n x 2n matrix acting on pairs."""
        return self.with_frame(np.asarray(block) @ self.graph.frame, tol)

    # JSON ----------------------------------------------------------------

    def to_json(self):
        return {"dim_m": self.split.dim_m, "dim_k": self.split.dim_k,
                "frame": matrix_to_json(self.graph.frame)}

    @classmethod
    def from_json(cls, obj, tol=DEFAULT_TOL):
        if not isinstance(obj, dict):
            raise ValueError("relation: expected an object")
        for key in ("dim_m", "dim_k", "frame"):
            if key not in obj:
                raise ValueError(f"relation: missing field '{key}'")
        split = SpaceSplit(int(obj["dim_m"]), int(obj["dim_k"]))
        frame = matrix_from_json(obj["frame"], "frame")
        if frame.shape[0] != 2 * split.n:
            raise ValueError(
                f"relation: field 'frame' has {frame.shape[0]} rows, expected {2 * split.n}")
        return cls(split, orthonormalize(frame, tol))


# --- basic algebra -----------------------------------------------------------

def relation_angle(a, b):
    """Largest principal-angle sine between two graphs."""
    return subspace_angle(a.graph, b.graph)


def same_relation(a, b, tol=DEFAULT_TOL):
    return relation_angle(a, b) <= tol.eq


def adjoint(r, tol=DEFAULT_TOL):
    """The adjoint relation: the orthogonal complement of {(y, -x)}."""
    rotated = np.vstack([r.Y, -r.X])
    return LinearRelation(r.split, complement(Subspace(rotated)))


def inverse(r):
    """Swap the components of every pair."""
    return LinearRelation(r.split, Subspace(np.vstack([r.Y, r.X])))


def shift_scale(r, alpha, beta, tol=DEFAULT_TOL):
    """The relation of pairs ``(x, alpha*y + beta*x)``."""
    n = r.n
    eye = np.eye(n)
    block = np.block([[eye, 0 * eye], [beta * eye, alpha * eye]])
    return r.map_pairs(block, tol)


def negate(r):
    """``-r``: pairs ``(x, -y)``."""
    return LinearRelation(r.split, Subspace(np.vstack([r.X, -r.Y])))


def conjugate(r, u, tol=DEFAULT_TOL):
    """Pairs ``(u x, u y)``; for unitary ``u`` the frame stays orthonormal."""
    u = as_matrix(u)
    z = np.zeros_like(u)
    return r.map_pairs(np.block([[u, z], [z, u]]), tol)


def krein_adjoint(r, tol=DEFAULT_TOL):
    """J A* J with J the fundamental symmetry diag(-I_M, I_K)."""
    return conjugate(adjoint(r, tol), r.split.fundamental_symmetry(), tol)


def parts(r, tol=DEFAULT_TOL):
    """Domain, range, kernel and multivalued part as subspaces of H."""
    n = r.n
    zero = np.zeros((n, n))
    eye = np.eye(n)
    first_axis = Subspace(np.vstack([eye, zero]).astype(complex))
    second_axis = Subspace(np.vstack([zero, eye]).astype(complex))
    ker = intersect(r.graph, first_axis, tol)
    mul = intersect(r.graph, second_axis, tol)
    return {
        "dom": orthonormalize(r.X, tol),
        "ran": orthonormalize(r.Y, tol),
        "ker": orthonormalize(ker.frame[:n], tol),
        "mul": orthonormalize(mul.frame[n:], tol),
    }


def is_operator(r, tol=DEFAULT_TOL):
    return parts(r, tol)["mul"].dim == 0


def checked_inverse(m, tol, what):
    if m.shape[0] == 0:
        return m
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > 1.0 / tol.rank_rel:
        raise SpectrumError(f"{what}: condition number {cond:.3g} too large")
    return np.linalg.inv(m)


def resolvent(r, lam, tol=DEFAULT_TOL):
    """``(A - lam)^{-1}`` as a matrix, computed as ``X (Y - lam X)^{-1}``."""
    if r.dim != r.n:
        raise SpectrumError(
            f"relation has dimension {r.dim} != {r.n}; it has no resolvent set")
    lam = complex(lam)
    inv = checked_inverse(r.Y - lam * r.X, tol, f"resolvent at {lam}")
    return r.X @ inv


def compress_resolvent(r, lam, tol=DEFAULT_TOL):
    """Top-left M block of the resolvent."""
    m = r.split.dim_m
    if m < 1:
        raise ShapeError("compression needs dim_m >= 1")
    return resolvent(r, lam, tol)[:m, :m]


def operator_matrix(r, tol=DEFAULT_TOL):
    """The matrix of ``r`` when it is an everywhere defined operator."""
    if r.dim != r.n:
        raise SpectrumError("relation is not the graph of a square matrix")
    return r.Y @ checked_inverse(r.X, tol, "domain frame")


# --- classification ------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationFlags:
    symmetric: bool
    selfadjoint: bool
    nonnegative: bool
    nonpositive: bool
    accretive: bool
    maximal_accretive: bool
    dissipative: bool
    maximal_dissipative: bool
    skew_symmetric: bool
    skew_selfadjoint: bool
    j_selfadjoint: bool
    is_operator: bool

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def classify(r, tol=DEFAULT_TOL):
    """Return ``(flags, residuals)``.

    The quadratic forms are read off the frame: for a graph vector with
    coefficients ``c`` the form ``(f', f)`` equals ``c^H X^H Y c``.
    """
    xy = r.X.conj().T @ r.Y
    herm_gap = float(np.linalg.norm(xy - xy.conj().T, 2)) if r.dim else 0.0
    skew_gap = float(np.linalg.norm(xy + xy.conj().T, 2)) if r.dim else 0.0
    re_form = min_eig((xy + xy.conj().T) / 2) if r.dim else np.inf
    im_form = min_eig((xy - xy.conj().T) / 2j) if r.dim else np.inf
    form_min = min_eig(xy) if r.dim else np.inf
    form_max = -min_eig(-xy) if r.dim else -np.inf
    full = r.dim == r.n

    symmetric = herm_gap <= tol.eq
    accretive = re_form >= -tol.psd
    dissipative = im_form >= -tol.psd
    skew_symmetric = skew_gap <= tol.eq

    resolvent_ok = True
    if full:
        try:
            resolvent(r, -1.0, tol)
        except SpectrumError:
            resolvent_ok = False

    krein_gap = relation_angle(r, krein_adjoint(r, tol))
    mul_dim = parts(r, tol)["mul"].dim

    flags = ClassificationFlags(
        symmetric=symmetric,
        selfadjoint=symmetric and full,
        nonnegative=symmetric and form_min >= -tol.psd,
        nonpositive=symmetric and form_max <= tol.psd,
        accretive=accretive,
        maximal_accretive=accretive and full and resolvent_ok,
        dissipative=dissipative,
        maximal_dissipative=dissipative and full,
        skew_symmetric=skew_symmetric,
        skew_selfadjoint=skew_symmetric and full,
        j_selfadjoint=krein_gap <= tol.eq,
        is_operator=mul_dim == 0,
    )
    residuals = {
        "hermitian_gap": herm_gap,
        "skew_gap": skew_gap,
        "min_real_form": float(re_form),
        "min_imag_form": float(im_form),
        "krein_gap": krein_gap,
        "dim": r.dim,
        "mul_dim": mul_dim,
    }
    return flags, residuals
