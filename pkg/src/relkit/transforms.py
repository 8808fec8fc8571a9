"""Transformations of linear relations.

Covers the component swap on M, the rotated swap (with a constant ``c``), the
Cayley transform, the contraction transform ``T = -I + 2(I + A)^{-1}`` and its
inverse, and the minimal span ``span{M + (A - lam)^{-1} M}``.
"""
import numpy as np

from .errors import NotContractionError, ShapeError, SpectrumError
from .relation import LinearRelation, negate, resolvent
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    as_matrix,
    krylov_basis,
    orthonormalize,
    span_sum,
)

DEFAULT_PROBES = (-1.0, -0.5, -2.0, 1j, -1j, 1 + 1j)


def _rows(r):
    m = r.split.dim_m
    x, y = r.X, r.Y
    return x[:m], x[m:], y[:m], y[m:]


def p_transform(r, tol=DEFAULT_TOL):
    """Swap the M components: ``((phi, f), (phi', f'))`` to ``((phi', f), (phi, f'))``.

    This is a coordinate permutation of H x H, so it is an involution and keeps
    the frame orthonormal.
    """
    phi, f, phi1, f1 = _rows(r)
    return LinearRelation(r.split, Subspace(np.vstack([phi1, f, phi, f1])))


def j_transform(r, c=1j, side="m", tol=DEFAULT_TOL):
    """Rotated swap of the components on one side of the splitting.

    With ``side="m"`` the pairs become ``((-c phi', f), (c phi, f'))``; for
    ``|c| = 1`` this is an involution.  With ``side="k"`` the same swap is
    applied to the K components, ``((phi, -c f'), (phi', c f))``, and the
    result is negated.  For ``c = i`` that composition undoes the M-side swap
    up to inversion: ``j_transform(j_transform(A), side="k")`` is ``A^{-1}``.
    """
    c = complex(c)
    if c == 0:
        raise ValueError("the rotation constant must be non-zero")
    phi, f, phi1, f1 = _rows(r)
    if side == "m":
        frame = np.vstack([-c * phi1, f, c * phi, f1])
        return r.with_frame(frame, tol)
    if side == "k":
        frame = np.vstack([phi, -c * f1, phi1, c * f])
        return negate(r.with_frame(frame, tol))
    raise ValueError(f"side must be 'm' or 'k', got {side!r}")


def cayley(r, tol=DEFAULT_TOL):
    """``U = I - 2i (A + i)^{-1}`` built from the graph as ``{(f' + i f, f' - i f)}``.

    The relation must have ``-i`` in its resolvent set.
    """
    if r.dim != r.n:
        raise SpectrumError("Cayley transform needs a relation of full dimension")
    lhs = r.Y + 1j * r.X
    cond = np.linalg.cond(lhs)
    if cond > 1.0 / tol.rank_rel:
        raise SpectrumError(f"-i is in the spectrum (condition {cond:.3g})")
    return (r.Y - 1j * r.X) @ np.linalg.inv(lhs)


def inverse_cayley(u, split=None, tol=DEFAULT_TOL):
    """Relation ``{((I - U) g, i (I + U) g)}``; its multivalued part is ker(I - U)."""
    u = as_matrix(u, "u")
    n = u.shape[0]
    if u.shape != (n, n):
        raise ShapeError(f"u must be square, got {u.shape}")
    gap = np.linalg.norm(u.conj().T @ u - np.eye(n), 2)
    if gap > tol.eq * 10:
        raise ValueError(f"u is not unitary (|U^H U - I| = {gap:.3g})")
    eye = np.eye(n)
    return LinearRelation.from_pairs(eye - u, 1j * (eye + u), split, tol)


def contraction_transform(r, tol=DEFAULT_TOL):
    """``T = -I + 2 (I + A)^{-1}``, computed as ``(X - Y)(X + Y)^{-1}``.

    For a nonnegative selfadjoint relation the result is a selfadjoint
    contraction; use :func:`contraction_report` to check that.
    """
    if r.dim != r.n:
        raise SpectrumError("contraction transform needs a relation of full dimension")
    s = r.X + r.Y
    cond = np.linalg.cond(s)
    if cond > 1.0 / tol.rank_rel:
        raise SpectrumError(f"-1 is in the spectrum (condition {cond:.3g})")
    return (r.X - r.Y) @ np.linalg.inv(s)


def contraction_report(t, tol=DEFAULT_TOL):
    """Norm and Hermitian defect of ``t``."""
    t = as_matrix(t)
    norm = float(np.linalg.norm(t, 2)) if t.size else 0.0
    herm = float(np.linalg.norm(t - t.conj().T, 2)) if t.size else 0.0
    return {
        "norm": norm,
        "hermitian_gap": herm,
        "contraction": norm <= 1 + tol.eq,
        "selfadjoint": herm <= tol.eq,
    }


def relation_from_contraction(t, split=None, tol=DEFAULT_TOL, selfadjoint=True):
    """Relation ``{((I + T) h, (I - T) h)}``.

    By default ``t`` must be a selfadjoint contraction, in which case the result
    is nonnegative selfadjoint.  Pass ``selfadjoint=False`` for an arbitrary
    contraction (the result is then maximal accretive).
    """
    t = as_matrix(t, "t")
    n = t.shape[0]
    if t.shape != (n, n):
        raise ShapeError(f"t must be square, got {t.shape}")
    rep = contraction_report(t, tol)
    if not rep["contraction"]:
        raise NotContractionError(f"|T| = {rep['norm']:.6g} exceeds 1")
    if selfadjoint and not rep["selfadjoint"]:
        raise NotContractionError(f"T is not selfadjoint (gap {rep['hermitian_gap']:.3g})")
    eye = np.eye(n)
    return LinearRelation.from_pairs(eye + t, eye - t, split, tol)


def krylov_span(t, dim_m, tol=DEFAULT_TOL):
    """``span{T^n M}`` for a matrix ``t`` and M spanned by the first ``dim_m`` axes."""
    t = as_matrix(t)
    return krylov_basis(t, np.eye(t.shape[0])[:, :dim_m], tol)


def minimal_span(r, probes=None, tol=DEFAULT_TOL):
    """``span{M + (A - lam)^{-1} M}`` over a neighbourhood of the probe points.

    For each probe in the resolvent set the Krylov space of the resolvent on M
    is accumulated; in finite dimensions the resolvent's powers at one point
    already span what the whole neighbourhood does.  Probes in the spectrum are
    skipped.  Returns ``(subspace, used_probes)``.
    """
    probes = DEFAULT_PROBES if probes is None else tuple(probes)
    m = r.split.dim_m
    eye_m = np.eye(r.n, dtype=complex)[:, :m]
    span = orthonormalize(eye_m, tol)
    used = []
    for lam in probes:
        try:
            res = resolvent(r, lam, tol)
        except SpectrumError:
            continue
        used.append(complex(lam))
        span = span_sum(span, krylov_basis(res, eye_m, tol), tol)
        if span.dim == r.n:
            break
    if not used:
        raise SpectrumError("every probe point lies in the spectrum")
    return span, used


def is_minimal(r, probes=None, tol=DEFAULT_TOL):
    span, _ = minimal_span(r, probes, tol)
    return span.dim == r.n
