"""Passive discrete-time systems with block operator ``T = [[D, C], [B, F]]``.

The transfer function is ``Omega(z) = D + z C (I - z F)^{-1} B``.  A system is
called selfadjoint when ``T`` is Hermitian, i.e. ``B = C^H`` and ``D``, ``F``
are Hermitian.
"""
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AmbiguousRankError, RealizationError, ShapeError, SpectrumError
from .subspace import (
    DEFAULT_TOL,
    as_matrix,
    krylov_basis,
    matrix_from_json,
    matrix_to_json,
    span_sum,
)

PASSIVITY_SLACK = 1e-8


class PassivityWarning(UserWarning):
    """Issued when a realized block operator is rescaled onto the unit ball."""


@dataclass(frozen=True, eq=False)
class PassiveSystem:
    d: np.ndarray
    c: np.ndarray
    b: np.ndarray
    f: np.ndarray
    selfadjoint: bool = False

    def __post_init__(self):
        d, c, b, f = (as_matrix(v, name) for v, name in
                      ((self.d, "d"), (self.c, "c"), (self.b, "b"), (self.f, "f")))
        m, k = d.shape[0], f.shape[0]
        if d.shape != (m, m) or f.shape != (k, k):
            raise ShapeError("d and f must be square")
        if c.shape != (m, k) or b.shape != (k, m):
            raise ShapeError(
                f"c must be {m}x{k} and b {k}x{m}, got {c.shape} and {b.shape}")
        for name, value in (("d", d), ("c", c), ("b", b), ("f", f)):
            object.__setattr__(self, name, value)
        if self.selfadjoint:
            gap = np.linalg.norm(self.block() - self.block().conj().T, 2)
            if gap > DEFAULT_TOL.eq:
                raise ValueError(f"system flagged selfadjoint but T - T^H has norm {gap:.3g}")

    @property
    def dim_m(self):
        return self.d.shape[0]

    @property
    def dim_k(self):
        return self.f.shape[0]

    def block(self):
        return np.block([[self.d, self.c], [self.b, self.f]])

    def norm(self):
        return float(np.linalg.norm(self.block(), 2))

    def is_passive(self, slack=PASSIVITY_SLACK):
        return self.norm() <= 1 + slack

    @classmethod
    def from_block(cls, t, dim_m, selfadjoint=None):
        t = as_matrix(t, "t")
        if selfadjoint is None:
            selfadjoint = bool(np.linalg.norm(t - t.conj().T, 2) <= DEFAULT_TOL.eq)
        m = dim_m
        return cls(t[:m, :m], t[:m, m:], t[m:, :m], t[m:, m:], selfadjoint)

    def to_json(self):
        return {"d": matrix_to_json(self.d), "c": matrix_to_json(self.c),
                "b": matrix_to_json(self.b), "f": matrix_to_json(self.f),
                "selfadjoint": bool(self.selfadjoint)}

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise ValueError("system: expected an object")
        for key in ("d", "c", "b", "f"):
            if key not in obj:
                raise ValueError(f"system: missing field '{key}'")
        mats = {k: matrix_from_json(obj[k], k) for k in ("d", "c", "b", "f")}
        return cls(selfadjoint=bool(obj.get("selfadjoint", False)), **mats)


def transfer(sys, z):
    """Evaluate ``Omega(z) = D + z C (I - z F)^{-1} B``."""
    z = complex(z)
    k = sys.dim_k
    if k == 0:
        return sys.d.copy()
    lhs = np.eye(k) - z * sys.f
    if np.linalg.cond(lhs) > 1.0 / DEFAULT_TOL.rank_rel:
        raise SpectrumError(f"I - zF is singular at z = {z}")
    return sys.d + z * sys.c @ np.linalg.solve(lhs, sys.b)


class Compression(NamedTuple):
    value: np.ndarray
    via_transfer: np.ndarray
    residual: float


def schur_frobenius_compress(sys, z):
    """``P_M (I - z T)^{-1}|_M`` two ways.

    ``value`` inverts ``I - zT`` directly and takes the M block;
    ``via_transfer`` is ``(I - z Omega(z))^{-1}``.  ``residual`` is the norm of
    their difference.
    """
    z = complex(z)
    m = sys.dim_m
    t = sys.block()
    lhs = np.eye(t.shape[0]) - z * t
    if np.linalg.cond(lhs) > 1.0 / DEFAULT_TOL.rank_rel:
        raise SpectrumError(f"I - zT is singular at z = {z}")
    direct = np.linalg.inv(lhs)[:m, :m]
    inner = np.eye(m) - z * transfer(sys, z)
    if np.linalg.cond(inner) > 1.0 / DEFAULT_TOL.rank_rel:
        raise SpectrumError(f"I - z Omega(z) is singular at z = {z}")
    other = np.linalg.inv(inner)
    return Compression(direct, other, float(np.linalg.norm(direct - other, 2)))


def controllable_subspace(sys, tol=DEFAULT_TOL):
    return krylov_basis(sys.f, sys.b, tol)


def observable_subspace(sys, tol=DEFAULT_TOL):
    return krylov_basis(sys.f.conj().T, sys.c.conj().T, tol)


def simplicity_check(sys, tol=DEFAULT_TOL):
    """Dimensions of the controllable and observable subspaces.

    ``simple`` means the two together span the state space, ``minimal`` that
    each does on its own.
    """
    ctrl = controllable_subspace(sys, tol)
    obs = observable_subspace(sys, tol)
    k = sys.dim_k
    return {
        "controllable_dim": ctrl.dim,
        "observable_dim": obs.dim,
        "simple": span_sum(ctrl, obs, tol).dim == k,
        "minimal": ctrl.dim == k and obs.dim == k,
    }


def moments(sys, count):
    """``[D, C B, C F B, ..., C F^{count-1} B]`` (``count + 1`` matrices)."""
    out = [sys.d.copy()]
    v = sys.b
    for _ in range(count):
        out.append(sys.c @ v)
        v = sys.f @ v
    return out


def default_moment_count(state_dim):
    return 2 * state_dim + 2


def moments_to_json(hs):
    return [matrix_to_json(h) for h in hs]


def moments_from_json(obj):
    if not isinstance(obj, list) or not obj:
        raise ValueError("moments: expected a non-empty array of matrices")
    hs = [matrix_from_json(h, f"moments[{i}]") for i, h in enumerate(obj)]
    shape = hs[0].shape
    for i, h in enumerate(hs):
        if h.shape != shape or shape[0] != shape[1]:
            raise ValueError(f"moments[{i}]: all moments must be square of equal size")
    return hs


def ho_kalman_realize(hs, tol=DEFAULT_TOL):
    """Selfadjoint realization of moments ``h_0 = D``, ``h_k = C F^{k-1} C^H``.

    For such moments the block Hankel matrix ``[h_{i+j+1}]`` equals
    ``O O^H`` with ``O = [C; C F; C F^2; ...]``, so it is positive
    semidefinite.  Its eigendecomposition gives ``O`` up to a unitary factor and
    the shifted Hankel matrix gives ``F``.  The result has ``B = C^H`` and ``F``
    Hermitian.

    Rank is decided on the normalized Hankel eigenvalues: values below
    ``rank_rel`` are dropped, and any value between ``rank_rel`` and
    ``10 * rank_rel`` makes the rank ambiguous.  If the realized block operator
    has norm in ``(1, 1 + 1e-8]`` it is rescaled onto the unit ball with a
    :class:`PassivityWarning`; larger norms raise :class:`RealizationError`.
    """
    hs = [as_matrix(h) for h in hs]
    if len(hs) < 3:
        raise AmbiguousRankError(
            f"need at least two Markov parameters after D, got {len(hs) - 1}")
    m = hs[0].shape[0]
    d = hs[0]
    if np.linalg.norm(d - d.conj().T, 2) > tol.eq:
        raise RealizationError("h_0 is not Hermitian")
    p = (len(hs) - 1) // 2
    h0 = np.block([[hs[i + j + 1] for j in range(p)] for i in range(p)])
    h1 = np.block([[hs[i + j + 2] for j in range(p)] for i in range(p)])
    h0 = (h0 + h0.conj().T) / 2
    h1 = (h1 + h1.conj().T) / 2
    w, v = np.linalg.eigh(h0)
    order = np.argsort(-np.abs(w))
    w, v = w[order], v[:, order]
    top = abs(w[0]) if w.size else 0.0
    if top == 0.0:
        rank = 0
    else:
        rel = np.abs(w) / top
        gray = (rel >= tol.rank_rel) & (rel < 10 * tol.rank_rel)
        if np.any(gray):
            raise AmbiguousRankError(
                f"Hankel eigenvalue ratio {rel[gray][0]:.3g} lies inside the rank gap")
        rank = int(np.sum(rel >= 10 * tol.rank_rel))
        if np.any(w[:rank] < 0):
            raise RealizationError(
                "Hankel matrix is not positive semidefinite; the moments do not "
                "come from a selfadjoint system")
    if rank == 0:
        empty = np.zeros((m, 0), dtype=complex)
        return PassiveSystem(d, empty, empty.T.copy(), np.zeros((0, 0)), True)
    scale = np.sqrt(w[:rank])
    obs = v[:, :rank] * scale
    f = (v[:, :rank].conj().T @ h1 @ v[:, :rank]) / np.outer(scale, scale)
    f = (f + f.conj().T) / 2
    c = obs[:m]
    t = np.block([[d, c], [c.conj().T, f]])
    t = (t + t.conj().T) / 2
    norm = np.linalg.norm(t, 2)
    if norm > 1 + PASSIVITY_SLACK:
        raise RealizationError(f"realized block operator has norm {norm:.12g} > 1")
    if norm > 1:
        warnings.warn(f"rescaling block operator of norm {norm:.12g}", PassivityWarning)
        t = t / norm
    return PassiveSystem.from_block(t, m, selfadjoint=True)


def unitary_match(a, b, tol=DEFAULT_TOL, residual_tol=1e-8):
    """Unitary ``W`` with ``W F_a = F_b W``, ``W B_a = B_b``, ``C_a = C_b W``.

    Both systems must be controllable.  Because :func:`krylov_basis` commutes
    with unitary changes of coordinates, ``W`` is the product of the two
    Krylov bases.  Returns ``None`` when no such ``W`` exists, i.e. when the
    resulting residuals exceed ``residual_tol``.
    """
    if a.dim_m != b.dim_m or a.dim_k != b.dim_k:
        return None
    k = a.dim_k
    if k == 0:
        ok = np.linalg.norm(a.d - b.d, 2) <= residual_tol
        return np.zeros((0, 0), dtype=complex) if ok else None
    qa = controllable_subspace(a, tol)
    qb = controllable_subspace(b, tol)
    if qa.dim != k or qb.dim != k:
        raise ValueError("unitary_match needs controllable (minimal) systems")
    w = qb.frame @ qa.frame.conj().T
    resid = max(
        np.linalg.norm(w @ a.f - b.f @ w, 2),
        np.linalg.norm(w @ a.b - b.b, 2),
        np.linalg.norm(a.c - b.c @ w, 2),
        np.linalg.norm(a.d - b.d, 2),
    )
    return w if resid <= residual_tol else None


def match_residual(a, b, w):
    """Largest intertwining residual of ``w`` between systems ``a`` and ``b``."""
    k = a.dim_k
    return float(max(
        np.linalg.norm(w @ a.f - b.f @ w, 2),
        np.linalg.norm(w @ a.b - b.b, 2),
        np.linalg.norm(a.c - b.c @ w, 2),
        np.linalg.norm(w.conj().T @ w - np.eye(k), 2) if k else 0.0,
    ))
