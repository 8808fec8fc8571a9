"""Relation-valued families of the spectral parameter.

An :class:`OperatorFamily` maps a complex ``lam`` to a :class:`LinearRelation`
on M (split ``(dim_m, 0)``).  Backends:

* :class:`OmegaFamily` -- built from a transfer function ``Omega(z)`` on the
  unit disk through the Moebius map ``z = (1 + lam)/(1 - lam)``;
* :class:`RelationFamily` -- the family represented by a relation in
  H = M (+) K through one of the compressed resolvent identities;
* closed forms: fixed points of the transformers, constants, and the inner
  families ``-B/lam`` and ``lam C``;
* :class:`MappedFamily` -- algebraic operations on another family.
"""
import cmath

import numpy as np

from .errors import ClassMismatchError, DomainError, ShapeError
from .relation import (
    LinearRelation,
    SpaceSplit,
    adjoint,
    checked_inverse,
    compress_resolvent,
    inverse,
    negate,
    resolvent,
    shift_scale,
)
from .subspace import DEFAULT_TOL, as_matrix
from .systems import PassiveSystem, transfer

RELATION_TAGS = ("opexpr", "aarep", "brep", "arep", "opexpr3", "einundzwan", "einundzwan2")
BRIDGES = ("formula1", "formula2", "direct-schur")

# natural domains
ALL = "all"
NONZERO = "nonzero"
OFF_POSITIVE_AXIS = "off-positive-axis"   # C minus [0, inf)
OFF_REAL_AXIS = "off-real-axis"           # C minus R
LEFT_HALF_PLANE = "left-half-plane"       # Re lam < 0


def in_domain(lam, domain):
    lam = complex(lam)
    if domain == ALL:
        return True
    if domain == NONZERO:
        return lam != 0
    if domain == OFF_POSITIVE_AXIS:
        return not (lam.imag == 0 and lam.real >= 0)
    if domain == OFF_REAL_AXIS:
        return lam.imag != 0
    if domain == LEFT_HALF_PLANE:
        return lam.real < 0
    raise ValueError(f"unknown domain {domain!r}")


def moebius_z_of_lambda(lam):
    """``z = (1 + lam)/(1 - lam)``; maps C minus [0, inf) onto the cut disk."""
    lam = complex(lam)
    if lam == 1:
        raise DomainError("lambda = 1 has no image")
    return (1 + lam) / (1 - lam)


def moebius_lambda_of_z(z):
    """Inverse map ``lam = (z - 1)/(z + 1)``."""
    z = complex(z)
    if z == -1:
        raise DomainError("z = -1 has no image")
    return (z - 1) / (z + 1)


def sqrt_branch(lam):
    """Square root with the argument of ``lam`` taken in (0, 2 pi).

    The image is the upper half plane, so ``sqrt_branch(-1) == 1j`` exactly.
    """
    lam = complex(lam)
    if lam.imag == 0 and lam.real >= 0:
        raise DomainError(f"sqrt branch is cut along [0, inf), got {lam}")
    return 1j * cmath.sqrt(-lam)


def m_relation(first, second, tol=DEFAULT_TOL):
    """Relation on M spanned by the pairs ``(first h, second h)``."""
    first = as_matrix(first)
    return LinearRelation.from_pairs(first, second, SpaceSplit(first.shape[0], 0), tol)


def m_operator(a, tol=DEFAULT_TOL):
    a = as_matrix(a)
    return m_relation(np.eye(a.shape[0]), a, tol)


class OperatorFamily:
    """Base class.  Subclasses implement :meth:`_value`."""

    dim_m = 1
    domain = OFF_POSITIVE_AXIS
    name = "family"

    def __call__(self, lam):
        return self.eval(lam)

    def eval(self, lam, tol=DEFAULT_TOL):
        lam = complex(lam)
        if not in_domain(lam, self.domain):
            raise DomainError(f"{self.name} is not defined at lambda = {lam}")
        return self._value(lam, tol)

    def _value(self, lam, tol):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} dim_m={self.dim_m}>"


# --- transfer function backends -----------------------------------------------

def as_omega(omega, dim_m=None):
    """Normalize a transfer function argument to ``(callable, dim_m, system)``."""
    if isinstance(omega, PassiveSystem):
        sys = omega
        return (lambda z: transfer(sys, z)), sys.dim_m, sys
    if not callable(omega):
        raise TypeError("omega must be a PassiveSystem or a callable z -> matrix")
    if dim_m is None:
        dim_m = as_matrix(omega(0.0)).shape[0]
    return omega, dim_m, None


class OmegaFamily(OperatorFamily):
    """Family obtained from a function on the unit disk.

    ``formula1``: ``Q(lam) = {((I - Omega(z)) h, (I + Omega(z)) h)}``;
    ``formula2``: ``R(lam) = {((I + Omega(z)) h, (Omega(z) - I) h)}``;
    both with ``z = (1 + lam)/(1 - lam)``.  ``direct-schur`` treats Omega as a
    Schur function and uses ``zeta = (lam + i)/(lam - i)``; the lower half
    plane gets ``{((I - Omega(zeta)) h, -i (I + Omega(zeta)) h)}`` and the
    upper half plane the adjoint of the value at the conjugate point.
    """

    def __init__(self, omega, bridge="formula1", dim_m=None):
        if bridge not in BRIDGES:
            raise ValueError(f"bridge must be one of {BRIDGES}, got {bridge!r}")
        self.omega, self.dim_m, self.system = as_omega(omega, dim_m)
        self.bridge = bridge
        self.domain = OFF_REAL_AXIS if bridge == "direct-schur" else OFF_POSITIVE_AXIS
        self.name = {"formula1": "Q", "formula2": "R", "direct-schur": "M"}[bridge]

    def _value(self, lam, tol):
        eye = np.eye(self.dim_m)
        if self.bridge == "direct-schur":
            if lam.imag > 0:
                return adjoint(self._value(lam.conjugate(), tol), tol)
            psi = as_matrix(self.omega((lam + 1j) / (lam - 1j)))
            return m_relation(eye - psi, -1j * (eye + psi), tol)
        om = as_matrix(self.omega(moebius_z_of_lambda(lam)))
        if self.bridge == "formula1":
            return m_relation(eye - om, eye + om, tol)
        return m_relation(eye + om, om - eye, tol)


def family_from_omega(omega, bridge="formula1", dim_m=None):
    return OmegaFamily(omega, bridge, dim_m)


def omega_from_family(fam, flavor="stieltjes", tol=DEFAULT_TOL):
    """Transfer function of a Stieltjes or inverse Stieltjes family.

    Stieltjes: ``Omega(z) = I - 2 (I + Q(lam))^{-1}``; inverse Stieltjes:
    ``Omega(z) = -I + 2 (I - R(lam))^{-1}``, with ``lam = (z - 1)/(z + 1)``.
    """
    if flavor not in ("stieltjes", "inverse_stieltjes"):
        raise ValueError(f"unknown flavor {flavor!r}")
    eye = np.eye(fam.dim_m)

    def omega(z):
        val = fam.eval(moebius_lambda_of_z(z), tol)
        if flavor == "stieltjes":
            return eye - 2 * resolvent(val, -1.0, tol)
        return -eye - 2 * resolvent(val, 1.0, tol)

    return omega


def upsilon_transform(omega, dim_m=None):
    """``z -> (z - Omega(z)) (I - z Omega(z))^{-1}``.

    If ``Q`` is the ``formula1`` family of ``Omega``, then ``lam Q(lam)`` is the
    ``formula2`` family of the result.
    """
    fn, m, _ = as_omega(omega, dim_m)
    eye = np.eye(m)

    def upsilon(z):
        z = complex(z)
        om = as_matrix(fn(z))
        return (z * eye - om) @ np.linalg.inv(eye - z * om)

    return upsilon


def fixed_point_omega(z):
    """``z / (1 + sqrt(1 - z^2))``, the fixed point of :func:`upsilon_transform`."""
    z = complex(z)
    return np.array([[z / (1 + cmath.sqrt(1 - z * z))]])


# --- relation backends -----------------------------------------------------------

def _tag_domain(tag):
    if tag == "brep":
        return LEFT_HALF_PLANE
    if tag in ("opexpr", "arep"):
        return OFF_REAL_AXIS
    return OFF_POSITIVE_AXIS


def _compress_inverse_pencil(rel, lam, tol):
    """``P_M (I - lam A)^{-1}|_M`` computed as the M block of ``X (X - lam Y)^{-1}``."""
    if rel.dim != rel.n:
        raise DomainError("relation must have full dimension")
    m = rel.split.dim_m
    inv = checked_inverse(rel.X - lam * rel.Y, tol, f"(I - lam A) at {lam}")
    return (rel.X @ inv)[:m, :m]


class RelationFamily(OperatorFamily):
    """The family a relation represents through a compressed-resolvent identity.

    ``opexpr``, ``aarep``, ``arep``, ``opexpr3``: ``-C(lam)^{-1} - lam``;
    ``brep``: ``C(lam)^{-1} + lam``;
    ``einundzwan``: ``-C(lam)^{-1}/lam - I``;
    ``einundzwan2``: ``I - P_M (I - lam A)^{-1}|_M^{-1}``;
    where ``C(lam)`` is the compressed resolvent of the relation.  Inverses are
    taken as relations, so a singular compression gives a multivalued value.
    For ``opexpr3`` the identity concerns ``-Q(1/lam)``, see
    :func:`relation_family_target`.
    """

    def __init__(self, relation, tag):
        if tag not in RELATION_TAGS:
            raise ValueError(f"tag must be one of {RELATION_TAGS}, got {tag!r}")
        if relation.split.dim_m < 1:
            raise ShapeError("relation-backed families need dim_m >= 1")
        self.relation = relation
        self.tag = tag
        self.dim_m = relation.split.dim_m
        self.domain = _tag_domain(tag)
        self.name = f"{tag}-family"

    def _value(self, lam, tol):
        if self.tag == "einundzwan2":
            comp = _compress_inverse_pencil(self.relation, lam, tol)
            return shift_scale(inverse(m_operator(comp, tol)), -1.0, 1.0, tol)
        comp = compress_resolvent(self.relation, lam, tol)
        cinv = inverse(m_operator(comp, tol))
        if self.tag == "brep":
            return shift_scale(cinv, 1.0, lam, tol)
        if self.tag == "einundzwan":
            return shift_scale(cinv, -1.0 / lam, -1.0, tol)
        return shift_scale(cinv, -1.0, -lam, tol)


# --- closed forms ------------------------------------------------------------------

class FixedPointFamily(OperatorFamily):
    """``Q0(lam) = (i/sqrt(lam)) I`` or ``R0(lam) = i sqrt(lam) I``."""

    def __init__(self, which="Q0", dim_m=1):
        if which not in ("Q0", "R0"):
            raise ValueError(f"which must be 'Q0' or 'R0', got {which!r}")
        self.which = which
        self.dim_m = dim_m
        self.name = which

    def scalar(self, lam):
        root = sqrt_branch(lam)
        return 1j / root if self.which == "Q0" else 1j * root

    def _value(self, lam, tol):
        return m_operator(self.scalar(lam) * np.eye(self.dim_m), tol)


def fixed_point_family(which="Q0", dim_m=1):
    return FixedPointFamily(which, dim_m)


class ConstantFamily(OperatorFamily):
    domain = ALL

    def __init__(self, relation):
        if relation.split.dim_k != 0:
            raise ShapeError("constant family needs a relation on M alone (dim_k = 0)")
        self.relation = relation
        self.dim_m = relation.split.dim_m
        self.name = "constant"

    def _value(self, lam, tol):
        return self.relation


def projection_family(p, tol=DEFAULT_TOL):
    """The constant graph ``{(P f, (I - P) f)}`` for an orthogonal projection P."""
    p = as_matrix(p, "p")
    if np.linalg.norm(p @ p - p, 2) > tol.eq or np.linalg.norm(p - p.conj().T, 2) > tol.eq:
        raise ValueError("p must be an orthogonal projection")
    return ConstantFamily(m_relation(p, np.eye(p.shape[0]) - p, tol))


class InnerFamily(OperatorFamily):
    """``-B/lam`` (form ``stieltjes``) or ``lam C`` (form ``inverse_stieltjes``)."""

    domain = NONZERO

    def __init__(self, relation, form="stieltjes"):
        if form not in ("stieltjes", "inverse_stieltjes"):
            raise ValueError(f"unknown form {form!r}")
        if relation.split.dim_k != 0:
            raise ShapeError("inner family needs a relation on M alone (dim_k = 0)")
        self.relation = relation
        self.form = form
        self.dim_m = relation.split.dim_m
        self.name = "-B/lam" if form == "stieltjes" else "lam*C"

    def _value(self, lam, tol):
        factor = -1.0 / lam if self.form == "stieltjes" else lam
        return shift_scale(self.relation, factor, 0.0, tol)


class FunctionFamily(OperatorFamily):
    """Operator-valued family given by a callable ``lam -> matrix``."""

    def __init__(self, fn, dim_m, domain=OFF_POSITIVE_AXIS, name="function"):
        self.fn = fn
        self.dim_m = dim_m
        self.domain = domain
        self.name = name

    def _value(self, lam, tol):
        return m_operator(self.fn(lam), tol)


MAPPED_OPS = ("neg_inverse", "times_lambda", "div_lambda", "phi_plus", "phi_minus", "reflect")


class MappedFamily(OperatorFamily):
    """Algebraic image of another family.

    ``neg_inverse``: ``-M^{-1}``; ``times_lambda``: ``lam M``;
    ``div_lambda``: ``M/lam``; ``phi_plus``: ``-M^{-1}/lam``;
    ``phi_minus``: ``-lam M^{-1}``; ``reflect``: ``-M(1/lam)``.
    """

    def __init__(self, base, op):
        if op not in MAPPED_OPS:
            raise ValueError(f"op must be one of {MAPPED_OPS}, got {op!r}")
        self.base = base
        self.op = op
        self.dim_m = base.dim_m
        self.domain = base.domain
        if op in ("times_lambda", "div_lambda", "phi_plus", "phi_minus", "reflect") \
                and base.domain == ALL:
            self.domain = NONZERO
        self.name = f"{op}({base.name})"

    def _value(self, lam, tol):
        if self.op == "reflect":
            return negate(self.base.eval(1.0 / lam, tol))
        val = self.base.eval(lam, tol)
        if self.op == "neg_inverse":
            return negate(inverse(val))
        if self.op == "times_lambda":
            return shift_scale(val, lam, 0.0, tol)
        if self.op == "div_lambda":
            return shift_scale(val, 1.0 / lam, 0.0, tol)
        if self.op == "phi_plus":
            return shift_scale(inverse(val), -1.0 / lam, 0.0, tol)
        return shift_scale(inverse(val), -lam, 0.0, tol)


def transformer_apply(fam, which, check=False, grid=None, tol=DEFAULT_TOL):
    """``Phi_plus(Q) = -Q^{-1}/lam`` or ``Phi_minus(R) = -lam R^{-1}``.

    With ``check=True`` the input is classified first and a
    :class:`ClassMismatchError` is raised unless it is a Stieltjes family (for
    ``plus``) or an inverse Stieltjes family (for ``minus``).
    """
    if which not in ("plus", "minus"):
        raise ValueError(f"which must be 'plus' or 'minus', got {which!r}")
    if check:
        # family_checks imports this module
        from .family_checks import classify_family

        verdict = classify_family(fam, grid, tol=tol)
        wanted = "stieltjes" if which == "plus" else "inverse_stieltjes"
        if not getattr(verdict, wanted):
            raise ClassMismatchError(f"input is not a {wanted.replace('_', ' ')} family")
    return MappedFamily(fam, "phi_plus" if which == "plus" else "phi_minus")


def relation_family_target(fam, tag):
    """The family a relation-backed family with ``tag`` should reproduce.

    Identical to ``fam`` except for ``opexpr3``, whose identity involves
    ``-Q(1/lam)``.
    """
    return MappedFamily(fam, "reflect") if tag == "opexpr3" else fam
