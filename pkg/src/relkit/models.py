"""Two half-line models whose compressed resolvent is ``-1/(lam + i sqrt(lam))``.

* The weighted L^2 model: multiplication by ``t^2`` in ``L^2((0, inf), dt)``
  compressed to the span of ``1/sqrt(1 + t^2)``, normalized so that
  ``(2/pi) int_0^inf dt / ((t^2 - lam)(1 + t^2))`` is the compression.  The
  integral is evaluated with adaptive quadrature after the substitution
  ``t = tan s``, which turns it into ``(2/pi) int_0^{pi/2} ds / (tan(s)^2 - lam)``.
* The boundary value model: ``-u'' = lam u`` on ``(0, inf)`` with the boundary
  condition ``-u'(0) - lam u(0) = h``; the decaying solution
  ``u(x) = a exp(i sqrt(lam) x)`` gives ``u(0) = -h/(i sqrt(lam) + lam)``.

Both reproduce the fixed point ``R0(lam) = i sqrt(lam)`` through
``R0 = -1/compression - lam``.
"""
import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError
from .families import OFF_POSITIVE_AXIS, FunctionFamily, sqrt_branch
from .family_checks import default_lambda_grid, sort_grid

MODEL_KINDS = ("weighted_l2", "ode_boundary")


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 32:
            raise ValueError("max_subdivisions must be at least 32")


@dataclass(frozen=True)
class HalfLineModel:
    kind: str = "weighted_l2"
    quadrature: QuadratureSpec = QuadratureSpec()

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"model kind must be one of {MODEL_KINDS}, got {self.kind!r}")

    def compress(self, lam):
        if self.kind == "weighted_l2":
            return l2_model_compress(lam, self.quadrature)
        return ode_model_compress(lam)


def closed_form_compress(lam):
    """``-1/(lam + i sqrt(lam))`` with the upper half plane square root."""
    lam = complex(lam)
    return -1.0 / (lam + 1j * sqrt_branch(lam))


def _check_lambda(lam):
    lam = complex(lam)
    if lam.imag == 0 and lam.real >= 0:
        raise DomainError(f"lambda must avoid [0, inf), got {lam}")
    return lam


def l2_model_compress(lam, spec=QuadratureSpec()):
    """Quadrature value of ``(2/pi) int_0^inf dt/((t^2 - lam)(1 + t^2))``."""
    lam = _check_lambda(lam)

    def integrand(s, part):
        val = 1.0 / (math.tan(s) ** 2 - lam) if s < math.pi / 2 else 0.0
        return val.real if part == 0 else val.imag

    out = []
    for part in (0, 1):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, _ = integrate.quad(integrand, 0.0, math.pi / 2, args=(part,),
                                        epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                                        limit=spec.max_subdivisions)
            except integrate.IntegrationWarning as exc:
                raise QuadratureError(f"quadrature failed at lambda = {lam}: {exc}") from exc
        out.append(val)
    return (2.0 / math.pi) * complex(out[0], out[1])


def ode_solution(lam, h=1.0):
    """Decaying solution of ``-u'' = lam u`` with ``-u'(0) - lam u(0) = h``.

    Returns ``(a, k)`` such that ``u(x) = a exp(i k x)``, ``k = sqrt(lam)``.
    """
    lam = _check_lambda(lam)
    k = sqrt_branch(lam)
    if not k.imag > 0:
        raise DomainError(f"no decaying solution at lambda = {lam}")
    # -u'(0) = -i k a, so the boundary condition reads -(i k + lam) a = h
    a = -h / (1j * k + lam)
    return a, k


def ode_model_compress(lam):
    a, k = ode_solution(lam, 1.0)
    return a


def ode_residuals(lam, h=1.0, xs=(0.0, 0.5, 1.0, 2.0)):
    """Residuals of the differential equation, the boundary condition and decay."""
    a, k = ode_solution(lam, h)
    u = [a * cmath.exp(1j * k * x) for x in xs]
    du = [1j * k * v for v in u]
    ddu = [-(k ** 2) * v for v in u]
    eq = max(abs(-dd - complex(lam) * v) for dd, v in zip(ddu, u))
    bc = abs(-du[0] - complex(lam) * u[0] - h)
    decay = abs(cmath.exp(1j * k))
    return {"equation": eq, "boundary": bc, "decay_factor": decay}


def model_family(model=HalfLineModel(), dim_m=1):
    """The family ``-1/compression(lam) - lam`` as a scalar multiple of I."""
    def value(lam):
        return (-1.0 / model.compress(lam) - complex(lam)) * np.eye(dim_m)

    return FunctionFamily(value, dim_m, OFF_POSITIVE_AXIS, name=f"model[{model.kind}]")


def hat_compressions(lam):
    """Closed forms of the compressions attached to ``Q0``.

    ``A_hat``: ``-1/(i/sqrt(lam) + lam)`` for non-real ``lam``;
    ``B_hat``: ``1/(i/sqrt(lam) - lam)`` for ``Re lam < 0``.  Only the entries
    whose domain contains ``lam`` are returned.
    """
    lam = complex(lam)
    q0 = 1j / sqrt_branch(lam)
    out = {}
    if lam.imag != 0:
        out["A_hat"] = -1.0 / (q0 + lam)
    if lam.real < 0:
        out["B_hat"] = 1.0 / (q0 - lam)
    return out


def model_report(model=HalfLineModel(), grid=None, tol_value=1e-7):
    """One row per grid point comparing the model with the closed form."""
    grid = sort_grid(default_lambda_grid() if grid is None else grid)
    rows = []
    for lam in grid:
        value = model.compress(lam)
        exact = closed_form_compress(lam)
        err = abs(value - exact)
        rows.append({
            "lambda": [lam.real, lam.imag],
            "quadrature": [value.real, value.imag],
            "closed_form": [exact.real, exact.imag],
            "abs_err": err,
            "pass": bool(err <= tol_value),
        })
    return rows
