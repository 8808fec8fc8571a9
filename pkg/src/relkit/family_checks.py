"""Sample-based checks on families and transfer functions.

Nothing here proves a class membership; every verdict is a statement about the
sample grid.  The analyticity test is a finite-difference heuristic and is
reported as such.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, HypothesisError, SpectrumError
from .families import (
    OmegaFamily,
    RelationFamily,
    family_from_omega,
    in_domain,
    moebius_z_of_lambda,
    omega_from_family,
    relation_family_target,
    transformer_apply,
)
from .random_instances import random_selfadjoint_system
from .relation import (
    adjoint,
    classify,
    inverse,
    negate,
    parts,
    relation_angle,
    resolvent,
    shift_scale,
)
from .subspace import DEFAULT_TOL, as_matrix, min_eig, subspace_angle
from .systems import PassiveSystem, transfer

# shift used for the resolvent-type functions (M(lam) + mu)^{-1}
HOLOMORPHY_SHIFT = 1j
HOLOMORPHY_LIMIT = 1e-4
HOLOMORPHY_STEP = 1e-3


def default_lambda_grid():
    """Negative powers of two plus three rings of non-real points."""
    pts = [-(2.0 ** k) for k in range(-3, 4)]
    for r in (0.25, 1.0, 4.0):
        for theta in (math.pi / 3, 2 * math.pi / 3, 0.9 * math.pi):
            for s in (1, -1):
                pts.append(r * complex(math.cos(theta), s * math.sin(theta)))
    return [complex(p) for p in pts]


def default_z_grid():
    return [moebius_z_of_lambda(lam) for lam in default_lambda_grid()]


def real_z_samples():
    """Points of (-1, 1): the image of the negative grid plus a few fixed ones."""
    pts = {moebius_z_of_lambda(lam).real for lam in default_lambda_grid() if lam.imag == 0}
    pts.update((-0.9, -0.5, 0.0, 0.5, 0.9))
    return sorted(pts)


def sort_grid(points):
    return sorted((complex(p) for p in points), key=lambda z: (z.real, z.imag))


def _row(lam, residual, passed, **extra):
    lam = complex(lam)
    row = {"lambda": [lam.real, lam.imag], "residual": float(residual), "pass": bool(passed)}
    row.update(extra)
    return row


def _sorted_rows(rows):
    return sorted(rows, key=lambda r: (r["lambda"][0], r["lambda"][1]))


# --- transfer functions ------------------------------------------------------------

@dataclass
class RSVerdict:
    bounded_on_real: bool
    symmetric: bool
    inequality: bool
    kernel: bool
    rows: dict = field(default_factory=dict)

    @property
    def member(self):
        return self.bounded_on_real and self.symmetric and self.inequality and self.kernel

    def to_json(self):
        return {"member": self.member, "bounded_on_real": self.bounded_on_real,
                "symmetric": self.symmetric, "inequality": self.inequality,
                "kernel": self.kernel, "rows": self.rows}


def _omega_callable(omega, dim_m=None):
    if isinstance(omega, PassiveSystem):
        sys = omega
        return (lambda z: transfer(sys, z)), sys.dim_m
    val = as_matrix(omega(0.0))
    return omega, val.shape[0] if dim_m is None else dim_m


def rs_check(omega, z_grid=None, floor=DEFAULT_TOL.psd, max_kernel_points=12,
             rng=None, tol=DEFAULT_TOL):
    """Sample checks of the combined Nevanlinna-Schur conditions.

    (a) ``Omega(x)`` is Hermitian with ``-I <= Omega(x) <= I`` on real samples;
    (b) ``Omega(conj z) = Omega(z)^H``;
    (c) ``I - Omega^H Omega - (1 - |z|^2) Im Omega / Im z >= 0``;
    (d) the kernel
    ``I - Omega(w)^H Omega(z) - (1 - conj(w) z)/(z - conj(w)) (Omega(z) - Omega(w)^H)``
    gives a positive semidefinite Gram matrix on each half plane.  At most
    ``max_kernel_points`` points per half plane are used; a larger grid is
    subsampled with ``rng`` (a numpy Generator) or by taking the first points.
    """
    fn, m = _omega_callable(omega)
    zs = sort_grid(default_z_grid() if z_grid is None else z_grid)
    eye = np.eye(m)
    rows = {"a": [], "b": [], "c": [], "d": []}

    ok_a = True
    for x in real_z_samples():
        val = as_matrix(fn(x))
        herm = np.linalg.norm(val - val.conj().T, 2)
        hv = (val + val.conj().T) / 2
        slack = min(min_eig(eye - hv), min_eig(eye + hv))
        passed = herm <= tol.eq and slack >= -floor
        ok_a &= passed
        rows["a"].append(_row(x, max(herm, -slack, 0.0), passed))

    ok_b = ok_c = True
    upper, lower = [], []
    for z in zs:
        if z.imag == 0:
            continue
        val = as_matrix(fn(z))
        sym = np.linalg.norm(as_matrix(fn(z.conjugate())) - val.conj().T, 2)
        scale = max(1.0, np.linalg.norm(val, 2))
        passed_b = sym <= tol.eq * scale
        ok_b &= passed_b
        rows["b"].append(_row(z, sym, passed_b))
        im_part = (val - val.conj().T) / 2j
        ineq = eye - val.conj().T @ val - (1 - abs(z) ** 2) * im_part / z.imag
        low = min_eig(ineq)
        passed_c = low >= -floor
        ok_c &= passed_c
        rows["c"].append(_row(z, max(-low, 0.0), passed_c))
        (upper if z.imag > 0 else lower).append((z, val))

    ok_d = True
    for half in (upper, lower):
        if len(half) > max_kernel_points:
            if rng is not None:
                pick = sorted(rng.choice(len(half), max_kernel_points, replace=False))
                half = [half[i] for i in pick]
            else:
                half = half[:max_kernel_points]
        if not half:
            continue
        k = len(half)
        gram = np.zeros((k * m, k * m), dtype=complex)
        for i, (zi, oi) in enumerate(half):
            for j, (zj, oj) in enumerate(half):
                wj = zj.conjugate()
                kern = eye - oj.conj().T @ oi - (1 - wj * zi) / (zi - wj) * (oi - oj.conj().T)
                gram[j * m:(j + 1) * m, i * m:(i + 1) * m] = kern
        low = min_eig(gram)
        passed_d = low >= -floor
        ok_d &= passed_d
        rows["d"].append(_row(half[0][0], max(-low, 0.0), passed_d, points=k))

    return RSVerdict(ok_a, ok_b, ok_c, ok_d, {key: _sorted_rows(v) for key, v in rows.items()})


# --- families -------------------------------------------------------------------

@dataclass
class FamilyVerdict:
    nevanlinna: bool
    stieltjes: bool
    inverse_stieltjes: bool
    rs_class: object = None          # bool for transfer-function backed families
    inner: object = None             # bool when the family is (inverse) Stieltjes
    constant_projection: object = None
    checks: dict = field(default_factory=dict)
    heuristic: tuple = ("holomorphy",)

    def matches(self, expected):
        """Whether the verdict supports the class name ``expected``."""
        key = expected.replace("-", "_")
        if key in ("nevanlinna", "stieltjes", "inverse_stieltjes"):
            return bool(getattr(self, key))
        if key in ("rs", "rs_class"):
            return bool(self.rs_class)
        if key == "inner":
            return bool(self.inner)
        if key == "none":
            return not self.nevanlinna
        raise ValueError(f"unknown class {expected!r}")

    def to_json(self):
        return {
            "nevanlinna": self.nevanlinna,
            "stieltjes": self.stieltjes,
            "inverse_stieltjes": self.inverse_stieltjes,
            "rs_class": self.rs_class,
            "inner": self.inner,
            "constant_projection": self.constant_projection,
            "heuristic": list(self.heuristic),
            "checks": self.checks,
        }


def _shifted_inverse(rel, mu, tol):
    """``(M + mu)^{-1}`` for a relation M on M-space, as a matrix."""
    return resolvent(rel, -mu, tol)


def _holomorphy_residual(fam, x, tol):
    mu = HOLOMORPHY_SHIFT
    h = HOLOMORPHY_STEP * abs(x)

    def g(lam):
        return _shifted_inverse(fam.eval(lam, tol), mu, tol)

    g0 = g(x)
    gp, gm = g(x + h), g(x - h)
    gu, gl = g(complex(x, h)), g(complex(x, -h))
    second = np.linalg.norm(gp - 2 * g0 + gm, 2)
    cross = np.linalg.norm(gu - gl - 1j * (gp - gm), 2)
    scale = max(np.linalg.norm(g0, 2), np.finfo(float).tiny)
    return max(second, cross) / scale


def classify_family(fam, grid=None, tol=DEFAULT_TOL, with_inner=True):
    """Nevanlinna / Stieltjes / inverse Stieltjes verdict on a sample grid.

    Non-real samples check maximal dissipativity (accumulativity below the
    axis), the symmetry ``M(conj lam) = M(lam)^*`` and constancy of the
    multivalued part.  Negative samples check the sign of ``M(x)`` and the
    analyticity heuristic for ``(M(lam) + i)^{-1}`` across the axis.
    """
    grid = sort_grid(default_lambda_grid() if grid is None else grid)
    checks = {"maximal": [], "symmetry": [], "mul": [], "sign": [], "holomorphy": []}
    nev_ok = True
    mul_ref = None
    values = {}
    for lam in grid:
        if lam.imag == 0 or not in_domain(lam, fam.domain):
            continue
        try:
            val = fam.eval(lam, tol)
            conj_val = fam.eval(lam.conjugate(), tol)
        except (SpectrumError, DomainError):
            nev_ok = False
            checks["maximal"].append(_row(lam, math.inf, False))
            continue
        values[lam] = val
        flags, res = classify(val, tol)
        form = res["min_imag_form"] if lam.imag > 0 else -_max_imag_form(val)
        maximal = val.dim == val.n and form >= -tol.psd
        checks["maximal"].append(_row(lam, max(-form, 0.0), maximal))
        sym = relation_angle(conj_val, adjoint(val, tol))
        checks["symmetry"].append(_row(lam, sym, sym <= tol.eq))
        mul = parts(val, tol)["mul"]
        if mul_ref is None:
            mul_ref = mul
            gap = 0.0
        else:
            gap = subspace_angle(mul_ref, mul)
        checks["mul"].append(_row(lam, gap, gap <= tol.eq))
        nev_ok &= maximal and sym <= tol.eq and gap <= tol.eq

    nonneg = nonpos = True
    holo_ok = True
    negatives = [lam for lam in grid if lam.imag == 0 and lam.real < 0]
    for lam in negatives:
        if not in_domain(lam, fam.domain):
            nonneg = nonpos = False
            break
        try:
            val = fam.eval(lam, tol)
            flags, res = classify(val, tol)
            holo = _holomorphy_residual(fam, lam.real, tol)
        except (SpectrumError, DomainError):
            nonneg = nonpos = holo_ok = False
            checks["sign"].append(_row(lam, math.inf, False))
            continue
        sa = flags.selfadjoint
        nonneg &= sa and flags.nonnegative
        nonpos &= sa and flags.nonpositive
        checks["sign"].append(_row(lam, res["hermitian_gap"], sa,
                                   nonnegative=flags.nonnegative,
                                   nonpositive=flags.nonpositive))
        passed = holo <= HOLOMORPHY_LIMIT
        holo_ok &= passed
        checks["holomorphy"].append(_row(lam, holo, passed))
    if not negatives:
        nonneg = nonpos = holo_ok = False

    stieltjes = nev_ok and holo_ok and nonneg
    inv_stieltjes = nev_ok and holo_ok and nonpos
    verdict = FamilyVerdict(nev_ok, stieltjes, inv_stieltjes,
                            checks={k: _sorted_rows(v) for k, v in checks.items()})

    if isinstance(fam, OmegaFamily) and fam.bridge != "direct-schur":
        verdict.rs_class = rs_check(fam.omega, tol=tol).member
    if with_inner and (stieltjes or inv_stieltjes):
        flavor = "stieltjes" if stieltjes else "inverse_stieltjes"
        verdict.inner = inner_check(fam, flavor=flavor, tol=tol).inner
    if stieltjes and inv_stieltjes:
        verdict.constant_projection = _is_constant_projection(fam, values, tol)
    return verdict


def _max_imag_form(rel):
    xy = rel.X.conj().T @ rel.Y
    return -min_eig(-(xy - xy.conj().T) / 2j)


def _is_constant_projection(fam, values, tol):
    vals = list(values.values())
    if not vals:
        return False
    first = vals[0]
    if any(relation_angle(first, v) > tol.eq for v in vals[1:]):
        return False
    p = parts(first, tol)
    return p["ker"].dim + p["mul"].dim == first.n and first.dim == first.n


# --- inner families and scale invariance ---------------------------------------------

@dataclass
class InnerReport:
    inner: bool
    characterization_ok: bool
    flavor: str
    fitted: object
    rows: list

    def to_json(self):
        return {"inner": self.inner, "characterization_ok": self.characterization_ok,
                "flavor": self.flavor,
                "fitted": None if self.fitted is None else self.fitted.to_json(),
                "rows": self.rows}


def _fit_inner(fam, lams, flavor, tol_value, tol):
    """Fit ``B = -lam Q(lam)`` (or ``C = R(lam)/lam``) at the first point and test the rest."""
    def fitted_at(lam):
        val = fam.eval(lam, tol)
        factor = -lam if flavor == "stieltjes" else 1.0 / lam
        return shift_scale(val, factor, 0.0, tol)

    ref = fitted_at(lams[0])
    worst = max((relation_angle(ref, fitted_at(lam)) for lam in lams[1:]), default=0.0)
    flags, _ = classify(ref, tol)
    ok = worst <= tol_value and flags.selfadjoint and flags.nonnegative
    return ok, ref


def inner_check(fam, y_grid=(0.25, 1.0, 4.0), flavor=None, tol_value=1e-8, tol=DEFAULT_TOL):
    """Inner test: ``Re (f', f) = 0`` on the graph of ``M(iy)`` for sampled ``y > 0``.

    The result is cross-checked against the explicit form: a Stieltjes inner
    family is ``-B/lam`` and an inverse Stieltjes one is ``lam C`` with ``B``,
    ``C`` nonnegative selfadjoint.  The relation is fitted from one sample and
    compared at the others.
    """
    rows = []
    ok = True
    for y in y_grid:
        lam = complex(0.0, y)
        val = fam.eval(lam, tol)
        xy = val.X.conj().T @ val.Y
        re_form = float(np.linalg.norm((xy + xy.conj().T) / 2, 2)) if val.dim else 0.0
        passed = re_form <= tol_value
        ok &= passed
        rows.append(_row(lam, re_form, passed))
    lams = [complex(0.0, y) for y in y_grid] + [complex(-1.0, 0.0)]
    lams = [lam for lam in lams if in_domain(lam, fam.domain)]
    flavors = (flavor,) if flavor else ("stieltjes", "inverse_stieltjes")
    char_ok, fitted, used = False, None, flavors[0]
    for fl in flavors:
        good, rel = _fit_inner(fam, lams, fl, tol_value, tol)
        if good:
            char_ok, fitted, used = True, rel, fl
            break
    return InnerReport(ok, char_ok, used, fitted, _sorted_rows(rows))


def scale_invariance_check(fam, c=2.0, p=1, grid=None, tol_value=1e-8, tol=DEFAULT_TOL):
    """Test ``M(c lam) = c^p M(lam)`` on the grid.  Returns ``(ok, rows)``."""
    if not c > 0:
        raise ValueError("scale factor c must be positive")
    grid = sort_grid(default_lambda_grid() if grid is None else grid)
    rows = []
    ok = True
    for lam in grid:
        if not (in_domain(lam, fam.domain) and in_domain(c * lam, fam.domain)):
            continue
        lhs = fam.eval(c * lam, tol)
        rhs = shift_scale(fam.eval(lam, tol), c ** p, 0.0, tol)
        gap = relation_angle(lhs, rhs)
        ok &= gap <= tol_value
        rows.append(_row(lam, gap, gap <= tol_value))
    return ok, rows


# --- representation identities ------------------------------------------------------

HYPOTHESES = {
    "opexpr": ("selfadjoint",),
    "arep": ("selfadjoint",),
    "aarep": ("selfadjoint", "nonnegative"),
    "einundzwan": ("selfadjoint", "nonnegative"),
    "einundzwan2": ("selfadjoint", "nonnegative"),
    "opexpr3": ("selfadjoint", "nonnegative"),
    "brep": ("j_selfadjoint", "maximal_accretive"),
}


@dataclass
class VerificationReport:
    tag: str
    tol: float
    rows: list
    skipped: list = field(default_factory=list)

    @property
    def max_residual(self):
        return max((r["residual"] for r in self.rows), default=0.0)

    @property
    def passed(self):
        return bool(self.rows) and all(r["pass"] for r in self.rows)

    def to_json(self):
        return {"tag": self.tag, "tol": self.tol, "rows": self.rows,
                "summary": {"points": len(self.rows), "skipped": len(self.skipped),
                            "max_residual": self.max_residual, "pass": self.passed}}


def check_hypotheses(rel, tag, tol=DEFAULT_TOL):
    flags, _ = classify(rel, tol)
    for name in HYPOTHESES[tag]:
        if not getattr(flags, name):
            raise HypothesisError(name)
    return flags


def verify_representation(fam, rel, tag, grid=None, tol_value=1e-8, tol=DEFAULT_TOL):
    """Check that ``rel`` represents ``fam`` through the identity named by ``tag``.

    The relation is classified first and a :class:`HypothesisError` names the
    first failed hypothesis.  At every grid point inside the tag's domain the
    family value is compared, as a graph, with the family computed from the
    compressed resolvent of ``rel``; the residual is the principal-angle sine.
    """
    check_hypotheses(rel, tag, tol)
    grid = sort_grid(default_lambda_grid() if grid is None else grid)
    from_relation = RelationFamily(rel, tag)
    target = relation_family_target(fam, tag)
    rows, skipped = [], []
    for lam in grid:
        if not in_domain(lam, from_relation.domain):
            skipped.append(lam)
            continue
        lhs = from_relation.eval(lam, tol)
        rhs = target.eval(lam, tol)
        gap = relation_angle(lhs, rhs)
        rows.append(_row(lam, gap, gap <= tol_value))
    return VerificationReport(tag, tol_value, _sorted_rows(rows), skipped)


def bridge_residual(fam_q, fam_r, grid=None, tol=DEFAULT_TOL):
    """Largest angle between ``R(lam)`` and ``-Q(lam)^{-1}`` over the grid."""
    grid = default_lambda_grid() if grid is None else grid
    worst = 0.0
    for lam in grid:
        q = fam_q.eval(lam, tol)
        worst = max(worst, relation_angle(fam_r.eval(lam, tol), negate(inverse(q))))
    return worst


def family_distance(fam_a, fam_b, grid=None, tol=DEFAULT_TOL):
    """Largest graph angle between two families over the common grid points."""
    grid = default_lambda_grid() if grid is None else grid
    worst = 0.0
    for lam in grid:
        if in_domain(lam, fam_a.domain) and in_domain(lam, fam_b.domain):
            worst = max(worst, relation_angle(fam_a.eval(lam, tol), fam_b.eval(lam, tol)))
    return worst


def uniqueness_probe(count=10, dim_m=1, rng=None, tol_value=1e-4, tol=DEFAULT_TOL):
    """Random Stieltjes families from passive systems that are moved by the transformer.

    Returns the list of distances ``max |Phi_plus(Q) - Q|`` (graph angles); all
    should exceed ``tol_value``.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    out = []
    for _ in range(count):
        sys = random_selfadjoint_system(dim_m, int(rng.integers(1, 4)), rng)
        fam = family_from_omega(sys, "formula1")
        out.append(family_distance(fam, transformer_apply(fam, "plus"), tol=tol))
    return out


def omega_family_roundtrip(fam, flavor, z_grid=None, tol=DEFAULT_TOL):
    """Distance between ``fam.omega`` and the transfer function recovered from ``fam``."""
    omega = omega_from_family(fam, flavor, tol)
    zs = default_z_grid() if z_grid is None else z_grid
    return max(np.linalg.norm(as_matrix(fam.omega(z)) - omega(z), 2) for z in zs)

