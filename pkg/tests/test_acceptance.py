"""Acceptance suite: ten criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are written
straight to the terminal even when output capture is on.
"""
import math
import time

import numpy as np
import pytest

from relkit.families import (
    ConstantFamily,
    FixedPointFamily,
    InnerFamily,
    OmegaFamily,
    m_operator,
    m_relation,
    projection_family,
    transformer_apply,
)
from relkit.family_checks import (
    bridge_residual,
    default_lambda_grid,
    family_distance,
    inner_check,
    rs_check,
    scale_invariance_check,
    verify_representation,
)
from relkit.models import HalfLineModel, l2_model_compress, model_family, model_report
from relkit.random_instances import (
    random_nonsimple_system,
    random_relation,
    random_selfadjoint_contraction,
    random_selfadjoint_system,
    random_unitary,
)
from relkit.relation import (
    LinearRelation,
    SpaceSplit,
    adjoint,
    classify,
    compress_resolvent,
    conjugate,
    inverse,
    operator_matrix,
    relation_angle,
)
from relkit.representations import CHAIN_TAGS, representation_chain
from relkit.systems import (
    PassiveSystem,
    default_moment_count,
    ho_kalman_realize,
    match_residual,
    moments,
    simplicity_check,
    transfer,
    unitary_match,
)
from relkit.transforms import (
    contraction_transform,
    is_minimal,
    j_transform,
    p_transform,
    relation_from_contraction,
)


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return emit


def half_disk_grid():
    """Points with |z| <= 1/2 (origin, two rings, 16 angles each)."""
    pts = [0j]
    for r in (0.25, 0.5):
        pts += [r * np.exp(1j * t) for t in np.linspace(0, 2 * np.pi, 16, endpoint=False)]
    return pts


def chain_grid():
    """Twenty points: eight negative reals and twelve in the open left half plane."""
    pts = [-(2.0 ** k) for k in range(-3, 5)]
    for r in (0.25, 1.0, 4.0):
        for theta in (2 * math.pi / 3, 0.9 * math.pi):
            pts += [r * complex(math.cos(theta), s * math.sin(theta)) for s in (1, -1)]
    return [complex(p) for p in pts]


def test_ac01_involution_and_adjoint_laws(report):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        r = random_relation(n, rng, kind=str(rng.choice(["operator", "multivalued"])))
        j = r.split.fundamental_symmetry()
        worst = max(
            worst,
            relation_angle(p_transform(p_transform(r)), r),
            relation_angle(j_transform(j_transform(r)), r),
            relation_angle(p_transform(adjoint(r)), conjugate(adjoint(p_transform(r)), j)),
            relation_angle(j_transform(adjoint(r)), adjoint(j_transform(r))),
        )
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 5.0
    report("AC1 involution/adjoint laws", ok,
           f"200 relations, max angle {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_ac02_contraction_transform(report):
    rng = np.random.default_rng(102)
    worst_rt = worst_jt = 0.0
    all_nonneg = True
    for _ in range(100):
        n = int(rng.integers(1, 9))
        m = int(rng.integers(1, n + 1))
        t = random_selfadjoint_contraction(n, rng, boundary_fraction=0.2)
        a = relation_from_contraction(t, SpaceSplit(m, n - m))
        flags, _ = classify(a)
        all_nonneg &= flags.selfadjoint and flags.nonnegative
        again = relation_from_contraction(contraction_transform(a), a.split)
        worst_rt = max(worst_rt, relation_angle(a, again))
        jt = a.split.fundamental_symmetry() @ t
        worst_jt = max(worst_jt, np.max(np.abs(contraction_transform(p_transform(a)) - jt)))
    ok = all_nonneg and worst_rt <= 1e-9 and worst_jt <= 1e-10
    report("AC2 contraction transform", ok,
           f"100 contractions, nonnegative selfadjoint={all_nonneg}, round trip "
           f"{worst_rt:.2e}, swap vs JT {worst_jt:.2e}")
    assert ok


def test_ac03_representation_chain(report):
    rng = np.random.default_rng(103)
    grid = chain_grid()
    worst = {tag: 0.0 for tag in CHAIN_TAGS}
    worst_bridge = worst_inv = 0.0
    all_passed = True
    for _ in range(50):
        m, k = int(rng.integers(1, 4)), int(rng.integers(0, 6))
        t = random_selfadjoint_contraction(m + k, rng, boundary_fraction=0.2)
        chain = representation_chain(t, m)
        for tag in CHAIN_TAGS:
            rel, fam = chain.pair(tag)
            rep = verify_representation(fam, rel, tag, grid, tol_value=1e-8)
            all_passed &= rep.passed
            worst[tag] = max(worst[tag], rep.max_residual)
        worst_bridge = max(worst_bridge, bridge_residual(chain.Q, chain.R, grid))
        worst_inv = max(worst_inv, relation_angle(chain.A_breve, inverse(chain.A)))
    ok = all_passed and worst_bridge <= 1e-9 and worst_inv <= 1e-9
    detail = ", ".join(f"{tag} {v:.1e}" for tag, v in worst.items())
    report("AC3 representation chain", ok,
           f"50 chains, {detail}, R=-Q^-1 {worst_bridge:.1e}, A_breve=A^-1 {worst_inv:.1e}")
    assert ok


def test_ac04_worked_example(report):
    start = time.perf_counter()
    chain = representation_chain([[0, 1], [1, 0]], 1)
    errs = {}
    b_mat = operator_matrix(chain.B_hat)
    errs["B_hat matrix"] = np.max(np.abs(b_mat - np.array([[0, 1], [-1, 0]])))
    lams = [-1.0, -0.25, -3.0, -1 + 1j, -0.5 - 2j]
    zs = [0.3, -0.4j, 0.2 + 0.1j]
    errs["A compression"] = max(abs(compress_resolvent(chain.A, lam)[0, 0] + 1 / (2 * lam))
                                for lam in lams)
    errs["B_hat compression"] = max(
        abs(compress_resolvent(chain.B_hat, lam)[0, 0] + lam / (1 + lam ** 2)) for lam in lams)
    errs["Omega(z) = z"] = max(abs(transfer(chain.system, z)[0, 0] - z) for z in zs)
    errs["Q = -1/lam"] = max(abs(operator_matrix(chain.Q(lam))[0, 0] + 1 / lam) for lam in lams)
    errs["R = lam"] = max(abs(operator_matrix(chain.R(lam))[0, 0] - lam) for lam in lams)
    errs["R = -Q^-1"] = bridge_residual(chain.Q, chain.R, lams)
    for tag in ("aarep", "brep"):
        rel, fam = chain.pair(tag)
        errs[f"{tag} identity"] = verify_representation(fam, rel, tag, lams).max_residual
    elapsed = time.perf_counter() - start
    worst = max(errs.values())
    ok = worst <= 1e-12 and elapsed < 1.0
    report("AC4 worked 2x2 example", ok,
           f"{len(errs)} identities, max error {worst:.1e}, {elapsed:.3f}s")
    assert ok


def test_ac05_minimality_equals_simplicity(report):
    rng = np.random.default_rng(105)
    disagreements = 0
    simple_count = 0
    for i in range(100):
        m, k = int(rng.integers(1, 3)), int(rng.integers(1, 5))
        if i % 2:
            sys = random_selfadjoint_system(m, k, rng, separated=True)
        else:
            sys = random_nonsimple_system(m, k, int(rng.integers(1, k + 1)), rng)
        simple = simplicity_check(sys)["simple"]
        simple_count += simple
        a = relation_from_contraction(sys.block(), SpaceSplit(m, k))
        verdicts = (is_minimal(a), is_minimal(p_transform(a)), is_minimal(j_transform(a)))
        disagreements += any(v != simple for v in verdicts)
    diag = LinearRelation.from_operator(np.diag([2.0, 3.0]), SpaceSplit(1, 1))
    diag_flagged = not is_minimal(diag)
    ok = disagreements == 0 and diag_flagged
    report("AC5 minimality vs simplicity", ok,
           f"100 systems ({simple_count} simple), disagreements {disagreements}, "
           f"diag(2,3) non-minimal={diag_flagged}")
    assert ok


def test_ac06_rs_class(report):
    rng = np.random.default_rng(106)
    failures = 0
    for _ in range(100):
        sys = random_selfadjoint_system(int(rng.integers(1, 4)), int(rng.integers(0, 5)), rng)
        failures += not rs_check(sys, floor=1e-9, rng=rng).member
    caught = 0
    for _ in range(20):
        sys = random_selfadjoint_system(int(rng.integers(1, 4)), int(rng.integers(0, 4)), rng)
        u = random_unitary(sys.dim_m, rng)
        top = rng.uniform(1.05, 2.0)
        d = u @ np.diag(np.r_[top, rng.uniform(-0.5, 0.5, sys.dim_m - 1)]) @ u.conj().T
        bad = PassiveSystem((d + d.conj().T) / 2, sys.c, sys.b, sys.f)
        caught += not rs_check(bad, floor=1e-9).bounded_on_real
    ok = failures == 0 and caught == 20
    report("AC6 RS-class checks", ok,
           f"100 passive systems, {failures} failures; perturbed D caught {caught}/20")
    assert ok


def test_ac07_ho_kalman(report):
    rng = np.random.default_rng(107)
    start = time.perf_counter()
    worst_tf = worst_w = 0.0
    missing = 0
    grid = half_disk_grid()
    for _ in range(100):
        m, k = int(rng.integers(1, 3)), int(rng.integers(1, 7))
        sys = random_selfadjoint_system(m, k, rng, separated=True)
        got = ho_kalman_realize(moments(sys, default_moment_count(k)))
        worst_tf = max(worst_tf, max(np.linalg.norm(transfer(got, z) - transfer(sys, z), 2)
                                     for z in grid))
        w = unitary_match(got, sys) if got.dim_k == k else None
        if w is None:
            missing += 1
        else:
            worst_w = max(worst_w, match_residual(got, sys, w))
    elapsed = time.perf_counter() - start
    ok = worst_tf <= 1e-8 and worst_w <= 1e-8 and missing == 0 and elapsed < 10.0
    report("AC7 Ho-Kalman round trip", ok,
           f"100 systems, transfer error {worst_tf:.1e}, intertwiner {worst_w:.1e}, "
           f"unmatched {missing}, {elapsed:.2f}s")
    assert ok


def test_ac08_fixed_points(report):
    q0, r0 = FixedPointFamily("Q0", 2), FixedPointFamily("R0", 2)
    grid = default_lambda_grid()
    d_plus = family_distance(transformer_apply(q0, "plus"), q0, grid)
    d_minus = family_distance(transformer_apply(r0, "minus"), r0, grid)
    at_minus_one = max(np.max(np.abs(operator_matrix(q0(-1.0)) - np.eye(2))),
                       np.max(np.abs(operator_matrix(r0(-1.0)) + np.eye(2))))
    eps = np.finfo(float).eps
    ok = d_plus <= 1e-10 and d_minus <= 1e-10 and at_minus_one <= 4 * eps
    report("AC8 fixed points", ok,
           f"Phi+ {d_plus:.1e}, Phi- {d_minus:.1e}, value at -1 off by {at_minus_one:.1e}")
    assert ok


def test_ac09_analytic_models(report):
    start = time.perf_counter()
    rows = model_report(HalfLineModel("weighted_l2"), tol_value=1e-7)
    worst = max(r["abs_err"] for r in rows)
    at_minus_one = abs(l2_model_compress(-1.0) - 0.5)
    fam_err = family_distance(model_family(HalfLineModel("weighted_l2")),
                              FixedPointFamily("R0"))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-7 and at_minus_one <= 1e-9 and fam_err <= 1e-7 and elapsed < 10.0
    report("AC9 analytic models", ok,
           f"{len(rows)} points, max error {worst:.1e}, lambda=-1 off by {at_minus_one:.1e}, "
           f"family vs R0 {fam_err:.1e}, {elapsed:.2f}s")
    assert ok


def _random_psd(n, rng):
    t = random_selfadjoint_contraction(n, rng)
    return t @ t + 0.1 * np.eye(n)


def _ac10_instances(rng):
    """Pairs (family, expected verdicts) over five kinds, twenty each."""
    out = []
    for _ in range(20):
        n = int(rng.integers(1, 4))
        b = _random_psd(n, rng)
        out.append((InnerFamily(m_operator(b), "stieltjes"),
                    {"inner": True, -1: True, 0: False, 1: False}))
        c = _random_psd(n, rng)
        out.append((InnerFamily(m_operator(c), "inverse_stieltjes"),
                    {"inner": True, -1: False, 0: False, 1: True}))
        out.append((ConstantFamily(m_operator(_random_psd(n, rng))),
                    {"inner": False, -1: False, 0: True, 1: False}))
        rank = int(rng.integers(0, n + 1))
        u = random_unitary(n, rng)
        p = u[:, :rank] @ u[:, :rank].conj().T
        out.append((projection_family(p),
                    {"inner": True, -1: True, 0: True, 1: True}))
        kind = int(rng.integers(0, 3))
        if kind == 0:
            sys = random_selfadjoint_system(n, int(rng.integers(1, 4)), rng)
            fam = OmegaFamily(sys, str(rng.choice(["formula1", "formula2"])))
        elif kind == 1:
            fam = FixedPointFamily(str(rng.choice(["Q0", "R0"])), n)
        else:
            # indefinite B: not a Stieltjes inner family
            d = np.r_[-rng.uniform(0.5, 2.0), rng.uniform(-2.0, 2.0, n - 1)]
            v = random_unitary(n, rng)
            fam = InnerFamily(m_relation(np.eye(n), v @ np.diag(d) @ v.conj().T), "stieltjes")
            out.append((fam, {"inner": False, -1: True, 0: False, 1: False}))
            continue
        out.append((fam, {"inner": False, -1: False, 0: False, 1: False}))
    return out


def test_ac10_inner_and_scale_invariance(report):
    rng = np.random.default_rng(110)
    instances = _ac10_instances(rng)
    wrong = 0
    for fam, expected in instances:
        rep = inner_check(fam, tol_value=1e-8)
        got = {"inner": rep.inner and rep.characterization_ok}
        for p in (-1, 0, 1):
            got[p] = scale_invariance_check(fam, c=2.0, p=p, tol_value=1e-8)[0]
        wrong += got != expected
    ok = len(instances) == 100 and wrong == 0
    report("AC10 inner/scale invariance", ok,
           f"{len(instances)} instances, {wrong} misclassified")
    assert ok
