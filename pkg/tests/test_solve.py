import math

import numpy as np
import pytest

from indefbc.errors import LeftPositiveCone, NonpositiveEOrG
from indefbc.problem import (
    ProblemSpec,
    conservation_defect,
    free_gradient,
    functionals,
    logistic_spec,
    nehari_project,
)
from indefbc.solve import (
    minimize_nehari,
    multi_start_solutions,
    newton_solve,
    nonexistence_probe,
)
from indefbc.spectral import principal_eigenvalue
from conftest import sign_changing_disk_weight

# Closed-form positive solution of the two-point problem at lambda = 0,
# p = 2, g = (1, -4): the linear extension 0.5 - 0.25 x.
G_1D = np.array([1.0, -4.0])
W0 = np.array([0.5, 0.25])


# ---------------------------------------------------------------------------
# functionals and the Nehari manifold
# ---------------------------------------------------------------------------

def test_functionals_closed_form_at_known_state(interval):
    spec = ProblemSpec(interval, 2.0, G_1D)
    diag = functionals(spec, 0.0, W0)
    # E = slope^2, G = g0 w0^3 + g1 w1^3; the state sits on the manifold
    assert abs(diag.E - 0.0625) < 1e-15
    assert abs(diag.G_val - 0.0625) < 1e-15
    assert abs(diag.J - 0.0625 / 6.0) < 1e-15
    assert diag.membership == "N-minus"


def test_projection_lands_on_manifold(interval, disk16):
    cases = [(interval, G_1D, np.array([1.0, 0.2])),
             (disk16, sign_changing_disk_weight(disk16),
              np.exp(np.cos(disk16.nodes)))]
    for dom, g, w in cases:
        spec = ProblemSpec(dom, 2.0, g)
        lam1 = principal_eigenvalue(dom, g).value
        proj = nehari_project(spec, 0.5 * lam1, w)
        diag = functionals(spec, 0.5 * lam1, proj)
        assert abs(diag.E - diag.G_val) < 1e-10 * (1.0 + abs(diag.E))
        assert diag.membership == "N-minus"
        # projection is a pure scaling
        assert np.allclose(proj / w, proj[0] / w[0])


def test_projection_rejects_nonpositive_energy(interval):
    spec = ProblemSpec(interval, 2.0, G_1D)
    lam1 = principal_eigenvalue(interval, G_1D).value
    phi1 = principal_eigenvalue(interval, G_1D).eigenfunction.values
    with pytest.raises(NonpositiveEOrG):
        nehari_project(spec, 2.0 * lam1, phi1)  # E(phi1) < 0 past lambda_1


def test_free_gradient_is_derivative_of_j(disk16):
    spec = ProblemSpec(disk16, 2.0, sign_changing_disk_weight(disk16))
    rng = np.random.default_rng(7)
    w = 0.5 + 0.3 * np.cos(disk16.nodes)
    lam = 0.2
    grad = free_gradient(spec, lam, w)
    eps = 1e-6
    for _ in range(5):
        v = rng.normal(size=disk16.m)
        fd = (functionals(spec, lam, w + eps * v).J
              - functionals(spec, lam, w - eps * v).J) / (2.0 * eps)
        assert abs(fd - float(grad @ v)) < 1e-7 * (1.0 + abs(fd))


def test_conservation_identity_at_solutions(interval, disk16):
    spec = ProblemSpec(interval, 2.0, G_1D)
    point = newton_solve(spec, 0.0, np.array([0.6, 0.3]), with_gamma1=False)
    assert abs(conservation_defect(spec, 0.0, point.w)) < 1e-10
    g = sign_changing_disk_weight(disk16)
    spec = ProblemSpec(disk16, 2.0, g)
    lam = 0.4 * principal_eigenvalue(disk16, g).value
    point = minimize_nehari(spec, lam)
    assert abs(conservation_defect(spec, lam, point.w)) < 1e-8


# ---------------------------------------------------------------------------
# Newton solver
# ---------------------------------------------------------------------------

def test_newton_recovers_closed_form_solution(interval):
    spec = ProblemSpec(interval, 2.0, G_1D)
    point = newton_solve(spec, 0.0, np.array([0.6, 0.3]))
    assert np.max(np.abs(point.w - W0)) < 1e-12
    assert point.residual < 1e-11
    assert point.positive
    assert point.gamma1 < 0.0
    assert point.nehari.membership == "N-minus"


def test_newton_rejects_nonpositive_init(interval):
    spec = ProblemSpec(interval, 2.0, G_1D)
    with pytest.raises(LeftPositiveCone):
        newton_solve(spec, 0.0, np.array([0.5, -0.1]))


def test_newton_logistic_spec_solution_maps_above_one(interval):
    r = np.array([-1.0, 4.0])
    spec = logistic_spec(interval, r)
    lam = 0.3
    point = newton_solve(spec, lam, np.array([0.4, 0.2]))
    u = 1.0 + point.w / lam
    # u solves the logistic flux condition and stays above one
    assert np.min(u) > 1.0
    assert abs(-(u[1] - u[0]) - lam * r[0] * u[0] * (1.0 - u[0])) < 1e-10


# ---------------------------------------------------------------------------
# Nehari minimization and probes
# ---------------------------------------------------------------------------

def test_minimize_nehari_matches_newton(interval, disk16):
    for dom, g in ((interval, G_1D),
                   (disk16, sign_changing_disk_weight(disk16))):
        spec = ProblemSpec(dom, 2.0, g)
        lam = 0.4 * principal_eigenvalue(dom, g).value
        found = minimize_nehari(spec, lam)
        assert found.positive
        assert found.nehari.membership == "N-minus"
        refined = newton_solve(spec, lam, found.w)
        assert np.max(np.abs(found.w - refined.w)) < 1e-8 * (1.0 + found.sup_norm)


def test_probe_is_empty_at_and_beyond_lambda1(interval, disk16):
    for dom, g in ((interval, G_1D),
                   (disk16, sign_changing_disk_weight(disk16))):
        spec = ProblemSpec(dom, 2.0, g)
        lam1 = principal_eigenvalue(dom, g).value
        for lam in (lam1, 1.3 * lam1):
            report = nonexistence_probe(spec, lam, 16, seed=1)
            assert not report.findings


def test_multistart_finds_exactly_one_solution(interval):
    spec = ProblemSpec(interval, 2.0, G_1D)
    lam1 = principal_eigenvalue(interval, G_1D).value
    found = multi_start_solutions(spec, 0.5 * lam1, 24, seed=2)
    assert len(found) == 1
    assert found[0].positive


def test_probe_report_is_seed_deterministic(interval):
    spec = ProblemSpec(interval, 2.0, G_1D)
    a = nonexistence_probe(spec, 1.5, 16, seed=3)
    b = nonexistence_probe(spec, 1.5, 16, seed=3)
    assert a.failures == b.failures
    assert len(a.findings) == len(b.findings)
