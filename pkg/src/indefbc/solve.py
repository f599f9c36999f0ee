"""Positive-solution solvers: Nehari minimization and damped Newton."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import as_values
from .errors import InitNotProjectable, LeftPositiveCone, MaxIterations, SingularJacobian
from .problem import (
    ProblemSpec,
    SolutionPoint,
    conservation_defect,
    free_gradient,
    functionals,
    nehari_project,
    residual_jacobian,
    residual_vector,
)
from .spectral import gamma1 as _gamma1
from .spectral import principal_eigenvalue

NEWTON_TOL = 1e-11
GRAD_TOL = 1e-10
_MAX_DAMPING = 30
_MAX_NEWTON = 200
_MAX_DESCENT = 50_000


def make_point(spec: ProblemSpec, lam: float, w, with_gamma1: bool = True) -> SolutionPoint:
    """Package a converged trace with its diagnostics."""
    lam = float(lam)
    wv = as_values(spec.domain, w)
    res = float(np.linalg.norm(residual_vector(spec, lam, wv)))
    positive = bool(np.min(wv) > 0.0)
    gam = math.nan
    if with_gamma1:
        gam = _gamma1(spec.domain, spec.g, lam, wv, spec.p,
                      h=spec.superlinear_weight).value
    diag = functionals(spec, lam, wv)
    return SolutionPoint(lam, wv, res, gam, diag, float(np.max(np.abs(wv))), positive)


def newton_solve(spec: ProblemSpec, lam: float, init, *,
                 tol: float = NEWTON_TOL, with_gamma1: bool = True) -> SolutionPoint:
    """Damped Newton on the boundary-reduced residual from a positive init.

    Steps are halved (up to 30 times) when the residual grows or the
    iterate leaves the positive cone.
    """
    w = as_values(spec.domain, init).copy()
    if np.min(w) <= 0.0:
        raise LeftPositiveCone("initial trace must be strictly positive")
    res = residual_vector(spec, lam, w)
    res_norm = float(np.linalg.norm(res))
    for _ in range(_MAX_NEWTON):
        if res_norm < tol * (1.0 + float(np.max(np.abs(w))) ** spec.p):
            return make_point(spec, lam, w, with_gamma1)
        jac = residual_jacobian(spec, lam, w)
        try:
            step = np.linalg.solve(jac, res)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from exc
        if not np.all(np.isfinite(step)):
            raise SingularJacobian("non-finite Newton step")
        alpha = 1.0
        for _ in range(_MAX_DAMPING):
            trial = w - alpha * step
            if np.min(trial) > 0.0:
                trial_res = residual_vector(spec, lam, trial)
                trial_norm = float(np.linalg.norm(trial_res))
                if trial_norm < res_norm or alpha < 1.0 / (1 << (_MAX_DAMPING - 1)):
                    w, res, res_norm = trial, trial_res, trial_norm
                    break
            alpha *= 0.5
        else:
            raise LeftPositiveCone("damping could not keep the iterate positive")
    raise MaxIterations(f"Newton stalled at residual {res_norm}")


def minimize_nehari(spec: ProblemSpec, lam: float, init=None, *,
                    grad_tol: float = GRAD_TOL) -> SolutionPoint:
    """Local minimizer of J over the N^- part of the Nehari manifold.

    Alternates a Barzilai-Borwein step on the free gradient of J with the
    nodewise absolute value and the fibering-map projection; terminates
    when the manifold-tangent gradient norm drops below ``grad_tol``.
    """
    domain = spec.domain
    if init is None:
        init = principal_eigenvalue(domain, spec.g).eigenfunction.values
    w = np.abs(as_values(domain, init))
    try:
        w = nehari_project(spec, lam, w)
    except Exception as exc:
        raise InitNotProjectable(str(exc)) from exc

    grad = free_gradient(spec, lam, w)
    j_val = functionals(spec, lam, w).J
    step = 1.0 / (1.0 + float(np.linalg.norm(grad)))
    # Descent alone stalls in rounding noise near the minimizer, so once the
    # tangent gradient is small a Newton polish on F = grad J finishes the job.
    polish_at = max(grad_tol, 1e-5 * (1.0 + float(np.max(w))) ** spec.p)
    prev_w, prev_grad = None, None
    for _ in range(_MAX_DESCENT):
        tangent = _tangent_gradient(spec, lam, w, grad)
        tangent_norm = float(np.linalg.norm(tangent))
        if tangent_norm < grad_tol:
            return make_point(spec, lam, w)
        if tangent_norm < polish_at and np.min(w) > 0.0:
            try:
                point = newton_solve(spec, lam, w)
            except (LeftPositiveCone, SingularJacobian, MaxIterations):
                polish_at = 0.0  # polish unusable; keep descending
            else:
                if point.positive and point.nehari.membership == "N-minus":
                    return point
                polish_at = 0.0
        if prev_w is not None:
            dw = w - prev_w
            dg = grad - prev_grad
            denom = float(dw @ dg)
            if denom > 0.0:
                step = float(dw @ dw) / denom
            step = min(max(step, 1e-10), 1e4)
        trial_step = step
        for _ in range(60):
            cand = np.abs(w - trial_step * grad)
            diag = functionals(spec, lam, cand)
            if diag.E > 0.0 and diag.G_val > 0.0:
                cand = diag.t_projection * cand
                cand_j = functionals(spec, lam, cand).J
                if cand_j <= j_val + 1e-13 * (1.0 + abs(j_val)):
                    break
            trial_step *= 0.5
        else:
            raise MaxIterations("Nehari backtracking stalled")
        prev_w, prev_grad = w, grad
        w, j_val = cand, cand_j
        grad = free_gradient(spec, lam, w)
    raise MaxIterations("Nehari descent did not reach the gradient tolerance")


def _tangent_gradient(spec: ProblemSpec, lam: float, w: np.ndarray,
                      grad: np.ndarray) -> np.ndarray:
    """Project the free gradient onto the tangent space of the Nehari set."""
    # Constraint c(w) = E(w) - G(w); its gradient is 2*grad + (p-1)-weighted
    # superlinear part, computed directly for robustness.
    q = spec.domain.weights
    h = spec.superlinear_weight
    from .dtn import dtn_matrix

    a = dtn_matrix(spec.domain)
    c_grad = 2.0 * (a @ w - q * lam * spec.g * w) \
        - (spec.p + 1.0) * q * h * np.abs(w) ** (spec.p - 1.0) * w
    denom = float(c_grad @ c_grad)
    if denom == 0.0:
        return grad
    return grad - (float(grad @ c_grad) / denom) * c_grad


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of a multi-start nonexistence probe."""

    lam: float
    n_inits: int
    seed: int
    findings: list = field(default_factory=list)  # converged positive SolutionPoints
    failures: dict = field(default_factory=dict)  # failure-mode -> count


# Probe runs solve deeper than the default so that iterates collapsing onto
# the trivial solution (degenerate exactly at lambda_1) keep shrinking instead
# of stalling just above the detection threshold.
_PROBE_TOL = 1e-13
_PROBE_MIN_AMPLITUDE = 1e-6


def nonexistence_probe(spec: ProblemSpec, lam: float, n_inits: int, seed: int, *,
                       amplitude: float = 2.0) -> ProbeReport:
    """Run Newton from seeded random positive traces; expected empty findings."""
    rng = np.random.default_rng(seed)
    findings: list[SolutionPoint] = []
    failures: dict[str, int] = {}

    def count(mode: str):
        failures[mode] = failures.get(mode, 0) + 1

    for _ in range(n_inits):
        init = amplitude * rng.uniform(0.05, 1.0, spec.domain.m)
        try:
            point = newton_solve(spec, lam, init, tol=_PROBE_TOL, with_gamma1=False)
        except (LeftPositiveCone, SingularJacobian, MaxIterations) as exc:
            count(type(exc).__name__)
            continue
        if point.positive and point.sup_norm > _PROBE_MIN_AMPLITUDE:
            if not any(np.max(np.abs(point.w - f.w)) < 1e-6 for f in findings):
                findings.append(point)
        else:
            count("collapsed-to-zero")
    return ProbeReport(lam, n_inits, seed, findings, failures)


def multi_start_solutions(spec: ProblemSpec, lam: float, n_inits: int, seed: int, *,
                          amplitude: float = 2.0, dedup: float = 1e-6) -> list[SolutionPoint]:
    """Distinct positive solutions found by seeded multi-start Newton."""
    report = nonexistence_probe(spec, lam, n_inits, seed, amplitude=amplitude)
    out: list[SolutionPoint] = []
    for point in report.findings:
        if not any(np.max(np.abs(point.w - f.w)) < dedup * (1.0 + point.sup_norm) for f in out):
            out.append(point)
    return out
