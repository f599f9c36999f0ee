"""Pseudo-arclength continuation of positive-solution branches.

Branches bifurcate from the trivial line at (lambda_1(g), 0) with tangent
phi_1(g), run subcritically toward lambda = 0, and are extended slightly
past it.  Each accepted point carries stability (gamma_1) and Nehari
diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import as_values, boundary_integral
from .dtn import dtn_matrix
from .errors import (
    CorrectorDivergence,
    EmptyBranch,
    LeftPositiveCone,
    MaxIterations,
    NonpositiveLambdaPoint,
    RootNotBracketed,
    SingularJacobian,
    UNotAboveOne,
)
from .problem import (
    ProblemSpec,
    SolutionPoint,
    residual_jacobian,
    residual_vector,
)
from .solve import make_point, newton_solve
from .spectral import principal_eigenvalue


@dataclass(frozen=True)
class StepOptions:
    """Continuation step controls."""

    eps_factor: float = 1e-4      # seed amplitude sets delta-lambda = eps_factor * lambda_1
    ds_init: float = 0.02
    ds_min: float = 1e-10
    ds_max: float = 0.2
    max_points: int = 400
    lam_floor_factor: float = -0.05   # stop below lam_floor_factor * lambda_1
    sup_ceiling: float = 1e6
    corrector_tol: float = 1e-11
    seed_target: float = 1e-2  # switch to arclength once sup reaches this
    with_gamma1: bool = True


@dataclass(frozen=True)
class Branch:
    """Ordered solution points along arclength from the bifurcation point."""

    spec: ProblemSpec
    points: list
    bifurcation_lambda: float
    tangent: np.ndarray = field(repr=False)  # phi_1(g), H1-normalized
    direction: str  # "subcritical" | "supercritical"

    @property
    def lam_range(self) -> tuple[float, float]:
        lams = [p.lam for p in self.points]
        return (min(lams), max(lams))

    def at_lambda(self, lam: float, *, with_gamma1: bool = True) -> SolutionPoint:
        """Solution at a prescribed lambda, corrected from the nearest point."""
        if not self.points:
            raise EmptyBranch("branch has no points")
        nearest = min(self.points, key=lambda p: abs(p.lam - lam))
        return newton_solve(self.spec, lam, nearest.w, with_gamma1=with_gamma1)


def _weighted_dot(m: int, dw1, dl1, dw2, dl2) -> float:
    return float(dw1 @ dw2) / m + dl1 * dl2


def _corrector(spec: ProblemSpec, w, lam, w_pred, lam_pred, t_w, t_lam, tol):
    """Newton on the residual augmented with the arclength hyperplane."""
    m = spec.domain.m
    wv = np.asarray(w, dtype=float).copy()
    lv = float(lam)
    for _ in range(25):
        f = residual_vector(spec, lv, wv)
        n = _weighted_dot(m, wv - w_pred, lv - lam_pred, t_w, t_lam)
        sup = float(np.max(np.abs(wv)))
        if np.linalg.norm(f) < tol * (1.0 + sup ** spec.p) and abs(n) < 1e-12 * (1.0 + sup):
            return wv, lv
        jac = residual_jacobian(spec, lv, wv)
        dfdl = -spec.domain.weights * spec.g * wv
        ext = np.zeros((m + 1, m + 1))
        ext[:m, :m] = jac
        ext[:m, m] = dfdl
        ext[m, :m] = t_w / m
        ext[m, m] = t_lam
        rhs = np.concatenate([f, [n]])
        try:
            step = np.linalg.solve(ext, rhs)
        except np.linalg.LinAlgError as exc:
            raise CorrectorDivergence(str(exc)) from exc
        if not np.all(np.isfinite(step)):
            raise CorrectorDivergence("non-finite corrector step")
        wv -= step[:m]
        lv -= step[m]
    raise CorrectorDivergence("corrector did not converge")


def _seed_points(spec: ProblemSpec, lam1: float, phi1: np.ndarray,
                 options: StepOptions):
    """Two corrected points just below the bifurcation, at trial amplitudes.

    The local slope of the bifurcating curve is read off the projection of
    the residual on phi_1: lambda_1 - lambda = eps^(p-1) * slope.
    """
    p = spec.p
    num = boundary_integral(spec.domain, spec.superlinear_weight * phi1 ** (p + 1.0))
    den = boundary_integral(spec.domain, spec.g * phi1 * phi1)
    if num <= 0.0 or den <= 0.0:
        raise RootNotBracketed(
            "bifurcation slope not subcritical: needs G(phi_1) > 0 and int g phi_1^2 > 0"
        )
    slope = num / den
    target_dl = options.eps_factor * lam1
    eps = (target_dl / slope) ** (1.0 / (p - 1.0))
    # amplitude ladder: near the bifurcation the arclength corrector can
    # fall back onto the trivial line, so ride the local expansion
    # lambda = lambda_1 - slope * eps^(p-1) at doubling amplitudes until
    # the iterate reaches a macroscopic scale
    seeds = []
    amp = eps
    for _ in range(min(60, options.max_points)):
        dl = slope * amp ** (p - 1.0)
        lam = lam1 - dl
        if lam < 0.5 * lam1:
            break
        try:
            point = newton_solve(spec, lam, amp * phi1,
                                 with_gamma1=options.with_gamma1)
        except (LeftPositiveCone, SingularJacobian, MaxIterations):
            point = None
        if point is None or point.sup_norm < 0.25 * amp * float(np.max(phi1)):
            # collapsed toward the trivial line or diverged; the Newton
            # basin can be too small at the lowest amplitudes, so keep
            # climbing until a rung fails after seeds were found
            if seeds:
                break
            amp *= 2.0
            continue
        seeds.append(point)
        if len(seeds) >= 2 and point.sup_norm >= options.seed_target:
            break
        amp *= 2.0
    if len(seeds) < 2:
        raise CorrectorDivergence("could not seed the branch near the bifurcation")
    return seeds


def continue_branch(spec: ProblemSpec, lam_window=None,
                    options: StepOptions | None = None) -> Branch:
    """Trace the positive-solution branch from (lambda_1(g), 0).

    Secant predictor / Newton corrector with adaptive arclength step; the
    scalar parameter is weighted 1 and the trace 1/sqrt(M).  Stops past
    lambda = lam_floor_factor * lambda_1, at blow-up, at the window edge,
    or on step underflow.
    """
    options = options or StepOptions()
    domain = spec.domain
    m = domain.m
    pe = principal_eigenvalue(domain, spec.g)
    lam1, phi1 = pe.value, pe.eigenfunction.values
    if lam1 <= 0.0:
        raise RootNotBracketed("no positive principal eigenvalue to bifurcate from")

    seeds = _seed_points(spec, lam1, phi1, options)
    points = list(seeds)
    lam_floor = options.lam_floor_factor * lam1
    lam_lo, lam_hi = (-math.inf, math.inf) if lam_window is None else lam_window

    ds = options.ds_init
    while len(points) < options.max_points:
        prev, cur = points[-2], points[-1]
        dw = cur.w - prev.w
        dl = cur.lam - prev.lam
        norm = math.sqrt(_weighted_dot(m, dw, dl, dw, dl))
        if norm == 0.0:
            break
        t_w, t_lam = dw / norm, dl / norm
        accepted = None
        while ds >= options.ds_min:
            w_pred = cur.w + ds * t_w
            lam_pred = cur.lam + ds * t_lam
            try:
                wv, lv = _corrector(spec, w_pred, lam_pred, w_pred, lam_pred,
                                    t_w, t_lam, options.corrector_tol)
            except CorrectorDivergence:
                ds *= 0.5
                continue
            if np.min(wv) <= 0.0:
                ds *= 0.5
                continue
            if float(np.max(wv)) < 0.3 * cur.sup_norm:
                # corrector fell toward the trivial line; shorten the step
                ds *= 0.5
                continue
            accepted = (wv, lv)
            break
        if accepted is None:
            break  # step underflow terminates the branch
        wv, lv = accepted
        points.append(make_point(spec, lv, wv, with_gamma1=options.with_gamma1))
        ds = min(ds * 1.3, options.ds_max)
        if lv < lam_floor or lv < lam_lo or lv > lam_hi:
            break
        if points[-1].sup_norm > options.sup_ceiling:
            break

    direction = "subcritical" if points[0].lam < lam1 else "supercritical"
    return Branch(spec, points, lam1, phi1, direction)


@dataclass(frozen=True)
class TransformedPoint:
    """A branch point mapped to the original (sppr or logistic) variables."""

    lam: float
    trace: np.ndarray = field(repr=False)
    residual: float
    sup_norm: float


def to_sppr(branch: Branch, p: float) -> list:
    """Map w-branch points to v = lambda^(-1/(p-1)) w solving the sppr form."""
    spec = branch.spec
    out = []
    for point in branch.points:
        if point.lam <= 0.0:
            raise NonpositiveLambdaPoint(f"lambda={point.lam} not positive")
        v = point.lam ** (-1.0 / (p - 1.0)) * point.w
        # sppr residual: Lambda v - Q lambda g (v + v^p)
        density = point.lam * spec.g * (v + np.abs(v) ** (p - 1.0) * v)
        res = dtn_matrix(spec.domain) @ v - spec.domain.weights * density
        out.append(TransformedPoint(point.lam, v, float(np.linalg.norm(res)),
                                    float(np.max(np.abs(v)))))
    return out


def to_logistic(branch: Branch, r) -> list:
    """Map w-branch points (g = -r, p = 2) to u = 1 + w / lambda solving the
    logistic problem."""
    spec = branch.spec
    rv = as_values(spec.domain, r)
    if spec.p != 2.0 or np.max(np.abs(spec.g + rv)) > 1e-12:
        raise UNotAboveOne("branch must be solved with g = -r and p = 2")
    out = []
    for point in branch.points:
        if point.lam <= 0.0:
            raise NonpositiveLambdaPoint(f"lambda={point.lam} not positive")
        u = 1.0 + point.w / point.lam
        if np.min(u) <= 1.0:
            raise UNotAboveOne("transformed state not strictly above one")
        density = point.lam * rv * u * (1.0 - u)
        res = dtn_matrix(spec.domain) @ u - spec.domain.weights * density
        out.append(TransformedPoint(point.lam, u, float(np.linalg.norm(res)),
                                    float(np.max(np.abs(u)))))
    return out
