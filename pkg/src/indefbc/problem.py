"""Problem descriptions, energy functionals, and Nehari diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .domain import Domain, as_values, boundary_integral
from .dtn import dtn_matrix
from .errors import NonpositiveEOrG, ShapeMismatch

W_FORM = "w-form"
F_FORM = "f-form"
SPPR_FORM = "sppr-form"
LOGISTIC = "logistic"

_FORMS = (W_FORM, F_FORM, SPPR_FORM, LOGISTIC)

# Ambient dimension by domain kind, used only for the subcriticality bound
# 1 < p < N/(N-2) for N > 2 (vacuous here, checked for forward compatibility).
_DIMENSION = {"interval": 1, "unit-disk": 2}


@dataclass(frozen=True)
class ProblemSpec:
    """A boundary-reduced problem instance.

    ``g`` is the linear indefinite weight; ``f`` (f-form only) weights the
    superlinear term.  The logistic form fixes p = 2 and stores g = -r.
    """

    domain: Domain
    p: float
    g: np.ndarray = field(repr=False)
    f: Optional[np.ndarray] = field(default=None, repr=False)
    form: str = W_FORM
    lam: float = 0.0

    def __post_init__(self):
        if self.form not in _FORMS:
            raise ShapeMismatch(f"unknown problem form {self.form!r}")
        if self.p <= 1.0:
            raise ShapeMismatch(f"exponent p={self.p} must exceed 1")
        n = _DIMENSION[self.domain.kind]
        if n > 2 and self.p >= n / (n - 2):
            raise ShapeMismatch(f"p={self.p} supercritical for dimension {n}")
        if self.form == LOGISTIC and self.p != 2.0:
            raise ShapeMismatch("logistic form fixes p = 2")
        object.__setattr__(self, "g", as_values(self.domain, self.g))
        if self.f is not None:
            object.__setattr__(self, "f", as_values(self.domain, self.f))
        if self.form == F_FORM and self.f is None:
            raise ShapeMismatch("f-form needs the weight f")

    @property
    def superlinear_weight(self) -> np.ndarray:
        """Weight in front of w^p: f for the f-form, g otherwise."""
        return self.f if self.form == F_FORM else self.g

    def at(self, lam: float) -> "ProblemSpec":
        return replace(self, lam=lam)


def logistic_spec(domain: Domain, r) -> ProblemSpec:
    """Logistic problem for u = 1 + v, reduced to the w-form with g = -r."""
    rv = as_values(domain, r)
    return ProblemSpec(domain, 2.0, -rv, None, LOGISTIC)


@dataclass(frozen=True)
class NehariDiagnostics:
    """Functional values and Nehari-manifold classification at (lambda, w)."""

    E: float
    G_val: float
    J: float
    t_projection: float
    membership: str  # "N-minus" | "N-plus" | "N-zero" | "off-manifold"


def functionals(spec: ProblemSpec, lam: float, w) -> NehariDiagnostics:
    """Energy E, superlinear term G, and J = E/2 - G/(p+1) at a trace."""
    wv = as_values(spec.domain, w)
    if not np.any(wv):
        return NehariDiagnostics(0.0, 0.0, 0.0, math.nan, "off-manifold")
    a = dtn_matrix(spec.domain)
    p = spec.p
    e = float(wv @ a @ wv) - lam * boundary_integral(spec.domain, spec.g * wv * wv)
    g_val = boundary_integral(spec.domain, spec.superlinear_weight * np.abs(wv) ** (p + 1.0))
    j = 0.5 * e - g_val / (p + 1.0)
    if e > 0.0 and g_val > 0.0:
        t0 = (e / g_val) ** (1.0 / (p - 1.0))
    else:
        t0 = math.nan
    if abs(e - g_val) <= 1e-8 * (1.0 + abs(e)):
        second = (1.0 - p) * e  # j''(1) sign on the manifold
        if second < 0.0:
            membership = "N-minus"
        elif second > 0.0:
            membership = "N-plus"
        else:
            membership = "N-zero"
    else:
        membership = "off-manifold"
    return NehariDiagnostics(e, g_val, j, t0, membership)


def nehari_project(spec: ProblemSpec, lam: float, w) -> np.ndarray:
    """Scale w onto the Nehari manifold at the fibering-map maximum t0."""
    wv = as_values(spec.domain, w)
    diag = functionals(spec, lam, wv)
    if not (diag.E > 0.0 and diag.G_val > 0.0):
        raise NonpositiveEOrG(
            f"projection needs E > 0 and G > 0, got E={diag.E}, G={diag.G_val}"
        )
    return diag.t_projection * wv


def free_gradient(spec: ProblemSpec, lam: float, w) -> np.ndarray:
    """Euclidean gradient of J; coincides with the residual F at positive w."""
    wv = as_values(spec.domain, w)
    a = dtn_matrix(spec.domain)
    h = spec.superlinear_weight
    q = spec.domain.weights
    return a @ wv - q * (lam * spec.g * wv + h * np.abs(wv) ** (spec.p - 1.0) * wv)


def residual_vector(spec: ProblemSpec, lam: float, w) -> np.ndarray:
    """Boundary-reduced residual F(w) = Lambda w - Q (lambda g w + h w^p)."""
    return free_gradient(spec, lam, w)


def residual_jacobian(spec: ProblemSpec, lam: float, w) -> np.ndarray:
    wv = as_values(spec.domain, w)
    a = dtn_matrix(spec.domain)
    h = spec.superlinear_weight
    q = spec.domain.weights
    return a - np.diag(q * (lam * spec.g + spec.p * h * np.abs(wv) ** (spec.p - 1.0)))


def conservation_defect(spec: ProblemSpec, lam: float, w) -> float:
    """Divergence-theorem identity: the boundary integral of the flux density."""
    wv = as_values(spec.domain, w)
    h = spec.superlinear_weight
    density = lam * spec.g * wv + h * np.abs(wv) ** (spec.p - 1.0) * wv
    return boundary_integral(spec.domain, density)


@dataclass(frozen=True)
class SolutionPoint:
    """A solved (lambda, w) pair with stability and manifold diagnostics."""

    lam: float
    w: np.ndarray = field(repr=False)
    residual: float
    gamma1: float
    nehari: NehariDiagnostics
    sup_norm: float
    positive: bool
