"""Eigenvalue solvers for the boundary-reduced spectral problems.

Covers the principal eigenvalue lambda_1(g) of the linear Steklov-type
problem, the interior-shifted eigenvalue sigma_1(lambda), the stability
eigenvalue gamma_1(lambda, w) at a solution, and the weighted spectrum
{mu} whose second positive member controls the implicit function theorem
along a solution branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .domain import (
    DISK,
    BoundaryFunction,
    Domain,
    as_values,
    boundary_integral,
    volume_l2_norm_sq,
)
from .dtn import DIRICHLET_GUARD, dtn_matrix, first_dirichlet_eigenvalue
from .errors import EmptyBranch, PencilNotPositiveDefinite, RootNotBracketed

_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class EigenPair:
    """A solved eigenvalue with its boundary eigenfunction."""

    value: float
    eigenfunction: BoundaryFunction
    normalization: str  # "H1" | "boundary-L2"
    residual: float


@dataclass(frozen=True)
class MuSpectrum:
    """Real spectrum of the weighted problem at a solution (lambda, w)."""

    mu_values: np.ndarray
    principal: np.ndarray  # sign-definite eigenfunction flags
    mu1_minus: float
    mu1_plus: float
    mu2_plus: float  # +inf when absent
    eigenfunctions: np.ndarray  # columns aligned with mu_values


def _fix_sign(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def _h1_normalize(domain: Domain, v: np.ndarray) -> np.ndarray:
    a = dtn_matrix(domain)
    norm_sq = volume_l2_norm_sq(domain, v) + float(v @ a @ v)
    return _fix_sign(v / math.sqrt(norm_sq))


def _boundary_l2_normalize(domain: Domain, v: np.ndarray) -> np.ndarray:
    norm = math.sqrt(float(domain.weights @ (v * v)))
    return _fix_sign(v / norm)


def _is_one_signed(v: np.ndarray) -> bool:
    return bool(np.all(v > 0) or np.all(v < 0))


_BASIS_CACHE: dict[int, np.ndarray] = {}


def _resolved_basis(domain: Domain) -> np.ndarray | None:
    """Orthonormal basis of the spectrally resolved trace space.

    The disk DtN assembly annihilates the Nyquist mode, so that direction
    carries no stiffness and must be excluded from eigenvalue solves;
    this returns an m x (m-1) orthonormal basis of its complement (via a
    Householder reflector), or None on the interval where every mode is
    resolved exactly.
    """
    if domain.kind != DISK:
        return None
    m = domain.m
    basis = _BASIS_CACHE.get(m)
    if basis is None:
        nyquist = np.where(np.arange(m) % 2 == 0, 1.0, -1.0) / math.sqrt(m)
        v = nyquist.copy()
        v[-1] -= 1.0
        house = np.eye(m) - 2.0 * np.outer(v, v) / float(v @ v)
        basis = house[:, : m - 1]
        _BASIS_CACHE[m] = basis
    return basis


def _real_pencil_eigs(a: np.ndarray, b: np.ndarray):
    """Finite real eigenpairs of a v = mu b v via QZ, ascending by mu."""
    vals, vecs = scipy.linalg.eig(a, b)
    scale = max(1.0, float(np.max(np.abs(vals[np.isfinite(vals)]).real, initial=1.0)))
    keep = np.isfinite(vals) & (np.abs(vals.imag) <= 1e-9 * scale)
    mus = vals[keep].real
    funcs = vecs[:, keep].real
    order = np.argsort(mus)
    return mus[order], funcs[:, order]


def principal_eigenvalue(domain: Domain, g) -> EigenPair:
    """Positive principal eigenvalue lambda_1(g) of the linear pencil.

    Solves Lambda phi = lambda M_g phi.  When the boundary integral of g
    is nonnegative there is no positive principal eigenvalue and the pair
    (0, constant) is returned.
    """
    gv = as_values(domain, g)
    a = dtn_matrix(domain)
    if boundary_integral(domain, gv) >= 0.0:
        const = np.ones(domain.m)
        func = _h1_normalize(domain, const)
        return EigenPair(0.0, BoundaryFunction(domain, func), "H1", 0.0)
    b = np.diag(domain.weights * gv)
    basis = _resolved_basis(domain)
    if basis is not None:
        mus, funcs = _real_pencil_eigs(basis.T @ a @ basis, basis.T @ b @ basis)
        funcs = basis @ funcs
    else:
        mus, funcs = _real_pencil_eigs(a, b)
    for lam, vec in zip(mus, funcs.T):
        if lam <= 1e-12:
            continue
        if _is_one_signed(_fix_sign(vec)):
            func = _h1_normalize(domain, vec)
            res = float(np.linalg.norm(
                _resolved_defect(domain, a @ func - lam * b @ func)))
            return EigenPair(float(lam), BoundaryFunction(domain, func), "H1", res)
    raise RootNotBracketed("no positive principal eigenvalue found in the pencil")


def second_positive_pencil_eigenvalue(domain: Domain, g) -> float:
    """Second-smallest positive eigenvalue of the lambda_1 pencil (simplicity probe)."""
    gv = as_values(domain, g)
    a = dtn_matrix(domain)
    b = np.diag(domain.weights * gv)
    basis = _resolved_basis(domain)
    if basis is not None:
        a, b = basis.T @ a @ basis, basis.T @ b @ basis
    mus, _ = _real_pencil_eigs(a, b)
    positive = np.sort(mus[mus > 1e-12])
    return float(positive[1]) if len(positive) >= 2 else math.inf


def _beta_smallest(domain: Domain, s: float,
                   boundary_weight: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest generalized eigenvalue of (DtN_s - Q diag(w)) with respect to Q."""
    a = dtn_matrix(domain, s)
    mat = a - np.diag(domain.weights * boundary_weight)
    # Q = c * I on both domains, so the generalized problem is a plain eigh.
    q = domain.weights[0]
    basis = _resolved_basis(domain)
    if basis is not None:
        vals, vecs = np.linalg.eigh(basis.T @ (mat / q) @ basis)
        return float(vals[0]), basis @ vecs[:, 0]
    vals, vecs = np.linalg.eigh(mat / q)
    return float(vals[0]), vecs[:, 0]


def _resolved_defect(domain: Domain, defect: np.ndarray) -> np.ndarray:
    """Residual component within the spectrally resolved trace space."""
    basis = _resolved_basis(domain)
    return defect if basis is None else basis.T @ defect


def _root_find_decreasing(beta, s_max: float, label: str) -> float:
    """Root of a strictly decreasing scalar function, bracketed from 0.

    Doubling bracket expansion from s = 0, bisection to width 1e-12, one
    finite-difference Newton polish.
    """
    b0 = beta(0.0)
    if b0 == 0.0:
        return 0.0
    if b0 > 0.0:
        lo, blo = 0.0, b0
        step = min(1e-3, 0.125 * s_max)
        hi = step
        while True:
            if hi > s_max:
                hi = s_max
            bhi = beta(hi)
            if bhi <= 0.0:
                break
            if hi >= s_max:
                raise RootNotBracketed(f"{label}: no sign change below the Dirichlet guard")
            lo, blo = hi, bhi
            hi = min(2.0 * hi, s_max)
    else:
        hi, bhi = 0.0, b0
        lo = -min(1e-3, 0.125 * max(s_max, 1.0))
        while True:
            blo = beta(lo)
            if blo >= 0.0:
                break
            hi, bhi = lo, blo
            lo *= 2.0
            if lo < -1e12:
                raise RootNotBracketed(f"{label}: no sign change down to {lo}")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        bm = beta(mid)
        if bm > 0.0:
            lo = mid
        elif bm < 0.0:
            hi = mid
        else:
            return mid
    root = 0.5 * (lo + hi)
    h = max(1e-9, 1e-9 * abs(root))
    db = (beta(root + h) - beta(root - h)) / (2.0 * h)
    if db != 0.0:
        polished = root - beta(root) / db
        if lo - 1e-9 <= polished <= hi + 1e-9:
            root = polished
    return root


def sigma1(domain: Domain, g, lam: float) -> EigenPair:
    """Smallest eigenvalue sigma_1(lambda) of the interior-shifted problem.

    Found as the root of s -> smallest eigenvalue of (DtN_s - lambda M_g),
    which is strictly decreasing in s.
    """
    gv = as_values(domain, g)
    s_max = first_dirichlet_eigenvalue(domain) - 2 * DIRICHLET_GUARD

    def beta(s: float) -> float:
        return _beta_smallest(domain, s, lam * gv)[0]

    root = _root_find_decreasing(beta, s_max, "sigma1")
    _, vec = _beta_smallest(domain, root, lam * gv)
    func = _boundary_l2_normalize(domain, vec)
    a = dtn_matrix(domain, root)
    defect = a @ func - np.diag(domain.weights * lam * gv) @ func
    res = float(np.linalg.norm(_resolved_defect(domain, defect)))
    return EigenPair(float(root), BoundaryFunction(domain, func), "boundary-L2", res)


def gamma1(domain: Domain, g, lam: float, w, p: float, h=None) -> EigenPair:
    """Stability eigenvalue gamma_1 of the linearization at a solution w.

    Root of gamma -> smallest eigenvalue of the pencil
    (DtN_gamma - M_{lambda g + p h w^(p-1)} - gamma Q) with respect to Q,
    where h defaults to g (h = f for the f-variant).
    """
    gv = as_values(domain, g)
    wv = as_values(domain, w)
    hv = gv if h is None else as_values(domain, h)
    weight = lam * gv + p * hv * np.abs(wv) ** (p - 1.0)
    s_max = first_dirichlet_eigenvalue(domain) - 2 * DIRICHLET_GUARD

    def beta(gamma: float) -> float:
        return _beta_smallest(domain, gamma, weight)[0] - gamma

    root = _root_find_decreasing(beta, s_max, "gamma1")
    _, vec = _beta_smallest(domain, root, weight)
    func = _boundary_l2_normalize(domain, vec)
    a = dtn_matrix(domain, root)
    defect = a @ func - np.diag(domain.weights * weight) @ func - root * domain.weights * func
    return EigenPair(float(root), BoundaryFunction(domain, func), "boundary-L2",
                     float(np.linalg.norm(_resolved_defect(domain, defect))))


def weighted_steklov_spectrum(domain: Domain, g, lam: float, w, p: float) -> MuSpectrum:
    """All real eigenvalues mu of (Lambda - lambda M_g) phi = mu M_{g w^(p-1)} phi.

    For lambda in (0, lambda_1(g)) the left side A is positive definite
    and the pencil is reduced symmetrically through A^(1/2); at lambda = 0
    A is only semidefinite (kernel = constants) and QZ is used instead.
    mu = 1 is always present at a solution, with eigenfunction w.
    """
    gv = as_values(domain, g)
    wv = as_values(domain, w)
    a = dtn_matrix(domain) - np.diag(domain.weights * lam * gv)
    b = np.diag(domain.weights * gv * np.abs(wv) ** (p - 1.0))
    basis = _resolved_basis(domain)
    if basis is not None:
        a, b = basis.T @ a @ basis, basis.T @ b @ basis
    evals, evecs = np.linalg.eigh(a)
    scale = max(abs(evals[0]), abs(evals[-1]), 1.0)
    if evals[0] < -1e-10 * scale:
        raise PencilNotPositiveDefinite(
            f"Lambda - lambda M_g has eigenvalue {evals[0]}; lambda outside (0, lambda_1)"
        )
    if evals[0] > 1e-10 * scale:
        # symmetric reduction: eigenvalues of A^(-1/2) B A^(-1/2) are 1/mu
        isqrt = evecs @ np.diag(evals ** -0.5) @ evecs.T
        nus, psis = np.linalg.eigh(isqrt @ b @ isqrt)
        keep = np.abs(nus) > 1e-12
        mus = 1.0 / nus[keep]
        funcs = isqrt @ psis[:, keep]
    else:
        mus, funcs = _real_pencil_eigs(a, b)
    order = np.argsort(mus)
    mus = mus[order]
    funcs = funcs[:, order]
    if basis is not None:
        funcs = basis @ funcs
    funcs = np.column_stack([_boundary_l2_normalize(domain, f) for f in funcs.T])
    principal = np.array([_is_one_signed(f) for f in funcs.T])

    positive = mus[mus > 1e-12]
    mu1_plus = float(positive[0]) if len(positive) else math.nan
    mu2_plus = float(positive[1]) if len(positive) >= 2 else math.inf
    nonpos = mus[mus <= 1e-12]
    mu1_minus = float(nonpos[-1]) if len(nonpos) else math.nan
    return MuSpectrum(mus, principal, mu1_minus, mu1_plus, mu2_plus, funcs)


def m_delta(domain: Domain, g, p: float, branch) -> float:
    """Minimum of mu_2^+ over branch samples with lambda in [0, lambda_1(g)).

    Discrete surrogate of the infimum defining m_delta; +inf when the
    second positive eigenvalue is absent everywhere (e.g. the interval).
    """
    points = getattr(branch, "points", branch)
    if not points:
        raise EmptyBranch("m_delta needs at least one branch sample")
    lam1 = principal_eigenvalue(domain, g).value
    best = math.inf
    seen = False
    for pt in points:
        if not 0.0 <= pt.lam < lam1:
            continue
        seen = True
        spec = weighted_steklov_spectrum(domain, g, pt.lam, pt.w, p)
        best = min(best, spec.mu2_plus)
    if not seen:
        raise EmptyBranch("no branch sample with lambda in [0, lambda_1)")
    return best
