"""Dirichlet-to-Neumann operators for the interval and the unit disk.

All boundary bilinear forms use the convention <a, Q b> with Q the
diagonal quadrature matrix.  A DtN operator is stored quadrature-absorbed,
``matrix = Q @ L`` with L the trace -> outward-normal-derivative map, so
the stored matrix is symmetric and ``w @ matrix @ w`` is the Dirichlet
energy of the extension for s = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ive, jv, jvp

from .domain import DISK, INTERVAL, Domain, as_values
from .errors import SpectralParameterOutOfRange

# First interior Dirichlet eigenvalue: pi^2 on the interval, j_{0,1}^2 on
# the disk.  Helmholtz parameters must stay below it (multiplier pole).
_J01 = 2.404825557695773
DIRICHLET_GUARD = 1e-6


def first_dirichlet_eigenvalue(domain: Domain) -> float:
    return np.pi ** 2 if domain.kind == INTERVAL else _J01 ** 2


@dataclass(frozen=True)
class DtnOperator:
    """Quadrature-absorbed (possibly Helmholtz-parametric) DtN matrix."""

    domain: Domain
    s: float
    matrix: np.ndarray = field(repr=False)

    def apply_normal_derivative(self, trace) -> np.ndarray:
        """Outward normal derivative values of the extension (Q removed)."""
        values = as_values(self.domain, trace)
        return (self.matrix @ values) / self.domain.weights


def _disk_multipliers(m: int, s: float) -> np.ndarray:
    """Per-mode symbol of the disk DtN; Nyquist mode annihilated."""
    mult = np.zeros(m // 2 + 1)
    modes = np.arange(m // 2)
    if s == 0.0:
        mult[: m // 2] = modes
    elif s > 0.0:
        t = np.sqrt(s)
        mult[: m // 2] = t * jvp(modes, t) / jv(modes, t)
    else:
        t = np.sqrt(-s)
        # I_n'(t)/I_n(t) via exponentially scaled Bessel ratios.
        top = np.where(modes == 0, ive(1, t), 0.5 * (ive(modes - 1, t) + ive(modes + 1, t)))
        mult[: m // 2] = t * top / ive(modes, t)
    return mult


def _disk_matrix(m: int, mult: np.ndarray) -> np.ndarray:
    """Collocation matrix of a Fourier multiplier on m equispaced nodes."""
    eye = np.eye(m)
    coeffs = np.fft.rfft(eye, axis=0)
    out = np.fft.irfft(mult[:, None] * coeffs, n=m, axis=0)
    return out


def _interval_matrix(s: float) -> np.ndarray:
    if s == 0.0:
        a, b = 1.0, -1.0
    elif s > 0.0:
        t = np.sqrt(s)
        a = t * np.cos(t) / np.sin(t)
        b = -t / np.sin(t)
    else:
        t = np.sqrt(-s)
        a = t * np.cosh(t) / np.sinh(t)
        b = -t / np.sinh(t)
    return np.array([[a, b], [b, a]])


def assemble_dtn(domain: Domain) -> DtnOperator:
    """Harmonic (s = 0) DtN operator."""
    return assemble_helmholtz_dtn(domain, 0.0)


def assemble_helmholtz_dtn(domain: Domain, s: float) -> DtnOperator:
    """DtN operator of the Helmholtz extension -Delta u = s u.

    ``s`` must lie below the first interior Dirichlet eigenvalue by at
    least the pole guard; negative s (modified-Bessel regime) is allowed.
    """
    limit = first_dirichlet_eigenvalue(domain)
    if s > limit - DIRICHLET_GUARD:
        raise SpectralParameterOutOfRange(
            f"s={s} within guard of the Dirichlet eigenvalue {limit}"
        )
    if domain.kind == INTERVAL:
        raw = _interval_matrix(s)
    else:
        raw = _disk_matrix(domain.m, _disk_multipliers(domain.m, s))
    matrix = domain.weights[:, None] * raw
    matrix = 0.5 * (matrix + matrix.T)  # kill roundoff asymmetry
    return DtnOperator(domain, s, matrix)


def dirichlet_energy(dtn: DtnOperator, trace) -> float:
    """Interior Dirichlet energy of the harmonic extension, <w, Q L w>."""
    if dtn.s != 0.0:
        raise SpectralParameterOutOfRange("Dirichlet energy requires the s=0 operator")
    values = as_values(dtn.domain, trace)
    return float(values @ dtn.matrix @ values)


_DISK_MATRIX_CACHE: dict[tuple[int, float], np.ndarray] = {}


def dtn_matrix(domain: Domain, s: float = 0.0) -> np.ndarray:
    """Cached quadrature-absorbed DtN matrix (assembly helper for solvers)."""
    key = (domain.m if domain.kind == DISK else -domain.m, float(s))
    cached = _DISK_MATRIX_CACHE.get(key)
    if cached is None:
        cached = assemble_helmholtz_dtn(domain, s).matrix
        if len(_DISK_MATRIX_CACHE) > 4096:
            _DISK_MATRIX_CACHE.clear()
        _DISK_MATRIX_CACHE[key] = cached
    return cached
