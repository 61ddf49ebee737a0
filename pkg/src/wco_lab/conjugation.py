"""The conjugations ``C_{p,q} h(z) = theta(z) * conj(h(conj(omega(z))))``.

Coordinates are split into two groups.  On ``U1`` each ``omega_j`` is the
involutive automorphism vanishing at ``p_j`` and the weight ``theta`` picks
up a normalized kernel factor; on ``U2`` ``omega_j`` is the rotation
``z -> q_j z`` with ``|q_j| = 1``.  Indices are 0-based here; the JSON
layer converts to and from 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bergman import SpaceParams, check_in_polydisk, kernel_coeffs, norm_sq_array
from .errors import ParameterError, WcoError
from .moebius import LFT, omega_p
from .series import PowerSeries, as_caps, lft_series, neg_binomial_series

__all__ = [
    "ConjugationParams",
    "theta_weight_eval",
    "omega_eval",
    "theta_series",
    "apply",
    "apply_with_tail",
    "kernel_image",
    "shell_norm",
]

UNIMODULAR_TOL = 1e-12


@dataclass(frozen=True)
class ConjugationParams:
    sp: SpaceParams
    U1: tuple[int, ...]
    U2: tuple[int, ...]
    p: tuple[complex, ...]
    q: tuple[complex, ...]

    def __post_init__(self):
        U1 = tuple(int(j) for j in self.U1)
        U2 = tuple(int(j) for j in self.U2)
        p = tuple(complex(x) for x in self.p)
        q = tuple(complex(x) for x in self.q)
        for name, val in (("U1", U1), ("U2", U2), ("p", p), ("q", q)):
            object.__setattr__(self, name, val)
        d = self.sp.d
        if sorted(U1 + U2) != list(range(d)):
            raise ParameterError(
                f"U1={U1}, U2={U2} is not a partition of {{0..{d - 1}}}", condition="partition"
            )
        if len(p) != len(U1) or len(q) != len(U2):
            raise ParameterError("p must align with U1 and q with U2", condition="partition")
        for j, pj in zip(U1, p):
            if not 0 < abs(pj) < 1:
                raise ParameterError(f"p at coordinate {j} must satisfy 0<|p|<1, got {pj}",
                                     condition="p-range", residual=abs(pj))
        for j, qj in zip(U2, q):
            if abs(abs(qj) - 1) > UNIMODULAR_TOL:
                raise ParameterError(f"q at coordinate {j} must be unimodular, got {qj}",
                                     condition="q-unimodular", residual=abs(abs(qj) - 1))

    @classmethod
    def rotations(cls, sp: SpaceParams, q: Sequence[complex] | None = None) -> "ConjugationParams":
        """All coordinates in ``U2``; ``q`` defaults to all ones (plain conjugation)."""
        q = tuple(q) if q is not None else (1.0,) * sp.d
        return cls(sp, (), tuple(range(sp.d)), (), q)

    def p_at(self, j: int) -> complex:
        return self.p[self.U1.index(j)]

    def q_at(self, j: int) -> complex:
        return self.q[self.U2.index(j)]

    def omega_lft(self, j: int) -> LFT:
        if j in self.U1:
            return omega_p(self.p_at(j))
        return LFT(self.q_at(j), 0, 0, 1)

    def r_point(self) -> np.ndarray:
        """``p_j`` on U1 coordinates, 0 on U2."""
        r = np.zeros(self.sp.d, dtype=complex)
        for j, pj in zip(self.U1, self.p):
            r[j] = pj
        return r

    def theta_constant(self) -> float:
        out = 1.0
        for j, pj in zip(self.U1, self.p):
            # positive real power via exp/log; no branch issues
            out *= float(np.exp((1 + self.sp.ell[j] / 2) * np.log1p(-abs(pj) ** 2)))
        return out


def _theta_values(cp: ConjugationParams, z):
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape[:-1], cp.theta_constant(), dtype=complex)
    for j, pj in zip(cp.U1, cp.p):
        out = out * (1.0 - np.conj(pj) * z[..., j]) ** (-(cp.sp.ell[j] + 2))
    return out


def _omega_values(cp: ConjugationParams, z):
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    for j in range(cp.sp.d):
        phi = cp.omega_lft(j)
        out[..., j] = (phi.a * z[..., j] + phi.b) / (phi.c * z[..., j] + phi.d)
    return out


def theta_weight_eval(cp: ConjugationParams, z):
    z = check_in_polydisk(z, cp.sp.d)
    out = _theta_values(cp, z)
    return complex(out) if out.ndim == 0 else out


def omega_eval(cp: ConjugationParams, z):
    z = check_in_polydisk(z, cp.sp.d)
    return _omega_values(cp, z)


def theta_series(cp: ConjugationParams, trunc) -> PowerSeries:
    d = cp.sp.d
    caps = as_caps(trunc, d)
    arr = np.full((1,) * d, cp.theta_constant(), dtype=complex)
    for j in range(d):
        if j in cp.U1:
            v = neg_binomial_series(np.conj(cp.p_at(j)), cp.sp.ell[j] + 2, caps[j]).coeffs
        else:
            v = np.zeros(caps[j] + 1, dtype=complex)
            v[0] = 1.0
        shape = [1] * d
        shape[j] = caps[j] + 1
        arr = arr * v.reshape(shape)
    return PowerSeries(arr)


def _power_table(phi: LFT, n_pow: int, n_deg: int) -> np.ndarray:
    # row k holds the coefficients of phi(x)^k through degree n_deg
    base = lft_series(phi, n_deg).coeffs
    table = np.zeros((n_pow + 1, n_deg + 1), dtype=complex)
    table[0, 0] = 1.0
    for k in range(1, n_pow + 1):
        table[k] = np.convolve(table[k - 1], base)[: n_deg + 1]
    return table


def apply(cp: ConjugationParams, h: PowerSeries, trunc=None) -> PowerSeries:
    """``C_{p,q} h`` as a truncated series.

    Uses ``C h(z) = theta(z) * sum_alpha conj(h_alpha) omega(z)^alpha``.  Exact
    when ``U1`` is empty; on ``U1`` coordinates the composition with
    ``omega_j`` spreads degree, so coefficients are exact only through the
    output caps of the infinite expansion of the *given* polynomial.
    """
    d = cp.sp.d
    if h.dim != d:
        raise WcoError(f"series has dim {h.dim}, conjugation has d={d}")
    caps = h.caps if trunc is None else as_caps(trunc, d)
    t = np.conj(h.coeffs)
    for j in range(d):
        table = _power_table(cp.omega_lft(j), h.caps[j], caps[j])
        t = np.tensordot(t, table, axes=([0], [0]))
    composed = PowerSeries(t)
    return theta_series(cp, caps) * composed


def shell_norm(s: PowerSeries, sp: SpaceParams) -> float:
    """Norm of the outermost coefficient shell (any index at its cap).

    Used as an a-posteriori indicator of how much a truncation cut off.
    """
    w = norm_sq_array(s.caps, sp)
    mask = np.zeros(s.coeffs.shape, dtype=bool)
    for j in range(s.dim):
        idx = [slice(None)] * s.dim
        idx[j] = -1
        mask[tuple(idx)] = True
    return float(np.sqrt(np.sum(np.abs(s.coeffs[mask]) ** 2 * w[mask])))


def apply_with_tail(cp: ConjugationParams, h: PowerSeries, trunc=None):
    out = apply(cp, h, trunc)
    return out, shell_norm(out, cp.sp)


def kernel_image(cp: ConjugationParams, z):
    """``C K_z = theta(z) K_{conj(omega(z))}``; returns ``(theta(z), conj(omega(z)))``."""
    z = check_in_polydisk(z, cp.sp.d)
    return complex(_theta_values(cp, z)), np.conj(_omega_values(cp, z))


def kernel_image_series(cp: ConjugationParams, z, trunc) -> PowerSeries:
    scalar, point = kernel_image(cp, z)
    return scalar * kernel_coeffs(point, trunc, cp.sp)
