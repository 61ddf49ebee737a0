"""Weighted Bergman spaces of the polydisk.

The measure on each factor is ``(1 + l)(1 - |z|^2)^l dA`` with ``dA`` the
area measure normalized to total mass one, so monomials are orthogonal and

    ||z^alpha||^2 = prod_j alpha_j! (l_j + 1)! / (alpha_j + l_j + 1)!

The reproducing kernel is ``K_z(u) = prod_j (1 - u_j conj(z_j))^-(l_j + 2)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, UnderResolvedError, WcoError
from .series import PowerSeries, as_caps, lift, mul, neg_binomial_series, constant

__all__ = [
    "SpaceParams",
    "QuadratureGrid",
    "monomial_norm_sq",
    "norm_sq_array",
    "basis_enumerate",
    "kernel_eval",
    "kernel_values",
    "kernel_coeffs",
    "inner_product",
    "make_grid",
    "quad_inner_product",
    "check_in_polydisk",
]


@dataclass(frozen=True)
class SpaceParams:
    d: int
    ell: tuple[int, ...]

    def __post_init__(self):
        ell = tuple(int(x) for x in self.ell)
        object.__setattr__(self, "ell", ell)
        if self.d < 1:
            raise WcoError(f"dimension must be >= 1, got {self.d}")
        if len(ell) != self.d:
            raise WcoError(f"weight vector {ell} does not have length d={self.d}")
        if any(x < 0 for x in ell):
            raise WcoError(f"weights must be non-negative, got {ell}")

    @classmethod
    def of(cls, ell: Sequence[int]) -> "SpaceParams":
        return cls(len(ell), tuple(ell))


def _norm_sq_1d(n: int, ell: int) -> float:
    # n! (l+1)! / (n+l+1)! = prod_{k=1}^{l+1} k / (n + k)
    out = 1.0
    for k in range(1, ell + 2):
        out *= k / (n + k)
    return out


def monomial_norm_sq(alpha: Sequence[int], sp: SpaceParams) -> float:
    if len(alpha) != sp.d:
        raise WcoError(f"multi-index {tuple(alpha)} does not have length d={sp.d}")
    out = 1.0
    for n, ell in zip(alpha, sp.ell):
        out *= _norm_sq_1d(int(n), ell)
    return out


def norm_sq_array(trunc, sp: SpaceParams) -> np.ndarray:
    """``||z^alpha||^2`` laid out like a series coefficient array."""
    caps = as_caps(trunc, sp.d)
    out = np.ones(tuple(c + 1 for c in caps))
    for j, (c, ell) in enumerate(zip(caps, sp.ell)):
        v = np.array([_norm_sq_1d(n, ell) for n in range(c + 1)])
        shape = [1] * sp.d
        shape[j] = c + 1
        out = out * v.reshape(shape)
    return out


def basis_enumerate(trunc, sp: SpaceParams) -> list[tuple[int, ...]]:
    """All multi-indices within the caps, in lexicographic order.

    This order is the row/column convention of every matrix section.
    """
    caps = as_caps(trunc, sp.d)
    return list(itertools.product(*(range(c + 1) for c in caps)))


def check_in_polydisk(z, d: int, name: str = "z") -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.shape[-1:] != (d,):
        raise WcoError(f"{name} has shape {z.shape}, expected trailing dimension {d}")
    if np.any(np.abs(z) >= 1):
        raise DomainError(f"{name} is not inside the open polydisk: {z}")
    return z


def kernel_values(z, u, ell: Sequence[int]):
    """Closed-form ``K_z(u)`` without domain checks; broadcasts over leading axes."""
    z = np.asarray(z, dtype=complex)
    u = np.asarray(u, dtype=complex)
    m = np.asarray(ell) + 2
    return np.prod((1.0 - u * np.conj(z)) ** (-m), axis=-1)


def kernel_eval(z, u, sp: SpaceParams) -> complex:
    z = check_in_polydisk(z, sp.d, "z")
    u = check_in_polydisk(u, sp.d, "u")
    return complex(kernel_values(z, u, sp.ell))


def kernel_coeffs(z, trunc, sp: SpaceParams) -> PowerSeries:
    """Truncated Taylor expansion of ``u -> K_z(u)``."""
    z = check_in_polydisk(z, sp.d, "z")
    caps = as_caps(trunc, sp.d)
    out = constant(1.0, sp.d, caps)
    for j in range(sp.d):
        factor = neg_binomial_series(np.conj(z[j]), sp.ell[j] + 2, caps[j])
        out = mul(out, lift(factor, j, sp.d, caps))
    return out


def inner_product(s1: PowerSeries, s2: PowerSeries, sp: SpaceParams) -> complex:
    if s1.dim != s2.dim or s1.dim != sp.d:
        raise WcoError(f"dimension mismatch: {s1.dim}, {s2.dim}, space d={sp.d}")
    caps = tuple(min(a, b) for a, b in zip(s1.caps, s2.caps))
    sl = tuple(slice(0, c + 1) for c in caps)
    w = norm_sq_array(caps, sp)
    return complex(np.sum(s1.coeffs[sl] * np.conj(s2.coeffs[sl]) * w))


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Per-variable tensor grid: Gauss-Legendre in ``t = r^2`` times uniform angles.

    ``radial_weights[j]`` already include the factor ``(1 + l_j)(1 - t)^l_j``,
    so each sums to one.
    """

    radial_nodes: tuple[np.ndarray, ...]
    radial_weights: tuple[np.ndarray, ...]
    angular_count: tuple[int, ...]
    sp: SpaceParams


def make_grid(sp: SpaceParams, radial: int = 32, angular: int = 64) -> QuadratureGrid:
    x, w = np.polynomial.legendre.leggauss(radial)
    t = 0.5 * (x + 1.0)
    w = 0.5 * w
    nodes, weights = [], []
    for ell in sp.ell:
        nodes.append(t)
        weights.append(w * (1 + ell) * (1.0 - t) ** ell)
    return QuadratureGrid(tuple(nodes), tuple(weights), (angular,) * sp.d, sp)


def _gram_1d(t, wr, m, n1, n2):
    # G[a, b] = sum over nodes of w * z^a * conj(z)^b
    r = np.sqrt(t)
    theta = 2 * np.pi * np.arange(m) / m
    z = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    w = (wr[:, None] * np.full(m, 1.0 / m)[None, :]).ravel()
    v1 = z[:, None] ** np.arange(n1 + 1)[None, :]
    v2 = z[:, None] ** np.arange(n2 + 1)[None, :]
    return (v1 * w[:, None]).T @ np.conj(v2)


def quad_inner_product(s1: PowerSeries, s2: PowerSeries, sp: SpaceParams, grid: QuadratureGrid) -> complex:
    """Inner product by numerical integration over the polydisk.

    An independent check on :func:`inner_product`: it never uses the closed
    form of the monomial norms.
    """
    if s1.dim != s2.dim or s1.dim != sp.d:
        raise WcoError(f"dimension mismatch: {s1.dim}, {s2.dim}, space d={sp.d}")
    a, b = s1.coeffs, s2.coeffs
    for j in range(sp.d):
        n1, n2 = a.shape[j] - 1, b.shape[j] - 1
        top = max(n1, n2)
        if grid.angular_count[j] < 2 * top + 1:
            raise UnderResolvedError(
                f"variable {j}: {grid.angular_count[j]} angular nodes cannot resolve degree {top}"
                f" (need >= {2 * top + 1})"
            )
        if 2 * len(grid.radial_nodes[j]) - 1 < top + sp.ell[j]:
            raise UnderResolvedError(
                f"variable {j}: {len(grid.radial_nodes[j])} radial nodes cannot integrate"
                f" degree {top + sp.ell[j]} exactly"
            )
    grams = [
        _gram_1d(grid.radial_nodes[j], grid.radial_weights[j], grid.angular_count[j],
                 a.shape[j] - 1, b.shape[j] - 1)
        for j in range(sp.d)
    ]
    # sum_{alpha, beta} a_alpha conj(b_beta) prod_j G_j[alpha_j, beta_j]
    t = a
    for j in range(sp.d):
        # axis 0 is always the next alpha_j; its beta_j lands at the end
        t = np.tensordot(t, grams[j], axes=([0], [0]))
    return complex(np.sum(t * np.conj(b)))
