"""Matrix sections of ``W_{f,g}`` and closed-form defect functionals.

Matrix sections use the orthonormal basis ``e_alpha = z^alpha / ||z^alpha||``
in :func:`~wco_lab.bergman.basis_enumerate` order, so
``M[beta, alpha] = coeff_beta(W z^alpha) * ||z^beta|| / ||z^alpha||``.

The pointwise defects evaluate the kernel identities that characterize each
symmetry class at sampled point pairs.  Every factor is a closed form, so
they carry no truncation error.  The identities only make sense for symbols
that map the polydisk into itself; a symbol that does not is reported
through a brute-force boundary excess instead of being silently accepted.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bergman import SpaceParams, basis_enumerate, kernel_values, norm_sq_array
from .conjugation import ConjugationParams, _omega_values, _theta_values
from .errors import WcoError
from .series import PowerSeries, as_caps
from .symbols import (
    SymbolPair,
    _f_values,
    _g_values,
    map_power_tables,
    self_map_excess,
    series_of_f,
    series_of_Wg_alpha,
)

__all__ = [
    "OperatorSection",
    "SamplePlan",
    "sample_pairs",
    "build_matrix",
    "apply_operator",
    "adjoint_kernel_check",
    "realsym_pointwise_defect",
    "unitary_pointwise_defect",
    "csym_pointwise_defect",
    "hermitian_defect",
    "unitary_section_residual",
    "norm_estimate",
    "worker_count",
]

DEFAULT_SAMPLES = 100
DEFAULT_RADIUS = 0.8
DEFAULT_SEED = 42


def worker_count() -> int:
    """Thread cap from ``WCO_LAB_THREADS`` (default 1)."""
    raw = os.environ.get("WCO_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True, eq=False)
class OperatorSection:
    sp: SpaceParams
    caps: tuple[int, ...]
    M: np.ndarray
    symbol: SymbolPair | None = None
    basis: list = field(default_factory=list)


@dataclass(frozen=True)
class SamplePlan:
    count: int = DEFAULT_SAMPLES
    radius: float = DEFAULT_RADIUS
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.count < 1:
            raise WcoError(f"sample count must be >= 1, got {self.count}")
        if not 0 < self.radius <= 0.9:
            raise WcoError(f"sample radius must be in (0, 0.9], got {self.radius}")

    def as_dict(self):
        return {"count": self.count, "radius": self.radius, "seed": self.seed}


def _disk_points(rng, shape, radius):
    r = radius * np.sqrt(rng.random(shape))
    return r * np.exp(2j * np.pi * rng.random(shape))


def sample_pairs(plan: SamplePlan, d: int):
    """Seeded point pairs ``(z, u)``, each of shape ``(count, d)``, uniform in the radius-rho polydisk."""
    rng = np.random.default_rng(plan.seed)
    z = _disk_points(rng, (plan.count, d), plan.radius)
    u = _disk_points(rng, (plan.count, d), plan.radius)
    return z, u


def _scaled_residual(lhs, rhs) -> float:
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return float(np.max(np.abs(lhs - rhs) / scale))


# -- matrix sections -----------------------------------------------------------

def build_matrix(sym: SymbolPair, trunc, workers: int | None = None) -> OperatorSection:
    sp = sym.sp
    caps = as_caps(trunc, sp.d)
    basis = basis_enumerate(caps, sp)
    norms = np.sqrt(norm_sq_array(caps, sp))
    flat_norms = norms.ravel()
    f_series = series_of_f(sym, caps)
    tables = map_power_tables(sym, caps)

    def column(i):
        alpha = basis[i]
        s = series_of_Wg_alpha(sym, alpha, caps, f_series, tables)
        return s.coeffs.ravel() * flat_norms / flat_norms[i]

    n = len(basis)
    workers = worker_count() if workers is None else workers
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            cols = list(ex.map(column, range(n)))
    else:
        cols = [column(i) for i in range(n)]
    M = np.stack(cols, axis=1)
    return OperatorSection(sp, caps, M, sym, basis)


def apply_operator(sym: SymbolPair, h: PowerSeries, trunc=None) -> PowerSeries:
    """Series of ``f * (h o g)`` truncated to ``trunc`` (default: the caps of h)."""
    sp = sym.sp
    if h.dim != sp.d:
        raise WcoError(f"series has dim {h.dim}, symbol has d={sp.d}")
    caps = h.caps if trunc is None else as_caps(trunc, sp.d)
    # powers up to the degrees present in h, expanded through the output caps
    work = tuple(max(a, b) for a, b in zip(caps, h.caps))
    f_series = series_of_f(sym, work)
    tables = map_power_tables(sym, work)
    acc = np.zeros(tuple(c + 1 for c in work), dtype=complex)
    for alpha in zip(*np.nonzero(h.coeffs)):
        s = series_of_Wg_alpha(sym, alpha, work, f_series, tables)
        acc += h.coeffs[alpha] * s.coeffs
    return PowerSeries(acc).truncate(caps)


def adjoint_kernel_check(sym: SymbolPair, z, trunc, section: OperatorSection | None = None) -> float:
    """Max deviation between ``M^H k_z`` and the ON coefficients of ``conj(f(z)) K_{g(z)}``.

    ``k_z`` holds the ON coefficients of ``K_z``; the deviation is the
    truncation tail of ``W e_alpha`` at ``z`` and shrinks as the caps grow.
    ``z`` may be one point or an array of points.
    """
    sp = sym.sp
    if section is None:
        section = build_matrix(sym, trunc)
    caps = section.caps
    norms = np.sqrt(norm_sq_array(caps, sp)).ravel()
    exps = np.array(section.basis)
    pts = np.atleast_2d(np.asarray(z, dtype=complex))
    worst = 0.0
    for pt in pts:
        mono = np.prod(pt[None, :] ** exps, axis=1)
        k = np.conj(mono) / norms
        lhs = section.M.conj().T @ k
        fz = complex(_f_values(sym, pt))
        gz = _g_values(sym, pt)
        rhs = np.conj(fz) * np.conj(np.prod(gz[None, :] ** exps, axis=1)) / norms
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


# -- pointwise defects ------------------------------------------------------------

def realsym_pointwise_defect(sym: SymbolPair, plan: SamplePlan = SamplePlan()) -> float:
    """``conj(f(z)) K_{g(z)}(u)`` against ``f(u) K_z(g(u))``."""
    z, u = sample_pairs(plan, sym.sp.d)
    ell = sym.sp.ell
    lhs = np.conj(_f_values(sym, z)) * kernel_values(_g_values(sym, z), u, ell)
    rhs = _f_values(sym, u) * kernel_values(z, _g_values(sym, u), ell)
    return max(_scaled_residual(lhs, rhs), self_map_excess(sym))


def unitary_pointwise_defect(sym: SymbolPair, plan: SamplePlan = SamplePlan()) -> float:
    """``conj(f(z)) f(u) K_{g(z)}(g(u))`` against ``K_z(u)``."""
    z, u = sample_pairs(plan, sym.sp.d)
    ell = sym.sp.ell
    lhs = np.conj(_f_values(sym, z)) * _f_values(sym, u) * kernel_values(
        _g_values(sym, z), _g_values(sym, u), ell
    )
    rhs = kernel_values(z, u, ell)
    return max(_scaled_residual(lhs, rhs), self_map_excess(sym))


def csym_pointwise_defect(sym: SymbolPair, cp: ConjugationParams, plan: SamplePlan = SamplePlan()) -> float:
    """The kernel identity behind ``C W* C K_z = W K_z``.

    With ``x = conj(omega(z))``: ``conj(theta(z)) theta(g(x)) f(x)
    K_{conj(omega(g(x)))}(u)`` against ``f(u) K_z(g(u))``.
    """
    if cp.sp != sym.sp:
        raise WcoError("symbol and conjugation live on different spaces")
    z, u = sample_pairs(plan, sym.sp.d)
    ell = sym.sp.ell
    x = np.conj(_omega_values(cp, z))
    gx = _g_values(sym, x)
    lhs = (np.conj(_theta_values(cp, z)) * _theta_values(cp, gx) * _f_values(sym, x)
           * kernel_values(np.conj(_omega_values(cp, gx)), u, ell))
    rhs = _f_values(sym, u) * kernel_values(z, _g_values(sym, u), ell)
    return max(_scaled_residual(lhs, rhs), self_map_excess(sym))


# -- section diagnostics ------------------------------------------------------------

def hermitian_defect(sec: OperatorSection) -> float:
    M = sec.M
    return float(np.linalg.norm(M - M.conj().T))


def unitary_section_residual(sec: OperatorSection, block=None) -> dict:
    """``||M^H M - I||_F`` on the full section and on a leading sub-block.

    Finite sections of a unitary are not unitary: column ``alpha`` of a
    unitary spreads its mass well past degree ``alpha``, so columns near the
    caps lose a fixed fraction and the raw residual does not shrink.  The
    sub-block keeps indices with every ``alpha_j <= block_j`` (default
    ``caps_j // 4``); for a fixed block its residual decays geometrically as
    the caps grow.
    """
    M = sec.M
    G = M.conj().T @ M
    n = G.shape[0]
    raw = float(np.linalg.norm(G - np.eye(n)))
    limits = [c // 4 for c in sec.caps] if block is None else as_caps(block, sec.sp.d)
    keep = np.array([all(a <= b for a, b in zip(alpha, limits)) for alpha in sec.basis])
    Gs = G[np.ix_(keep, keep)]
    sub = float(np.linalg.norm(Gs - np.eye(Gs.shape[0])))
    return {"raw": raw, "subblock": sub}


def norm_estimate(sec: OperatorSection, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Largest singular value of the section by power iteration on ``M^H M``."""
    M = sec.M
    A = M.conj().T @ M
    v = np.ones(A.shape[0], dtype=complex)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = A @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        new = float(np.real(np.vdot(v, w)))
        v = w / nw
        if abs(new - lam) <= tol * max(1.0, abs(new)):
            return float(np.sqrt(max(new, 0.0)))
        lam = new
    warnings.warn(f"power iteration did not converge in {max_iter} steps", RuntimeWarning)
    return float(np.sqrt(max(lam, 0.0)))
