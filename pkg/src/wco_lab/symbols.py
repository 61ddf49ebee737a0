"""Structured symbol pairs ``(f, g)`` of weighted composition operators.

``f`` is a constant times a product of kernel-type factors
``(1 - w z_var)^-m`` and ``g`` acts coordinatewise by linear fractional
maps, ``g_k(z) = phi_k(z_{v(k)})``.  Every normal form of the real symmetric,
unitary and complex symmetric classes lies in this family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bergman import SpaceParams, check_in_polydisk
from .conjugation import ConjugationParams
from .errors import ParameterError, WcoError
from .moebius import LFT, IDENTITY, boundary_excess, is_self_map
from .series import PowerSeries, as_caps, constant, lft_series, lift, mul, neg_binomial_series

__all__ = [
    "Factor",
    "WeightSymbol",
    "MapSymbol",
    "SymbolPair",
    "Diagnostics",
    "MobiusBranch",
    "RotationBranch",
    "eval_f",
    "eval_g",
    "validate",
    "series_of_f",
    "map_power_tables",
    "series_of_Wg_alpha",
    "identity_symbol",
    "real_symmetric_symbol",
    "unitary_symbol",
    "involution_symbol",
    "csym_symbol",
    "real_symmetric_conditions",
    "csym_coordinate_conditions",
    "positive_power",
    "real_symmetric_lft",
    "unitary_lft",
    "self_map_excess",
    "csym_weight_point",
]

CONDITION_SLACK = 1e-12
EQUATION_TOL = 1e-10


@dataclass(frozen=True)
class Factor:
    """``(1 - w z_var)^-m``."""

    w: complex
    m: int
    var: int

    def __post_init__(self):
        object.__setattr__(self, "w", complex(self.w))
        if int(self.m) != self.m or self.m < 1:
            raise WcoError(f"factor exponent must be a positive integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "var", int(self.var))


@dataclass(frozen=True)
class WeightSymbol:
    c: complex
    factors: tuple[Factor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True)
class MapSymbol:
    """Output coordinate k is ``lfts[k]`` applied to input variable ``vars[k]``."""

    vars: tuple[int, ...]
    lfts: tuple[LFT, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(int(v) for v in self.vars))
        object.__setattr__(self, "lfts", tuple(self.lfts))
        if len(self.vars) != len(self.lfts):
            raise WcoError("MapSymbol needs one variable index per LFT")

    @classmethod
    def coordinatewise(cls, lfts: Sequence[LFT]) -> "MapSymbol":
        return cls(tuple(range(len(lfts))), tuple(lfts))


@dataclass(frozen=True)
class SymbolPair:
    f: WeightSymbol
    g: MapSymbol
    sp: SpaceParams

    def __post_init__(self):
        d = self.sp.d
        if len(self.g.lfts) != d:
            raise WcoError(f"g has {len(self.g.lfts)} coordinates, space has d={d}")
        for v in self.g.vars:
            if not 0 <= v < d:
                raise WcoError(f"g variable index {v} out of range for d={d}")
        for fac in self.f.factors:
            if not 0 <= fac.var < d:
                raise WcoError(f"f factor variable {fac.var} out of range for d={d}")


@dataclass
class Diagnostics:
    ok: bool
    issues: list[str] = field(default_factory=list)
    margins: list[float] = field(default_factory=list)


def positive_power(x: float, e: float) -> float:
    """``x**e`` for ``x > 0`` through exp/log."""
    return float(np.exp(e * np.log(x)))


# -- evaluation -------------------------------------------------------------

def _f_values(sym: SymbolPair, z):
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape[:-1], sym.f.c, dtype=complex)
    for fac in sym.f.factors:
        out = out * (1.0 - fac.w * z[..., fac.var]) ** (-fac.m)
    return out


def _g_values(sym: SymbolPair, z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (sym.sp.d,), dtype=complex)
    for k, (v, phi) in enumerate(zip(sym.g.vars, sym.g.lfts)):
        x = z[..., v]
        out[..., k] = (phi.a * x + phi.b) / (phi.c * x + phi.d)
    return out


def eval_f(sym: SymbolPair, z):
    z = check_in_polydisk(z, sym.sp.d)
    out = _f_values(sym, z)
    return complex(out) if out.ndim == 0 else out


def eval_g(sym: SymbolPair, z):
    z = check_in_polydisk(z, sym.sp.d)
    return _g_values(sym, z)


def validate(sym: SymbolPair) -> Diagnostics:
    """Collect every reason the pair fails to define a map of the polydisk."""
    diag = Diagnostics(ok=True)
    for k, phi in enumerate(sym.g.lfts):
        ok, margin = is_self_map(phi)
        diag.margins.append(margin)
        if not ok:
            diag.issues.append(f"g[{k}] is not a self-map of the disk (margin {margin:.3e})")
    for i, fac in enumerate(sym.f.factors):
        if abs(fac.w) >= 1:
            diag.issues.append(f"f factor {i} has |w| = {abs(fac.w):.6g} >= 1")
    diag.ok = not diag.issues
    return diag


def self_map_excess(sym: SymbolPair) -> float:
    """Brute-force boundary check of g and analyticity check of f.

    Zero when every ``g_k`` maps the closed disk into the closed disk and
    every f factor is pole-free on the polydisk.
    """
    excess = max((boundary_excess(phi) for phi in sym.g.lfts), default=0.0)
    for fac in sym.f.factors:
        if abs(fac.w) >= 1:
            excess = float("inf")
    return excess


# -- series ------------------------------------------------------------------

def series_of_f(sym: SymbolPair, trunc) -> PowerSeries:
    d = sym.sp.d
    caps = as_caps(trunc, d)
    out = constant(sym.f.c, d, caps)
    for fac in sym.f.factors:
        s = neg_binomial_series(fac.w, fac.m, caps[fac.var])
        out = mul(out, lift(s, fac.var, d, caps))
    return out


def map_power_tables(sym: SymbolPair, trunc) -> list[np.ndarray]:
    """For each output coordinate k, rows ``n`` hold the coefficients of ``phi_k^n``.

    Row count follows the cap of coordinate k (the exponent range), column
    count the cap of the input variable ``v(k)``.
    """
    caps = as_caps(trunc, sym.sp.d)
    tables = []
    for k, (v, phi) in enumerate(zip(sym.g.vars, sym.g.lfts)):
        base = lft_series(phi, caps[v]).coeffs
        table = np.zeros((caps[k] + 1, caps[v] + 1), dtype=complex)
        table[0, 0] = 1.0
        for n in range(1, caps[k] + 1):
            table[n] = np.convolve(table[n - 1], base)[: caps[v] + 1]
        tables.append(table)
    return tables


def series_of_Wg_alpha(sym: SymbolPair, alpha: Sequence[int], trunc,
                       f_series: PowerSeries | None = None,
                       tables: list[np.ndarray] | None = None) -> PowerSeries:
    """Taylor expansion of ``W z^alpha = f(z) prod_k phi_k(z_{v(k)})^alpha_k``."""
    d = sym.sp.d
    caps = as_caps(trunc, d)
    if f_series is None:
        f_series = series_of_f(sym, caps)
    if tables is None:
        tables = map_power_tables(sym, caps)
    out = f_series
    for k, n in enumerate(alpha):
        if n == 0:
            continue
        out = mul(out, lift(PowerSeries(tables[k][n]), sym.g.vars[k], d, caps))
    return out


# -- constructors --------------------------------------------------------------

def identity_symbol(sp: SpaceParams, c=1.0) -> SymbolPair:
    return SymbolPair(WeightSymbol(c), MapSymbol.coordinatewise([IDENTITY] * sp.d), sp)


def real_symmetric_conditions(c, a, b) -> dict[str, float]:
    """Residuals of the real-symmetry conditions; each is <= 0 (or ~0) when met.

    ``her-cond-1``: c and every b_k real, ``a-in-disk``: |a_k| < 1,
    ``her-cond-2``: ``|a(b - |a|^2 + 1)| + |b| <= 1 - |a|^2``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    cond1 = max([abs(complex(c).imag)] + [abs(x.imag) for x in b])
    in_disk = float(np.max(np.abs(a))) - 1.0
    lhs = np.abs(a * (b - np.abs(a) ** 2 + 1)) + np.abs(b)
    cond2 = float(np.max(lhs - (1 - np.abs(a) ** 2)))
    return {"her-cond-1": cond1, "a-in-disk": in_disk, "her-cond-2": cond2}


def real_symmetric_lft(a, b) -> LFT:
    a = complex(a)
    return LFT(b - abs(a) ** 2, a, -a.conjugate(), 1.0)


def real_symmetric_symbol(c, a, b, sp: SpaceParams, strict: bool = True) -> SymbolPair:
    """``f = c K_a``, ``g_k(z) = a_k + b_k z_k / (1 - conj(a_k) z_k)``."""
    a = np.asarray(a, dtype=complex).reshape(sp.d)
    b = np.asarray(b, dtype=complex).reshape(sp.d)
    if strict:
        res = real_symmetric_conditions(c, a, b)
        if res["her-cond-1"] > EQUATION_TOL:
            raise ParameterError("c and b must be real", "her-cond-1", res["her-cond-1"])
        if res["a-in-disk"] >= 0:
            raise ParameterError("a must lie in the polydisk", "her-cond-1", res["a-in-disk"])
        if res["her-cond-2"] > CONDITION_SLACK:
            raise ParameterError("self-map inequality violated", "her-cond-2", res["her-cond-2"])
        c = complex(c).real
        b = b.real
    factors = tuple(Factor(np.conj(a[j]), sp.ell[j] + 2, j) for j in range(sp.d))
    lfts = [real_symmetric_lft(a[k], b[k]) for k in range(sp.d)]
    return SymbolPair(WeightSymbol(c, factors), MapSymbol.coordinatewise(lfts), sp)


def unitary_lft(a, theta) -> LFT:
    """``a (conj(a) theta - x) / (1 - a conj(theta) x)``."""
    a, theta = complex(a), complex(theta)
    return LFT(-a, a * a.conjugate() * theta, -a * theta.conjugate(), 1.0)


def unitary_symbol(c, a, theta, phi: Sequence[int], sp: SpaceParams, strict: bool = True) -> SymbolPair:
    """Normal form of a unitary weighted composition operator.

    ``phi`` is a permutation (0-based): ``g_k`` reads variable ``phi[k]`` and
    the k-th kernel factor of f sits on that variable.
    """
    d = sp.d
    a = np.asarray(a, dtype=complex).reshape(d)
    theta = np.asarray(theta, dtype=complex).reshape(d)
    phi = tuple(int(x) for x in phi)
    if strict:
        if abs(abs(complex(c)) - 1) > EQUATION_TOL:
            raise ParameterError(f"|c| must be 1, got {abs(c)}", "unimodular-c", abs(abs(c) - 1))
        bad = np.abs(np.abs(a) - 1)
        if np.any(bad > EQUATION_TOL):
            raise ParameterError("every a_k must be unimodular", "unimodular-a", float(bad.max()))
        if np.any(np.abs(theta) >= 1):
            raise ParameterError("theta must lie in the polydisk", "theta-in-disk",
                                 float(np.abs(theta).max()))
        if sorted(phi) != list(range(d)):
            raise ParameterError(f"{phi} is not a permutation", "permutation")
        mism = [k for k in range(d) if sp.ell[phi[k]] != sp.ell[k]]
        if mism:
            raise ParameterError(
                f"weights differ across the permutation at coordinates {mism}", "ell-compat"
            )
    const = complex(c)
    factors = []
    for j in range(d):
        const *= positive_power(1 - abs(theta[j]) ** 2, 1 + sp.ell[j] / 2)
        factors.append(Factor(a[j] * np.conj(theta[j]), sp.ell[j] + 2, phi[j]))
    lfts = tuple(unitary_lft(a[k], theta[k]) for k in range(d))
    return SymbolPair(WeightSymbol(const, tuple(factors)), MapSymbol(phi, lfts), sp)


def involution_symbol(theta, sp: SpaceParams) -> SymbolPair:
    """``f = K_theta / ||K_theta||`` and ``g_j = (theta_j - z_j)/(1 - conj(theta_j) z_j)``."""
    theta = check_in_polydisk(np.asarray(theta, dtype=complex).reshape(sp.d), sp.d, "theta")
    const = 1.0
    factors = []
    lfts = []
    for j in range(sp.d):
        t = complex(theta[j])
        const *= positive_power(1 - abs(t) ** 2, (sp.ell[j] + 2) / 2)
        factors.append(Factor(t.conjugate(), sp.ell[j] + 2, j))
        lfts.append(LFT(-1.0, t, -t.conjugate(), 1.0))
    return SymbolPair(WeightSymbol(const, tuple(factors)), MapSymbol.coordinatewise(lfts), sp)


@dataclass(frozen=True)
class MobiusBranch:
    """U1 coordinate: constant ``G`` when ``E == 0``, else ``G + E / (x + F)``.

    ``lft`` overrides the coefficients and admits affine maps, which satisfy
    the underlying functional equation but have no ``G + E/(x + F)`` form.
    """

    G: complex = 0.0
    E: complex = 0.0
    F: complex = 0.0
    lft: LFT | None = None

    def to_lft(self) -> LFT:
        if self.lft is not None:
            return self.lft
        G, E, F = complex(self.G), complex(self.E), complex(self.F)
        if E == 0:
            return LFT(0, G, 0, 1)
        return LFT(G, G * F + E, 1, F)


@dataclass(frozen=True)
class RotationBranch:
    """U2 coordinate: ``alpha + beta q x / (1 - alpha q x)``; constant when ``beta == 0``."""

    alpha: complex = 0.0
    beta: complex = 0.0

    def to_lft(self, q) -> LFT:
        al, be, q = complex(self.alpha), complex(self.beta), complex(q)
        if be == 0:
            return LFT(0, al, 0, 1)
        return LFT((be - al * al) * q, al, -al * q, 1)


def csym_coordinate_conditions(cp: ConjugationParams, k: int, phi: LFT) -> dict[str, float]:
    """Residuals of the complex-symmetry conditions for output coordinate k.

    Works on the LFT coefficients ``(A, B, C, D)`` directly, so it needs no
    branch parameters.  A residual is met when it is <= 0 (inequalities) or
    <= tol (equations).
    """
    A, B, C, D = phi.a, phi.b, phi.c, phi.d
    out = {}
    if k in cp.U1:
        if phi.is_degenerate():
            out["u1-constant-in-disk"] = abs(phi.constant_value()) - 1.0
        else:
            p = cp.p_at(k)
            pb, p2 = p.conjugate(), abs(p) ** 2
            rel = pb * B - p2 * D - p * C + p2 * A
            out["u1-p-relation"] = float(abs(rel) / np.linalg.norm(phi.vector))
            lhs = abs(B * D.conjugate() - A * C.conjugate()) + abs(A * D - B * C)
            out["u1-self-map"] = float((lhs - (abs(D) ** 2 - abs(C) ** 2)) / abs(D) ** 2) \
                if D != 0 else float("inf")
    else:
        if phi.is_degenerate():
            out["u2-constant-in-disk"] = abs(phi.constant_value()) - 1.0
        else:
            lhs = abs(B * D.conjugate() - A * C.conjugate()) + abs(A * D - B * C)
            out["u2-self-map"] = float((lhs - (abs(D) ** 2 - abs(C) ** 2)) / abs(D) ** 2)
    return out


def csym_weight_point(cp: ConjugationParams, lfts: Sequence[LFT]) -> np.ndarray:
    """``omega(g(r))``: the factor parameters ``w`` of ``f = c K_{conj(omega(g(r)))}``."""
    r = cp.r_point()
    out = np.empty(cp.sp.d, dtype=complex)
    for j, phi in enumerate(lfts):
        out[j] = cp.omega_lft(j)(phi(r[j]))
    return out


def csym_symbol(cp: ConjugationParams, branches: Sequence, c_tilde, strict: bool = True) -> SymbolPair:
    """Normal form of a ``C_{p,q}``-symmetric operator.

    ``branches[k]`` is a :class:`MobiusBranch` for ``k`` in U1 and a
    :class:`RotationBranch` for ``k`` in U2.
    """
    sp = cp.sp
    if len(branches) != sp.d:
        raise WcoError(f"need {sp.d} branches, got {len(branches)}")
    lfts = []
    for k, br in enumerate(branches):
        if k in cp.U1:
            if not isinstance(br, MobiusBranch):
                raise WcoError(f"coordinate {k} is in U1 and needs a MobiusBranch")
            lfts.append(br.to_lft())
        else:
            if not isinstance(br, RotationBranch):
                raise WcoError(f"coordinate {k} is in U2 and needs a RotationBranch")
            lfts.append(br.to_lft(cp.q_at(k)))
    if strict:
        for k, phi in enumerate(lfts):
            for name, res in csym_coordinate_conditions(cp, k, phi).items():
                limit = EQUATION_TOL if name == "u1-p-relation" else CONDITION_SLACK
                if name.endswith("constant-in-disk"):
                    limit = 0.0
                    bad = res >= limit
                else:
                    bad = res > limit
                if bad:
                    raise ParameterError(f"coordinate {k}: condition {name} fails (residual {res:.3e})",
                                         name, res)
    w = csym_weight_point(cp, lfts)
    factors = tuple(Factor(w[j], sp.ell[j] + 2, j) for j in range(sp.d))
    return SymbolPair(WeightSymbol(c_tilde, factors), MapSymbol.coordinatewise(lfts), sp)
