"""Dense truncated power series in d complex variables.

Coefficients live in a d-dimensional complex array of shape
``tuple(c + 1 for c in caps)``; entry ``coeffs[alpha]`` is the coefficient of
``z**alpha``.  Every binary operation works on the componentwise minimum of
the operands' caps, and products are exact on the retained coefficients:
coefficients above the caps never feed back into kept ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import TruncationError, WcoError

__all__ = [
    "PowerSeries",
    "as_caps",
    "zeros",
    "constant",
    "monomial",
    "add",
    "scale",
    "mul",
    "neg_binomial_series",
    "lft_series",
    "pow",
    "lift",
    "eval",
]


def as_caps(trunc, d: int) -> tuple[int, ...]:
    """Normalize an int or sequence of ints into a length-d caps tuple."""
    if np.isscalar(trunc):
        caps = (int(trunc),) * d
    else:
        caps = tuple(int(c) for c in trunc)
    if len(caps) != d:
        raise TruncationError(f"truncation {caps} has length {len(caps)}, expected {d}")
    if any(c < 0 for c in caps):
        raise TruncationError(f"negative cap in truncation {caps}")
    return caps


@dataclass(frozen=True, eq=False)
class PowerSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=complex)
        if arr.ndim == 0:
            raise WcoError("a power series needs at least one variable")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def dim(self) -> int:
        return self.coeffs.ndim

    @property
    def caps(self) -> tuple[int, ...]:
        return tuple(n - 1 for n in self.coeffs.shape)

    def coeff(self, alpha: Sequence[int]) -> complex:
        alpha = tuple(alpha)
        if len(alpha) != self.dim or any(a < 0 or a > c for a, c in zip(alpha, self.caps)):
            return 0j
        return complex(self.coeffs[alpha])

    def truncate(self, trunc) -> "PowerSeries":
        caps = as_caps(trunc, self.dim)
        caps = tuple(min(a, b) for a, b in zip(caps, self.caps))
        return PowerSeries(self.coeffs[tuple(slice(0, c + 1) for c in caps)])

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            other = constant(other, self.dim, self.caps)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __call__(self, z):
        return eval(self, z)

    def __repr__(self):
        return f"PowerSeries(dim={self.dim}, caps={self.caps})"


def zeros(d: int, trunc) -> PowerSeries:
    caps = as_caps(trunc, d)
    return PowerSeries(np.zeros(tuple(c + 1 for c in caps), dtype=complex))


def constant(value, d: int, trunc) -> PowerSeries:
    caps = as_caps(trunc, d)
    arr = np.zeros(tuple(c + 1 for c in caps), dtype=complex)
    arr[(0,) * d] = value
    return PowerSeries(arr)


def monomial(d: int, alpha: Sequence[int], trunc) -> PowerSeries:
    caps = as_caps(trunc, d)
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != d:
        raise TruncationError(f"multi-index {alpha} has length {len(alpha)}, expected {d}")
    bad = [j for j, (a, c) in enumerate(zip(alpha, caps)) if a < 0 or a > c]
    if bad:
        raise TruncationError(
            f"multi-index {alpha} exceeds caps {caps} at positions {bad}"
        )
    arr = np.zeros(tuple(c + 1 for c in caps), dtype=complex)
    arr[alpha] = 1.0
    return PowerSeries(arr)


def _common(s1: PowerSeries, s2: PowerSeries):
    if s1.dim != s2.dim:
        raise WcoError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
    caps = tuple(min(a, b) for a, b in zip(s1.caps, s2.caps))
    sl = tuple(slice(0, c + 1) for c in caps)
    return s1.coeffs[sl], s2.coeffs[sl], caps


def add(s1: PowerSeries, s2: PowerSeries) -> PowerSeries:
    a, b, _ = _common(s1, s2)
    return PowerSeries(a + b)


def scale(s: PowerSeries, lam) -> PowerSeries:
    return PowerSeries(complex(lam) * s.coeffs)


def _conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Truncated Cauchy product of two equally shaped arrays, recursing on the
    # leading axis; zero slices are skipped so lifted factors stay cheap.
    n = a.shape[0]
    if a.ndim == 1:
        return np.convolve(a, b)[:n]
    out = np.zeros(a.shape, dtype=complex)
    nz_a = [i for i in range(n) if a[i].any()]
    nz_b = [j for j in range(n) if b[j].any()]
    for i in nz_a:
        for j in nz_b:
            if i + j >= n:
                break
            out[i + j] += _conv(a[i], b[j])
    return out


def mul(s1: PowerSeries, s2: PowerSeries) -> PowerSeries:
    a, b, _ = _common(s1, s2)
    return PowerSeries(_conv(a, b))


def neg_binomial_series(w, m: int, N: int) -> PowerSeries:
    """Coefficients of ``(1 - w x)**(-m)`` through degree N.

    Uses the ratio ``c[n+1] / c[n] = w (n + m) / (n + 1)`` so no factorials
    are formed.
    """
    if int(m) != m or m < 1:
        raise WcoError(f"exponent m must be a positive integer, got {m}")
    if N < 0:
        raise TruncationError(f"negative degree cap {N}")
    w = complex(w)
    out = np.empty(N + 1, dtype=complex)
    out[0] = 1.0
    for n in range(N):
        out[n + 1] = out[n] * w * (n + m) / (n + 1)
    return PowerSeries(out)


def lft_series(phi, N: int) -> PowerSeries:
    """Taylor coefficients of ``(a x + b) / (c x + d)`` about 0 through degree N."""
    a, b, c, d = (complex(v) for v in (phi.a, phi.b, phi.c, phi.d))
    if d == 0:
        raise WcoError("linear fractional map has a pole at the origin (d = 0)")
    if N < 0:
        raise TruncationError(f"negative degree cap {N}")
    # 1/(c x + d) = (1/d) sum (-c/d)^n x^n
    r = -c / d
    geo = np.empty(N + 1, dtype=complex)
    geo[0] = 1.0 / d
    for n in range(N):
        geo[n + 1] = geo[n] * r
    out = b * geo
    out[1:] += a * geo[:-1]
    return PowerSeries(out)


def pow(s: PowerSeries, k: int) -> PowerSeries:  # noqa: A001
    if int(k) != k or k < 0:
        raise WcoError(f"power must be a non-negative integer, got {k}")
    result = constant(1.0, s.dim, s.caps)
    base = s
    k = int(k)
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def lift(s: PowerSeries, var: int, d: int, trunc) -> PowerSeries:
    """Embed a one-variable series as a d-variable series in coordinate ``var``."""
    if s.dim != 1:
        raise WcoError(f"lift expects a one-variable series, got dim {s.dim}")
    if not 0 <= var < d:
        raise TruncationError(f"variable index {var} out of range for d={d}")
    caps = as_caps(trunc, d)
    arr = np.zeros(tuple(c + 1 for c in caps), dtype=complex)
    n = min(caps[var], s.caps[0]) + 1
    idx = [0] * d
    idx[var] = slice(0, n)
    arr[tuple(idx)] = s.coeffs[:n]
    return PowerSeries(arr)


def eval(s: PowerSeries, z) -> complex:  # noqa: A001
    """Evaluate the truncated polynomial at a point of C^d by nested Horner."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (s.dim,):
        raise WcoError(f"point of shape {z.shape} does not match dim {s.dim}")
    acc = s.coeffs
    for j in reversed(range(s.dim)):
        x = z[j]
        val = acc[..., -1]
        for k in range(acc.shape[-1] - 2, -1, -1):
            val = val * x + acc[..., k]
        acc = val
    return complex(acc)
