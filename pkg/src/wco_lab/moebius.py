"""Linear fractional maps of the plane and the disk maps built from them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError

__all__ = [
    "LFT",
    "IDENTITY",
    "evaluate",
    "derivative_at",
    "compose",
    "inverse",
    "is_self_map",
    "projectively_equal",
    "same_map",
    "omega_p",
    "boundary_excess",
]

SELF_MAP_SLACK = 1e-12


@dataclass(frozen=True)
class LFT:
    """``x -> (a x + b) / (c x + d)``.

    Stored unnormalized.  A degenerate quadruple (``ad - bc == 0``) is
    accepted and represents a constant map; the symmetric normal forms
    contain such constants, so rejecting them here would be wrong.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.c == 0 and self.d == 0:
            raise ParameterError("c and d cannot both vanish", condition="lft")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def is_degenerate(self, tol: float = 1e-14) -> bool:
        return abs(self.det) <= tol * max(1.0, float(np.sum(np.abs(self.vector)) ** 2))

    def constant_value(self) -> complex:
        """Value of a degenerate (constant) map."""
        if self.d != 0:
            return self.b / self.d
        return self.a / self.c

    def __call__(self, x):
        return evaluate(self, x)


IDENTITY = LFT(1, 0, 0, 1)


def evaluate(phi: LFT, x):
    x = np.asarray(x, dtype=complex)
    den = phi.c * x + phi.d
    if np.any(den == 0):
        raise DomainError(f"pole of {phi} hit")
    out = (phi.a * x + phi.b) / den
    return complex(out) if out.ndim == 0 else out


def derivative_at(phi: LFT, x):
    x = np.asarray(x, dtype=complex)
    den = phi.c * x + phi.d
    if np.any(den == 0):
        raise DomainError(f"pole of {phi} hit")
    out = phi.det / den**2
    return complex(out) if out.ndim == 0 else out


def compose(phi: LFT, psi: LFT) -> LFT:
    """``phi o psi`` as a matrix product."""
    m = phi.matrix @ psi.matrix
    return LFT(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def inverse(phi: LFT) -> LFT:
    if phi.is_degenerate():
        raise ParameterError("a constant map has no inverse", condition="lft")
    return LFT(phi.d, -phi.b, -phi.c, phi.a)


def is_self_map(phi: LFT) -> tuple[bool, float]:
    """Exact criterion for ``phi`` to map the open unit disk into itself.

    Returns ``(verdict, margin)`` with
    ``margin = (|d|^2 - |c|^2) - (|b conj(d) - a conj(c)| + |ad - bc|)``.
    Automorphisms sit at margin 0, so the verdict tolerates ``-1e-12``.
    """
    a, b, c, d = phi.a, phi.b, phi.c, phi.d
    margin = (abs(d) ** 2 - abs(c) ** 2) - (
        abs(b * d.conjugate() - a * c.conjugate()) + abs(a * d - b * c)
    )
    ok = margin >= -SELF_MAP_SLACK
    if ok and phi.is_degenerate():
        # constant of modulus one passes the inequality but leaves the open disk
        ok = abs(phi.constant_value()) < 1.0
    return bool(ok), float(margin)


def projectively_equal(phi: LFT, psi: LFT, tol: float = 1e-10) -> bool:
    """Rank-one test on the coefficient vectors."""
    u, v = phi.vector, psi.vector
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    wedge = np.outer(u, v) - np.outer(v, u)
    return bool(np.max(np.abs(wedge)) <= tol)


def same_map(phi: LFT, psi: LFT, tol: float = 1e-10) -> bool:
    """Equality as functions; constants compare by value."""
    dp, dq = phi.is_degenerate(), psi.is_degenerate()
    if dp and dq:
        return abs(phi.constant_value() - psi.constant_value()) <= tol
    if dp or dq:
        return False
    return projectively_equal(phi, psi, tol)


def map_distance(phi: LFT, psi: LFT) -> float:
    """Size of the mismatch behind ``same_map`` (0 for identical maps)."""
    dp, dq = phi.is_degenerate(), psi.is_degenerate()
    if dp and dq:
        return float(abs(phi.constant_value() - psi.constant_value()))
    if dp or dq:
        return float("inf")
    u = phi.vector / np.linalg.norm(phi.vector)
    v = psi.vector / np.linalg.norm(psi.vector)
    return float(np.max(np.abs(np.outer(u, v) - np.outer(v, u))))


def omega_p(p) -> LFT:
    """The involutive automorphism ``(conj(p)/p) (p - z) / (1 - conj(p) z)``."""
    p = complex(p)
    if p == 0 or abs(p) >= 1:
        raise ParameterError(f"omega_p needs 0 < |p| < 1, got p={p}", condition="p-range")
    pb = p.conjugate()
    return LFT(-pb / p, pb, -pb, 1.0)


def boundary_excess(phi: LFT, samples: int = 4096) -> float:
    """Brute-force self-map check: how far ``phi`` pushes the unit circle past 1.

    Returns ``max |phi(e^{it})| - 1`` over equispaced samples (clipped at 0),
    or ``inf`` when the pole lies in the closed disk.  Independent of the
    algebraic criterion in :func:`is_self_map`.
    """
    if phi.is_degenerate():
        return max(0.0, abs(phi.constant_value()) - 1.0)
    if abs(phi.c) >= abs(phi.d):
        return float("inf")
    t = 2 * np.pi * np.arange(samples) / samples
    vals = np.abs(evaluate(phi, np.exp(1j * t)))
    return max(0.0, float(vals.max()) - 1.0)
