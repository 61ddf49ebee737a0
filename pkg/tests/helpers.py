"""Random feasible parameter draws shared by the test modules."""

import numpy as np

from wco_lab.bergman import SpaceParams
from wco_lab.conjugation import ConjugationParams
from wco_lab.moebius import LFT, is_self_map
from wco_lab.symbols import MobiusBranch, RotationBranch, real_symmetric_conditions


def disk(rng, radius=1.0, size=None):
    r = radius * np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


def unimodular(rng, size=None):
    return np.exp(2j * np.pi * rng.random(size))


def realsym_draw(rng, d):
    """Feasible (c, a, b): real c and b, |a| < 1 and the self-map inequality."""
    while True:
        c = rng.uniform(-3, 3)
        a = disk(rng, 0.8, d)
        b = rng.uniform(-1, 1, d) * (1 - np.abs(a) ** 2)
        res = real_symmetric_conditions(c, a, b)
        if res["her-cond-2"] < -1e-6 and abs(c) > 0.1:
            return c, a, b


def u1_lft(rng, p, tries=10_000):
    """Non-degenerate self-map satisfying the U1 relation for p, by rejection."""
    pb, p2 = np.conj(p), abs(p) ** 2
    N = np.array([[-pb, p2], [-p2, p]])
    Ninv = np.linalg.inv(N)
    for _ in range(tries):
        x, w = rng.normal(size=2) + 1j * rng.normal(size=2)
        y = rng.normal() + 1j * rng.normal()
        M = Ninv @ np.array([[x, y], [-y, w]])
        phi = LFT(M[0, 0], M[0, 1], M[1, 0], M[1, 1])
        if phi.is_degenerate() or abs(phi.d) < 1e-3:
            continue
        ok, margin = is_self_map(phi)
        if ok and margin > 1e-6:
            return phi
    raise RuntimeError("no feasible U1 map found")


def u1_branch(rng, p):
    """Non-constant U1 branch in ``G + E / (x + F)`` form."""
    while True:
        phi = u1_lft(rng, p)
        if abs(phi.c) > 1e-3:
            G, F = phi.a / phi.c, phi.d / phi.c
            return MobiusBranch(G, phi.b / phi.c - G * F, F)


def u1_branch_e_zero(rng):
    """U1 branch with E = 0: the constant G, |G| < 1."""
    return MobiusBranch(disk(rng, 0.9), 0.0, rng.normal() + 1j * rng.normal())


def u2_branch(rng, q, beta_zero=False, tries=10_000):
    for _ in range(tries):
        alpha = disk(rng, 0.9)
        beta = 0.0 if beta_zero else disk(rng, 1.0)
        phi = RotationBranch(alpha, beta).to_lft(q)
        if phi.is_degenerate():
            if abs(phi.constant_value()) < 0.99:
                return RotationBranch(alpha, beta)
            continue
        ok, margin = is_self_map(phi)
        if ok and margin > 1e-6:
            return RotationBranch(alpha, beta)
    raise RuntimeError("no feasible U2 branch found")


def conjugation_draw(rng, sp: SpaceParams, p_radius=0.6):
    """Random partition with at least one coordinate; p in the disk minus 0, q unimodular."""
    idx = rng.permutation(sp.d)
    k = int(rng.integers(0, sp.d + 1))
    U1, U2 = tuple(sorted(idx[:k].tolist())), tuple(sorted(idx[k:].tolist()))
    p = tuple(disk(rng, p_radius) + 0.05 for _ in U1)
    q = tuple(unimodular(rng) for _ in U2)
    return ConjugationParams(sp, U1, U2, p, q)
