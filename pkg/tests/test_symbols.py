import numpy as np
import pytest

from wco_lab.bergman import SpaceParams, kernel_eval
from wco_lab.conjugation import ConjugationParams
from wco_lab.engine import csym_pointwise_defect, realsym_pointwise_defect
from wco_lab.errors import ParameterError
from wco_lab.moebius import LFT, evaluate, is_self_map, omega_p
from wco_lab.series import eval as series_eval
from wco_lab.symbols import (
    Factor,
    MapSymbol,
    MobiusBranch,
    RotationBranch,
    SymbolPair,
    WeightSymbol,
    csym_symbol,
    eval_f,
    eval_g,
    identity_symbol,
    involution_symbol,
    real_symmetric_symbol,
    series_of_f,
    series_of_Wg_alpha,
    unitary_symbol,
    validate,
)

from helpers import disk, realsym_draw, u1_branch, u2_branch, unimodular

SP1 = SpaceParams.of((0,))


def one_var(phi, c=1.0, factors=()):
    return SymbolPair(WeightSymbol(c, factors), MapSymbol.coordinatewise([phi]), SP1)


def test_identity_symbol_evaluates(rng):
    sp = SpaceParams.of((0, 1))
    sym = identity_symbol(sp)
    z = disk(rng, 0.9, 2)
    assert eval_f(sym, z) == 1
    assert np.allclose(eval_g(sym, z), z)


def test_unitary_symbol_at_zero(rng):
    sp = SpaceParams.of((1, 1))
    theta = disk(rng, 0.8, 2)
    sym = unitary_symbol(1j, unimodular(rng, 2), theta, (1, 0), sp)
    assert np.allclose(eval_g(sym, [0, 0]), theta)


def test_validate():
    assert not validate(one_var(LFT(2, 0, 0, 1))).ok
    diag = validate(one_var(omega_p(0.4 - 0.2j)))
    assert diag.ok and abs(diag.margins[0]) < 1e-12
    assert not validate(one_var(LFT(1, 0, 0, 1), factors=(Factor(1.0, 2, 0),))).ok


def test_series_examples():
    s = series_of_Wg_alpha(identity_symbol(SP1), (2,), 5)
    assert np.allclose(s.coeffs, [0, 0, 1, 0, 0, 0])
    s = series_of_Wg_alpha(one_var(LFT(0.5, 0, 0, 1)), (3,), 5)
    assert np.allclose(s.coeffs, [0, 0, 0, 0.125, 0, 0])
    f = series_of_f(real_symmetric_symbol(1.0, [0.0], [0.5], SP1), 4)
    assert np.allclose(f.coeffs, [1, 0, 0, 0, 0])


def test_series_match_closed_forms(rng):
    sp = SpaceParams.of((0, 2))
    c, a, b = realsym_draw(rng, 2)
    sym = real_symmetric_symbol(c, a, b, sp)
    caps = 60
    alpha = (2, 1)
    s = series_of_Wg_alpha(sym, alpha, caps)
    for _ in range(5):
        z = disk(rng, 0.7, 2)
        g = eval_g(sym, z)
        expected = eval_f(sym, z) * g[0] ** 2 * g[1]
        assert abs(series_eval(s, z) - expected) < 1e-9 * max(1, abs(expected))


def test_real_symmetric_examples():
    sym = real_symmetric_symbol(2.0, [0.0], [0.5], SP1)
    assert eval_f(sym, [0.3]) == pytest.approx(2)
    assert eval_g(sym, [0.3])[0] == pytest.approx(0.15)
    sym = real_symmetric_symbol(3.0, [0.0], [1.0], SP1)
    assert eval_g(sym, [0.3 + 0.1j])[0] == pytest.approx(0.3 + 0.1j)
    with pytest.raises(ParameterError) as e:
        real_symmetric_symbol(1.0, [0.5], [2.0], SP1)
    assert e.value.condition == "her-cond-2"


def test_unitary_examples(rng):
    sp = SpaceParams.of((0, 0))
    sym = unitary_symbol(1, [1, 1], [0, 0], (0, 1), sp)
    z = disk(rng, 0.9, 2)
    assert eval_f(sym, z) == pytest.approx(1)
    assert np.allclose(eval_g(sym, z), -z)
    sym = unitary_symbol(1, [1], [0.3], (0,), SP1)
    x = 0.4 - 0.5j
    assert eval_g(sym, [x])[0] == pytest.approx((0.3 - x) / (1 - 0.3 * x))
    ok, margin = is_self_map(sym.g.lfts[0])
    assert ok and abs(margin) < 1e-12


@pytest.mark.parametrize(
    "kwargs, condition",
    [
        (dict(c=0.9), "unimodular-c"),
        (dict(a=[1.1, 1]), "unimodular-a"),
        (dict(theta=[1.0, 0]), "theta-in-disk"),
        (dict(phi=(0, 0)), "permutation"),
        (dict(phi=(1, 0)), "ell-compat"),
    ],
)
def test_unitary_rejections(kwargs, condition):
    args = dict(c=1, a=[1, 1], theta=[0.2, 0.1j], phi=(0, 1), sp=SpaceParams.of((0, 1)))
    args.update(kwargs)
    with pytest.raises(ParameterError) as e:
        unitary_symbol(**args)
    assert e.value.condition == condition


def test_involution_matches_unitary_with_unit_a(rng):
    sp = SpaceParams.of((1, 2))
    theta = disk(rng, 0.8, 2)
    inv = involution_symbol(theta, sp)
    uni = unitary_symbol(1, [1, 1], theta, (0, 1), sp)
    z = disk(rng, 0.9, (20, 2))
    assert np.allclose(eval_f(inv, z), eval_f(uni, z), rtol=1e-13)
    assert np.allclose(eval_g(inv, z), eval_g(uni, z), rtol=1e-13)


def test_involution_examples(rng):
    sp = SpaceParams.of((0, 2))
    sym = involution_symbol([0, 0], sp)
    z = disk(rng, 0.9, 2)
    assert eval_f(sym, z) == pytest.approx(1) and np.allclose(eval_g(sym, z), -z)
    theta = disk(rng, 0.8, 2)
    sym = involution_symbol(theta, sp)
    # f = K_theta / ||K_theta||, so f(theta) = ||K_theta|| = sqrt(K_theta(theta))
    assert eval_f(sym, theta) == pytest.approx(np.sqrt(kernel_eval(theta, theta, sp).real))
    assert np.allclose(eval_g(sym, eval_g(sym, z)), z, atol=1e-13)


def test_csym_examples():
    cp = ConjugationParams.rotations(SP1)
    sym = csym_symbol(cp, [RotationBranch(0.3, 0.0)], 1.0)
    assert eval_g(sym, [0.7j])[0] == pytest.approx(0.3)
    assert csym_pointwise_defect(sym, cp) < 1e-12
    sym = csym_symbol(cp, [RotationBranch(0.0, 0.5)], 2.0)
    assert eval_f(sym, [0.4j]) == pytest.approx(2.0)
    assert eval_g(sym, [0.4j])[0] == pytest.approx(0.2j)
    cp = ConjugationParams(SP1, (0,), (), (0.5 + 0.1j,), ())
    sym = csym_symbol(cp, [MobiusBranch(0.2, 0.0)], 1.5)
    w = np.conj(evaluate(omega_p(0.5 + 0.1j), 0.2))
    assert eval_f(sym, [0.3]) == pytest.approx(1.5 * (1 - 0.3 * np.conj(w)) ** -2)
    assert csym_pointwise_defect(sym, cp) < 1e-12


def test_csym_rejects_relation_violation(rng):
    cp = ConjugationParams(SP1, (0,), (), (0.4j,), ())
    br = u1_branch(rng, 0.4j)
    bad = MobiusBranch(br.G + 0.05, br.E, br.F)
    with pytest.raises(ParameterError) as e:
        csym_symbol(cp, [bad], 1.0)
    assert e.value.condition in {"u1-p-relation", "u1-self-map"}


def test_constructors_pass_validate(rng):
    sp = SpaceParams.of((1, 1))
    c, a, b = realsym_draw(rng, 2)
    cp = ConjugationParams(sp, (0,), (1,), (0.3,), (1j,))
    syms = [
        real_symmetric_symbol(c, a, b, sp),
        unitary_symbol(unimodular(rng), unimodular(rng, 2), disk(rng, 0.8, 2), (1, 0), sp),
        involution_symbol(disk(rng, 0.8, 2), sp),
        csym_symbol(cp, [u1_branch(rng, 0.3), u2_branch(rng, 1j)], 1.0),
    ]
    for sym in syms:
        diag = validate(sym)
        assert diag.ok and min(diag.margins) >= -1e-12


def test_scalar_invariance(rng):
    sp = SpaceParams.of((0, 2))
    c, a, b = realsym_draw(rng, 2)
    for s in (-2.5, 0.3, 7.0):
        assert realsym_pointwise_defect(real_symmetric_symbol(s * c, a, b, sp)) < 1e-10
    cp = ConjugationParams(sp, (1,), (0,), (0.2 - 0.3j,), (unimodular(rng),))
    branches = [u2_branch(rng, cp.q[0]), u1_branch(rng, cp.p[0])]
    for ct in (1.0, 1j, -0.3 + 2j, unimodular(rng)):
        assert csym_pointwise_defect(csym_symbol(cp, branches, ct), cp) < 1e-10
