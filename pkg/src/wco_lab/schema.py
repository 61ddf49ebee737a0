"""JSON encodings of symbols, conjugations and LFT lists.

Indices in files are 1-based; everything in memory is 0-based.

symbol::

    {"d": 2, "ell": [0, 1],
     "f": {"c": {"re": 1, "im": 0}, "factors": [{"w": {...}, "m": 2, "var": 1}]},
     "g": [{"var": 1, "lft": {"a": {...}, "b": {...}, "c": {...}, "d": {...}}}, ...]}

conjugation::

    {"U1": [1], "U2": [2], "p": [{"re": .., "im": ..}], "q": [{"re": .., "im": ..}]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .bergman import SpaceParams
from .conjugation import ConjugationParams
from .errors import WcoError
from .moebius import LFT
from .symbols import Factor, MapSymbol, SymbolPair, WeightSymbol


class ConfigError(WcoError):
    pass


def load_json(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _get(obj, key, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise ConfigError(f"{where}: missing field '{key}'")
    return obj[key]


def complex_from_json(obj, where="value") -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    re = _get(obj, "re", where)
    im = obj.get("im", 0.0)
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
        raise ConfigError(f"{where}: 're' and 'im' must be numbers")
    return complex(re, im)


def complex_to_json(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _int(obj, where, lo=None, hi=None) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise ConfigError(f"{where}: expected an integer, got {obj!r}")
    if (lo is not None and obj < lo) or (hi is not None and obj > hi):
        raise ConfigError(f"{where}: {obj} outside [{lo}, {hi}]")
    return obj


def lft_from_json(obj, where="lft") -> LFT:
    vals = [complex_from_json(_get(obj, k, where), f"{where}.{k}") for k in "abcd"]
    try:
        return LFT(*vals)
    except WcoError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def lft_to_json(phi: LFT) -> dict:
    return {k: complex_to_json(getattr(phi, k)) for k in "abcd"}


def symbol_from_json(obj) -> SymbolPair:
    d = _int(_get(obj, "d", "symbol"), "symbol.d", lo=1)
    ell = _get(obj, "ell", "symbol")
    if not isinstance(ell, list) or len(ell) != d:
        raise ConfigError(f"symbol.ell: expected a list of {d} integers")
    ell = tuple(_int(x, f"symbol.ell[{i}]", lo=0) for i, x in enumerate(ell))
    sp = SpaceParams(d, ell)
    f = _get(obj, "f", "symbol")
    c = complex_from_json(_get(f, "c", "symbol.f"), "symbol.f.c")
    factors = []
    for i, fac in enumerate(f.get("factors", [])):
        where = f"symbol.f.factors[{i}]"
        w = complex_from_json(_get(fac, "w", where), f"{where}.w")
        m = _int(_get(fac, "m", where), f"{where}.m", lo=1)
        var = _int(_get(fac, "var", where), f"{where}.var", lo=1, hi=d)
        factors.append(Factor(w, m, var - 1))
    g = _get(obj, "g", "symbol")
    if not isinstance(g, list) or len(g) != d:
        raise ConfigError(f"symbol.g: expected a list of {d} coordinate maps")
    vars_, lfts = [], []
    for k, entry in enumerate(g):
        where = f"symbol.g[{k}]"
        vars_.append(_int(_get(entry, "var", where), f"{where}.var", lo=1, hi=d) - 1)
        lfts.append(lft_from_json(_get(entry, "lft", where), f"{where}.lft"))
    return SymbolPair(WeightSymbol(c, tuple(factors)), MapSymbol(tuple(vars_), tuple(lfts)), sp)


def symbol_to_json(sym: SymbolPair) -> dict:
    return {
        "d": sym.sp.d,
        "ell": list(sym.sp.ell),
        "f": {
            "c": complex_to_json(sym.f.c),
            "factors": [{"w": complex_to_json(f.w), "m": f.m, "var": f.var + 1} for f in sym.f.factors],
        },
        "g": [{"var": v + 1, "lft": lft_to_json(phi)} for v, phi in zip(sym.g.vars, sym.g.lfts)],
    }


def conjugation_from_json(obj, sp: SpaceParams) -> ConjugationParams:
    U1 = _get(obj, "U1", "conjugation")
    U2 = _get(obj, "U2", "conjugation")
    U1 = [_int(x, f"conjugation.U1[{i}]", lo=1, hi=sp.d) - 1 for i, x in enumerate(U1)]
    U2 = [_int(x, f"conjugation.U2[{i}]", lo=1, hi=sp.d) - 1 for i, x in enumerate(U2)]
    p = [complex_from_json(x, f"conjugation.p[{i}]") for i, x in enumerate(obj.get("p", []))]
    q = [complex_from_json(x, f"conjugation.q[{i}]") for i, x in enumerate(obj.get("q", []))]
    try:
        return ConjugationParams(sp, tuple(U1), tuple(U2), tuple(p), tuple(q))
    except WcoError as exc:
        raise ConfigError(f"conjugation: {exc}") from None


def conjugation_to_json(cp: ConjugationParams) -> dict:
    return {
        "U1": [j + 1 for j in cp.U1],
        "U2": [j + 1 for j in cp.U2],
        "p": [complex_to_json(x) for x in cp.p],
        "q": [complex_to_json(x) for x in cp.q],
    }
