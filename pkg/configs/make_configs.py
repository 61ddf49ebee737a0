"""Regenerate the sample configs in this directory."""

import json
from pathlib import Path

from wco_lab.bergman import SpaceParams
from wco_lab.classify import realsym_to_conjugation
from wco_lab.moebius import LFT, omega_p
from wco_lab.schema import conjugation_to_json, lft_to_json, symbol_to_json
from wco_lab.symbols import identity_symbol, involution_symbol, real_symmetric_symbol

HERE = Path(__file__).parent


def dump(name, obj):
    (HERE / f"{name}.json").write_text(json.dumps(obj, indent=2) + "\n")


sp = SpaceParams.of((0, 1))
c, a, b = 2.0, (0.2, 0.1j), (0.3, -0.2)
good = symbol_to_json(real_symmetric_symbol(c, a, b, sp))
dump("realsym", good)
good["f"]["c"] = {"re": 0.0, "im": 1.0}
dump("realsym_c_i", good)
cp, _ = realsym_to_conjugation(c, a, b, sp)
dump("realsym_conj", conjugation_to_json(cp))
dump("involution", symbol_to_json(involution_symbol((0.3 + 0.2j, -0.1j), sp)))
dump("identity", symbol_to_json(identity_symbol(sp)))
dump("lfts", [lft_to_json(omega_p(0.5)), lft_to_json(LFT(1, 0, 0, 1)),
              lft_to_json(LFT(2, 0, 0, 1)), lft_to_json(LFT(0.5, 0.2, 0.1, 1))])
