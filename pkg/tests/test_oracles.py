from fractions import Fraction

import numpy as np

from oracles import FROZEN, perron_root, quarter_plane_norm, sector_map


def test_oracles_reproduce_frozen_values():
    f = lambda x: np.array(sector_map(x), dtype=float)
    assert abs(quarter_plane_norm(f) - FROZEN["sector_map_cone_norm"]) < 1e-9
    assert abs(perron_root([[2, 1], [1, 2]]) - FROZEN["perron_2112"]) < 1e-12
    for key in ("case_ii", "case_iii"):
        case = FROZEN[key]
        assert sector_map(case["x"]) == case["Tx"]
        assert sector_map(case["y"]) == case["Ty"]


def test_sector_oracle_is_exact_on_fractions():
    x = (Fraction(1, 3), Fraction(1, 7))
    assert sector_map(x) == (2 * (x[0] + x[1]), x[0] + x[1])
