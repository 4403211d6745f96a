from fractions import Fraction

import pytest

from conepf.counterexample import (
    BUILTINS, CASES, NAME, SectorMap, build_example1, refutation_report, verify_case_analysis,
)
from conepf.maps import map_from_dict

from oracles import FROZEN, sector_map

T1 = build_example1()


def _lt(a, b):
    return all(p < q for p, q in zip(a, b)) or (all(p <= q for p, q in zip(a, b)) and a != b)


@pytest.mark.parametrize("x, want", [((1, 0), (2, 1)), ((2, 1), (6, 3)), ((1, 1), (3, 3))])
def test_build_examples(x, want):
    assert T1.apply_exact(x) == want


def test_builtin_registry_and_round_trip():
    assert BUILTINS[NAME]().apply_exact((3, 1)) == T1.apply_exact((3, 1))
    back = map_from_dict({"type": "builtin", "name": NAME})
    assert isinstance(back, SectorMap)


def test_sector_lookup():
    assert [T1.sector(x) for x in [(3, 1), (1, 1), (1, 3), (2, 1), (1, 2)]] == ["K1", "K2", "K3", "K2", "K2"]


@pytest.mark.parametrize("key", ["case_ii", "case_iii"])
def test_case_instances_against_frozen_oracle(key):
    c = FROZEN[key]
    assert _lt(c["x"], c["y"])
    assert T1.apply_exact(c["x"]) == c["Tx"] and T1.apply_exact(c["y"]) == c["Ty"]
    assert _lt(c["Tx"], c["Ty"])


def test_case_one_scaling_instance():
    assert T1.apply_exact((1, 1)) == (3, 3) and T1.apply_exact((2, 2)) == (6, 6)


def test_case_analysis_has_no_violations_and_covers_every_case():
    rep = verify_case_analysis(samples_per_case=2000, seed=5)
    assert rep.ok
    assert len(rep.cases) == len(CASES) == 9
    assert rep.total_pairs == 9 * 2000
    configs = {(c.smaller, c.larger) for c in rep.cases}
    assert configs == {("K1", "K1"), ("K2", "K2"), ("K3", "K3"), ("K1", "K3"), ("K3", "K1"),
                       ("K1", "K2"), ("K2", "K1"), ("K3", "K2"), ("K2", "K3")}


def test_case_analysis_samples_are_comparable_and_in_their_sectors():
    rep = verify_case_analysis(samples_per_case=50, seed=1)
    for c in rep.cases:
        ex = c.to_dict()["example"]
        x = tuple(Fraction(v) for v in ex["x"])
        y = tuple(Fraction(v) for v in ex["y"])
        assert _lt(x, y)
        assert T1.sector(x) == c.smaller and T1.sector(y) == c.larger
        assert tuple(Fraction(v) for v in ex["Tx"]) == sector_map(x)


def test_case_analysis_detects_a_broken_map():
    # a map that agrees except on the lower sector, where it is not monotone
    class Broken(SectorMap):
        def _eval_exact(self, x):
            if self.sector(x) == "K1":
                return (x[0] + x[1], 2 * (x[0] + x[1]))
            return super()._eval_exact(x)

    broken = Broken(T1.regions, T1.cone, validate=False)
    rep = verify_case_analysis(samples_per_case=200, seed=0, T=broken)
    assert not rep.ok
    assert any("evaluation mismatch" in v[3] for c in rep.cases for v in c.violations)


def test_refutation_report_small():
    rep = refutation_report(pairs_per_case=500, boundary_samples=100, seed=3)
    assert rep.ok
    d = rep.to_dict()
    assert d["map"] == {"type": "builtin", "name": NAME}
    eig = [c for c in rep.eigenvectors if c.claim.startswith("T(")]
    assert len(eig) == 3
    assert "refuted" in rep.conclusions["unique_unit_eigenvector_in_cone"]
    assert "Eigencone" in rep.to_text()


def test_report_is_seed_deterministic():
    a = refutation_report(pairs_per_case=200, boundary_samples=50, seed=9).to_dict()
    b = refutation_report(pairs_per_case=200, boundary_samples=50, seed=9).to_dict()
    assert a == b
