import json
import math
from fractions import Fraction

import pytest

from rldsim import bounds
from rldsim.bounds import bcl, bound_report, summarize, vw, vw_part, vw_share, wcl_part, wcl_share
from rldsim.device import rldram3
from rldsim.mapping import Layout
from rldsim.request import LatencyRecord, Op

R, W = Op.READ, Op.WRITE


def _oracle_part(n, op):
    """Worst total over every R/W order of N-1 interferers on distinct banks."""
    best = 0
    for mask in range(1 << (n - 1)):
        kinds = [W if mask >> i & 1 else R for i in range(n - 1)] + [op]
        total = 0
        for a, b in zip(kinds, kinds[1:]):
            # W->R 5, R->W 3, same kind one burst
            total += 5 if (a, b) == (W, R) else 3 if (a, b) == (R, W) else 4
        best = max(best, total)
    return best + (13 if op is R else 14)


def test_share_examples():
    assert wcl_share(4, R) == 31
    assert wcl_share(1, R) == 13
    assert wcl_share(8, R) == 55


def test_part_examples():
    assert wcl_part(4, R) == 26
    assert wcl_part(1, W) == 14
    assert bound_report(Layout.PARTITION, 4, R).wcl_ns == 39.0


def test_bcl():
    assert bcl(R) == 13 and bcl(W) == 14


def test_vw_examples():
    assert vw_share(1) == vw_part(1) == 0
    assert round(float(vw_share(4, R)), 1) == 138.5
    assert vw_part(4, R) == 100
    assert vw_share(4, R) == Fraction(1800, 13)


@pytest.mark.parametrize("n", range(1, 65))
def test_consistency(n):
    for op in (R, W):
        assert vw_share(n, op) == Fraction(wcl_share(n, op) - bcl(op), bcl(op)) * 100
        if n <= 16:
            assert vw_part(n, op) == Fraction(wcl_part(n, op) - bcl(op), bcl(op)) * 100


def test_monotone():
    for n in range(2, 64):
        assert wcl_share(n + 1) > wcl_share(n)
    for n in range(2, 16):
        assert wcl_part(n + 1) > wcl_part(n)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_part_matches_exhaustive_for_even_n(n):
    assert wcl_part(n, R) == _oracle_part(n, R)


def test_part_undercounts_odd_n_by_one():
    # interferer order W, W then the read: 4 + 5 cycles, the closed form gives 8
    assert _oracle_part(3, R) == wcl_part(3, R) + 1


def test_domain_errors():
    with pytest.raises(ValueError):
        wcl_share(0)
    with pytest.raises(ValueError):
        wcl_part(17)


def test_report_json():
    doc = bound_report(Layout.PARTITION, 4, R).to_json()
    for key in ("device", "controller", "layout", "pes", "kind", "wcl_cycles", "bcl_cycles",
                "vw_percent", "wcl_ns"):
        assert key in doc
    assert doc["wcl_cycles"] == 26 and doc["vw_percent"] == 100.0
    json.dumps(doc)


def test_vw_exact():
    assert vw(19, 13) == Fraction(600, 13)
    assert vw(72, 10) == 620


def _rec(i, pe, total, op=R):
    return LatencyRecord(i, pe, op, arrival=0, head_of_queue=0, issue=0, data_start=total)


def test_summarize_equal_records():
    s = summarize([_rec(i, 0, 20) for i in range(5)])
    assert s.vw_percent == 0 and s.total.max == 20 and s.count == 5


def test_summarize_filter_and_bound():
    recs = [_rec(0, 0, 13), _rec(1, 1, 31), _rec(2, 1, 40)]
    s = summarize(recs, pe_filter=[1], bound=lambda r: 31)
    assert s.count == 2 and s.exceedances == [2]
    assert math.isclose(s.vw_percent, 100 * 9 / 31)
    out = s.to_json(1.5)
    assert out["bound_exceedances"] == 1 and out["max_total_cycles"] == 40
    with pytest.raises(ValueError):
        summarize(recs, pe_filter=[7])


def test_dispatch():
    assert bounds.wcl(Layout.SHARE, 4) == 31
    assert bounds.wcl(Layout.PARTITION, 4, W, rldram3()) == 27
