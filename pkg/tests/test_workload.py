import pytest

from rldsim.device import load_device
from rldsim.request import Op, Request
from rldsim.workload import (GeneratorParams, Pattern, Trace, TraceParseError, generate, read_trace,
                             row_hit_fraction, write_trace)

HEADER = "#device=rldram3 mode=open-loop pes=4\n"


def test_same_seed_same_trace():
    p = GeneratorParams(Pattern.UNIFORM, 4, 500, seed=1)
    assert generate(p) == generate(p)
    assert generate(p) != generate(GeneratorParams(Pattern.UNIFORM, 4, 500, seed=2))


def test_row_locality_hit_fraction():
    dev = load_device("rldram3")
    trace = generate(GeneratorParams(Pattern.ROW_LOCALITY, 4, 100_000, hit_ratio=0.35, seed=7))
    assert abs(row_hit_fraction(trace, dev.layout) - 0.35) <= 0.01


@pytest.mark.parametrize("ratio", [0.0, 1.0])
def test_row_locality_extremes(ratio):
    dev = load_device("ddr3")
    trace = generate(GeneratorParams(Pattern.ROW_LOCALITY, 2, 5000, hit_ratio=ratio, device="ddr3"))
    assert row_hit_fraction(trace, dev.layout) == ratio


def test_read_fraction():
    trace = generate(GeneratorParams(Pattern.UNIFORM, 2, 20_000, read_fraction=0.7, seed=3))
    reads = sum(r.op is Op.READ for r in trace.requests) / len(trace.requests)
    assert abs(reads - 0.7) <= 0.02


@pytest.mark.parametrize("kw", [dict(hit_ratio=1.5), dict(hit_ratio=-0.1), dict(pes=0),
                                dict(mode="batch"), dict(read_fraction=2.0)])
def test_invalid_params(kw):
    base = dict(pattern=Pattern.ROW_LOCALITY, pes=2, length=10)
    with pytest.raises(ValueError):
        GeneratorParams(**{**base, **kw})


def test_same_bank_pattern():
    dev = load_device("rldram3")
    trace = generate(GeneratorParams(Pattern.SAME_BANK, 4, 8))
    assert [r.pe for r in trace.requests] == [0, 1, 2, 3] * 2
    assert {dev.layout.fields(r.address)[1] for r in trace.requests} == {0}


def test_alternating_pattern():
    dev = load_device("rldram3")
    trace = generate(GeneratorParams(Pattern.ALTERNATING, 5, 5))
    ops = [r.op for r in trace.requests]
    assert ops[-1] is Op.READ
    assert all(a is not b for a, b in zip(ops, ops[1:]))
    banks = [dev.layout.fields(r.address)[1] for r in trace.requests]
    assert len(set(banks)) == 5


def test_parse_example_line(tmp_path):
    f = tmp_path / "t.trc"
    f.write_text(HEADER + "120,2,R,0x0004F2A0\n")
    trace = read_trace(f)
    assert trace.requests == [Request(0, 2, Op.READ, 0x4F2A0, 120)]
    assert trace.mode == "open-loop" and trace.pes == 4


def test_missing_op_field(tmp_path):
    f = tmp_path / "t.trc"
    f.write_text(HEADER + "0,1,W,0x0\n5,2\n")
    with pytest.raises(TraceParseError) as err:
        read_trace(f)
    assert err.value.lineno == 3 and err.value.field == "op"
    assert ":3:" in str(err.value)


@pytest.mark.parametrize("line,field", [
    ("x,1,R,0x0", "arrival_cycle"),
    ("0,1,Q,0x0", "op"),
    ("0,1,R,zz", "address_hex"),
    ("0,9,R,0x0", "pe"),
    ("0,1,R,0x0,7", "line"),
])
def test_bad_fields(tmp_path, line, field):
    f = tmp_path / "t.trc"
    f.write_text(HEADER + line + "\n")
    with pytest.raises(TraceParseError) as err:
        read_trace(f)
    assert err.value.field == field and err.value.lineno == 2


def test_decreasing_arrival(tmp_path):
    f = tmp_path / "t.trc"
    f.write_text(HEADER + "5,0,R,0x0\n4,0,R,0x0\n")
    with pytest.raises(TraceParseError):
        read_trace(f)


def test_bad_header(tmp_path):
    f = tmp_path / "t.trc"
    f.write_text("0,0,R,0x0\n")
    with pytest.raises(TraceParseError) as err:
        read_trace(f)
    assert err.value.lineno == 1


def test_round_trip_byte_identical(tmp_path):
    trace = generate(GeneratorParams(Pattern.ROW_LOCALITY, 8, 10_000, seed=11, gap=3))
    a, b = tmp_path / "a.trc", tmp_path / "b.trc"
    write_trace(trace, a)
    again = read_trace(a)
    assert again == trace
    write_trace(again, b)
    assert a.read_bytes() == b.read_bytes()


def test_trace_validate():
    with pytest.raises(ValueError):
        Trace("rldram3", 2, [Request(0, 3, Op.READ, 0, 0)]).validate()
