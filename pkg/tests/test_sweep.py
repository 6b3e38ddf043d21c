import io
import random

import pytest

from qkdmetro.config import SweepSpec
from qkdmetro.network import build_gpon_scenario, evaluate_link
from qkdmetro.sweep import (CSV_HEADER, aes_rekey, read_csv,
                            record_from_performance, run_sweep, write_csv)


def test_run_sweep_matches_evaluate_link():
    scenario = build_gpon_scenario()
    records = run_sweep(scenario, SweepSpec(0.0, 3.0, 1.0))
    assert [r.length_km for r in records] == [0.0, 1.0, 2.0, 3.0]
    for rec in records:
        perf = evaluate_link(scenario, rec.length_km, on_collapse="zero")
        assert rec == record_from_performance(rec.length_km, perf)


def test_csv_round_trip_is_exact():
    scenario = build_gpon_scenario()
    records = run_sweep(scenario, SweepSpec(0.0, 5.0, 0.5))
    buf = io.StringIO()
    write_csv(records, buf)
    buf.seek(0)
    assert read_csv(buf) == records  # full-precision repr round-trips floats


def test_read_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        read_csv(io.StringIO("length,loss\n1,2\n"))


def test_csv_header_shape():
    assert CSV_HEADER[0] == "length_km"
    assert CSV_HEADER[-1] == "secret_bps"
    buf = io.StringIO()
    write_csv([], buf)
    assert buf.getvalue().strip() == ",".join(CSV_HEADER)


def test_strict_and_lenient_agree_when_nothing_collapses():
    scenario = build_gpon_scenario()
    spec = SweepSpec(0.0, 3.0, 1.0)
    assert run_sweep(scenario, spec, strict=True) == run_sweep(scenario, spec)


def test_aes_rekey_reference_value():
    # 160 links at 2.4 Gbit/s each, rekeying 256-bit keys at 1 kbit/s
    assert aes_rekey(160 * 2.4e9, 1000.0, 256) == 98304000000.0
    assert aes_rekey(160 * 2.4e9, 1000.0, 256) < 2 ** 37


def test_aes_rekey_scaling_properties():
    rng = random.Random(11)
    for _ in range(200):
        total = rng.uniform(1e6, 1e12)
        key_rate = rng.uniform(1.0, 1e6)
        bits = rng.choice([128, 192, 256])
        base = aes_rekey(total, key_rate, bits)
        assert aes_rekey(2 * total, key_rate, bits) == pytest.approx(2 * base)
        assert aes_rekey(total, 2 * key_rate, bits) == pytest.approx(base / 2)
        assert aes_rekey(total, key_rate, 2 * bits) == pytest.approx(2 * base)


def test_aes_rekey_validation():
    with pytest.raises(ValueError):
        aes_rekey(0.0, 1000.0, 256)
    with pytest.raises(ValueError):
        aes_rekey(1e9, -1.0, 256)
