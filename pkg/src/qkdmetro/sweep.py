"""Distance sweeps, CSV emission and the AES rekey arithmetic."""

import csv
from dataclasses import dataclass, fields

from .network import evaluate_link

CSV_HEADER = ("length_km", "total_loss_db", "eta", "y0", "q_mu", "qber",
              "raw_bps", "sifted_bps", "ec_corrected_bps", "secret_bps")


@dataclass(frozen=True)
class SweepRecord:
    length_km: float
    total_loss_db: float
    eta: float
    y0: float
    q_mu: float
    qber: float
    raw_bps: float
    sifted_bps: float
    ec_corrected_bps: float
    secret_bps: float


def record_from_performance(length_km, perf):
    return SweepRecord(
        length_km=length_km,
        total_loss_db=perf.loss_db,
        eta=perf.eta,
        y0=perf.noise.total_y0,
        q_mu=perf.yield_gain.q_mu,
        qber=perf.yield_gain.e_mu,
        raw_bps=perf.rates.raw_bps,
        sifted_bps=perf.rates.sifted_bps,
        ec_corrected_bps=perf.rates.ec_corrected_bps,
        secret_bps=perf.rates.secret_bps,
    )


def run_sweep(scenario, spec, strict=False):
    """One SweepRecord per length, ascending.

    In the default lenient mode a collapsed decoy bound at some length is
    recorded as zero secret rate; strict mode propagates the error.
    """
    records = []
    for length in spec.lengths():
        perf = evaluate_link(scenario, length,
                             on_collapse="raise" if strict else "zero")
        records.append(record_from_performance(length, perf))
    return records


def write_csv(records, stream):
    """Emit records at full floating precision (repr round-trips)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow([repr(getattr(rec, name)) for name in CSV_HEADER])


def read_csv(stream):
    reader = csv.reader(stream)
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected sweep CSV header: {header}")
    return [SweepRecord(*(float(cell) for cell in row)) for row in reader if row]


def aes_rekey(total_bps, key_rate_bps, key_len_bits):
    """Bits encrypted per key when rekeying an aggregate classical flow.

    A key of key_len_bits is consumed every key_len_bits/key_rate_bps
    seconds, during which total_bps*that many bits are encrypted.
    """
    if min(total_bps, key_rate_bps, key_len_bits) <= 0:
        raise ValueError("all rekey arguments must be positive")
    return total_bps / (key_rate_bps / key_len_bits)
