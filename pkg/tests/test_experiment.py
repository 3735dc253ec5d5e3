import csv
import io
import math

import pytest

from rtprepair.experiment import (
    CELL_COLUMNS,
    SUMMARY_COLUMNS,
    CellMetrics,
    ExperimentConfig,
    mean_ci95,
    run_cell,
    run_sweep,
    summarize,
    write_cells_csv,
    write_summary_csv,
)


def small(**kwargs):
    base = dict(num_streams=3, packets_per_stream=150, ber_values=(0.0, 0.1), repetitions=2)
    base.update(kwargs)
    return ExperimentConfig(**base)


def test_ber_zero_everything_clean():
    cell = run_cell(small(), 0.0, 0)
    assert cell.total_sent == cell.clean_delivered == 450
    assert cell.misattributed == cell.dropped == cell.field_error_packets == 0


@pytest.mark.parametrize("ber", [0.3, 0.5])
def test_single_stream_never_misattributes(ber):
    cell = run_cell(small(num_streams=1), ber, 0)
    assert cell.dropped == 0 and cell.misattributed == 0
    assert cell.field_error_packets == 0


def test_sweep_cardinality_and_order():
    cfg = small(packets_per_stream=5, ber_values=(0.0, 0.2, 0.4), repetitions=10)
    cells = run_sweep(cfg)
    assert len(cells) == 30
    assert [(c.ber, c.repetition) for c in cells] == [(b, r) for b in (0.0, 0.2, 0.4) for r in range(10)]


def test_sweep_deterministic():
    cfg = small(num_streams=4, ber_values=(0.3, 0.45), cutoff=22)
    assert run_sweep(cfg) == run_sweep(cfg)


def test_parallel_matches_serial():
    cfg = small(packets_per_stream=40, ber_values=(0.2, 0.4))
    assert run_sweep(cfg, n_jobs=2) == run_sweep(cfg)


def test_cutoff_does_not_change_channel():
    # 96 bits can never be exceeded, so results must equal the no-cutoff run
    a = run_cell(small(num_streams=4), 0.45, 1)
    b = run_cell(small(num_streams=4, cutoff=96), 0.45, 1)
    assert a == CellMetrics(**{**b.__dict__, "cutoff": None})


def test_disjoint_seeds_independent():
    means = []
    for seed in (1, 2):
        cfg = small(num_streams=4, packets_per_stream=300, ber_values=(0.45,), repetitions=5, master_seed=seed)
        cells = run_sweep(cfg)
        means.append(summarize(cells)[0].rates["misattribution_rate"])
    assert means[0].mean != means[1].mean
    # intervals overlap: same distribution, different draws
    assert abs(means[0].mean - means[1].mean) <= means[0].ci95 + means[1].ci95


def test_conservation_on_every_cell():
    cfg = small(num_streams=4, ber_values=(0.0, 0.2, 0.35, 0.5), cutoff=20)
    for cell in run_sweep(cfg):
        assert cell.is_conserved()


def test_rates():
    cell = CellMetrics(0.1, 0, 2, None, total_sent=100, clean_delivered=4, delivered_correct=80,
                       misattributed=6, dropped=10, field_error_packets=9)
    assert cell.is_conserved()
    assert cell.misattribution_rate == pytest.approx(0.06)
    assert cell.drop_rate == pytest.approx(0.10)
    assert cell.field_error_rate == pytest.approx(9 / 90)


def test_mean_ci_identical_values():
    summary = mean_ci95([0.25, 0.25, 0.25])
    assert summary.mean == 0.25 and summary.ci95 == 0.0


def test_mean_two_values():
    assert mean_ci95([0.0, 0.2]).mean == pytest.approx(0.1)


def test_ci_three_samples_textbook():
    # mean 0.2, s = 0.1, t(0.975, 2) = 4.303 from a printed t table
    summary = mean_ci95([0.1, 0.2, 0.3])
    assert summary.mean == pytest.approx(0.2)
    assert summary.ci95 == pytest.approx(4.303 * 0.1 / math.sqrt(3), abs=1e-4)


def test_ci_absent_with_one_repetition():
    assert mean_ci95([0.3]).ci95 is None


def test_summarize_groups_by_ber():
    cells = [
        CellMetrics(0.1, 0, 2, 20, total_sent=10, delivered_correct=10),
        CellMetrics(0.1, 1, 2, 20, total_sent=10, delivered_correct=8, dropped=2),
        CellMetrics(0.0, 0, 2, 20, total_sent=10, clean_delivered=10),
    ]
    out = summarize(cells)
    assert [s.ber for s in out] == [0.0, 0.1]
    assert out[1].rates["drop_rate"].mean == pytest.approx(0.1)
    assert out[1].totals["dropped"] == 2
    assert out[0].rates["drop_rate"].ci95 is None


def test_cells_csv():
    cells = run_sweep(small(packets_per_stream=20))
    buf = io.StringIO()
    write_cells_csv(cells, buf)
    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert buf.getvalue().splitlines()[0] == ",".join(CELL_COLUMNS)
    assert len(rows) == 4
    assert {r["cutoff"] for r in rows} == {"none"}
    for row, cell in zip(rows, cells):
        assert int(row["total_sent"]) == cell.total_sent
        assert float(row["drop_rate"]) == pytest.approx(cell.drop_rate, rel=1e-6)


def test_summary_csv():
    cells = run_sweep(small(packets_per_stream=20, cutoff=18, repetitions=1))
    buf = io.StringIO()
    write_summary_csv(summarize(cells), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(SUMMARY_COLUMNS)
    row = next(csv.DictReader(io.StringIO(buf.getvalue())))
    assert row["cutoff"] == "18"
    assert row["drop_rate_ci95"] == ""


@pytest.mark.parametrize("kwargs", [
    dict(num_streams=0), dict(packets_per_stream=0), dict(clean_prefix=1), dict(repetitions=0),
    dict(ber_values=(1.2,)), dict(cutoff=-1), dict(master_seed=-1), dict(payload_size=-1),
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ExperimentConfig(**kwargs)


@pytest.mark.parametrize("ber", [0.12, 0.2])
def test_stricter_cutoff_drops_more(ber):
    def drop(cutoff):
        cfg = small(num_streams=4, packets_per_stream=250, ber_values=(ber,), repetitions=3, cutoff=cutoff)
        return summarize(run_sweep(cfg))[0].rates["drop_rate"].mean

    assert drop(18) >= drop(24)
