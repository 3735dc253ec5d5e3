"""Sender -> destroyer -> receiver simulation and sweep bookkeeping."""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .channel import (
    DEFAULT_PAYLOAD_SIZE,
    DEFAULT_PAYLOAD_TYPE,
    DEFAULT_TS_INCREMENT,
    BernoulliChannel,
    ChannelConfig,
    make_packet,
    random_streams,
)
from .header import HEADER_SIZE, serialize
from .receiver import Delivered, IncomingPacket, Receiver

CELL_COLUMNS = [
    "ber",
    "repetition",
    "streams",
    "cutoff",
    "total_sent",
    "clean_delivered",
    "delivered_correct",
    "misattributed",
    "dropped",
    "field_error_packets",
    "misattribution_rate",
    "drop_rate",
    "field_error_rate",
]

RATE_NAMES = ("misattribution_rate", "drop_rate", "field_error_rate")
COUNT_NAMES = (
    "total_sent",
    "clean_delivered",
    "delivered_correct",
    "misattributed",
    "dropped",
    "field_error_packets",
)


@dataclass(frozen=True)
class ExperimentConfig:
    num_streams: int = 4
    packets_per_stream: int = 2000
    clean_prefix: int = 2
    ber_values: Tuple[float, ...] = tuple(round(0.01 * i, 10) for i in range(51))
    repetitions: int = 5
    cutoff: Optional[int] = None
    advance_on_drop: bool = True
    master_seed: int = 42
    payload_size: int = DEFAULT_PAYLOAD_SIZE
    ts_increment: int = DEFAULT_TS_INCREMENT
    payload_type: int = DEFAULT_PAYLOAD_TYPE

    def __post_init__(self):
        object.__setattr__(self, "ber_values", tuple(float(b) for b in self.ber_values))
        if self.num_streams < 1:
            raise ValueError("num_streams must be positive")
        if self.packets_per_stream < 1:
            raise ValueError("packets_per_stream must be positive")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")
        if self.clean_prefix < 2:
            raise ValueError("clean_prefix must be >= 2 so the sampling rate is learned")
        if any(not 0.0 <= b <= 1.0 for b in self.ber_values):
            raise ValueError("ber values must lie in [0, 1]")
        if self.cutoff is not None and self.cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        if not 0 <= self.master_seed < (1 << 64):
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.payload_size < 0:
            raise ValueError("payload_size must be >= 0")


@dataclass(frozen=True)
class CellMetrics:
    ber: float
    repetition: int
    num_streams: int
    cutoff: Optional[int]
    total_sent: int = 0
    clean_delivered: int = 0
    delivered_correct: int = 0
    misattributed: int = 0
    dropped: int = 0
    field_error_packets: int = 0

    @property
    def delivered(self) -> int:
        return self.clean_delivered + self.delivered_correct + self.misattributed

    @property
    def misattribution_rate(self) -> float:
        return self.misattributed / self.total_sent if self.total_sent else 0.0

    @property
    def drop_rate(self) -> float:
        return self.dropped / self.total_sent if self.total_sent else 0.0

    @property
    def field_error_rate(self) -> float:
        return self.field_error_packets / self.delivered if self.delivered else 0.0

    def is_conserved(self) -> bool:
        return (
            self.delivered + self.dropped == self.total_sent
            and self.field_error_packets <= self.delivered_correct + self.misattributed
        )

    def as_row(self) -> Dict[str, object]:
        return {
            "ber": _fmt(self.ber),
            "repetition": self.repetition,
            "streams": self.num_streams,
            "cutoff": _fmt_cutoff(self.cutoff),
            **{name: getattr(self, name) for name in COUNT_NAMES},
            **{name: _fmt(getattr(self, name)) for name in RATE_NAMES},
        }


def cell_seed(config: ExperimentConfig, ber: float, repetition: int) -> np.random.SeedSequence:
    """Seed of one cell.

    The cutoff is left out on purpose: cells that differ only in cutoff see
    the same streams and the same bit flips.
    """
    ber_key = int(round(ber * 1_000_000))
    return np.random.SeedSequence([config.master_seed, ber_key, repetition, config.num_streams])


def run_cell(config: ExperimentConfig, ber: float, repetition: int) -> CellMetrics:
    stream_seq, channel_seq = cell_seed(config, ber, repetition).spawn(2)
    streams = random_streams(
        np.random.default_rng(stream_seq),
        config.num_streams,
        ts_increment=config.ts_increment,
        payload_type=config.payload_type,
    )
    channel = BernoulliChannel(
        ChannelConfig(ber, int(channel_seq.generate_state(1, np.uint64)[0]))
    )
    receiver = Receiver(cutoff=config.cutoff, advance_on_drop=config.advance_on_drop)

    counts = dict.fromkeys(COUNT_NAMES, 0)
    for index in range(config.packets_per_stream):
        for params in streams:
            sent = make_packet(params, index, config.payload_size)
            counts["total_sent"] += 1
            if index < config.clean_prefix:
                octets, flipped = sent.octets, 0
            else:
                octets, flipped = channel.transmit(sent.octets)
            result = receiver.receive(IncomingPacket(octets, has_errors=flipped > 0))
            if not isinstance(result, Delivered):
                counts["dropped"] += 1
                continue
            if not result.was_repaired:
                counts["clean_delivered"] += 1
            elif result.ssrc == sent.ground_truth_ssrc:
                counts["delivered_correct"] += 1
            else:
                counts["misattributed"] += 1
            if serialize(result.repaired_header) != sent.octets[:HEADER_SIZE]:
                counts["field_error_packets"] += 1

    return CellMetrics(ber, repetition, config.num_streams, config.cutoff, **counts)


def _run_cell_args(args):
    return run_cell(*args)


def run_sweep(config: ExperimentConfig, n_jobs: int = 1) -> List[CellMetrics]:
    """Run every (ber, repetition) cell, ordered by ber then repetition."""
    jobs = [(config, ber, rep) for ber in config.ber_values for rep in range(config.repetitions)]
    if n_jobs == 1:
        return [run_cell(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=None if n_jobs < 1 else n_jobs) as pool:
        return list(pool.map(_run_cell_args, jobs))


@dataclass(frozen=True)
class RateSummary:
    mean: float
    ci95: Optional[float]  # half-width; None with a single repetition


@dataclass(frozen=True)
class SweepSummary:
    ber: float
    num_streams: int
    cutoff: Optional[int]
    repetitions: int
    totals: Dict[str, int] = field(default_factory=dict)
    rates: Dict[str, RateSummary] = field(default_factory=dict)

    def as_row(self) -> Dict[str, object]:
        row: Dict[str, object] = {
            "ber": _fmt(self.ber),
            "repetitions": self.repetitions,
            "streams": self.num_streams,
            "cutoff": _fmt_cutoff(self.cutoff),
        }
        row.update(self.totals)
        for name in RATE_NAMES:
            rate = self.rates[name]
            row[f"{name}_mean"] = _fmt(rate.mean)
            row[f"{name}_ci95"] = "" if rate.ci95 is None else _fmt(rate.ci95)
        return row


SUMMARY_COLUMNS = (
    ["ber", "repetitions", "streams", "cutoff"]
    + list(COUNT_NAMES)
    + [f"{name}_{suffix}" for name in RATE_NAMES for suffix in ("mean", "ci95")]
)


def mean_ci95(values: Sequence[float]) -> RateSummary:
    """Mean and Student-t 95% half-width, ``t(0.975, n-1) * s / sqrt(n)``."""
    n = len(values)
    if n == 0:
        raise ValueError("no values to summarize")
    mean = math.fsum(values) / n
    if n < 2:
        return RateSummary(mean, None)
    sd = float(np.std(values, ddof=1))
    return RateSummary(mean, float(stats.t.ppf(0.975, n - 1)) * sd / math.sqrt(n))


def summarize(cells: Iterable[CellMetrics]) -> List[SweepSummary]:
    groups: Dict[tuple, List[CellMetrics]] = defaultdict(list)
    for cell in cells:
        groups[(cell.ber, cell.num_streams, -1 if cell.cutoff is None else cell.cutoff)].append(cell)
    out = []
    for key in sorted(groups):
        group = groups[key]
        first = group[0]
        out.append(
            SweepSummary(
                ber=first.ber,
                num_streams=first.num_streams,
                cutoff=first.cutoff,
                repetitions=len(group),
                totals={name: sum(getattr(c, name) for c in group) for name in COUNT_NAMES},
                rates={name: mean_ci95([getattr(c, name) for c in group]) for name in RATE_NAMES},
            )
        )
    return out


def write_cells_csv(cells: Iterable[CellMetrics], fh: IO[str]) -> None:
    writer = csv.DictWriter(fh, fieldnames=CELL_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for cell in cells:
        writer.writerow(cell.as_row())


def write_summary_csv(summaries: Iterable[SweepSummary], fh: IO[str]) -> None:
    writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for summary in summaries:
        writer.writerow(summary.as_row())


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def _fmt_cutoff(cutoff: Optional[int]) -> str:
    return "none" if cutoff is None else str(cutoff)
