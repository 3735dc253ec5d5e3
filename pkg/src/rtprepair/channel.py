"""Sender-side packet generation and the Bernoulli bit-flip channel."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .header import RtpHeader, serialize
from .streams import SEQ_MOD, TS_MOD

DEFAULT_TS_INCREMENT = 160  # 20 ms frames at 8 kHz
DEFAULT_PAYLOAD_SIZE = 160
DEFAULT_PAYLOAD_TYPE = 0


@dataclass(frozen=True)
class ChannelConfig:
    ber: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.ber <= 1.0:
            raise ValueError(f"ber must lie in [0, 1], got {self.ber}")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def corrupt(packet: bytes, ber: float, rng: np.random.Generator) -> Tuple[bytes, int]:
    """Flip each bit independently with probability ``ber``.

    One uniform draw per bit, flipped iff the draw is below ``ber``. Returns
    the corrupted octets and the number of flipped bits.
    """
    buf = np.frombuffer(bytes(packet), dtype=np.uint8)
    flips = rng.random(buf.size * 8) < ber
    mask = np.packbits(flips)
    return (buf ^ mask).tobytes(), int(np.count_nonzero(flips))


class BernoulliChannel:
    """Seeded packet destroyer; one instance per experiment cell."""

    def __init__(self, config: ChannelConfig):
        self.config = config
        self.rng = np.random.default_rng(config.seed)

    def __repr__(self):
        return f"BernoulliChannel(ber={self.config.ber}, seed={self.config.seed})"

    def transmit(self, packet: bytes) -> Tuple[bytes, int]:
        return corrupt(packet, self.config.ber, self.rng)


@dataclass(frozen=True)
class StreamParams:
    ssrc: int
    initial_seq: int
    initial_ts: int
    ts_increment: int = DEFAULT_TS_INCREMENT
    payload_type: int = DEFAULT_PAYLOAD_TYPE


@dataclass(frozen=True)
class SentPacket:
    octets: bytes
    ground_truth_ssrc: int
    ground_truth_header: RtpHeader


def payload_filler(ssrc: int, index: int, size: int) -> bytes:
    """Deterministic pseudo-random payload keyed by (ssrc, index)."""
    if size == 0:
        return b""
    key = ssrc.to_bytes(4, "big") + index.to_bytes(8, "big")
    return hashlib.shake_128(key).digest(size)


def make_packet(
    params: StreamParams, index: int, payload_size: int = DEFAULT_PAYLOAD_SIZE
) -> SentPacket:
    if payload_size < 0:
        raise ValueError(f"payload_size must be >= 0, got {payload_size}")
    header = RtpHeader(
        payload_type=params.payload_type,
        sequence_number=(params.initial_seq + index) % SEQ_MOD,
        timestamp=(params.initial_ts + index * params.ts_increment) % TS_MOD,
        ssrc=params.ssrc,
    )
    octets = serialize(header) + payload_filler(params.ssrc, index, payload_size)
    return SentPacket(octets, params.ssrc, header)


def random_streams(
    rng: np.random.Generator,
    count: int,
    ts_increment: int = DEFAULT_TS_INCREMENT,
    payload_type: int = DEFAULT_PAYLOAD_TYPE,
) -> List[StreamParams]:
    """Draw ``count`` streams with distinct random SSRCs and random initial seq/ts."""
    streams: List[StreamParams] = []
    seen = set()
    while len(streams) < count:
        ssrc = int(rng.integers(0, 1 << 32))
        seq = int(rng.integers(0, SEQ_MOD))
        ts = int(rng.integers(0, TS_MOD))
        if ssrc in seen:
            continue
        seen.add(ssrc)
        streams.append(StreamParams(ssrc, seq, ts, ts_increment, payload_type))
    return streams
