"""Hamming-distance matching of received headers against predicted ones."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .header import HEADER_SIZE, serialize
from .streams import SEQ_MOD, TS_MOD, StreamState

# Steps between the last correct packet and the first packet after it.
# Prediction advances by (bad_packet_counter + LOOKAHEAD) packets.
LOOKAHEAD = 1

_SEQ_TS = struct.Struct("!HI")


def hamming(a: bytes, b: bytes) -> int:
    """Number of differing bit positions between two equal-length strings."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)} octets")
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).bit_count()


@dataclass(frozen=True)
class ExpectedHeader:
    octets: bytes
    source_ssrc: int


@dataclass(frozen=True)
class Assigned:
    ssrc: int
    distance: int


@dataclass(frozen=True)
class Dropped:
    min_distance: Optional[int] = None
    # stream that was closest despite exceeding the cutoff
    nearest_ssrc: Optional[int] = None


MatchDecision = Union[Assigned, Dropped]


def predict_expected(state: StreamState) -> ExpectedHeader:
    """Header the stream is expected to send next.

    Every field is copied from the last correct header; sequence number and
    timestamp are advanced by ``bad_packet_counter + 1`` steps.
    """
    last = state.last_header
    steps = state.bad_packet_counter + LOOKAHEAD
    octets = serialize(last)
    seq_ts = _SEQ_TS.pack(
        (last.sequence_number + steps) % SEQ_MOD,
        (last.timestamp + steps * state.sampling_rate) % TS_MOD,
    )
    return ExpectedHeader(octets[:2] + seq_ts + octets[8:], state.ssrc)


def best_match(
    received: bytes,
    states: Iterable[StreamState],
    cutoff: Optional[int] = None,
) -> MatchDecision:
    """Assign ``received`` to the stream whose prediction is closest.

    Ties go to the numerically smallest SSRC. With a cutoff, a best distance
    strictly above it is a drop.
    """
    received = bytes(received[:HEADER_SIZE])
    if len(received) != HEADER_SIZE:
        raise ValueError(f"need {HEADER_SIZE} header octets, got {len(received)}")
    rx = int.from_bytes(received, "big")
    best = None
    for state in states:
        expected = int.from_bytes(predict_expected(state).octets, "big")
        key = ((rx ^ expected).bit_count(), state.ssrc)
        if best is None or key < best:
            best = key
    if best is None:
        return Dropped()
    distance, ssrc = best
    if cutoff is not None and distance > cutoff:
        return Dropped(distance, ssrc)
    return Assigned(ssrc, distance)
