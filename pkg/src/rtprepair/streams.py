"""Learner state: one record per SSRC, built from error-free packets only."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

from .header import RtpHeader

SEQ_MOD = 1 << 16
TS_MOD = 1 << 32


@dataclass(frozen=True)
class StreamState:
    ssrc: int
    last_header: RtpHeader
    sampling_rate: int = 0
    bad_packet_counter: int = 0
    correct_count: int = 1
    corrupted_count: int = 0
    dropped_count: int = 0


class StreamDatabase:
    """Per-SSRC learner records.

    States are immutable; every mutation swaps in a new record, so the tuple
    returned by :meth:`snapshot` stays valid while the database moves on.
    Streams are never evicted.
    """

    def __init__(self):
        self._streams: Dict[int, StreamState] = {}
        # learns where the timestamp delta was not a multiple of the seq delta
        self.inexact_rate_count = 0

    def __len__(self) -> int:
        return len(self._streams)

    def __contains__(self, ssrc: int) -> bool:
        return ssrc in self._streams

    def __getitem__(self, ssrc: int) -> StreamState:
        return self._streams[ssrc]

    def get(self, ssrc: int) -> Optional[StreamState]:
        return self._streams.get(ssrc)

    def learn(self, header: RtpHeader) -> StreamState:
        """Store ``header`` as the latest correct header of its stream.

        The sampling rate is the modular timestamp delta divided by the modular
        sequence delta (integer division). A repeated sequence number keeps the
        previous rate.
        """
        prev = self._streams.get(header.ssrc)
        if prev is None:
            state = StreamState(ssrc=header.ssrc, last_header=header)
        else:
            rate = prev.sampling_rate
            last = prev.last_header
            dseq = (header.sequence_number - last.sequence_number) % SEQ_MOD
            if dseq:
                dts = (header.timestamp - last.timestamp) % TS_MOD
                rate, rem = divmod(dts, dseq)
                if rem:
                    self.inexact_rate_count += 1
            state = replace(
                prev,
                last_header=header,
                sampling_rate=rate,
                bad_packet_counter=0,
                correct_count=prev.correct_count + 1,
            )
        self._streams[header.ssrc] = state
        return state

    def record_bad(self, ssrc: int) -> StreamState:
        try:
            prev = self._streams[ssrc]
        except KeyError:
            raise KeyError(f"no stream with SSRC {ssrc:#010x}") from None
        state = replace(
            prev,
            bad_packet_counter=prev.bad_packet_counter + 1,
            corrupted_count=prev.corrupted_count + 1,
        )
        self._streams[ssrc] = state
        return state

    def record_dropped(self, ssrc: int) -> StreamState:
        """Advance the prediction past a packet dropped at the cutoff.

        The bad packet counter moves on so that later predictions stay aligned
        with the sender, but the packet is not counted as attributed.
        """
        try:
            prev = self._streams[ssrc]
        except KeyError:
            raise KeyError(f"no stream with SSRC {ssrc:#010x}") from None
        state = replace(
            prev,
            bad_packet_counter=prev.bad_packet_counter + 1,
            dropped_count=prev.dropped_count + 1,
        )
        self._streams[ssrc] = state
        return state

    def snapshot(self) -> Tuple[StreamState, ...]:
        return tuple(self._streams.values())

    def copy(self) -> "StreamDatabase":
        other = StreamDatabase()
        other._streams = dict(self._streams)
        other.inexact_rate_count = self.inexact_rate_count
        return other
