"""Receive path: learner for clean packets, predictor and repair for corrupted ones."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .header import HEADER_SIZE, RtpHeader, parse
from .matcher import Assigned, ExpectedHeader, best_match, predict_expected
from .streams import StreamDatabase


@dataclass(frozen=True)
class IncomingPacket:
    octets: bytes
    # set whenever any bit of the packet may be corrupted
    has_errors: bool = False


class DropReason(str, enum.Enum):
    NO_STREAMS = "no-streams"
    OVER_CUTOFF = "over-cutoff"
    TOO_SHORT = "too-short"


@dataclass(frozen=True)
class Delivered:
    ssrc: int
    repaired_header: RtpHeader
    payload: bytes
    was_repaired: bool
    # Hamming distance to the chosen prediction; None for clean packets
    distance: Optional[int] = None


@dataclass(frozen=True)
class DroppedPacket:
    reason: DropReason
    min_distance: Optional[int] = None


DeliveryResult = Union[Delivered, DroppedPacket]


def repair(received: bytes, expected: ExpectedHeader) -> RtpHeader:
    """Overwrite the received header with the prediction.

    ``received`` is deliberately ignored: the whole fixed header, including
    the P, X, CC and M bits, takes the predicted (last learned) values.
    """
    return parse(expected.octets)


class Receiver:
    """One RTP session on the receiving side.

    Packets must be fed in arrival order; learner state depends on it.

    Parameters
    ----------
    cutoff : int, optional
        Largest accepted Hamming distance to the best prediction. ``None``
        always assigns corrupted packets to some known stream.
    advance_on_drop : bool, default True
        When a packet is dropped at the cutoff, still advance the bad packet
        counter of the closest stream. Without this a single drop leaves that
        stream one step behind until its next clean packet, which at high bit
        error rates triggers a cascade of further drops.
    """

    def __init__(
        self,
        cutoff: Optional[int] = None,
        advance_on_drop: bool = True,
        streams: Optional[StreamDatabase] = None,
    ):
        if cutoff is not None and cutoff < 0:
            raise ValueError(f"cutoff must be non-negative, got {cutoff}")
        self.cutoff = cutoff
        self.advance_on_drop = advance_on_drop
        self.streams = streams if streams is not None else StreamDatabase()

    def receive(self, packet: IncomingPacket) -> DeliveryResult:
        data = bytes(packet.octets)
        if len(data) < HEADER_SIZE:
            return DroppedPacket(DropReason.TOO_SHORT)
        payload = data[HEADER_SIZE:]

        if not packet.has_errors:
            header = parse(data)
            self.streams.learn(header)
            return Delivered(header.ssrc, header, payload, was_repaired=False)

        decision = best_match(data[:HEADER_SIZE], self.streams.snapshot(), self.cutoff)
        if not isinstance(decision, Assigned):
            if decision.min_distance is None:
                return DroppedPacket(DropReason.NO_STREAMS)
            if self.advance_on_drop:
                self.streams.record_dropped(decision.nearest_ssrc)
            return DroppedPacket(DropReason.OVER_CUTOFF, decision.min_distance)

        expected = predict_expected(self.streams[decision.ssrc])
        header = repair(data[:HEADER_SIZE], expected)
        self.streams.record_bad(decision.ssrc)
        return Delivered(decision.ssrc, header, payload, True, decision.distance)
