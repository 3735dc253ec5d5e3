"""RTP fixed header codec and field classification.

Only the 12-octet fixed header is modelled. CSRC words are never consumed,
whatever the CC bits say, so a corrupted CC cannot move the payload boundary.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

HEADER_SIZE = 12
HEADER_BITS = HEADER_SIZE * 8
RTP_VERSION = 2

_FMT = struct.Struct("!BBHII")


class FieldClass(enum.Enum):
    STATIC = "static"
    PREDICTABLY_DYNAMIC = "predictably_dynamic"
    UNPREDICTABLY_DYNAMIC = "unpredictably_dynamic"


# (bit width, class) per fixed-header field, in wire order
FIELDS = {
    "version": (2, FieldClass.STATIC),
    "padding": (1, FieldClass.UNPREDICTABLY_DYNAMIC),
    "extension": (1, FieldClass.UNPREDICTABLY_DYNAMIC),
    "csrc_count": (4, FieldClass.UNPREDICTABLY_DYNAMIC),
    "marker": (1, FieldClass.UNPREDICTABLY_DYNAMIC),
    "payload_type": (7, FieldClass.STATIC),
    "sequence_number": (16, FieldClass.PREDICTABLY_DYNAMIC),
    "timestamp": (32, FieldClass.PREDICTABLY_DYNAMIC),
    "ssrc": (32, FieldClass.STATIC),
}


class HeaderLengthError(ValueError):
    """Raised when fewer than 12 octets are handed to the parser."""


@dataclass(frozen=True)
class RtpHeader:
    version: int = RTP_VERSION
    padding: bool = False
    extension: bool = False
    csrc_count: int = 0
    marker: bool = False
    payload_type: int = 0
    sequence_number: int = 0
    timestamp: int = 0
    ssrc: int = 0

    def __post_init__(self):
        for name, (width, _) in FIELDS.items():
            value = getattr(self, name)
            if width == 1:
                if value not in (0, 1):
                    raise ValueError(f"{name} must be a flag, got {value!r}")
                object.__setattr__(self, name, bool(value))
            elif not 0 <= value < (1 << width):
                raise ValueError(f"{name}={value} does not fit in {width} bits")

    def to_bytes(self) -> bytes:
        return serialize(self)

    @classmethod
    def from_bytes(cls, data: bytes) -> "RtpHeader":
        return parse(data)


def serialize(header: RtpHeader) -> bytes:
    """Pack a header into its 12-octet big-endian wire form."""
    b0 = (
        (header.version << 6)
        | (header.padding << 5)
        | (header.extension << 4)
        | header.csrc_count
    )
    b1 = (header.marker << 7) | header.payload_type
    return _FMT.pack(b0, b1, header.sequence_number, header.timestamp, header.ssrc)


def parse(data: bytes) -> RtpHeader:
    """Decode the first 12 octets of ``data``.

    Field values are never rejected: any 96-bit string decodes, which keeps
    corrupted headers representable.
    """
    if len(data) < HEADER_SIZE:
        raise HeaderLengthError(
            f"RTP fixed header needs {HEADER_SIZE} octets, got {len(data)}"
        )
    b0, b1, seq, ts, ssrc = _FMT.unpack_from(data)
    return RtpHeader(
        version=b0 >> 6,
        padding=bool(b0 & 0x20),
        extension=bool(b0 & 0x10),
        csrc_count=b0 & 0x0F,
        marker=bool(b1 & 0x80),
        payload_type=b1 & 0x7F,
        sequence_number=seq,
        timestamp=ts,
        ssrc=ssrc,
    )


def field_class(name: str) -> FieldClass:
    try:
        return FIELDS[name][1]
    except KeyError:
        raise ValueError(f"unknown RTP header field {name!r}") from None
