"""Receiver-side heuristic recovery of corrupted RTP headers."""

from .header import FieldClass, RtpHeader, field_class, parse, serialize
from .matcher import Assigned, Dropped, ExpectedHeader, best_match, hamming, predict_expected
from .receiver import Delivered, DroppedPacket, DropReason, IncomingPacket, Receiver, repair
from .streams import StreamDatabase, StreamState

__version__ = "0.1.0"
