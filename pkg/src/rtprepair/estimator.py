"""scikit-learn style front end to the learner/predictor.

Rows of ``X`` are received packets (at least the 12 header octets, one octet
per column, values 0-255). Rows are consumed in order: RTP recovery is
sequential, so row order carries meaning.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .header import HEADER_SIZE, parse
from .receiver import Delivered, DeliveryResult, IncomingPacket, Receiver
from .streams import StreamDatabase

DROPPED = -1


def check_packets(X) -> np.ndarray:
    """Validate packets as a 2-D uint8 array with at least 12 columns.

    Accepts array-likes of octet values or a sequence of equal-length
    ``bytes`` objects.
    """
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], (bytes, bytearray, memoryview)):
        lengths = {len(row) for row in X}
        if len(lengths) != 1:
            raise ValueError("all packets must have the same length")
        X = np.frombuffer(b"".join(bytes(row) for row in X), dtype=np.uint8).reshape(len(X), -1)
    X = check_array(X, dtype=None, ensure_min_features=HEADER_SIZE)
    if X.dtype != np.uint8:
        if not np.issubdtype(X.dtype, np.integer) and not np.all(np.mod(X, 1) == 0):
            raise ValueError("packet octets must be integers")
        if X.min() < 0 or X.max() > 255:
            raise ValueError("packet octets must lie in [0, 255]")
        X = X.astype(np.uint8)
    return X


class HeaderRecoverer(ClassifierMixin, BaseEstimator):
    """Attribute corrupted RTP packets to streams and repair their headers.

    ``fit`` learns stream state from error-free packets. ``predict`` and
    ``transform`` treat their input as a run of corrupted packets arriving
    right after the fitted state; they work on a copy, so the fitted state is
    unchanged and repeated calls give identical answers. Use ``partial_fit``
    to advance the state with a mixed sequence of clean and corrupted packets.

    Parameters
    ----------
    cutoff : int, optional
        Maximum accepted Hamming distance to the closest prediction; rows
        above it are dropped (``predict`` returns -1).
    advance_on_drop : bool, default True
        See :class:`rtprepair.receiver.Receiver`.

    Attributes
    ----------
    streams_ : StreamDatabase
    classes_ : ndarray of known SSRCs, sorted
    """

    def __init__(self, cutoff: Optional[int] = None, advance_on_drop: bool = True):
        self.cutoff = cutoff
        self.advance_on_drop = advance_on_drop

    def fit(self, X, y=None):
        X = check_packets(X)
        self.streams_ = StreamDatabase()
        for row in X:
            self.streams_.learn(parse(row.tobytes()))
        self._update_attributes(X)
        return self

    def partial_fit(self, X, y=None, has_errors=None):
        """Feed packets through the receiver, updating the fitted state.

        ``has_errors`` flags corrupted rows; by default every row is clean.
        """
        X = check_packets(X)
        if has_errors is None:
            has_errors = np.zeros(len(X), dtype=bool)
        has_errors = np.asarray(has_errors, dtype=bool)
        if has_errors.shape != (len(X),):
            raise ValueError("has_errors must have one flag per row")
        if not hasattr(self, "streams_"):
            self.streams_ = StreamDatabase()
        receiver = self._receiver(self.streams_)
        for row, flag in zip(X, has_errors):
            receiver.receive(IncomingPacket(row.tobytes(), bool(flag)))
        self._update_attributes(X)
        return self

    def recover(self, X) -> List[DeliveryResult]:
        """Per-row delivery results for a run of corrupted packets."""
        check_is_fitted(self, "streams_")
        X = check_packets(X)
        receiver = self._receiver(self.streams_.copy())
        return [receiver.receive(IncomingPacket(row.tobytes(), True)) for row in X]

    def predict(self, X) -> np.ndarray:
        """SSRC each row is attributed to, or -1 when dropped."""
        results = self.recover(X)
        return np.array(
            [r.ssrc if isinstance(r, Delivered) else DROPPED for r in results], dtype=np.int64
        )

    def transform(self, X) -> np.ndarray:
        """Packets with repaired headers. Dropped rows are returned unchanged."""
        X = check_packets(X)
        out = X.copy()
        for i, result in enumerate(self.recover(X)):
            if isinstance(result, Delivered):
                out[i, :HEADER_SIZE] = np.frombuffer(result.repaired_header.to_bytes(), dtype=np.uint8)
        return out

    def _receiver(self, streams: StreamDatabase) -> Receiver:
        return Receiver(cutoff=self.cutoff, advance_on_drop=self.advance_on_drop, streams=streams)

    def _update_attributes(self, X: np.ndarray) -> None:
        self.classes_ = np.array(sorted(s.ssrc for s in self.streams_.snapshot()), dtype=np.int64)
        self.n_features_in_ = X.shape[1]
