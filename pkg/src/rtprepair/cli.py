"""Command line driver for bit-error sweeps; writes CSV."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from . import experiment

logger = logging.getLogger(__name__)


def parse_ber(text: str) -> List[float]:
    """``start:stop:step`` (stop inclusive) or a comma separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise argparse.ArgumentTypeError("ber step must be positive")
            n = int(round((stop - start) / step))
            values = [round(start + i * step, 10) for i in range(n + 1)]
        else:
            values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad ber specification {text!r}: {exc}") from None
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError(f"ber values must lie in [0, 1]: {text!r}")
    return values


def parse_cutoff(text: str) -> Optional[int]:
    if text.lower() == "none":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cutoff must be an integer or 'none', got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("cutoff must be non-negative")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < (1 << 64):
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtprepair",
        description="Simulate RTP header recovery over a Bernoulli bit-error channel.",
    )
    parser.add_argument("--streams", type=_positive, default=4, help="concurrent streams (default 4)")
    parser.add_argument("--packets", type=_positive, default=2000, help="packets per stream (default 2000)")
    parser.add_argument("--clean-prefix", type=int, default=2, help="uncorrupted leading packets per stream (default 2)")
    parser.add_argument("--ber", type=parse_ber, default=parse_ber("0:0.5:0.01"),
                        help="start:stop:step or comma list (default 0:0.5:0.01)")
    parser.add_argument("--reps", type=_positive, default=5, help="repetitions per ber (default 5)")
    parser.add_argument("--cutoff", type=parse_cutoff, default=None, help="Hamming cutoff in bits or 'none'")
    parser.add_argument("--seed", type=_seed, default=42, help="master seed (default 42)")
    parser.add_argument("--payload-size", type=int, default=160, help="payload octets (default 160)")
    parser.add_argument("--ts-increment", type=int, default=160, help="timestamp step per packet (default 160)")
    parser.add_argument("--no-advance-on-drop", dest="advance_on_drop", action="store_false",
                        help="do not advance any bad packet counter when a packet is dropped at the cutoff")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes (0 = all cores)")
    parser.add_argument("--out", default="-", help="output CSV path (default stdout)")
    parser.add_argument("--summary", action="store_true", help="emit per-ber mean and 95%% CI rows")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        config = experiment.ExperimentConfig(
            num_streams=args.streams,
            packets_per_stream=args.packets,
            clean_prefix=args.clean_prefix,
            ber_values=tuple(args.ber),
            repetitions=args.reps,
            cutoff=args.cutoff,
            advance_on_drop=args.advance_on_drop,
            master_seed=args.seed,
            payload_size=args.payload_size,
            ts_increment=args.ts_increment,
        )
    except ValueError as exc:
        print(f"rtprepair: error: {exc}", file=sys.stderr)
        return 2

    logger.info("running %d cells", len(config.ber_values) * config.repetitions)
    cells = experiment.run_sweep(config, n_jobs=args.jobs)

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    try:
        if args.summary:
            experiment.write_summary_csv(experiment.summarize(cells), out)
        else:
            experiment.write_cells_csv(cells, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
