"""Command line interface: embed, extract, sweep and profile."""
import argparse
import csv
import logging
from pathlib import Path
import sys
from typing import List, Optional

from graphrdh.bench import (
    SweepConfig,
    capacity_profile,
    error_histogram,
    lcg_bits,
    run_sweep,
    summarize_sweep,
)
from graphrdh.codec import embed, extract
from graphrdh.config import PredictorParams
from graphrdh.exceptions import (
    RdhCapacityError,
    RdhConfigurationError,
    RdhError,
    RdhImageError,
    RdhMalformedStegoError,
    RdhSideInfoOverflowError,
)
from graphrdh.image import BitStream, load_pgm, save_pgm
from graphrdh.layers import LayerPlan
from graphrdh.predictors import make_predictor, predictors
from graphrdh.predictors.base import Predictor

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIGURATION = 1
EXIT_CAPACITY = 2
EXIT_MALFORMED_STEGO = 3
EXIT_IO = 4


def exit_code_for(error: Exception) -> int:
    if isinstance(error, (RdhCapacityError, RdhSideInfoOverflowError)):
        return EXIT_CAPACITY
    if isinstance(error, RdhMalformedStegoError):
        return EXIT_MALFORMED_STEGO
    if isinstance(error, (RdhImageError, OSError)):
        return EXIT_IO
    return EXIT_CONFIGURATION


def _add_predictor_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--predictor", choices=sorted(predictors), default="quad")
    parser.add_argument("--params", type=Path, help="YAML file with predictor parameters")
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--rho", type=float)
    parser.add_argument("--step", type=float, dest="step_t")
    parser.add_argument("--sigma-l", type=float, dest="sigma_l")
    parser.add_argument("--sigma-x", type=float, dest="sigma_x")
    parser.add_argument("--window", type=int, help="side length of the patch search window")


def _predictor_from_args(args: argparse.Namespace) -> Predictor:
    params = PredictorParams()
    if args.params is not None:
        params = PredictorParams.from_yaml(args.params.read_text())
    params = params.with_overrides(
        gamma=args.gamma,
        rho=args.rho,
        step_t=args.step_t,
        sigma_l=args.sigma_l,
        sigma_x=args.sigma_x,
        window=args.window,
    )
    return make_predictor(args.predictor, params)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphrdh",
        description="Reversible data hiding in grayscale images by graph based prediction",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("embed", help="embed a message into a cover image")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    message = p.add_mutually_exclusive_group(required=True)
    message.add_argument("--msg", type=Path, help="message file, embedded bytewise MSB first")
    message.add_argument("--msg-bits", type=int, help="number of pseudo-random message bits")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--ascii", action="store_true", help="write P2 instead of P5")
    _add_predictor_arguments(p)

    p = subparsers.add_parser("extract", help="recover message and cover image")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--msg-out", type=Path, required=True)
    _add_predictor_arguments(p)

    p = subparsers.add_parser("sweep", help="capacity/PSNR sweep defined by a YAML file")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--summary", action="store_true", help="print a text summary")

    p = subparsers.add_parser("profile", help="gate and prediction error profile of one layer")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--layer", type=int, choices=range(1, 5), default=1)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--histogram", type=Path, help="prediction error histogram CSV")
    p.add_argument("--tau", type=float, default=5.0, help="threshold of the histogram")
    _add_predictor_arguments(p)
    return parser


def cmd_embed(args: argparse.Namespace) -> None:
    cover = load_pgm(args.input)
    predictor = _predictor_from_args(args)
    if args.msg is not None:
        message = BitStream.from_bytes(args.msg.read_bytes())
    else:
        message = BitStream(lcg_bits(args.seed, args.msg_bits))
    stego, report = embed(cover, message, predictor)
    save_pgm(stego, args.out, ascii=args.ascii)
    print(report.render(), end="")


def cmd_extract(args: argparse.Namespace) -> None:
    stego = load_pgm(args.input)
    message, restored = extract(stego, _predictor_from_args(args))
    save_pgm(restored, args.out)
    args.msg_out.write_bytes(message.to_bytes())
    logger.info("Recovered %d message bits", len(message))
    if len(message) % 8:
        bits_path = args.msg_out.with_name(args.msg_out.name + ".bits")
        bits_path.write_text(message.to_text() + "\n")
        logger.warning(
            "Message of %d bits padded to whole bytes in %s, exact bits written to %s",
            len(message),
            args.msg_out,
            bits_path,
        )


def cmd_sweep(args: argparse.Namespace) -> None:
    cfg = SweepConfig.load(args.config)
    if args.out is None and cfg.output is None:
        raise RdhConfigurationError("Sweep output is neither configured nor given with --out")
    rows = run_sweep(cfg, args.out)
    if args.summary:
        print(summarize_sweep(rows), end="")


def cmd_profile(args: argparse.Namespace) -> None:
    image = load_pgm(args.input)
    predictor = _predictor_from_args(args)
    layer = LayerPlan(args.layer, image.height, image.width)
    with args.out.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(("tau", "gate_pixels", "embeddable_pixels"))
        for point in capacity_profile(image, layer, predictor):
            writer.writerow((f"{ point.tau:.2f}", point.gate_pixels, point.embeddable_pixels))
    if args.histogram is not None:
        with args.histogram.open("w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(("error", "count"))
            writer.writerows(error_histogram(image, layer, predictor, args.tau).items())


commands = {
    "embed": cmd_embed,
    "extract": cmd_extract,
    "sweep": cmd_sweep,
    "profile": cmd_profile,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        commands[args.command](args)
    except (RdhError, OSError) as e:
        print(f"graphrdh: { e }", file=sys.stderr)
        return exit_code_for(e)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
