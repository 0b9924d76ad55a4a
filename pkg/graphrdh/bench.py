"""
Capacity/distortion benchmarking: sweeps over images, predictors and capacities with verified
round trips, CSV output and threshold/prediction error profiles of single layers.
"""
from collections import Counter
import csv
from dataclasses import dataclass, field
import io
import logging
from multiprocessing import Pool
from pathlib import Path
import time
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union
import warnings

import numpy as np
import yaml

from graphrdh.codec import embed, extract, layer_gate_map
from graphrdh.config import PredictorParams
from graphrdh.exceptions import RdhConfigurationError, RdhError
from graphrdh.image import GrayImage, load_pgm
from graphrdh.layers import LayerPlan
from graphrdh.predictors import make_predictor, predictors
from graphrdh.predictors.base import Predictor
from graphrdh.report import SweepSummaryTemplate
from graphrdh.tensor import TAU_MAX_CODE, tau_from_code

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "image",
    "predictor",
    "capacity_bits",
    "psnr_db",
    "tau1",
    "tau2",
    "tau3",
    "tau4",
    "seconds",
    "ok",
)
BASELINE_PREDICTOR = "rhombus"

# Numerical Recipes LCG, the most significant state bit is emitted
LCG_MULTIPLIER = 1664525
LCG_INCREMENT = 1013904223
LCG_MODULUS = 1 << 32


def lcg_bits(seed: int, n: int) -> List[int]:
    """n pseudo-random message bits, fully determined by seed."""
    state = seed % LCG_MODULUS
    bits = []
    for _ in range(n):
        state = (LCG_MULTIPLIER * state + LCG_INCREMENT) % LCG_MODULUS
        bits.append(state >> 31)
    return bits


@dataclass
class SweepConfig:
    """
    Sweep definition: every image is embedded with every predictor at every capacity. Image paths
    are resolved relative to base_path if they are not absolute.
    """

    images: List[str]
    capacities: List[int]
    predictors: List[str]
    output: Optional[str] = None
    seed: int = 1
    workers: int = 1
    record_timing: bool = True
    params: PredictorParams = field(default_factory=PredictorParams)
    base_path: Optional[Path] = None

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.capacities, self.capacities[1:])):
            raise RdhConfigurationError("Sweep capacities must be strictly increasing")
        if any(c < 0 for c in self.capacities):
            raise RdhConfigurationError("Sweep capacities must not be negative")
        if not self.predictors:
            raise RdhConfigurationError("Sweep requires at least one predictor")
        unknown = [p for p in self.predictors if p not in predictors]
        if unknown:
            raise RdhConfigurationError(f"Unknown predictor(s) in sweep: { ', '.join(unknown) }")
        if self.workers < 1:
            raise RdhConfigurationError("Sweep workers must be at least 1")

    @classmethod
    def from_dict(cls, d: Dict[str, Any], base_path: Optional[Path] = None) -> "SweepConfig":
        if not isinstance(d, dict):
            raise RdhConfigurationError("Sweep configuration must be a mapping")
        unknown = set(d) - {
            "images",
            "capacities",
            "predictors",
            "output",
            "seed",
            "workers",
            "record_timing",
            "params",
        }
        if unknown:
            raise RdhConfigurationError(f"Unknown sweep key(s): { ', '.join(sorted(unknown)) }")
        try:
            return cls(
                images=[str(p) for p in d.get("images", [])],
                capacities=[int(c) for c in d.get("capacities", [])],
                predictors=list(d.get("predictors", ["quad"])),
                output=d.get("output"),
                seed=int(d.get("seed", 1)),
                workers=int(d.get("workers", 1)),
                record_timing=bool(d.get("record_timing", True)),
                params=PredictorParams.from_dict(d.get("params")),
                base_path=base_path,
            )
        except RdhError:
            raise
        except (TypeError, ValueError) as e:
            raise RdhConfigurationError(f"Invalid sweep configuration: { e }")

    @classmethod
    def from_yaml(cls, config: str, base_path: Optional[Path] = None) -> "SweepConfig":
        try:
            d = yaml.safe_load(config)
        except yaml.YAMLError as e:
            raise RdhConfigurationError(f"Sweep configuration is not valid YAML: { e }")
        return cls.from_dict(d, base_path)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SweepConfig":
        path = Path(path)
        return cls.from_yaml(path.read_text(), path.parent)

    def image_paths(self) -> List[Path]:
        paths = [Path(p) for p in self.images]
        if self.base_path is None:
            return paths
        return [p if p.is_absolute() else self.base_path / p for p in paths]

    def output_path(self) -> Optional[Path]:
        if self.output is None:
            return None
        path = Path(self.output)
        if self.base_path is None or path.is_absolute():
            return path
        return self.base_path / path

    def tasks(self) -> List["SweepTask"]:
        """Row tasks in output order: image, then predictor, then capacity."""
        return [
            SweepTask(path, predictor, capacity, self.seed, self.params)
            for path in self.image_paths()
            for predictor in self.predictors
            for capacity in self.capacities
        ]


@dataclass
class SweepRow:
    image: str
    predictor: str
    capacity_bits: int
    psnr_db: Optional[float] = None
    taus: Tuple[float, ...] = ()
    seconds: float = 0.0
    ok: bool = False
    error: Optional[str] = None

    def to_csv(self, record_timing: bool = True) -> List[str]:
        """CSV fields; failed rows carry the error name in the PSNR column."""
        if self.ok:
            psnr = "inf" if np.isinf(self.psnr_db) else f"{ self.psnr_db:.4f}"
        else:
            psnr = self.error or "error"
        taus = [f"{ t:.2f}" for t in self.taus] + [""] * (4 - len(self.taus))
        seconds = f"{ self.seconds:.3f}" if record_timing else "0.000"
        return [
            self.image,
            self.predictor,
            str(self.capacity_bits),
            psnr,
            *taus,
            seconds,
            "true" if self.ok else "false",
        ]


@dataclass(frozen=True)
class SweepTask:
    image_path: Path
    predictor: str
    capacity_bits: int
    seed: int
    params: PredictorParams

    def run(self) -> SweepRow:
        """Embed a seeded message, verify the round trip bit-exactly and measure PSNR."""
        row = SweepRow(self.image_path.name, self.predictor, self.capacity_bits)
        start = time.perf_counter()
        try:
            cover = load_pgm(self.image_path)
            predictor = make_predictor(self.predictor, self.params)
            message = lcg_bits(self.seed, self.capacity_bits)
            stego, report = embed(cover, message, predictor)
            recovered, restored = extract(stego, predictor)
            if recovered.bits != message or restored != cover:
                row.error = "RoundTripMismatch"
            else:
                row.psnr_db = report.psnr
                row.taus = report.taus
                row.ok = True
        except (RdhError, OSError) as e:
            row.error = type(e).__name__
        row.seconds = time.perf_counter() - start
        return row


def _run_task(task: SweepTask) -> SweepRow:
    return task.run()


def write_csv(
    rows: Iterable[SweepRow], out: TextIO, seed: int, record_timing: bool = True
) -> None:
    out.write(f"# seed={ seed }\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.to_csv(record_timing))


def run_sweep(cfg: SweepConfig, output: Optional[Union[str, Path]] = None) -> List[SweepRow]:
    """
    Run all sweep rows, in a process pool if more than one worker is configured. Rows are
    returned and written in configuration order. Failed rows don't stop the sweep, a warning is
    issued for each of them. The CSV goes to output, or to the configured output if not given.
    """
    tasks = cfg.tasks()
    if cfg.workers > 1 and len(tasks) > 1:
        with Pool(processes=cfg.workers) as pool:
            rows = pool.map(_run_task, tasks)
    else:
        rows = [_run_task(task) for task in tasks]

    for row in rows:
        if row.ok:
            logger.info(
                "%s %s %d bits: %.4f dB", row.image, row.predictor, row.capacity_bits, row.psnr_db
            )
        else:
            warnings.warn(
                f"Sweep row { row.image } / { row.predictor } / { row.capacity_bits } bits "
                f"failed: { row.error }"
            )

    path = Path(output) if output is not None else cfg.output_path()
    if path is not None:
        with path.open("w", newline="") as f:
            write_csv(rows, f, cfg.seed, cfg.record_timing)
    return rows


def sweep_csv(rows: Iterable[SweepRow], seed: int, record_timing: bool = True) -> str:
    out = io.StringIO()
    write_csv(rows, out, seed, record_timing)
    return out.getvalue()


def rhombus_gaps(rows: Sequence[SweepRow]) -> Dict[Tuple[str, int, str], float]:
    """PSNR difference of each successful non-baseline row to the baseline row of the same image
    and capacity."""
    baseline = {
        (row.image, row.capacity_bits): row.psnr_db
        for row in rows
        if row.ok and row.predictor == BASELINE_PREDICTOR
    }
    gaps = {}
    for row in rows:
        key = (row.image, row.capacity_bits)
        if row.ok and row.predictor != BASELINE_PREDICTOR and key in baseline:
            gaps[(row.image, row.capacity_bits, row.predictor)] = row.psnr_db - baseline[key]
    return gaps


def summarize_sweep(rows: Sequence[SweepRow]) -> str:
    return SweepSummaryTemplate().render(list(rows), rhombus_gaps(rows))


### Single layer profiles ###
@dataclass(frozen=True)
class ProfilePoint:
    tau_code: int
    gate_pixels: int
    embeddable_pixels: int

    @property
    def tau(self) -> float:
        return tau_from_code(self.tau_code)


def _layer_errors(
    image: GrayImage, layer: LayerPlan, predictor: Predictor, tau: float
) -> List[Tuple[float, int]]:
    """(gate value, prediction error) of all layer pixels passing the gate at tau, predicted on
    the unmodified image."""
    gates = layer_gate_map(image, predictor)
    return [
        (float(gates[pos]), image[pos] - predictor.predict(image, pos, layer))
        for pos in layer
        if gates[pos] < tau
    ]


def capacity_profile(
    image: GrayImage,
    layer: LayerPlan,
    predictor: Predictor,
    codes: Optional[Sequence[int]] = None,
) -> List[ProfilePoint]:
    """
    Number of gate-passing and of embeddable pixels of a layer for each threshold code (all
    codes 0..500 by default). Predictions are made on the given image state without embedding.
    """
    codes = list(range(TAU_MAX_CODE + 1)) if codes is None else list(codes)
    if not codes:
        return []
    errors = _layer_errors(image, layer, predictor, tau_from_code(max(codes)))
    gate_values = np.array([g for g, _ in errors])
    embeddable = np.array([e in (0, -1) for _, e in errors], dtype=bool)
    points = []
    for code in codes:
        passing = gate_values < tau_from_code(code)
        points.append(
            ProfilePoint(code, int(passing.sum()), int((passing & embeddable).sum()))
        )
    return points


def error_histogram(
    image: GrayImage, layer: LayerPlan, predictor: Predictor, tau: float
) -> Dict[int, int]:
    """Prediction error histogram over the gate-passing pixels of a layer."""
    return dict(sorted(Counter(e for _, e in _layer_errors(image, layer, predictor, tau)).items()))
